#include "plsteg/cli.hpp"

#include <termios.h>
#include <unistd.h>

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

#include "plsteg/codec.hpp"
#include "plsteg/crypto.hpp"
#include "plsteg/error.hpp"
#include "plsteg/image.hpp"
#include "plsteg/metrics.hpp"
#include "plsteg/pls.hpp"

namespace plsteg::cli {

namespace {

struct Failure {
  ExitCode code;
  std::string message;
};

ExitCode exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::CapacityExceeded: return ExitCode::CapacityExceeded;
    case ErrorCode::UnsupportedFormat:
    case ErrorCode::DecodeError: return ExitCode::UnsupportedFormat;
    case ErrorCode::FileNotFound:
    case ErrorCode::IoError: return ExitCode::IoError;
    case ErrorCode::MalformedPls:
    case ErrorCode::InvalidPls:
    case ErrorCode::IndexOutOfRange: return ExitCode::InvalidPls;
    case ErrorCode::BadPadding: return ExitCode::DecryptionFailed;
    case ErrorCode::InvalidHexDigit:
    case ErrorCode::OddLength: return ExitCode::PayloadCorrupt;
    case ErrorCode::DimensionMismatch: return ExitCode::DimensionMismatch;
    case ErrorCode::EmptyPassphrase:
    case ErrorCode::EmptyPlaintext:
    case ErrorCode::CryptoFailure: return ExitCode::Usage;
  }
  return ExitCode::Usage;
}

Bytes read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size())) ||
      !out.flush()) {
    throw Error(ErrorCode::IoError, "cannot write " + path);
  }
}

void write_text(const std::string& path, const std::string& text) {
  write_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string prompt_passphrase(std::ostream& err) {
  std::string line;
  if (::isatty(STDIN_FILENO)) {
    err << "passphrase: " << std::flush;
    termios saved{};
    const bool have_tty = ::tcgetattr(STDIN_FILENO, &saved) == 0;
    if (have_tty) {
      termios quiet = saved;
      quiet.c_lflag &= ~static_cast<tcflag_t>(ECHO);
      ::tcsetattr(STDIN_FILENO, TCSAFLUSH, &quiet);
    }
    std::getline(std::cin, line);
    if (have_tty) ::tcsetattr(STDIN_FILENO, TCSAFLUSH, &saved);
    err << '\n';
  } else {
    std::getline(std::cin, line);
  }
  return line;
}

std::string obtain_passphrase(const std::string& env_name, std::ostream& err) {
  if (!env_name.empty()) {
    const char* value = std::getenv(env_name.c_str());
    if (value == nullptr) {
      throw Failure{ExitCode::Usage, "environment variable " + env_name + " is not set"};
    }
    return value;
  }
  return prompt_passphrase(err);
}

ImageMatrix load_reporting(const std::string& path, std::ostream& err) {
  LoadNotes notes;
  ImageMatrix image = load_image(path, &notes);
  if (notes.alpha_dropped) err << "warning: " << path << ": alpha channel dropped\n";
  if (notes.converted_to_rgb) err << "warning: " << path << ": converted to RGB\n";
  if (notes.reduced_from_16_bit) err << "warning: " << path << ": reduced from 16 to 8 bits per channel\n";
  return image;
}

void require_png_output(const std::string& path) {
  if (format_for_path(path) != ImageFormat::Png) {
    throw Error(ErrorCode::UnsupportedFormat, "stego output must be a .png file");
  }
}

std::uint64_t fresh_seed() {
  const Salt entropy = random_salt();
  std::uint64_t seed = 0;
  for (std::size_t i = 0; i < 8; ++i) seed = (seed << 8) | entropy[i];
  return seed;
}

void require_valid(const PixelLocatorSequence& pls, std::size_t total_pixels, std::size_t expected) {
  const PlsVerdict verdict = validate_pls(pls, total_pixels);
  if (!verdict) throw Error(ErrorCode::InvalidPls, "PLS rejected: " + verdict.describe());
  if (pls.size() != expected) {
    throw Error(ErrorCode::InvalidPls, "PLS has " + std::to_string(pls.size()) +
                                           " entries but the sealed message needs exactly " +
                                           std::to_string(expected));
  }
}

// ------------------------------------------------------------------ encode

struct EncodeOptions {
  std::string cover;
  std::string message;
  std::string message_file;
  std::string out;
  std::string pls;
  std::string pls_out;
  std::string manual_pls;
  std::string passphrase_env;
  std::string json;
  std::optional<std::uint64_t> seed;
};

int cmd_encode(const EncodeOptions& opt, std::ostream& out, std::ostream& err) {
  if (opt.pls.empty() && opt.pls_out.empty()) {
    throw Failure{ExitCode::Usage, "--pls-out is required unless an existing --pls is supplied"};
  }
  require_png_output(opt.out);

  const ImageMatrix cover = load_reporting(opt.cover, err);

  std::string message = opt.message;
  if (!opt.message_file.empty()) {
    const Bytes raw = read_bytes(opt.message_file);
    message.assign(raw.begin(), raw.end());
  }
  if (message.empty()) throw Failure{ExitCode::Usage, "message is empty"};

  const std::string passphrase = obtain_passphrase(opt.passphrase_env, err);
  if (passphrase.empty()) throw Failure{ExitCode::Usage, "passphrase is empty"};

  const std::string payload = to_hex(seal(as_bytes(message), passphrase).to_bytes());
  const std::size_t needed = required_pixels(payload.size());
  const std::size_t room = capacity(cover);
  if (payload.size() > room) {
    throw Error(ErrorCode::CapacityExceeded,
                "sealed message needs " + std::to_string(payload.size()) + " characters (" +
                    std::to_string(needed) + " pixels) but the cover holds " + std::to_string(room));
  }

  PixelLocatorSequence pls;
  if (!opt.pls.empty()) {
    pls = open_pls(PlsKeyFile::from_bytes(read_bytes(opt.pls)), passphrase);
    require_valid(pls, cover.pixel_count(), needed);
  } else if (!opt.manual_pls.empty()) {
    pls = read_manual_pls(opt.manual_pls);
    require_valid(pls, cover.pixel_count(), needed);
  } else {
    pls = generate_pls(cover.pixel_count(), needed, opt.seed ? *opt.seed : fresh_seed());
  }

  const ImageMatrix stego = embed(cover, pls, payload);
  save_image(stego, opt.out);
  if (!opt.pls_out.empty()) write_bytes(opt.pls_out, seal_pls(pls, passphrase).to_bytes());

  const ComparisonReport report = compare_report(cover, stego);
  out << "payload characters: " << payload.size() << '\n'
      << "pixels used: " << needed << '\n'
      << "capacity (characters): " << room << '\n'
      << "quality: " << report.quality.to_json() << '\n';
  if (!opt.json.empty()) write_text(opt.json, report.quality.to_json() + "\n");
  return 0;
}

// ------------------------------------------------------------------ decode

struct DecodeOptions {
  std::string stego;
  std::string pls;
  std::string out;
  std::string passphrase_env;
};

int cmd_decode(const DecodeOptions& opt, std::ostream& out, std::ostream& err) {
  const ImageMatrix stego = load_reporting(opt.stego, err);
  const PlsKeyFile key_file = PlsKeyFile::from_bytes(read_bytes(opt.pls));
  const std::string passphrase = obtain_passphrase(opt.passphrase_env, err);
  if (passphrase.empty()) throw Failure{ExitCode::Usage, "passphrase is empty"};

  const PixelLocatorSequence pls = open_pls(key_file, passphrase);
  const PlsVerdict verdict = validate_pls(pls, stego.pixel_count());
  if (!verdict) throw Error(ErrorCode::InvalidPls, "PLS does not fit this image: " + verdict.describe());

  SealedPayload sealed;
  try {
    sealed = SealedPayload::from_bytes(from_hex(extract(stego, pls)));
  } catch (const Error&) {
    throw Failure{ExitCode::PayloadCorrupt, "embedded payload is corrupt"};
  }
  const Bytes message = unseal(sealed, passphrase);

  if (opt.out.empty()) {
    out.write(reinterpret_cast<const char*>(message.data()), static_cast<std::streamsize>(message.size()));
    out.flush();
  } else {
    write_bytes(opt.out, message);
  }
  return 0;
}

// ------------------------------------------------------------------ genpls

struct GenPlsOptions {
  std::string cover;
  std::optional<std::size_t> pixels;
  std::optional<std::size_t> length;
  std::optional<std::size_t> message_bytes;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string passphrase_env;
};

int cmd_genpls(const GenPlsOptions& opt, std::ostream& out, std::ostream& err) {
  const std::size_t total = opt.pixels ? *opt.pixels : load_reporting(opt.cover, err).pixel_count();
  const std::size_t chars = opt.length ? *opt.length : sealed_hex_length(*opt.message_bytes);
  if (chars == 0) throw Failure{ExitCode::Usage, "--length must be at least 1"};
  const std::size_t needed = required_pixels(chars);
  if (needed > total) {
    throw Error(ErrorCode::CapacityExceeded, std::to_string(chars) + " characters need " +
                                                 std::to_string(needed) + " pixels but only " +
                                                 std::to_string(total) + " are available");
  }
  const std::string passphrase = obtain_passphrase(opt.passphrase_env, err);
  if (passphrase.empty()) throw Failure{ExitCode::Usage, "passphrase is empty"};

  const PixelLocatorSequence pls = generate_pls(total, needed, opt.seed ? *opt.seed : fresh_seed());
  write_bytes(opt.out, seal_pls(pls, passphrase).to_bytes());
  out << "characters: " << chars << '\n' << "pixels used: " << needed << '\n';
  return 0;
}

// ----------------------------------------------------------------- metrics

struct MetricsOptions {
  std::string cover;
  std::string stego;
  std::string json;
  std::string out;
};

int cmd_metrics(const MetricsOptions& opt, std::ostream& out, std::ostream& err) {
  const ImageMatrix cover = load_reporting(opt.cover, err);
  const ImageMatrix stego = load_reporting(opt.stego, err);
  const ComparisonReport report = compare_report(cover, stego);

  if (opt.json.empty()) {
    out << report.quality.to_json() << '\n';
  } else {
    write_text(opt.json, report.quality.to_json() + "\n");
  }
  if (!opt.out.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(opt.out, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create directory " + opt.out);
    for (const Channel c : kChannels) {
      const auto path = std::filesystem::path(opt.out) / (std::string("hist_") + channel_name(c) + ".csv");
      write_text(path.string(), report.histogram_csv(c));
    }
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hide AES-sealed text in randomly located image pixels", "plsteg"};
  app.require_subcommand(1);

  EncodeOptions enc;
  auto* encode = app.add_subcommand("encode", "seal a message and embed it into a cover image");
  encode->add_option("--cover", enc.cover, "cover image (PNG or BMP)")->required();
  auto* msg = encode->add_option("--message", enc.message, "message text");
  auto* msg_file = encode->add_option("--message-file", enc.message_file, "file holding the message");
  msg->excludes(msg_file);
  encode->add_option("--out", enc.out, "stego image to write (.png)")->required();
  auto* enc_pls = encode->add_option("--pls", enc.pls, "existing sealed PLS key file (from genpls)");
  auto* enc_manual = encode->add_option("--manual-pls", enc.manual_pls, "plaintext PLS, one index per line");
  enc_pls->excludes(enc_manual);
  encode->add_option("--pls-out", enc.pls_out, "sealed PLS key file to write");
  encode->add_option("--passphrase-env", enc.passphrase_env, "read the passphrase from this variable");
  encode->add_option("--seed", enc.seed, "seed for PLS generation");
  encode->add_option("--json", enc.json, "write the quality report here");

  DecodeOptions dec;
  auto* decode = app.add_subcommand("decode", "recover a message from a stego image and its PLS key file");
  decode->add_option("--stego", dec.stego, "stego image")->required();
  decode->add_option("--pls", dec.pls, "sealed PLS key file")->required();
  decode->add_option("--out", dec.out, "write the message here instead of stdout");
  decode->add_option("--passphrase-env", dec.passphrase_env, "read the passphrase from this variable");

  GenPlsOptions gen;
  auto* genpls = app.add_subcommand("genpls", "generate a sealed PLS key file");
  auto* gen_cover = genpls->add_option("--cover", gen.cover, "image whose pixel count bounds the PLS");
  auto* gen_pixels = genpls->add_option("--pixels", gen.pixels, "pixel count instead of an image");
  gen_cover->excludes(gen_pixels);
  auto* gen_length = genpls->add_option("--length", gen.length, "embedded characters to provide for");
  auto* gen_bytes =
      genpls->add_option("--message-bytes", gen.message_bytes, "plaintext size in bytes to provide for");
  gen_length->excludes(gen_bytes);
  genpls->add_option("--seed", gen.seed, "seed for PLS generation");
  genpls->add_option("--out", gen.out, "sealed PLS key file to write")->required();
  genpls->add_option("--passphrase-env", gen.passphrase_env, "read the passphrase from this variable");

  MetricsOptions met;
  auto* metrics = app.add_subcommand("metrics", "compare a cover and stego image");
  metrics->add_option("--cover", met.cover, "cover image")->required();
  metrics->add_option("--stego", met.stego, "stego image")->required();
  metrics->add_option("--json", met.json, "write the JSON report here instead of stdout");
  metrics->add_option("--out", met.out, "directory for hist_{r,g,b}.csv");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (encode->parsed() && msg->count() + msg_file->count() != 1) {
      throw CLI::RequiredError("--message or --message-file");
    }
    if (genpls->parsed() && gen_cover->count() + gen_pixels->count() != 1) {
      throw CLI::RequiredError("--cover or --pixels");
    }
    if (genpls->parsed() && gen_length->count() + gen_bytes->count() != 1) {
      throw CLI::RequiredError("--length or --message-bytes");
    }
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : static_cast<int>(ExitCode::Usage);
  }

  try {
    if (encode->parsed()) return cmd_encode(enc, out, err);
    if (decode->parsed()) return cmd_decode(dec, out, err);
    if (genpls->parsed()) return cmd_genpls(gen, out, err);
    return cmd_metrics(met, out, err);
  } catch (const Failure& f) {
    err << "error: " << f.message << '\n';
    return static_cast<int>(f.code);
  } catch (const Error& e) {
    const ExitCode code = exit_code_for(e.code());
    // Never say whether the key file or the payload failed to decrypt.
    err << "error: " << (code == ExitCode::DecryptionFailed ? std::string("decryption failed") : e.what())
        << '\n';
    return static_cast<int>(code);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::Usage);
  }
}

}  // namespace plsteg::cli
