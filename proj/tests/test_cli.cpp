#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <iterator>
#include <json.hpp>
#include <sstream>

#include "plsteg/cli.hpp"
#include "plsteg/crypto.hpp"
#include "plsteg/image.hpp"
#include "support.hpp"

using namespace plsteg;
using plsteg::cli::ExitCode;
using plsteg::testing::TempDir;

namespace {

constexpr const char* kPassEnv = "PLSTEG_TEST_PASS";
constexpr const char* kWrongEnv = "PLSTEG_TEST_WRONG";
constexpr const char* kPassphrase = "hunter2 but longer";

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  ::setenv(kPassEnv, kPassphrase, 1);
  ::setenv(kWrongEnv, "not the passphrase", 1);
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

int code(ExitCode c) { return static_cast<int>(c); }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

std::string make_cover(const TempDir& dir, std::size_t h, std::size_t w, std::uint64_t seed,
                       const std::string& name = "cover.png") {
  std::mt19937_64 rng(seed);
  save_image(plsteg::testing::random_image(rng, h, w), dir.file(name));
  return dir.file(name);
}

Run encode(const TempDir& dir, const std::string& cover, const std::string& message,
           std::vector<std::string> extra = {}) {
  std::vector<std::string> args{"encode", "--cover", cover, "--message", message, "--out", dir.file("stego.png"),
                                "--pls-out", dir.file("key.pls"), "--passphrase-env", kPassEnv};
  args.insert(args.end(), extra.begin(), extra.end());
  return run(args);
}

Run decode(const TempDir& dir, const char* env = kPassEnv) {
  return run({"decode", "--stego", dir.file("stego.png"), "--pls", dir.file("key.pls"), "--passphrase-env", env});
}

}  // namespace

TEST_CASE("encode then decode recovers a sentence on a 512x512 cover") {
  TempDir dir;
  const std::string message = "This secret message has to be embedded into the image";
  const Run enc = encode(dir, make_cover(dir, 512, 512, 1), message, {"--seed", "7"});
  REQUIRE(enc.code == 0);
  CHECK(enc.out.find("payload characters: 192") != std::string::npos);
  CHECK(enc.out.find("pixels used: 576") != std::string::npos);
  CHECK(enc.out.find("capacity (characters): 87381") != std::string::npos);
  CHECK(enc.out.find("\"psnr_db\"") != std::string::npos);

  const Run dec = decode(dir);
  CHECK(dec.code == 0);
  CHECK(dec.out == message);

  CHECK(run({"decode", "--stego", dir.file("stego.png"), "--pls", dir.file("key.pls"), "--passphrase-env",
             kPassEnv, "--out", dir.file("plain.txt")})
            .code == 0);
  CHECK(slurp(dir.file("plain.txt")) == message);
}

TEST_CASE("encode is randomised but always decodable") {
  TempDir dir;
  const std::string cover = make_cover(dir, 40, 40, 2);
  REQUIRE(encode(dir, cover, "same words", {"--seed", "1"}).code == 0);
  const std::string first = slurp(dir.file("stego.png"));
  CHECK(decode(dir).out == "same words");
  REQUIRE(encode(dir, cover, "same words", {"--seed", "1"}).code == 0);
  CHECK(slurp(dir.file("stego.png")) != first);
  CHECK(decode(dir).out == "same words");
}

TEST_CASE("artifacts never contain the message or passphrase") {
  TempDir dir;
  const std::string message = "attack at dawn, bring snacks";
  REQUIRE(encode(dir, make_cover(dir, 30, 30, 3), message, {"--json", dir.file("report.json")}).code == 0);
  for (const auto& entry : std::filesystem::directory_iterator(dir.path())) {
    const std::string bytes = slurp(entry.path().string());
    CHECK(bytes.find(message) == std::string::npos);
    CHECK(bytes.find(kPassphrase) == std::string::npos);
  }
  const Run wrong = decode(dir, kWrongEnv);
  CHECK(wrong.err.find("not the passphrase") == std::string::npos);
}

TEST_CASE("message file input") {
  TempDir dir;
  spit(dir.file("msg.txt"), "line one\nline two\n");
  REQUIRE(run({"encode", "--cover", make_cover(dir, 30, 30, 4), "--message-file", dir.file("msg.txt"), "--out",
               dir.file("stego.png"), "--pls-out", dir.file("key.pls"), "--passphrase-env", kPassEnv})
              .code == 0);
  CHECK(decode(dir).out == "line one\nline two\n");
}

TEST_CASE("encode failure exit codes") {
  TempDir dir;
  const std::string small = make_cover(dir, 8, 8, 5);
  CHECK(encode(dir, small, "hello").code == code(ExitCode::CapacityExceeded));
  CHECK(encode(dir, dir.file("missing.png"), "hello").code == code(ExitCode::IoError));
  CHECK(encode(dir, plsteg::testing::data_file("cover.jpg").string(), "hello").code ==
        code(ExitCode::UnsupportedFormat));

  const std::string cover = make_cover(dir, 30, 30, 6);
  CHECK(run({"encode", "--cover", cover, "--message", "x", "--out", dir.file("stego.jpg"), "--pls-out",
             dir.file("k.pls"), "--passphrase-env", kPassEnv})
            .code == code(ExitCode::UnsupportedFormat));
  CHECK(run({"encode", "--cover", cover, "--message", "x", "--out", dir.file("stego.bmp"), "--pls-out",
             dir.file("k.pls"), "--passphrase-env", kPassEnv})
            .code == code(ExitCode::UnsupportedFormat));
  CHECK(encode(dir, cover, "").code == code(ExitCode::Usage));
  CHECK(run({"encode", "--cover", cover, "--out", dir.file("s.png"), "--pls-out", dir.file("k.pls")}).code ==
        code(ExitCode::Usage));
  CHECK(run({"encode", "--cover", cover, "--message", "x", "--out", dir.file("s.png"), "--passphrase-env",
             kPassEnv})
            .code == code(ExitCode::Usage));
  CHECK(run({"encode", "--cover", cover, "--message", "x", "--out", dir.file("s.png"), "--pls-out",
             dir.file("k.pls"), "--passphrase-env", "PLSTEG_TEST_UNSET_VARIABLE"})
            .code == code(ExitCode::Usage));
}

TEST_CASE("decode failure exit codes") {
  TempDir dir;
  REQUIRE(encode(dir, make_cover(dir, 30, 30, 7), "secret").code == 0);

  SUBCASE("wrong passphrase emits nothing") {
    const Run r = decode(dir, kWrongEnv);
    CHECK(r.code == code(ExitCode::DecryptionFailed));
    CHECK(r.out.empty());
    CHECK(r.err.find("decryption failed") != std::string::npos);
  }
  SUBCASE("lossy stego") {
    CHECK(run({"decode", "--stego", plsteg::testing::data_file("cover.jpg").string(), "--pls", dir.file("key.pls"),
               "--passphrase-env", kPassEnv})
              .code == code(ExitCode::UnsupportedFormat));
  }
  SUBCASE("truncated key file") {
    const std::string key = slurp(dir.file("key.pls"));
    spit(dir.file("key.pls"), key.substr(0, key.size() - 5));
    CHECK(decode(dir).code == code(ExitCode::InvalidPls));
  }
  SUBCASE("PLS from a larger image") {
    REQUIRE(run({"genpls", "--pixels", "1000000", "--message-bytes", "6", "--out", dir.file("key.pls"),
                 "--passphrase-env", kPassEnv})
                .code == 0);
    CHECK(decode(dir).code == code(ExitCode::InvalidPls));
  }
  SUBCASE("image without a payload") {
    make_cover(dir, 30, 30, 99, "stego.png");
    CHECK(decode(dir).code == code(ExitCode::PayloadCorrupt));
  }
  SUBCASE("missing key file") {
    std::filesystem::remove(dir.file("key.pls"));
    CHECK(decode(dir).code == code(ExitCode::IoError));
  }
}

TEST_CASE("manual PLS") {
  TempDir dir;
  const std::string cover = make_cover(dir, 40, 40, 8);
  const std::size_t needed = 3 * sealed_hex_length(5);

  std::string lines;
  for (std::size_t i = 0; i < needed; ++i) lines += std::to_string(1599 - 2 * i) + "\n";
  spit(dir.file("manual.txt"), lines);
  REQUIRE(encode(dir, cover, "hello", {"--manual-pls", dir.file("manual.txt")}).code == 0);
  CHECK(decode(dir).out == "hello");

  spit(dir.file("short.txt"), "0\n1\n2\n");
  CHECK(encode(dir, cover, "hello", {"--manual-pls", dir.file("short.txt")}).code == code(ExitCode::InvalidPls));
  spit(dir.file("dup.txt"), lines + lines);
  CHECK(encode(dir, cover, "hello", {"--manual-pls", dir.file("dup.txt")}).code == code(ExitCode::InvalidPls));
  spit(dir.file("junk.txt"), "zero\n");
  CHECK(encode(dir, cover, "hello", {"--manual-pls", dir.file("junk.txt")}).code == code(ExitCode::InvalidPls));
}

TEST_CASE("genpls") {
  TempDir dir;
  SUBCASE("full occupancy is a permutation") {
    REQUIRE(run({"genpls", "--pixels", "9", "--length", "3", "--seed", "5", "--out", dir.file("g.pls"),
                 "--passphrase-env", kPassEnv})
                .code == 0);
    const std::string raw = slurp(dir.file("g.pls"));
    auto pls = open_pls(PlsKeyFile::from_bytes(as_bytes(raw)), kPassphrase);
    CHECK(validate_pls(pls, 9).valid());
    std::sort(pls.indices.begin(), pls.indices.end());
    CHECK(pls.indices == std::vector<PixelIndex>{0, 1, 2, 3, 4, 5, 6, 7, 8});
  }
  SUBCASE("too long") {
    CHECK(run({"genpls", "--pixels", "9", "--length", "4", "--out", dir.file("g.pls"), "--passphrase-env",
               kPassEnv})
              .code == code(ExitCode::CapacityExceeded));
  }
  SUBCASE("usage errors") {
    CHECK(run({"genpls", "--pixels", "9", "--out", dir.file("g.pls")}).code == code(ExitCode::Usage));
    CHECK(run({"genpls", "--length", "3", "--out", dir.file("g.pls")}).code == code(ExitCode::Usage));
  }
  SUBCASE("feeds encode via --pls") {
    const std::string cover = make_cover(dir, 50, 50, 9);
    const std::string message = "routed through genpls";
    REQUIRE(run({"genpls", "--cover", cover, "--message-bytes", std::to_string(message.size()), "--out",
                 dir.file("key.pls"), "--passphrase-env", kPassEnv})
                .code == 0);
    REQUIRE(run({"encode", "--cover", cover, "--message", message, "--out", dir.file("stego.png"), "--pls",
                 dir.file("key.pls"), "--passphrase-env", kPassEnv})
                .code == 0);
    CHECK(decode(dir).out == message);
    CHECK(run({"encode", "--cover", cover, "--message", message + std::string(40, '!'), "--out", dir.file("stego.png"),
               "--pls", dir.file("key.pls"), "--passphrase-env", kPassEnv})
              .code == code(ExitCode::InvalidPls));
  }
}

TEST_CASE("metrics") {
  TempDir dir;
  const std::string cover = make_cover(dir, 20, 30, 10);
  const Run same = run({"metrics", "--cover", cover, "--stego", cover});
  REQUIRE(same.code == 0);
  const auto json = nlohmann::json::parse(same.out);
  CHECK(json.at("mse") == 0.0);
  CHECK(json.at("psnr_db") == "inf");
  CHECK(json.at("width") == 30);
  CHECK(json.at("height") == 20);

  REQUIRE(encode(dir, cover, "metrics please").code == 0);
  REQUIRE(run({"metrics", "--cover", cover, "--stego", dir.file("stego.png"), "--json", dir.file("r.json"), "--out",
               dir.file("hist")})
              .code == 0);
  const auto report = nlohmann::json::parse(slurp(dir.file("r.json")));
  const double chars = static_cast<double>(sealed_hex_length(14));
  CHECK(report.at("mse").get<double>() <= 8.0 * chars / (3.0 * 600.0));
  CHECK(report.at("psnr_db").is_number());
  for (const char* name : {"hist_r.csv", "hist_g.csv", "hist_b.csv"}) {
    const std::string csv = slurp((std::filesystem::path(dir.file("hist")) / name).string());
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 256);
  }

  CHECK(run({"metrics", "--cover", cover, "--stego", make_cover(dir, 30, 20, 11, "other.png")}).code ==
        code(ExitCode::DimensionMismatch));
}

TEST_CASE("argument handling") {
  CHECK(run({}).code == code(ExitCode::Usage));
  CHECK(run({"frobnicate"}).code == code(ExitCode::Usage));
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"decode", "--stego", "x.png"}).code == code(ExitCode::Usage));
}
