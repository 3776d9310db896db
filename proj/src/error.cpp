#include "plsteg/error.hpp"

namespace plsteg {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::DecodeError: return "DecodeError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::CapacityExceeded: return "CapacityExceeded";
    case ErrorCode::MalformedPls: return "MalformedPls";
    case ErrorCode::InvalidPls: return "InvalidPls";
    case ErrorCode::EmptyPassphrase: return "EmptyPassphrase";
    case ErrorCode::EmptyPlaintext: return "EmptyPlaintext";
    case ErrorCode::BadPadding: return "BadPadding";
    case ErrorCode::InvalidHexDigit: return "InvalidHexDigit";
    case ErrorCode::OddLength: return "OddLength";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::CryptoFailure: return "CryptoFailure";
  }
  return "Unknown";
}

}  // namespace plsteg
