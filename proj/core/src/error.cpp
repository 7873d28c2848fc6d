#include "mcvt/error.hpp"

namespace mcvt {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::invalid_config: return "invalid-config";
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::invalid_field: return "invalid-field";
    case Errc::dimension_mismatch: return "dimension-mismatch";
    case Errc::index_order: return "index-order";
    case Errc::missing_directory: return "missing-directory";
    case Errc::missing_frames: return "missing-frames";
    case Errc::decode_failure: return "decode-failure";
    case Errc::io_failure: return "io-failure";
    case Errc::file_missing: return "file-missing";
    case Errc::bad_magic: return "bad-magic";
    case Errc::truncated_file: return "truncated-file";
    case Errc::service_unreachable: return "service-unreachable";
    case Errc::timeout: return "timeout";
    case Errc::service_failure: return "service-failure";
    case Errc::malformed_response: return "malformed-response";
  }
  return "unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

}  // namespace mcvt
