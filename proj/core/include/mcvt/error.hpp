#pragma once

#include <stdexcept>
#include <string>

namespace mcvt {

enum class Errc {
  invalid_config,
  invalid_argument,
  invalid_field,
  dimension_mismatch,
  index_order,
  missing_directory,
  missing_frames,
  decode_failure,
  io_failure,
  file_missing,
  bad_magic,
  truncated_file,
  service_unreachable,
  timeout,
  service_failure,
  malformed_response,
};

const char* to_string(Errc code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }
  // The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

}  // namespace mcvt
