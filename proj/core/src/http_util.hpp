#pragma once

#include <chrono>
#include <string>

#include <json.hpp>

namespace mcvt::detail {

// POSTs a JSON body to base_url + path and returns the parsed JSON reply.
// Maps transport failures to service_unreachable/timeout, non-200 statuses to
// service_failure and unparsable bodies to malformed_response.
nlohmann::json post_json(const std::string& base_url, const std::string& path,
                         const nlohmann::json& body, std::chrono::milliseconds timeout);

}  // namespace mcvt::detail
