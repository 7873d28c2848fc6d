#include "http_util.hpp"

#include <httplib.h>

#include "mcvt/error.hpp"

namespace mcvt::detail {

nlohmann::json post_json(const std::string& base_url, const std::string& path,
                         const nlohmann::json& body, std::chrono::milliseconds timeout) {
  httplib::Client client(base_url);
  if (!client.is_valid()) throw Error(Errc::invalid_argument, "bad service URL: " + base_url);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  auto res = client.Post(path, body.dump(), "application/json");
  if (!res) {
    const httplib::Error err = res.error();
    const std::string what = base_url + path + ": " + httplib::to_string(err);
    if (err == httplib::Error::Read || err == httplib::Error::Write ||
        err == httplib::Error::ConnectionTimeout) {
      throw Error(Errc::timeout, what);
    }
    throw Error(Errc::service_unreachable, what);
  }

  nlohmann::json reply;
  try {
    reply = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception&) {
    if (res->status != 200) {
      throw Error(Errc::service_failure, base_url + path + ": HTTP " + std::to_string(res->status));
    }
    throw Error(Errc::malformed_response, base_url + path + ": body is not JSON");
  }
  if (res->status != 200) {
    std::string msg = "HTTP " + std::to_string(res->status);
    if (reply.is_object() && reply.contains("error") && reply["error"].is_string()) {
      msg += ": " + reply["error"].get<std::string>();
    }
    throw Error(Errc::service_failure, base_url + path + ": " + msg);
  }
  if (!reply.is_object()) throw Error(Errc::malformed_response, base_url + path + ": not an object");
  return reply;
}

}  // namespace mcvt::detail
