#include "mcvt/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mcvt/error.hpp"

namespace mcvt {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const char* field, const std::string& why) {
  throw Error(Errc::invalid_config, std::string(field) + " " + why);
}

template <class T>
void read_field(const json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    bad(key, "has the wrong type");
  }
}

}  // namespace

PipelineConfig validate_config(const PipelineConfig& cfg) {
  if (cfg.gop_size < 1) bad("gop_size", "must be >= 1");
  if (!std::isfinite(cfg.alpha) || cfg.alpha < 0) bad("alpha", "must be finite and >= 0");
  if (!std::isfinite(cfg.beta) || cfg.beta < 0) bad("beta", "must be finite and >= 0");
  if (!std::isfinite(cfg.mask_threshold)) bad("mask_threshold", "must be finite");
  if (!std::isfinite(cfg.temperature) || cfg.temperature <= 0) bad("temperature", "must be > 0");
  if (!std::isfinite(cfg.blur_sigma) || cfg.blur_sigma < 0) bad("blur_sigma", "must be >= 0");
  if (cfg.blur_kernel_radius < 0) bad("blur_kernel_radius", "must be >= 0");
  if (cfg.latent_factor < 1) bad("latent_factor", "must be >= 1");
  if (!(cfg.blur_binarize_threshold > 0 && cfg.blur_binarize_threshold < 1)) {
    bad("blur_binarize_threshold", "must lie in (0,1)");
  }
  return cfg;
}

std::string config_to_string(const PipelineConfig& cfg) {
  json j = {
      {"gop_size", cfg.gop_size},
      {"alpha", cfg.alpha},
      {"beta", cfg.beta},
      {"mask_threshold", cfg.mask_threshold},
      {"temperature", cfg.temperature},
      {"blur_sigma", cfg.blur_sigma},
      {"blur_kernel_radius", cfg.blur_kernel_radius},
      {"latent_factor", cfg.latent_factor},
      {"blur_binarize_threshold", cfg.blur_binarize_threshold},
  };
  return j.dump(2) + "\n";
}

PipelineConfig config_from_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::invalid_config, std::string("parse error: ") + e.what());
  }
  if (!j.is_object()) throw Error(Errc::invalid_config, "config must be a JSON object");

  static const char* const kKeys[] = {"gop_size",    "alpha",      "beta",
                                      "mask_threshold", "temperature", "blur_sigma",
                                      "blur_kernel_radius", "latent_factor",
                                      "blur_binarize_threshold"};
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (const char* k : kKeys) known = known || key == k;
    if (!known) throw Error(Errc::invalid_config, "unknown key '" + key + "'");
  }

  PipelineConfig cfg;
  read_field(j, "gop_size", cfg.gop_size);
  read_field(j, "alpha", cfg.alpha);
  read_field(j, "beta", cfg.beta);
  read_field(j, "mask_threshold", cfg.mask_threshold);
  read_field(j, "temperature", cfg.temperature);
  read_field(j, "blur_sigma", cfg.blur_sigma);
  read_field(j, "blur_kernel_radius", cfg.blur_kernel_radius);
  read_field(j, "latent_factor", cfg.latent_factor);
  read_field(j, "blur_binarize_threshold", cfg.blur_binarize_threshold);
  return cfg;
}

void save_config(const PipelineConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_failure, "cannot write " + path.string());
  out << config_to_string(cfg);
  if (!out) throw Error(Errc::io_failure, "write failed: " + path.string());
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::file_missing, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_string(ss.str());
}

}  // namespace mcvt
