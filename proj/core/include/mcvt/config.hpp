#pragma once

#include <filesystem>
#include <string>

namespace mcvt {

struct PipelineConfig {
  int gop_size = 10;
  double alpha = 5.0;           // residual weight in the inpaint mask
  double beta = 10.0;           // residual weight in B-frame match scores
  double mask_threshold = 0.5;
  double temperature = 20.0;    // softmax temperature for match scores
  double blur_sigma = 2.0;      // pixels; 0 disables mask expansion
  int blur_kernel_radius = 4;
  int latent_factor = 8;
  double blur_binarize_threshold = 0.99;

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

// Returns cfg unchanged or throws Errc::invalid_config naming the field.
PipelineConfig validate_config(const PipelineConfig& cfg);

// JSON object with one key per field. Keys are the field names above.
std::string config_to_string(const PipelineConfig& cfg);
// Missing keys keep their defaults; unknown keys are rejected.
PipelineConfig config_from_string(const std::string& text);

void save_config(const PipelineConfig& cfg, const std::filesystem::path& path);
PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace mcvt
