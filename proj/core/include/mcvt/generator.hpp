#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "mcvt/types.hpp"

namespace mcvt {

enum class MockTransform {
  identity,
  invert,          // 1 - c
  channel_rotate,  // (r,g,b) -> (g,b,r)
  sepia,
  seeded,          // 0.5*c + 0.5*noise(seed, prompt, x, y, channel)
};

const char* to_string(MockTransform t);
// Throws invalid_argument on unknown names.
MockTransform parse_mock_transform(const std::string& name);

// Pure pixel-wise stand-in for a diffusion model.
struct MockStylizer {
  MockTransform transform = MockTransform::identity;
};

// Client for POST <url>/v1/generate.
struct RemoteService {
  std::string url;
  std::chrono::milliseconds timeout = std::chrono::seconds(120);
  int steps = 20;
};

using GeneratorBackend = std::variant<MockStylizer, RemoteService>;

enum class GenerationMode { full, inpaint };

struct GenerationRequest {
  GenerationMode mode = GenerationMode::full;
  Frame condition;  // pre-rendered control image (canny, depth, ...)
  std::string prompt;
  std::uint64_t seed = 0;
  // inpaint only
  std::optional<Frame> base;
  std::optional<BinaryMask> latent_mask;
  int latent_factor = 8;
};

Frame generate_full(const GeneratorBackend& backend, const GenerationRequest& req);

// Pixels whose upsampled mask value is 1 are copied from req.base; only the
// rest come from the backend. An all-ones mask never reaches the backend.
Frame generate_inpaint(const GeneratorBackend& backend, const GenerationRequest& req);

// The mock's per-pixel function, exposed for tests and for the CLI.
Frame apply_mock(MockTransform t, const Frame& condition, std::uint64_t seed,
                 const std::string& prompt);

}  // namespace mcvt
