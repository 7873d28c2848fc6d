#include "mcvt/generator.hpp"

#include <algorithm>
#include <array>

#include <json.hpp>

#include "base64.hpp"
#include "http_util.hpp"
#include "mcvt/error.hpp"
#include "mcvt/imageio.hpp"
#include "mcvt/maskgen.hpp"

namespace mcvt {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void check_condition(const GenerationRequest& req) {
  if (req.condition.empty()) throw Error(Errc::invalid_argument, "request has no condition frame");
}

void check_inpaint(const GenerationRequest& req) {
  check_condition(req);
  if (!req.base || !req.latent_mask) {
    throw Error(Errc::invalid_argument, "inpaint request needs base frame and latent mask");
  }
  if (req.latent_factor < 1) throw Error(Errc::invalid_argument, "latent_factor must be >= 1");
  require_same_size(*req.base, req.condition, "inpaint base vs condition");
  const int lw = (req.condition.width() + req.latent_factor - 1) / req.latent_factor;
  const int lh = (req.condition.height() + req.latent_factor - 1) / req.latent_factor;
  if (req.latent_mask->width() != lw || req.latent_mask->height() != lh) {
    throw Error(Errc::dimension_mismatch,
                "latent mask is " + size_string(req.latent_mask->width(), req.latent_mask->height()) +
                    ", expected " + size_string(lw, lh));
  }
}

Frame call_remote(const RemoteService& svc, const GenerationRequest& req) {
  if (svc.steps < 1) throw Error(Errc::invalid_argument, "sampler steps must be >= 1");
  nlohmann::json body = {
      {"mode", req.mode == GenerationMode::full ? "full" : "inpaint"},
      {"prompt", req.prompt},
      {"seed", req.seed},
      {"steps", svc.steps},
      {"width", req.condition.width()},
      {"height", req.condition.height()},
      {"condition_png_b64", detail::base64_encode(encode_png(req.condition))},
  };
  if (req.mode == GenerationMode::inpaint) {
    body["base_png_b64"] = detail::base64_encode(encode_png(*req.base));
    body["mask_b64"] = detail::base64_encode(req.latent_mask->data());
    body["latent_factor"] = req.latent_factor;
  }

  const nlohmann::json reply = detail::post_json(svc.url, "/v1/generate", body, svc.timeout);
  auto field = reply.find("frame_png_b64");
  if (field == reply.end() || !field->is_string()) {
    throw Error(Errc::malformed_response, "generate response lacks frame_png_b64");
  }
  auto bytes = detail::base64_decode(field->get<std::string>());
  if (!bytes) throw Error(Errc::malformed_response, "frame_png_b64 is not valid base64");
  Frame out;
  try {
    out = decode_png(*bytes);
  } catch (const Error& e) {
    throw Error(Errc::malformed_response, e.what());
  }
  if (!same_size(out, req.condition)) {
    throw Error(Errc::malformed_response,
                "generated frame is " + size_string(out.width(), out.height()) + ", expected " +
                    size_string(req.condition.width(), req.condition.height()));
  }
  return out;
}

Frame backend_frame(const GeneratorBackend& backend, const GenerationRequest& req) {
  return std::visit(
      [&](const auto& b) -> Frame {
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<B, MockStylizer>) {
          return apply_mock(b.transform, req.condition, req.seed, req.prompt);
        } else {
          return call_remote(b, req);
        }
      },
      backend);
}

}  // namespace

const char* to_string(MockTransform t) {
  switch (t) {
    case MockTransform::identity: return "identity";
    case MockTransform::invert: return "invert";
    case MockTransform::channel_rotate: return "rotate";
    case MockTransform::sepia: return "sepia";
    case MockTransform::seeded: return "seeded";
  }
  return "identity";
}

MockTransform parse_mock_transform(const std::string& name) {
  for (MockTransform t : {MockTransform::identity, MockTransform::invert,
                          MockTransform::channel_rotate, MockTransform::sepia,
                          MockTransform::seeded}) {
    if (name == to_string(t)) return t;
  }
  throw Error(Errc::invalid_argument, "unknown mock transform '" + name + "'");
}

Frame apply_mock(MockTransform t, const Frame& condition, std::uint64_t seed,
                 const std::string& prompt) {
  const auto in = condition.data();
  std::vector<float> out(in.size());
  const int w = condition.width();
  const std::uint64_t key = splitmix64(seed ^ fnv1a(prompt));
  for (std::size_t p = 0; p < condition.pixel_count(); ++p) {
    const float r = in[3 * p], g = in[3 * p + 1], b = in[3 * p + 2];
    std::array<float, 3> px{r, g, b};
    switch (t) {
      case MockTransform::identity:
        break;
      case MockTransform::invert:
        px = {1.f - r, 1.f - g, 1.f - b};
        break;
      case MockTransform::channel_rotate:
        px = {g, b, r};
        break;
      case MockTransform::sepia:
        px = {std::min(1.f, 0.393f * r + 0.769f * g + 0.189f * b),
              std::min(1.f, 0.349f * r + 0.686f * g + 0.168f * b),
              std::min(1.f, 0.272f * r + 0.534f * g + 0.131f * b)};
        break;
      case MockTransform::seeded: {
        const auto x = static_cast<std::uint64_t>(p % static_cast<std::size_t>(w));
        const auto y = static_cast<std::uint64_t>(p / static_cast<std::size_t>(w));
        for (int c = 0; c < 3; ++c) {
          const std::uint64_t hsh = splitmix64(key ^ splitmix64((y << 32) ^ (x << 2) ^ c));
          const float noise = static_cast<float>(hsh >> 40) / static_cast<float>(1 << 24);
          px[c] = 0.5f * px[c] + 0.5f * noise;
        }
        break;
      }
    }
    for (int c = 0; c < 3; ++c) out[3 * p + c] = std::clamp(px[c], 0.f, 1.f);
  }
  return Frame(condition.width(), condition.height(), std::move(out));
}

Frame generate_full(const GeneratorBackend& backend, const GenerationRequest& req) {
  if (req.mode != GenerationMode::full) {
    throw Error(Errc::invalid_argument, "generate_full needs mode=full");
  }
  check_condition(req);
  return backend_frame(backend, req);
}

Frame generate_inpaint(const GeneratorBackend& backend, const GenerationRequest& req) {
  if (req.mode != GenerationMode::inpaint) {
    throw Error(Errc::invalid_argument, "generate_inpaint needs mode=inpaint");
  }
  check_inpaint(req);
  if (req.latent_mask->all_ones()) return *req.base;

  const Frame generated = backend_frame(backend, req);
  const BinaryMask keep = upsample_mask(*req.latent_mask, req.latent_factor,
                                        req.condition.width(), req.condition.height());
  const auto base = req.base->data();
  const auto gen = generated.data();
  std::vector<float> out(base.size());
  for (std::size_t p = 0; p < keep.data().size(); ++p) {
    const auto src = keep.data()[p] ? base : gen;
    for (int c = 0; c < 3; ++c) out[3 * p + c] = src[3 * p + c];
  }
  return Frame(req.condition.width(), req.condition.height(), std::move(out));
}

}  // namespace mcvt
