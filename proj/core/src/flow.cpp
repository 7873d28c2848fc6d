#include "mcvt/flow.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <semaphore>

#include <json.hpp>

#include "base64.hpp"
#include "http_util.hpp"
#include "mcvt/error.hpp"

namespace fs = std::filesystem;

namespace mcvt {
namespace {

static_assert(std::endian::native == std::endian::little,
              "flo/wire encoding assumes a little-endian host");

constexpr float kFloMagic = 202021.25f;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t off) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[off + i]) << (8 * i);
  return v;
}

void put_f32(std::vector<std::uint8_t>& out, float f) { put_u32(out, std::bit_cast<std::uint32_t>(f)); }

float get_f32(std::span<const std::uint8_t> b, std::size_t off) {
  return std::bit_cast<float>(get_u32(b, off));
}

void check_index(const FrameSequence& frames, int i) {
  if (i < 0 || static_cast<std::size_t>(i) >= frames.size()) {
    throw Error(Errc::invalid_argument,
                "frame index " + std::to_string(i) + " out of range [0," +
                    std::to_string(frames.size()) + ")");
  }
}

}  // namespace

std::string flow_file_name(const std::string& pattern, int source, int target) {
  const int n = std::snprintf(nullptr, 0, pattern.c_str(), source, target);
  std::string out(static_cast<std::size_t>(n), '\0');
  std::snprintf(out.data(), out.size() + 1, pattern.c_str(), source, target);
  return out;
}

std::vector<std::uint8_t> flow_to_le_bytes(const FlowField& field) {
  std::vector<std::uint8_t> out;
  out.reserve(field.data().size() * 4);
  for (float f : field.data()) put_f32(out, f);
  return out;
}

FlowField flow_from_le_bytes(int width, int height, std::span<const std::uint8_t> bytes) {
  const std::size_t n = static_cast<std::size_t>(width) * height * 2;
  if (width < 0 || height < 0 || bytes.size() != n * 4) {
    throw Error(Errc::truncated_file, "flow payload has " + std::to_string(bytes.size()) +
                                          " bytes, expected " + std::to_string(n * 4));
  }
  std::vector<float> uv(n);
  for (std::size_t i = 0; i < n; ++i) uv[i] = get_f32(bytes, 4 * i);
  return FlowField(width, height, std::move(uv));
}

std::vector<std::uint8_t> encode_flo(const FlowField& field) {
  // FlowField construction already rejects non-finite values.
  std::vector<std::uint8_t> out;
  out.reserve(12 + field.data().size() * 4);
  put_f32(out, kFloMagic);
  put_u32(out, static_cast<std::uint32_t>(field.width()));
  put_u32(out, static_cast<std::uint32_t>(field.height()));
  for (float f : field.data()) put_f32(out, f);
  return out;
}

FlowField decode_flo(std::span<const std::uint8_t> bytes, const std::string& name) {
  if (bytes.size() < 4) throw Error(Errc::truncated_file, name + ": no header");
  if (std::memcmp(bytes.data(), "PIEH", 4) != 0) throw Error(Errc::bad_magic, name);
  if (bytes.size() < 12) throw Error(Errc::truncated_file, name + ": short header");
  const auto width = static_cast<std::int32_t>(get_u32(bytes, 4));
  const auto height = static_cast<std::int32_t>(get_u32(bytes, 8));
  if (width < 0 || height < 0 || width > (1 << 16) || height > (1 << 16)) {
    throw Error(Errc::invalid_field, name + ": implausible size " + size_string(width, height));
  }
  const std::size_t n = static_cast<std::size_t>(width) * height * 2;
  if (bytes.size() < 12 + 4 * n) {
    throw Error(Errc::truncated_file, name + ": expected " + std::to_string(12 + 4 * n) +
                                          " bytes, got " + std::to_string(bytes.size()));
  }
  return flow_from_le_bytes(width, height, bytes.subspan(12, 4 * n));
}

FlowField read_flo(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::file_missing, path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_flo(bytes, path.string());
}

void write_flo(const FlowField& field, const fs::path& path) {
  const std::vector<std::uint8_t> bytes = encode_flo(field);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_failure, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::io_failure, "write failed: " + path.string());
}

FlowField block_match(const Frame& a, const Frame& b, int block, int radius) {
  require_same_size(a, b, "block_match");
  if (block < 1) throw Error(Errc::invalid_argument, "block size must be >= 1");
  if (radius < 0) throw Error(Errc::invalid_argument, "search radius must be >= 0");
  const int w = b.width();
  const int h = b.height();

  // Candidates sorted by the tie-break order: |d|^2, then u, then v.
  struct Cand {
    int u, v;
  };
  std::vector<Cand> cands;
  for (int u = -radius; u <= radius; ++u) {
    for (int v = -radius; v <= radius; ++v) cands.push_back({u, v});
  }
  std::stable_sort(cands.begin(), cands.end(), [](const Cand& l, const Cand& r) {
    const int dl = l.u * l.u + l.v * l.v;
    const int dr = r.u * r.u + r.v * r.v;
    if (dl != dr) return dl < dr;
    if (l.u != r.u) return l.u < r.u;
    return l.v < r.v;
  });

  std::vector<float> uv(static_cast<std::size_t>(w) * h * 2);
  for (int by = 0; by < h; by += block) {
    for (int bx = 0; bx < w; bx += block) {
      const int ex = std::min(bx + block, w);
      const int ey = std::min(by + block, h);
      double best = std::numeric_limits<double>::infinity();
      Cand best_d{0, 0};
      for (const Cand& d : cands) {
        double sad = 0.0;
        for (int y = by; y < ey && sad < best; ++y) {
          const int sy = std::clamp(y + d.v, 0, h - 1);
          for (int x = bx; x < ex; ++x) {
            const int sx = std::clamp(x + d.u, 0, w - 1);
            for (int c = 0; c < Frame::kChannels; ++c) {
              sad += std::abs(static_cast<double>(b.at(x, y, c)) - a.at(sx, sy, c));
            }
          }
        }
        // Strict improvement keeps the earlier (preferred) candidate on ties.
        if (sad < best) {
          best = sad;
          best_d = d;
        }
      }
      for (int y = by; y < ey; ++y) {
        for (int x = bx; x < ex; ++x) {
          const std::size_t i = (static_cast<std::size_t>(y) * w + x) * 2;
          uv[i] = static_cast<float>(best_d.u);
          uv[i + 1] = static_cast<float>(best_d.v);
        }
      }
    }
  }
  return FlowField(w, h, std::move(uv));
}

struct RemoteEstimator::Limiter {
  explicit Limiter(int n) : slots(n) {}
  std::counting_semaphore<> slots;
};

RemoteEstimator::RemoteEstimator(std::string url, std::chrono::milliseconds timeout,
                                 int max_in_flight)
    : url_(std::move(url)), timeout_(timeout), max_in_flight_(max_in_flight) {
  if (max_in_flight < 1) throw Error(Errc::invalid_argument, "max_in_flight must be >= 1");
  limiter_ = std::make_shared<Limiter>(max_in_flight);
}

FlowField RemoteEstimator::estimate(const Frame& source, const Frame& target) const {
  require_same_size(source, target, "RemoteEstimator");
  nlohmann::json body = {
      {"width", target.width()},
      {"height", target.height()},
      {"source_png_b64", detail::base64_encode(encode_png(source))},
      {"target_png_b64", detail::base64_encode(encode_png(target))},
  };

  limiter_->slots.acquire();
  nlohmann::json reply;
  try {
    reply = detail::post_json(url_, "/v1/flow", body, timeout_);
  } catch (...) {
    limiter_->slots.release();
    throw;
  }
  limiter_->slots.release();

  auto field = reply.find("flow_b64");
  if (field == reply.end() || !field->is_string()) {
    throw Error(Errc::malformed_response, "flow response lacks flow_b64");
  }
  auto bytes = detail::base64_decode(field->get<std::string>());
  if (!bytes) throw Error(Errc::malformed_response, "flow_b64 is not valid base64");
  try {
    return flow_from_le_bytes(target.width(), target.height(), *bytes);
  } catch (const Error& e) {
    throw Error(Errc::malformed_response, e.what());
  }
}

FlowField get_flow(const FlowSource& src, const FrameSequence& frames, int a, int b) {
  check_index(frames, a);
  check_index(frames, b);
  if (a == b) throw Error(Errc::invalid_argument, "get_flow: source equals target");

  FlowField flow = std::visit(
      [&](const auto& s) -> FlowField {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, FileStore>) {
          const fs::path path = s.directory / flow_file_name(s.pattern, a, b);
          if (!fs::exists(path)) throw Error(Errc::file_missing, path.filename().string());
          return read_flo(path);
        } else if constexpr (std::is_same_v<S, BlockMatcher>) {
          return block_match(frames[a], frames[b], s.block, s.radius);
        } else {
          return s.estimate(frames[a], frames[b]);
        }
      },
      src);
  if (!same_size(flow, frames[b])) {
    throw Error(Errc::dimension_mismatch,
                "flow " + std::to_string(a) + "->" + std::to_string(b) + " is " +
                    size_string(flow.width(), flow.height()) + ", frames are " +
                    size_string(frames.width(), frames.height()));
  }
  return flow;
}

}  // namespace mcvt
