#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mcvt/imageio.hpp"
#include "mcvt/types.hpp"

namespace mcvt {

inline constexpr const char* kDefaultFlowPattern = "flow_%04d_%04d.flo";

// Precomputed Middlebury .flo files, one per directed (source, target) pair.
struct FileStore {
  std::filesystem::path directory;
  std::string pattern = kDefaultFlowPattern;
};

// Exhaustive integer SAD search.
struct BlockMatcher {
  int block = 8;
  int radius = 4;
};

// HTTP client for POST <url>/v1/flow. Copies share one in-flight limit.
class RemoteEstimator {
 public:
  explicit RemoteEstimator(std::string url,
                           std::chrono::milliseconds timeout = std::chrono::seconds(30),
                           int max_in_flight = 4);

  const std::string& url() const { return url_; }
  std::chrono::milliseconds timeout() const { return timeout_; }
  int max_in_flight() const { return max_in_flight_; }

  // M_{source->target}: field on target's grid pointing into source.
  FlowField estimate(const Frame& source, const Frame& target) const;

 private:
  struct Limiter;
  std::string url_;
  std::chrono::milliseconds timeout_;
  int max_in_flight_;
  std::shared_ptr<Limiter> limiter_;
};

using FlowSource = std::variant<FileStore, BlockMatcher, RemoteEstimator>;

// M_{a->b}: the field on frame b's grid pointing into frame a, so that
// backward_warp(frames[a], get_flow(src, frames, a, b)) predicts frames[b].
FlowField get_flow(const FlowSource& src, const FrameSequence& frames, int a, int b);

// File name for the (source, target) pair under `pattern`.
std::string flow_file_name(const std::string& pattern, int source, int target);

FlowField block_match(const Frame& a, const Frame& b, int block, int radius);

// Middlebury .flo: "PIEH" magic, int32 width, int32 height, float32 (u,v)
// pairs row-major, all little-endian.
FlowField read_flo(const std::filesystem::path& path);
void write_flo(const FlowField& field, const std::filesystem::path& path);
std::vector<std::uint8_t> encode_flo(const FlowField& field);
FlowField decode_flo(std::span<const std::uint8_t> bytes, const std::string& name = "flo buffer");

// Raw little-endian float32 (u,v) pairs, no header; the remote wire payload.
std::vector<std::uint8_t> flow_to_le_bytes(const FlowField& field);
FlowField flow_from_le_bytes(int width, int height, std::span<const std::uint8_t> bytes);

}  // namespace mcvt
