#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mcvt/types.hpp"

namespace mcvt {

inline constexpr const char* kDefaultFramePattern = "frame_%04d.png";

// Non-empty ordered list of equally sized frames.
class FrameSequence {
 public:
  explicit FrameSequence(std::vector<Frame> frames, std::string pattern = kDefaultFramePattern);

  std::size_t size() const { return frames_.size(); }
  const Frame& operator[](std::size_t i) const { return frames_[i]; }
  const std::vector<Frame>& frames() const { return frames_; }
  int width() const { return frames_.front().width(); }
  int height() const { return frames_.front().height(); }
  const std::string& pattern() const { return pattern_; }

 private:
  std::vector<Frame> frames_;
  std::string pattern_;
};

// 8-bit quantization with round-half-up: floor(v*255 + 0.5), v clamped to [0,1].
std::uint8_t quantize_unit(double v);

// `pattern` is a printf-style name with exactly one integer conversion,
// e.g. "frame_%04d.png". Files are ordered by the parsed index.
FrameSequence read_sequence(const std::filesystem::path& directory,
                            const std::string& pattern = kDefaultFramePattern);
void write_sequence(const FrameSequence& seq, const std::filesystem::path& directory);

Frame read_png(const std::filesystem::path& path);
void write_png(const Frame& frame, const std::filesystem::path& path);

std::vector<std::uint8_t> encode_png(const Frame& frame);
Frame decode_png(std::span<const std::uint8_t> bytes);

// Grayscale dump with a linear [min,max] -> [0,255] mapping, clamped.
void write_scalar_field_png(const ScalarField& field, const std::filesystem::path& path,
                            double min, double max);
void write_mask_png(const BinaryMask& mask, const std::filesystem::path& path);

// Grayscale 8-bit read, for inspecting dumps.
ScalarField read_gray_png(const std::filesystem::path& path);

// Formats the single integer conversion in `pattern` (also used for .flo pairs).
std::string format_index(const std::string& pattern, int index);

}  // namespace mcvt
