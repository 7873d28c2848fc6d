#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mcvt {

// RGB image, row-major interleaved, samples in [0,1].
class Frame {
 public:
  static constexpr int kChannels = 3;

  Frame() = default;
  Frame(int width, int height, std::vector<float> data);

  static Frame filled(int width, int height, float value);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return data_.empty(); }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }

  float at(int x, int y, int c) const {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * kChannels + c];
  }
  std::span<const float> data() const& { return data_; }
  std::vector<float> data() && { return std::move(data_); }

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<float> data_;
};

// Displacement field in pixels. Lives on the target frame's grid: the value
// (u,v) at p means the content at p comes from p+(u,v) in the source frame.
class FlowField {
 public:
  FlowField() = default;
  // uv is interleaved (u,v) pairs, row-major.
  FlowField(int width, int height, std::vector<float> uv);

  static FlowField constant(int width, int height, float u, float v);
  static FlowField zeros(int width, int height) { return constant(width, height, 0.f, 0.f); }

  int width() const { return width_; }
  int height() const { return height_; }

  float u(int x, int y) const { return uv_[(static_cast<std::size_t>(y) * width_ + x) * 2]; }
  float v(int x, int y) const { return uv_[(static_cast<std::size_t>(y) * width_ + x) * 2 + 1]; }
  std::span<const float> data() const& { return uv_; }
  std::vector<float> data() && { return std::move(uv_); }

  friend bool operator==(const FlowField&, const FlowField&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<float> uv_;
};

// Single-channel real map: residuals, occlusion maps, match scores.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(int width, int height, std::vector<float> data);

  static ScalarField filled(int width, int height, float value);

  int width() const { return width_; }
  int height() const { return height_; }

  float at(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  std::span<const float> data() const& { return data_; }
  std::vector<float> data() && { return std::move(data_); }

  friend bool operator==(const ScalarField&, const ScalarField&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<float> data_;
};

// 0 = inpaint, 1 = keep.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height, std::vector<std::uint8_t> data);

  static BinaryMask filled(int width, int height, std::uint8_t value);

  int width() const { return width_; }
  int height() const { return height_; }

  std::uint8_t at(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  std::span<const std::uint8_t> data() const& { return data_; }
  std::vector<std::uint8_t> data() && { return std::move(data_); }

  bool all_ones() const;
  std::size_t count_zeros() const;

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

template <class A, class B>
bool same_size(const A& a, const B& b) {
  return a.width() == b.width() && a.height() == b.height();
}

// Throws dimension_mismatch naming `what` when sizes differ.
template <class A, class B>
void require_same_size(const A& a, const B& b, const char* what);

std::string size_string(int width, int height);

}  // namespace mcvt

#include "mcvt/error.hpp"

namespace mcvt {

template <class A, class B>
void require_same_size(const A& a, const B& b, const char* what) {
  if (!same_size(a, b)) {
    throw Error(Errc::dimension_mismatch, std::string(what) + ": " +
                                              size_string(a.width(), a.height()) + " vs " +
                                              size_string(b.width(), b.height()));
  }
}

}  // namespace mcvt
