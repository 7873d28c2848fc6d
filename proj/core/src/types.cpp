#include "mcvt/types.hpp"

#include <algorithm>
#include <cmath>

namespace mcvt {
namespace {

void check_dims(int width, int height, std::size_t actual, std::size_t per_pixel, const char* what) {
  if (width < 0 || height < 0) {
    throw Error(Errc::invalid_field, std::string(what) + ": negative dimensions");
  }
  const std::size_t expected = static_cast<std::size_t>(width) * height * per_pixel;
  if (actual != expected) {
    throw Error(Errc::invalid_field, std::string(what) + ": data length " + std::to_string(actual) +
                                         " != " + std::to_string(expected));
  }
}

}  // namespace

std::string size_string(int width, int height) {
  return std::to_string(width) + "x" + std::to_string(height);
}

Frame::Frame(int width, int height, std::vector<float> data)
    : width_(width), height_(height), data_(std::move(data)) {
  check_dims(width, height, data_.size(), kChannels, "Frame");
  for (float s : data_) {
    // Negated comparison also rejects NaN.
    if (!(s >= 0.f && s <= 1.f)) {
      throw Error(Errc::invalid_field, "Frame: sample outside [0,1]");
    }
  }
}

Frame Frame::filled(int width, int height, float value) {
  return Frame(width, height,
               std::vector<float>(static_cast<std::size_t>(width) * height * kChannels, value));
}

FlowField::FlowField(int width, int height, std::vector<float> uv)
    : width_(width), height_(height), uv_(std::move(uv)) {
  check_dims(width, height, uv_.size(), 2, "FlowField");
  if (!std::all_of(uv_.begin(), uv_.end(), [](float d) { return std::isfinite(d); })) {
    throw Error(Errc::invalid_field, "FlowField: non-finite displacement");
  }
}

FlowField FlowField::constant(int width, int height, float u, float v) {
  std::vector<float> uv(static_cast<std::size_t>(width) * height * 2);
  for (std::size_t i = 0; i < uv.size(); i += 2) {
    uv[i] = u;
    uv[i + 1] = v;
  }
  return FlowField(width, height, std::move(uv));
}

ScalarField::ScalarField(int width, int height, std::vector<float> data)
    : width_(width), height_(height), data_(std::move(data)) {
  check_dims(width, height, data_.size(), 1, "ScalarField");
  if (!std::all_of(data_.begin(), data_.end(), [](float d) { return std::isfinite(d); })) {
    throw Error(Errc::invalid_field, "ScalarField: non-finite value");
  }
}

ScalarField ScalarField::filled(int width, int height, float value) {
  return ScalarField(width, height,
                     std::vector<float>(static_cast<std::size_t>(width) * height, value));
}

BinaryMask::BinaryMask(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  check_dims(width, height, data_.size(), 1, "BinaryMask");
  if (!std::all_of(data_.begin(), data_.end(), [](std::uint8_t b) { return b <= 1; })) {
    throw Error(Errc::invalid_field, "BinaryMask: value not in {0,1}");
  }
}

BinaryMask BinaryMask::filled(int width, int height, std::uint8_t value) {
  return BinaryMask(width, height,
                    std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height, value));
}

bool BinaryMask::all_ones() const {
  return std::all_of(data_.begin(), data_.end(), [](std::uint8_t b) { return b == 1; });
}

std::size_t BinaryMask::count_zeros() const {
  return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), std::uint8_t{0}));
}

}  // namespace mcvt
