#include "mcvt/imageio.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <regex>

#include "mcvt/error.hpp"

namespace fs = std::filesystem;

namespace mcvt {
namespace {

// Splits "prefix%0Nd suffix" into a regex matching the file names.
std::regex pattern_regex(const std::string& pattern) {
  static const std::regex conv(R"(%0?\d*d)");
  std::smatch m;
  if (!std::regex_search(pattern, m, conv)) {
    throw Error(Errc::invalid_argument, "pattern has no %d conversion: " + pattern);
  }
  auto escape = [](const std::string& s) {
    static const std::regex special(R"([.^$|()\[\]{}*+?\\])");
    return std::regex_replace(s, special, R"(\$&)");
  };
  const std::string suffix = m.suffix().str();
  if (std::regex_search(suffix, conv)) {
    throw Error(Errc::invalid_argument, "pattern has more than one conversion: " + pattern);
  }
  return std::regex(escape(m.prefix().str()) + "(\\d+)" + escape(suffix));
}

Frame frame_from_rgb8(int width, int height, std::span<const std::uint8_t> rgb) {
  std::vector<float> data(rgb.size());
  std::transform(rgb.begin(), rgb.end(), data.begin(),
                 [](std::uint8_t b) { return static_cast<float>(b) / 255.f; });
  return Frame(width, height, std::move(data));
}

std::vector<std::uint8_t> frame_to_rgb8(const Frame& frame) {
  std::vector<std::uint8_t> rgb(frame.data().size());
  std::transform(frame.data().begin(), frame.data().end(), rgb.begin(),
                 [](float v) { return quantize_unit(v); });
  return rgb;
}

void write_png_raw(const fs::path& path, int width, int height, png_uint_32 format,
                   const std::vector<std::uint8_t>& pixels) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = format;
  if (!png_image_write_to_file(&image, path.c_str(), 0, pixels.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw Error(Errc::io_failure, path.string() + ": " + msg);
  }
}

struct DecodedPng {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};

template <class Begin>
DecodedPng decode_with(Begin begin, png_uint_32 format, const std::string& name) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!begin(&image)) {
    throw Error(Errc::decode_failure, name + ": " + image.message);
  }
  image.format = format;
  DecodedPng out;
  out.width = static_cast<int>(image.width);
  out.height = static_cast<int>(image.height);
  out.pixels.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, out.pixels.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw Error(Errc::decode_failure, name + ": " + msg);
  }
  return out;
}

DecodedPng decode_file(const fs::path& path, png_uint_32 format) {
  if (!fs::exists(path)) throw Error(Errc::file_missing, path.string());
  return decode_with(
      [&](png_imagep img) { return png_image_begin_read_from_file(img, path.c_str()); }, format,
      path.string());
}

}  // namespace

FrameSequence::FrameSequence(std::vector<Frame> frames, std::string pattern)
    : frames_(std::move(frames)), pattern_(std::move(pattern)) {
  if (frames_.empty()) throw Error(Errc::missing_frames, "empty frame sequence");
  for (std::size_t i = 1; i < frames_.size(); ++i) {
    if (!same_size(frames_[i], frames_[0])) {
      throw Error(Errc::dimension_mismatch,
                  "frame " + std::to_string(i) + " is " +
                      size_string(frames_[i].width(), frames_[i].height()) + ", expected " +
                      size_string(frames_[0].width(), frames_[0].height()));
    }
  }
}

std::uint8_t quantize_unit(double v) {
  const double c = std::clamp(v, 0.0, 1.0);
  return static_cast<std::uint8_t>(std::floor(c * 255.0 + 0.5));
}

std::string format_index(const std::string& pattern, int index) {
  const int n = std::snprintf(nullptr, 0, pattern.c_str(), index);
  std::string out(static_cast<std::size_t>(n), '\0');
  std::snprintf(out.data(), out.size() + 1, pattern.c_str(), index);
  return out;
}

FrameSequence read_sequence(const fs::path& directory, const std::string& pattern) {
  if (!fs::is_directory(directory)) {
    throw Error(Errc::missing_directory, directory.string());
  }
  const std::regex re = pattern_regex(pattern);
  std::map<long, fs::path> by_index;
  for (const auto& entry : fs::directory_iterator(directory)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    std::smatch m;
    if (std::regex_match(name, m, re)) by_index.emplace(std::stol(m[1].str()), entry.path());
  }
  if (by_index.empty()) {
    throw Error(Errc::missing_frames, "no files matching " + pattern + " in " + directory.string());
  }

  std::vector<Frame> frames;
  frames.reserve(by_index.size());
  for (const auto& [index, path] : by_index) {
    Frame f = read_png(path);
    if (!frames.empty() && !same_size(f, frames.front())) {
      throw Error(Errc::dimension_mismatch,
                  path.filename().string() + " is " + size_string(f.width(), f.height()) +
                      ", expected " +
                      size_string(frames.front().width(), frames.front().height()));
    }
    frames.push_back(std::move(f));
  }
  return FrameSequence(std::move(frames), pattern);
}

void write_sequence(const FrameSequence& seq, const fs::path& directory) {
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw Error(Errc::io_failure, directory.string() + ": " + ec.message());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    write_png(seq[i], directory / format_index(seq.pattern(), static_cast<int>(i)));
  }
}

Frame read_png(const fs::path& path) {
  DecodedPng d = decode_file(path, PNG_FORMAT_RGB);
  return frame_from_rgb8(d.width, d.height, d.pixels);
}

void write_png(const Frame& frame, const fs::path& path) {
  write_png_raw(path, frame.width(), frame.height(), PNG_FORMAT_RGB, frame_to_rgb8(frame));
}

std::vector<std::uint8_t> encode_png(const Frame& frame) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(frame.width());
  image.height = static_cast<png_uint_32>(frame.height());
  image.format = PNG_FORMAT_RGB;
  const std::vector<std::uint8_t> rgb = frame_to_rgb8(frame);
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, rgb.data(), 0, nullptr)) {
    throw Error(Errc::io_failure, std::string("png encode: ") + image.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, rgb.data(), 0, nullptr)) {
    throw Error(Errc::io_failure, std::string("png encode: ") + image.message);
  }
  out.resize(size);
  return out;
}

Frame decode_png(std::span<const std::uint8_t> bytes) {
  DecodedPng d = decode_with(
      [&](png_imagep img) {
        return png_image_begin_read_from_memory(img, bytes.data(), bytes.size());
      },
      PNG_FORMAT_RGB, "png buffer");
  return frame_from_rgb8(d.width, d.height, d.pixels);
}

void write_scalar_field_png(const ScalarField& field, const fs::path& path, double min,
                            double max) {
  if (!(min < max)) throw Error(Errc::invalid_argument, "write_scalar_field_png: min >= max");
  std::vector<std::uint8_t> gray(field.data().size());
  std::transform(field.data().begin(), field.data().end(), gray.begin(),
                 [&](float v) { return quantize_unit((v - min) / (max - min)); });
  write_png_raw(path, field.width(), field.height(), PNG_FORMAT_GRAY, gray);
}

void write_mask_png(const BinaryMask& mask, const fs::path& path) {
  std::vector<std::uint8_t> gray(mask.data().size());
  std::transform(mask.data().begin(), mask.data().end(), gray.begin(),
                 [](std::uint8_t b) { return static_cast<std::uint8_t>(b * 255); });
  write_png_raw(path, mask.width(), mask.height(), PNG_FORMAT_GRAY, gray);
}

ScalarField read_gray_png(const fs::path& path) {
  DecodedPng d = decode_file(path, PNG_FORMAT_GRAY);
  std::vector<float> data(d.pixels.begin(), d.pixels.end());
  return ScalarField(d.width, d.height, std::move(data));
}

}  // namespace mcvt
