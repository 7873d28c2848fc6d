#include "mcvt/maskgen.hpp"

#include <algorithm>
#include <cmath>

namespace mcvt {
namespace {

std::vector<double> gaussian_kernel(double sigma, int radius) {
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    sum += k[i + radius];
  }
  for (double& v : k) v /= sum;
  return k;
}

int ceil_div(int a, int b) { return (a + b - 1) / b; }

}  // namespace

ScalarField residual_map(const Frame& x, const Frame& x_warped) {
  require_same_size(x, x_warped, "residual_map");
  std::vector<float> out(x.pixel_count());
  const auto a = x.data();
  const auto b = x_warped.data();
  for (std::size_t p = 0; p < out.size(); ++p) {
    double s = 0.0;
    for (int c = 0; c < Frame::kChannels; ++c) {
      const double d = static_cast<double>(a[3 * p + c]) - b[3 * p + c];
      s += d * d;
    }
    out[p] = static_cast<float>(s / Frame::kChannels);
  }
  return ScalarField(x.width(), x.height(), std::move(out));
}

BinaryMask inpaint_mask(const ScalarField& occlusion, const ScalarField& residual, double alpha,
                        double threshold) {
  require_same_size(occlusion, residual, "inpaint_mask");
  if (!(alpha >= 0)) throw Error(Errc::invalid_argument, "inpaint_mask: alpha must be >= 0");
  std::vector<std::uint8_t> out(occlusion.data().size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double score =
        static_cast<double>(occlusion.data()[k]) - alpha * static_cast<double>(residual.data()[k]);
    out[k] = score > threshold ? 1 : 0;
  }
  return BinaryMask(occlusion.width(), occlusion.height(), std::move(out));
}

BinaryMask expand_mask(const BinaryMask& mask, double sigma, int radius, double binarize_threshold) {
  if (!(sigma >= 0) || radius < 0) {
    throw Error(Errc::invalid_argument, "expand_mask: sigma and radius must be >= 0");
  }
  if (sigma == 0.0 || radius == 0) return mask;

  const int w = mask.width();
  const int h = mask.height();
  const std::vector<double> k = gaussian_kernel(sigma, radius);

  // Separable: horizontal then vertical pass, both clamp-to-edge.
  std::vector<double> tmp(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        s += k[i + radius] * mask.at(std::clamp(x + i, 0, w - 1), y);
      }
      tmp[static_cast<std::size_t>(y) * w + x] = s;
    }
  }
  std::vector<std::uint8_t> out(tmp.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        s += k[i + radius] * tmp[static_cast<std::size_t>(std::clamp(y + i, 0, h - 1)) * w + x];
      }
      const std::uint8_t blurred = s < binarize_threshold ? 0 : 1;
      out[static_cast<std::size_t>(y) * w + x] = std::min(mask.at(x, y), blurred);
    }
  }
  return BinaryMask(w, h, std::move(out));
}

BinaryMask to_latent_mask(const BinaryMask& mask, int factor) {
  if (factor < 1) throw Error(Errc::invalid_argument, "to_latent_mask: factor must be >= 1");
  const int lw = ceil_div(mask.width(), factor);
  const int lh = ceil_div(mask.height(), factor);
  std::vector<std::uint8_t> out(static_cast<std::size_t>(lw) * lh, 1);
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (mask.at(x, y) == 0) out[static_cast<std::size_t>(y / factor) * lw + x / factor] = 0;
    }
  }
  return BinaryMask(lw, lh, std::move(out));
}

BinaryMask upsample_mask(const BinaryMask& mask, int factor, int target_width, int target_height) {
  if (factor < 1) throw Error(Errc::invalid_argument, "upsample_mask: factor must be >= 1");
  if (ceil_div(target_width, factor) != mask.width() ||
      ceil_div(target_height, factor) != mask.height()) {
    throw Error(Errc::dimension_mismatch,
                "upsample_mask: " + size_string(mask.width(), mask.height()) + " x" +
                    std::to_string(factor) + " cannot cover " +
                    size_string(target_width, target_height));
  }
  std::vector<std::uint8_t> out(static_cast<std::size_t>(target_width) * target_height);
  for (int y = 0; y < target_height; ++y) {
    for (int x = 0; x < target_width; ++x) {
      out[static_cast<std::size_t>(y) * target_width + x] = mask.at(x / factor, y / factor);
    }
  }
  return BinaryMask(target_width, target_height, std::move(out));
}

}  // namespace mcvt
