#include "mcvt/warp.hpp"

#include <algorithm>
#include <cmath>

namespace mcvt {
namespace {

struct Tap {
  int x0, x1, y0, y1;
  double fx, fy;
};

// Border-clamped bilinear footprint of (sx, sy).
Tap bilinear_tap(double sx, double sy, int width, int height) {
  sx = std::clamp(sx, 0.0, static_cast<double>(width - 1));
  sy = std::clamp(sy, 0.0, static_cast<double>(height - 1));
  Tap t;
  t.x0 = static_cast<int>(std::floor(sx));
  t.y0 = static_cast<int>(std::floor(sy));
  t.fx = sx - t.x0;
  t.fy = sy - t.y0;
  t.x1 = std::min(t.x0 + 1, width - 1);
  t.y1 = std::min(t.y0 + 1, height - 1);
  return t;
}

template <class Sample>
double interpolate(const Tap& t, Sample&& at) {
  const double top = (1.0 - t.fx) * at(t.x0, t.y0) + t.fx * at(t.x1, t.y0);
  const double bottom = (1.0 - t.fx) * at(t.x0, t.y1) + t.fx * at(t.x1, t.y1);
  return (1.0 - t.fy) * top + t.fy * bottom;
}

}  // namespace

Frame backward_warp(const Frame& source, const FlowField& flow) {
  require_same_size(source, flow, "backward_warp");
  const int w = source.width();
  const int h = source.height();
  std::vector<float> out(static_cast<std::size_t>(w) * h * Frame::kChannels);
  std::size_t o = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Tap t = bilinear_tap(x + static_cast<double>(flow.u(x, y)),
                                 y + static_cast<double>(flow.v(x, y)), w, h);
      for (int c = 0; c < Frame::kChannels; ++c) {
        const double v = interpolate(t, [&](int sx, int sy) { return source.at(sx, sy, c); });
        out[o++] = static_cast<float>(std::clamp(v, 0.0, 1.0));
      }
    }
  }
  return Frame(w, h, std::move(out));
}

ScalarField backward_warp_scalar(const ScalarField& source, const FlowField& flow) {
  require_same_size(source, flow, "backward_warp_scalar");
  const int w = source.width();
  const int h = source.height();
  std::vector<float> out(static_cast<std::size_t>(w) * h);
  std::size_t o = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Tap t = bilinear_tap(x + static_cast<double>(flow.u(x, y)),
                                 y + static_cast<double>(flow.v(x, y)), w, h);
      out[o++] = static_cast<float>(
          interpolate(t, [&](int sx, int sy) { return source.at(sx, sy); }));
    }
  }
  return ScalarField(w, h, std::move(out));
}

ScalarField splat_ones(const FlowField& flow) {
  const int w = flow.width();
  const int h = flow.height();
  std::vector<double> acc(static_cast<std::size_t>(w) * h, 0.0);
  auto deposit = [&](int x, int y, double mass) {
    if (x < 0 || y < 0 || x >= w || y >= h || mass == 0.0) return;
    acc[static_cast<std::size_t>(y) * w + x] += mass;
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double tx = x + static_cast<double>(flow.u(x, y));
      const double ty = y + static_cast<double>(flow.v(x, y));
      const double fx0 = std::floor(tx);
      const double fy0 = std::floor(ty);
      // Far out-of-range targets would overflow the int conversion.
      if (fx0 < -1.0 || fy0 < -1.0 || fx0 >= w || fy0 >= h) continue;
      const int x0 = static_cast<int>(fx0);
      const int y0 = static_cast<int>(fy0);
      const double fx = tx - fx0;
      const double fy = ty - fy0;
      deposit(x0, y0, (1.0 - fx) * (1.0 - fy));
      deposit(x0 + 1, y0, fx * (1.0 - fy));
      deposit(x0, y0 + 1, (1.0 - fx) * fy);
      deposit(x0 + 1, y0 + 1, fx * fy);
    }
  }
  return ScalarField(w, h, std::vector<float>(acc.begin(), acc.end()));
}

ScalarField forward_warp_ones(const FlowField& flow) {
  ScalarField raw = splat_ones(flow);
  std::vector<float> out(raw.data().begin(), raw.data().end());
  for (float& v : out) v = std::clamp(v, 0.f, 1.f);
  return ScalarField(raw.width(), raw.height(), std::move(out));
}

}  // namespace mcvt
