#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "mcvt/error.hpp"
#include "mcvt/maskgen.hpp"
#include "mcvt/warp.hpp"
#include "synthetic.hpp"

namespace mcvt {
namespace {

// Direct 2D convolution with the outer-product Gaussian, clamp-to-edge.
BinaryMask expand_oracle(const BinaryMask& m, double sigma, int r, double thr) {
  double norm = 0;
  for (int i = -r; i <= r; ++i) norm += std::exp(-(i * i) / (2 * sigma * sigma));
  std::vector<std::uint8_t> out;
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x) {
      double acc = 0;
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
          const double k = std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma)) / (norm * norm);
          acc += k * m.at(std::clamp(x + dx, 0, m.width() - 1), std::clamp(y + dy, 0, m.height() - 1));
        }
      out.push_back(std::min<std::uint8_t>(m.at(x, y), acc < thr ? 0 : 1));
    }
  return BinaryMask(m.width(), m.height(), out);
}

BinaryMask center_hole_9x9() {
  std::vector<std::uint8_t> d(81, 1);
  d[4 * 9 + 4] = 0;
  return BinaryMask(9, 9, d);
}

TEST(Residual, IdenticalFramesAreZero) {
  const Frame f = test::textured_frame(8, 8, 0);
  EXPECT_EQ(residual_map(f, f), ScalarField::filled(8, 8, 0.f));
}

TEST(Residual, SingleChannelHalfDifference) {
  const ScalarField r = residual_map(Frame(1, 1, {0.5f, 0.2f, 0.2f}), Frame(1, 1, {0.f, 0.2f, 0.2f}));
  EXPECT_NEAR(r.at(0, 0), 0.25 / 3.0, 1e-7);
}

TEST(Residual, MaximumIsOne) {
  EXPECT_EQ(residual_map(Frame::filled(2, 2, 1.f), Frame::filled(2, 2, 0.f)), ScalarField::filled(2, 2, 1.f));
  EXPECT_THROW(residual_map(Frame::filled(2, 2, 1.f), Frame::filled(2, 1, 0.f)), Error);
}

TEST(InpaintMask, WorkedCases) {
  auto one = [](float o, float r) {
    return inpaint_mask(ScalarField(1, 1, {o}), ScalarField(1, 1, {r}), 5.0, 0.5).at(0, 0);
  };
  EXPECT_EQ(one(1.f, 0.f), 1);
  EXPECT_EQ(one(0.f, 0.f), 0);
  EXPECT_EQ(one(1.f, 0.2f), 0);
  // Strict inequality at the threshold.
  EXPECT_EQ(inpaint_mask(ScalarField(1, 1, {0.5f}), ScalarField(1, 1, {0.f}), 5.0, 0.5).at(0, 0), 0);
}

TEST(InpaintMask, Monotone) {
  std::mt19937 rng(21);
  const ScalarField o = test::random_field(16, 16, 0.f, 1.f, rng);
  const ScalarField r = test::random_field(16, 16, 0.f, 0.2f, rng);
  const BinaryMask base = inpaint_mask(o, r, 5.0, 0.5);
  std::uniform_int_distribution<int> pick(0, 255);
  std::uniform_real_distribution<float> bump(0.f, 0.3f);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = pick(rng);
    std::vector<float> od(o.data().begin(), o.data().end());
    std::vector<float> rd(r.data().begin(), r.data().end());
    od[k] += bump(rng);
    const BinaryMask up_o = inpaint_mask(ScalarField(16, 16, od), r, 5.0, 0.5);
    rd[k] += bump(rng);
    const BinaryMask up_r = inpaint_mask(o, ScalarField(16, 16, rd), 5.0, 0.5);
    for (int i = 0; i < 256; ++i) {
      ASSERT_GE(up_o.data()[i], base.data()[i]);
      ASSERT_LE(up_r.data()[i], base.data()[i]);
    }
  }
}

TEST(ExpandMask, AllOnesAndSigmaZero) {
  EXPECT_EQ(expand_mask(BinaryMask::filled(9, 9, 1), 2.0, 4, 0.99), BinaryMask::filled(9, 9, 1));
  const BinaryMask m = center_hole_9x9();
  EXPECT_EQ(expand_mask(m, 0.0, 4, 0.99), m);
}

TEST(ExpandMask, CenterHoleFrozenAgainstOracle) {
  const BinaryMask m = center_hole_9x9();
  // sigma 1, radius 2: the 4-neighbours blur to 0.9017, diagonals to 0.9404.
  const BinaryMask at90 = expand_mask(m, 1.0, 2, 0.9);
  EXPECT_EQ(at90, expand_oracle(m, 1.0, 2, 0.9));
  EXPECT_EQ(at90.count_zeros(), 1u);
  const BinaryMask at95 = expand_mask(m, 1.0, 2, 0.95);
  EXPECT_EQ(at95, expand_oracle(m, 1.0, 2, 0.95));
  EXPECT_EQ(at95.count_zeros(), 9u);
  for (int y = 3; y <= 5; ++y)
    for (int x = 3; x <= 5; ++x) EXPECT_EQ(at95.at(x, y), 0);
}

TEST(ExpandMask, NeverShrinksInpaintRegionAndMatchesOracle) {
  std::mt19937 rng(31);
  std::bernoulli_distribution keep(0.9);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::uint8_t> d(19 * 11);
    for (auto& v : d) v = keep(rng) ? 1 : 0;
    const BinaryMask m(19, 11, d);
    const BinaryMask e = expand_mask(m, 1.5, 3, 0.8);
    EXPECT_EQ(e, expand_oracle(m, 1.5, 3, 0.8));
    for (std::size_t k = 0; k < d.size(); ++k) ASSERT_LE(e.data()[k], m.data()[k]);
  }
}

TEST(LatentMask, MinPool) {
  EXPECT_EQ(to_latent_mask(BinaryMask::filled(16, 16, 1), 8), BinaryMask::filled(2, 2, 1));
  std::vector<std::uint8_t> d(256, 1);
  d[3 * 16 + 3] = 0;
  EXPECT_EQ(to_latent_mask(BinaryMask(16, 16, d), 8), BinaryMask(2, 2, {0, 1, 1, 1}));
  const BinaryMask m(3, 2, {1, 0, 1, 1, 1, 0});
  EXPECT_EQ(to_latent_mask(m, 1), m);
}

TEST(LatentMask, PartialWindows) {
  std::vector<std::uint8_t> d(10 * 9, 1);
  d[8 * 10 + 9] = 0;  // bottom-right pixel, inside a partial window
  const BinaryMask l = to_latent_mask(BinaryMask(10, 9, d), 4);
  EXPECT_EQ(l.width(), 3);
  EXPECT_EQ(l.height(), 3);
  EXPECT_EQ(l.count_zeros(), 1u);
  EXPECT_EQ(l.at(2, 2), 0);
}

TEST(UpsampleMask, ExpandsAndCrops) {
  const BinaryMask l(2, 2, {0, 1, 1, 0});
  const BinaryMask u = upsample_mask(l, 8, 16, 16);
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 16; ++x) EXPECT_EQ(u.at(x, y), l.at(x / 8, y / 8));
  EXPECT_EQ(upsample_mask(l, 1, 2, 2), l);
  EXPECT_EQ(upsample_mask(BinaryMask::filled(2, 2, 1), 8, 13, 9), BinaryMask::filled(13, 9, 1));
  try {
    upsample_mask(l, 8, 17, 16);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::dimension_mismatch);
  }
}

TEST(LatentMask, RoundTripNeverLosesInpaintPixels) {
  std::mt19937 rng(41);
  std::bernoulli_distribution keep(0.97);
  for (int trial = 0; trial < 50; ++trial) {
    const int w = 5 + trial % 23, h = 3 + trial % 17, f = 1 + trial % 9;
    std::vector<std::uint8_t> d(static_cast<std::size_t>(w) * h);
    for (auto& v : d) v = keep(rng) ? 1 : 0;
    const BinaryMask m(w, h, d);
    const BinaryMask back = upsample_mask(to_latent_mask(m, f), f, w, h);
    for (std::size_t k = 0; k < d.size(); ++k) ASSERT_LE(back.data()[k], m.data()[k]);
  }
}

TEST(MaskPipeline, LeftTranslationRevealsRightStripe) {
  for (int d : {1, 3, 6}) {
    const Frame prev = test::textured_frame(48, 32, 0);
    const Frame cur = test::textured_frame(48, 32, d);
    const FlowField to_cur = test::translation_flow(48, 32, d, 0, 1);
    const FlowField to_ref = test::translation_flow(48, 32, d, 1, 0);
    const ScalarField occ = forward_warp_ones(to_ref);
    const ScalarField res = residual_map(cur, backward_warp(prev, to_cur));
    const BinaryMask mask = expand_mask(inpaint_mask(occ, res, 5.0, 0.5), 2.0, 4, 0.99);
    const BinaryMask pixel = upsample_mask(to_latent_mask(mask, 8), 8, 48, 32);
    for (int y = 0; y < 32; ++y)
      for (int x = 48 - d; x < 48; ++x) {
        ASSERT_EQ(occ.at(x, y), 0.f);
        ASSERT_EQ(pixel.at(x, y), 0);
      }
  }
}

}  // namespace
}  // namespace mcvt
