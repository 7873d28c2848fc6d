#include <random>

#include <gtest/gtest.h>

#include "mcvt/error.hpp"
#include "mcvt/generator.hpp"
#include "synthetic.hpp"

namespace mcvt {
namespace {

GenerationRequest full_request(const Frame& cond, std::uint64_t seed = 7) {
  GenerationRequest r;
  r.mode = GenerationMode::full;
  r.condition = cond;
  r.prompt = "x";
  r.seed = seed;
  return r;
}

GenerationRequest inpaint_request(const Frame& cond, const Frame& base, BinaryMask latent, int factor) {
  GenerationRequest r = full_request(cond);
  r.mode = GenerationMode::inpaint;
  r.base = base;
  r.latent_mask = std::move(latent);
  r.latent_factor = factor;
  return r;
}

TEST(Mock, IdentityAndInvert) {
  const Frame c = test::textured_frame(8, 8, 0);
  EXPECT_EQ(generate_full(MockStylizer{MockTransform::identity}, full_request(c)), c);
  const Frame inv = generate_full(MockStylizer{MockTransform::invert}, full_request(c));
  for (std::size_t i = 0; i < c.data().size(); ++i) EXPECT_EQ(inv.data()[i], 1.f - c.data()[i]);
}

TEST(Mock, OtherTransformsStayInRangeAndAreDeterministic) {
  std::mt19937 rng(1);
  const Frame c = test::random_frame(9, 9, rng);
  for (auto t : {MockTransform::channel_rotate, MockTransform::sepia, MockTransform::seeded}) {
    const Frame a = generate_full(MockStylizer{t}, full_request(c));
    EXPECT_EQ(a, generate_full(MockStylizer{t}, full_request(c)));
  }
  const Frame rot = apply_mock(MockTransform::channel_rotate, c, 0, "");
  EXPECT_EQ(rot.at(3, 4, 0), c.at(3, 4, 1));
  EXPECT_EQ(rot.at(3, 4, 2), c.at(3, 4, 0));
}

TEST(Mock, SeededDependsOnSeedAndPrompt) {
  const Frame c = test::textured_frame(8, 8, 0);
  const Frame a = apply_mock(MockTransform::seeded, c, 1, "p");
  EXPECT_NE(a, apply_mock(MockTransform::seeded, c, 2, "p"));
  EXPECT_NE(a, apply_mock(MockTransform::seeded, c, 1, "q"));
  EXPECT_EQ(a, apply_mock(MockTransform::seeded, c, 1, "p"));
}

TEST(Mock, ParseNames) {
  EXPECT_EQ(parse_mock_transform("invert"), MockTransform::invert);
  EXPECT_EQ(parse_mock_transform("rotate"), MockTransform::channel_rotate);
  EXPECT_THROW(parse_mock_transform("watercolor"), Error);
}

TEST(Inpaint, AllOnesMaskReturnsBaseExactly) {
  const Frame cond = test::textured_frame(16, 16, 0);
  const Frame base = test::textured_frame(16, 16, 50);
  // An unreachable remote backend proves the backend is never consulted.
  const RemoteService dead{"http://127.0.0.1:1", std::chrono::milliseconds(200)};
  const auto req = inpaint_request(cond, base, BinaryMask::filled(2, 2, 1), 8);
  EXPECT_EQ(generate_inpaint(dead, req), base);
  EXPECT_EQ(generate_inpaint(MockStylizer{MockTransform::invert}, req), base);
}

TEST(Inpaint, AllZerosMaskRegeneratesEverything) {
  const Frame cond = test::textured_frame(16, 16, 0);
  const Frame base = test::textured_frame(16, 16, 50);
  EXPECT_EQ(generate_inpaint(MockStylizer{}, inpaint_request(cond, base, BinaryMask::filled(2, 2, 0), 8)), cond);
}

TEST(Inpaint, HalfMaskComposites) {
  const Frame cond = test::textured_frame(16, 16, 0);
  const Frame base = test::textured_frame(16, 16, 50);
  const Frame out = generate_inpaint(MockStylizer{MockTransform::invert},
                                     inpaint_request(cond, base, BinaryMask(2, 2, {1, 0, 1, 0}), 8));
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 16; ++x)
      for (int c = 0; c < 3; ++c) {
        if (x < 8) {
          ASSERT_EQ(out.at(x, y, c), base.at(x, y, c));
        } else {
          ASSERT_EQ(out.at(x, y, c), 1.f - cond.at(x, y, c));
        }
      }
}

TEST(Inpaint, ValidatesRequest) {
  const Frame f = Frame::filled(16, 16, 0.f);
  try {
    generate_inpaint(MockStylizer{}, inpaint_request(f, f, BinaryMask::filled(3, 2, 1), 8));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::dimension_mismatch);
  }
  GenerationRequest missing = full_request(f);
  missing.mode = GenerationMode::inpaint;
  EXPECT_THROW(generate_inpaint(MockStylizer{}, missing), Error);
  EXPECT_THROW(generate_full(MockStylizer{}, inpaint_request(f, f, BinaryMask::filled(2, 2, 1), 8)), Error);
}

}  // namespace
}  // namespace mcvt
