#include <gtest/gtest.h>

#include "mcvt/error.hpp"
#include "mcvt/mgpg.hpp"
#include "mcvt/warp.hpp"
#include "synthetic.hpp"

namespace mcvt {
namespace {

TEST(Mgpg, StaticVideoKeepsEverything) {
  const Frame x = test::textured_frame(32, 32, 0);
  const FrameSequence inputs({x, x});
  const Frame prev_out = apply_mock(MockTransform::sepia, x, 0, "");
  for (const GeneratorBackend& backend :
       {GeneratorBackend{MockStylizer{MockTransform::invert}},
        GeneratorBackend{RemoteService{"http://127.0.0.1:1", std::chrono::milliseconds(100)}}}) {
    const PFrameResult r = generate_pframe(prev_out, inputs, x, 0, 1, BlockMatcher{8, 4}, backend,
                                           PipelineConfig{}, "p", 0);
    EXPECT_EQ(r.diagnostics.residual, ScalarField::filled(32, 32, 0.f));
    EXPECT_EQ(r.diagnostics.occlusion, ScalarField::filled(32, 32, 1.f));
    EXPECT_TRUE(r.diagnostics.mask.all_ones());
    EXPECT_EQ(r.frame, prev_out);
  }
}

TEST(Mgpg, LeftTranslationWarpsAndInpaintsRightStripe) {
  test::TempDir flows;
  const int w = 64, h = 48, d = 4;
  const FrameSequence inputs = test::translating_scene(2, w, h, d);
  test::write_translation_flows(flows.path(), 2, w, h, d);
  const Frame prev_out = apply_mock(MockTransform::sepia, inputs[0], 0, "");
  const Frame cond = inputs[1];
  const PFrameResult r = generate_pframe(prev_out, inputs, cond, 0, 1, FileStore{flows.path()},
                                         MockStylizer{MockTransform::invert}, PipelineConfig{}, "p", 3);

  const BinaryMask& kept = r.diagnostics.kept_pixels;
  int stripe_min = w;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < 3; ++c) {
        if (kept.at(x, y)) {
          // Interior: previous output shifted left by d.
          ASSERT_EQ(r.frame.at(x, y, c), prev_out.at(x + d, y, c));
        } else {
          ASSERT_EQ(r.frame.at(x, y, c), 1.f - cond.at(x, y, c));
        }
      }
      if (!kept.at(x, y)) stripe_min = std::min(stripe_min, x);
    }
  for (int y = 0; y < h; ++y)
    for (int x = w - d; x < w; ++x) ASSERT_EQ(kept.at(x, y), 0);
  EXPECT_LE(stripe_min, w - d);
  // Inpainting stays near the revealed border.
  EXPECT_GE(stripe_min, w - 2 * 8);
}

TEST(Mgpg, UnrelatedFramesCollapseToFullRegeneration) {
  const FrameSequence inputs({Frame::filled(16, 16, 0.f), Frame::filled(16, 16, 1.f)});
  const Frame cond = test::textured_frame(16, 16, 5);
  const PFrameResult r = generate_pframe(Frame::filled(16, 16, 0.3f), inputs, cond, 0, 1,
                                         BlockMatcher{8, 4}, MockStylizer{}, PipelineConfig{}, "", 0);
  EXPECT_EQ(r.diagnostics.mask, BinaryMask::filled(16, 16, 0));
  EXPECT_EQ(r.frame, cond);
}

TEST(Mgpg, KeptPixelsEqualWarpedPreviousOutput) {
  // Motion the block matcher cannot explain exactly: kept pixels still pass
  // through from the warp untouched.
  const FrameSequence inputs({test::textured_frame(40, 40, 0, 3), test::textured_frame(40, 40, 2, 3)});
  const Frame prev_out = test::textured_frame(40, 40, 100, 9);
  const PFrameResult r = generate_pframe(prev_out, inputs, inputs[1], 0, 1, BlockMatcher{8, 4},
                                         MockStylizer{MockTransform::seeded}, PipelineConfig{}, "", 1);
  const Frame warped = backward_warp(prev_out, r.diagnostics.flow_to_current);
  EXPECT_EQ(warped, r.diagnostics.warped);
  for (int y = 0; y < 40; ++y)
    for (int x = 0; x < 40; ++x)
      if (r.diagnostics.kept_pixels.at(x, y))
        for (int c = 0; c < 3; ++c) ASSERT_EQ(r.frame.at(x, y, c), warped.at(x, y, c));
}

TEST(Mgpg, DiagnosticsRespectInvariants) {
  const FrameSequence inputs = test::translating_scene(2, 24, 24, 3);
  const PFrameResult r = generate_pframe(inputs[0], inputs, inputs[1], 0, 1, BlockMatcher{4, 4},
                                         MockStylizer{}, PipelineConfig{}, "", 0);
  for (float v : r.diagnostics.residual.data()) {
    EXPECT_GE(v, 0.f);
    EXPECT_LE(v, 1.f);
  }
  for (float v : r.diagnostics.occlusion.data()) {
    EXPECT_GE(v, 0.f);
    EXPECT_LE(v, 1.f);
  }
  for (std::size_t k = 0; k < r.diagnostics.mask.data().size(); ++k)
    EXPECT_LE(r.diagnostics.mask.data()[k], r.diagnostics.raw_mask.data()[k]);
  EXPECT_EQ(r.diagnostics.latent_mask.width(), 3);
}

TEST(Mgpg, DimensionMismatch) {
  const FrameSequence inputs({Frame::filled(8, 8, 0.f), Frame::filled(8, 8, 0.f)});
  try {
    generate_pframe(Frame::filled(4, 4, 0.f), inputs, inputs[1], 0, 1, BlockMatcher{}, MockStylizer{},
                    PipelineConfig{}, "", 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::dimension_mismatch);
  }
}

}  // namespace
}  // namespace mcvt
