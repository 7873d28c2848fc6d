#pragma once

#include "mcvt/config.hpp"
#include "mcvt/flow.hpp"
#include "mcvt/imageio.hpp"
#include "mcvt/types.hpp"

namespace mcvt {

struct MatchScores {
  ScalarField front;
  ScalarField back;  // exactly 1 - front
};

// Temperature softmax over (occlusion - beta * residual) of each candidate:
//   front = e^(sf/tau) / (e^(sf/tau) + e^(sb/tau)),  back = 1 - front.
// Evaluated with the max subtracted first.
MatchScores match_scores(const ScalarField& occ_front, const ScalarField& res_front,
                         const ScalarField& occ_back, const ScalarField& res_back, double beta,
                         double temperature);

// Per-pixel front*a + back*b, clamped to [0,1].
Frame blend_frames(const Frame& warped_front, const Frame& warped_back, const MatchScores& s);

struct BFrameDiagnostics {
  Frame warped_front;
  Frame warped_back;
  ScalarField residual_front;
  ScalarField residual_back;
  ScalarField occlusion_front;
  ScalarField occlusion_back;
  MatchScores scores;
};

struct BFrameResult {
  Frame frame;
  BFrameDiagnostics diagnostics;
};

// Interpolates output frame j from the key-frame outputs at `front` and
// `back` (front < j < back). No generator call.
BFrameResult interpolate_bframe(const Frame& front_out, const Frame& back_out,
                                const FrameSequence& inputs, int front, int back, int j,
                                const FlowSource& flow_src, const PipelineConfig& cfg);

}  // namespace mcvt
