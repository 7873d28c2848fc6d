#include "mcvt/mgbi.hpp"

#include <algorithm>
#include <cmath>

#include "mcvt/error.hpp"
#include "mcvt/maskgen.hpp"
#include "mcvt/warp.hpp"

namespace mcvt {

MatchScores match_scores(const ScalarField& occ_front, const ScalarField& res_front,
                         const ScalarField& occ_back, const ScalarField& res_back, double beta,
                         double temperature) {
  require_same_size(occ_front, res_front, "match_scores front");
  require_same_size(occ_front, occ_back, "match_scores occlusion");
  require_same_size(occ_front, res_back, "match_scores back");
  if (!(temperature > 0)) throw Error(Errc::invalid_argument, "temperature must be > 0");

  const std::size_t n = occ_front.data().size();
  std::vector<float> sf(n), sb(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double a = occ_front.data()[k] - beta * static_cast<double>(res_front.data()[k]);
    const double b = occ_back.data()[k] - beta * static_cast<double>(res_back.data()[k]);
    const double m = std::max(a, b);
    const double ea = std::exp((a - m) / temperature);
    const double eb = std::exp((b - m) / temperature);
    sf[k] = static_cast<float>(ea / (ea + eb));
    sb[k] = 1.f - sf[k];
  }
  return {ScalarField(occ_front.width(), occ_front.height(), std::move(sf)),
          ScalarField(occ_front.width(), occ_front.height(), std::move(sb))};
}

Frame blend_frames(const Frame& warped_front, const Frame& warped_back, const MatchScores& s) {
  require_same_size(warped_front, warped_back, "blend_frames");
  require_same_size(warped_front, s.front, "blend_frames scores");
  const auto a = warped_front.data();
  const auto b = warped_back.data();
  std::vector<float> out(a.size());
  for (std::size_t p = 0; p < warped_front.pixel_count(); ++p) {
    const double wf = s.front.data()[p];
    const double wb = s.back.data()[p];
    for (int c = 0; c < Frame::kChannels; ++c) {
      const double v = wf * a[3 * p + c] + wb * b[3 * p + c];
      out[3 * p + c] = static_cast<float>(std::clamp(v, 0.0, 1.0));
    }
  }
  return Frame(warped_front.width(), warped_front.height(), std::move(out));
}

BFrameResult interpolate_bframe(const Frame& front_out, const Frame& back_out,
                                const FrameSequence& inputs, int front, int back, int j,
                                const FlowSource& flow_src, const PipelineConfig& cfg) {
  validate_config(cfg);
  if (!(front < j && j < back)) {
    throw Error(Errc::index_order, "B-frame " + std::to_string(j) + " not strictly inside (" +
                                       std::to_string(front) + ", " + std::to_string(back) + ")");
  }
  require_same_size(front_out, inputs[0], "interpolate_bframe front output");
  require_same_size(back_out, inputs[0], "interpolate_bframe back output");

  // Flows on j's grid pointing into each reference.
  const FlowField to_j_front = get_flow(flow_src, inputs, front, j);
  const FlowField to_j_back = get_flow(flow_src, inputs, back, j);
  // Reverse flows on each reference's grid pointing into j.
  const FlowField from_j_front = get_flow(flow_src, inputs, j, front);
  const FlowField from_j_back = get_flow(flow_src, inputs, j, back);

  BFrameResult r;
  BFrameDiagnostics& d = r.diagnostics;
  d.warped_front = backward_warp(front_out, to_j_front);
  d.warped_back = backward_warp(back_out, to_j_back);
  d.residual_front = residual_map(inputs[j], backward_warp(inputs[front], to_j_front));
  d.residual_back = residual_map(inputs[j], backward_warp(inputs[back], to_j_back));
  d.occlusion_front = forward_warp_ones(from_j_front);
  d.occlusion_back = forward_warp_ones(from_j_back);
  d.scores = match_scores(d.occlusion_front, d.residual_front, d.occlusion_back, d.residual_back,
                          cfg.beta, cfg.temperature);
  r.frame = blend_frames(d.warped_front, d.warped_back, d.scores);
  return r;
}

}  // namespace mcvt
