#include "mcvt/mgpg.hpp"

#include "mcvt/error.hpp"
#include "mcvt/maskgen.hpp"
#include "mcvt/warp.hpp"

namespace mcvt {

InpaintMaskResult build_inpaint_mask(const FrameSequence& inputs, int ref, int cur,
                                     const FlowSource& flow_src, const PipelineConfig& cfg) {
  InpaintMaskResult r;
  r.flow_to_current = get_flow(flow_src, inputs, ref, cur);
  r.predicted_input = backward_warp(inputs[ref], r.flow_to_current);
  r.residual = residual_map(inputs[cur], r.predicted_input);

  // M_{cur->ref} lives on ref's grid and points into cur; splatting ones
  // along it marks which positions of cur have a source in ref.
  r.flow_to_reference = get_flow(flow_src, inputs, cur, ref);
  r.occlusion = forward_warp_ones(r.flow_to_reference);

  r.raw_mask = inpaint_mask(r.occlusion, r.residual, cfg.alpha, cfg.mask_threshold);
  r.mask = expand_mask(r.raw_mask, cfg.blur_sigma, cfg.blur_kernel_radius,
                       cfg.blur_binarize_threshold);
  r.latent_mask = to_latent_mask(r.mask, cfg.latent_factor);
  return r;
}

PFrameResult generate_pframe(const Frame& prev_out, const FrameSequence& inputs,
                             const Frame& cond_cur, int ref, int cur, const FlowSource& flow_src,
                             const GeneratorBackend& backend, const PipelineConfig& cfg,
                             const std::string& prompt, std::uint64_t seed) {
  validate_config(cfg);
  require_same_size(prev_out, inputs[0], "generate_pframe previous output");
  require_same_size(cond_cur, inputs[0], "generate_pframe condition");

  InpaintMaskResult m = build_inpaint_mask(inputs, ref, cur, flow_src, cfg);

  PFrameResult out;
  PFrameDiagnostics& d = out.diagnostics;
  d.warped = backward_warp(prev_out, m.flow_to_current);

  GenerationRequest req;
  req.mode = GenerationMode::inpaint;
  req.condition = cond_cur;
  req.prompt = prompt;
  req.seed = seed;
  req.base = d.warped;
  req.latent_mask = m.latent_mask;
  req.latent_factor = cfg.latent_factor;
  out.frame = generate_inpaint(backend, req);

  d.kept_pixels =
      upsample_mask(m.latent_mask, cfg.latent_factor, prev_out.width(), prev_out.height());
  d.flow_to_current = std::move(m.flow_to_current);
  d.flow_to_reference = std::move(m.flow_to_reference);
  d.predicted_input = std::move(m.predicted_input);
  d.residual = std::move(m.residual);
  d.occlusion = std::move(m.occlusion);
  d.raw_mask = std::move(m.raw_mask);
  d.mask = std::move(m.mask);
  d.latent_mask = std::move(m.latent_mask);
  return out;
}

}  // namespace mcvt
