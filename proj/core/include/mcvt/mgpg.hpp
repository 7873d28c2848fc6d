#pragma once

#include <cstdint>
#include <string>

#include "mcvt/config.hpp"
#include "mcvt/flow.hpp"
#include "mcvt/generator.hpp"
#include "mcvt/imageio.hpp"
#include "mcvt/types.hpp"

namespace mcvt {

// Intermediates of one P-frame, for inspection and dumps.
struct PFrameDiagnostics {
  FlowField flow_to_current;    // M_{ref->cur}, on cur's grid
  FlowField flow_to_reference;  // M_{cur->ref}, on ref's grid
  Frame predicted_input;        // input ref frame warped onto cur
  ScalarField residual;
  ScalarField occlusion;
  BinaryMask raw_mask;     // threshold rule only
  BinaryMask mask;         // after blur expansion
  BinaryMask latent_mask;  // min-pooled, sent to the generator
  BinaryMask kept_pixels;  // latent mask upsampled; 1 = copied from `warped`
  Frame warped;            // previous output warped onto cur
};

struct PFrameResult {
  Frame frame;
  PFrameDiagnostics diagnostics;
};

// Mask-generation half: everything computed on input frames only.
struct InpaintMaskResult {
  FlowField flow_to_current;
  FlowField flow_to_reference;
  Frame predicted_input;
  ScalarField residual;
  ScalarField occlusion;
  BinaryMask raw_mask;
  BinaryMask mask;
  BinaryMask latent_mask;
};

InpaintMaskResult build_inpaint_mask(const FrameSequence& inputs, int ref, int cur,
                                     const FlowSource& flow_src, const PipelineConfig& cfg);

// Generates output frame `cur` from the previous key-frame output `prev_out`
// (the output for input frame `ref`). Flows are always taken between input
// frames; the residual and occlusion never look at outputs.
PFrameResult generate_pframe(const Frame& prev_out, const FrameSequence& inputs,
                             const Frame& cond_cur, int ref, int cur, const FlowSource& flow_src,
                             const GeneratorBackend& backend, const PipelineConfig& cfg,
                             const std::string& prompt, std::uint64_t seed);

}  // namespace mcvt
