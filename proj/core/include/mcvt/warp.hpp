#pragma once

#include "mcvt/types.hpp"

namespace mcvt {

// out(p) = bilinear sample of source at p + flow(p). Sample coordinates are
// clamped to the image rectangle; output samples are clamped to [0,1].
Frame backward_warp(const Frame& source, const FlowField& flow);

// As backward_warp, without the output clamp.
ScalarField backward_warp_scalar(const ScalarField& source, const FlowField& flow);

// Bilinear splat of unit mass from every p to p + flow(p). Mass landing
// outside the image is discarded. Not clamped: cells hit by several
// sources may exceed 1.
ScalarField splat_ones(const FlowField& flow);

// splat_ones clamped to [0,1]. Zero cells received no mass, i.e. content
// that has no source under `flow`.
ScalarField forward_warp_ones(const FlowField& flow);

}  // namespace mcvt
