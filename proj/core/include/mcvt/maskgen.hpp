#pragma once

#include "mcvt/types.hpp"

namespace mcvt {

// Per-pixel squared difference averaged over the three channels, in [0,1].
ScalarField residual_map(const Frame& x, const Frame& x_warped);

// 1 (keep) where occlusion - alpha * residual > threshold, else 0 (inpaint).
BinaryMask inpaint_mask(const ScalarField& occlusion, const ScalarField& residual, double alpha,
                        double threshold);

// Grows the inpaint (zero) region: blur the mask as a real field with a
// normalized Gaussian truncated at `radius` (clamp-to-edge), mark pixels
// whose blurred value is below `binarize_threshold` as 0, and take the
// minimum with the input so original zeros always survive. sigma == 0 or
// radius == 0 returns the input unchanged.
BinaryMask expand_mask(const BinaryMask& mask, double sigma, int radius, double binarize_threshold);

// ceil(W/f) x ceil(H/f) min-pool; partial border windows use the pixels
// they cover. Any inpaint pixel in a window makes the latent cell inpaint.
BinaryMask to_latent_mask(const BinaryMask& mask, int factor);

// Nearest-neighbor expansion by `factor`, cropped to target size. The mask
// must be exactly ceil(target/factor) in each dimension.
BinaryMask upsample_mask(const BinaryMask& mask, int factor, int target_width, int target_height);

}  // namespace mcvt
