// ops.hpp -- elementwise and statistical grid operations shared by all
// pipeline stages.

#ifndef AUTOCOMB_OPS_HPP
#define AUTOCOMB_OPS_HPP

#include "autocomb/volume.hpp"

namespace autocomb {

// Clamp every voxel to [lo, hi] then shift by -lo, so the output minimum is
// >= 0 and <= hi - lo. Geometry unchanged. Rejects non-finite voxels.
Volume3D clip_rescale(const Volume3D& vol, float lo, float hi);

// Separable Gaussian smoothing. Per-axis voxel sigma is sigma_mm divided by
// that axis' spacing; kernels truncate at 4 sigma and renormalize to sum 1;
// boundaries replicate the edge voxel.
Volume3D gaussian_smooth(const Volume3D& vol, double sigma_mm);

// Nearest-rank percentile of the strictly positive voxel values:
// rank = ceil(p/100 * n_nonzero). p in (0,100).
double percentile_nonzero(const ProbabilityMap& map, double p);
double percentile_nonzero(const Volume3D& vol, double p);

// Exact squared Euclidean distance (mm^2) to the nearest nonzero seed voxel,
// one value per voxel; seeds get 0. Felzenszwalb-Huttenlocher per axis with
// anisotropic spacing.
std::vector<double> squared_edt(const std::vector<std::uint8_t>& seeds,
                                const std::array<int, 3>& dims,
                                const std::array<double, 3>& spacing);

} // namespace autocomb

#endif
