// vesselness.hpp -- multiscale Hessian analysis and the Jerman tubular
// response producing the initial vessel probability map.

#ifndef AUTOCOMB_VESSELNESS_HPP
#define AUTOCOMB_VESSELNESS_HPP

#include <optional>

#include "autocomb/mask.hpp"
#include "autocomb/volume.hpp"

namespace autocomb {

// Six second-derivative volumes (HU/mm^2) sharing the source geometry,
// gamma-normalized by scale^2.
struct HessianField {
    Volume3D xx, yy, zz, xy, xz, yz;
    double scale_mm = 0.0;
};

// Eigenvalues ordered by ascending magnitude |l1| <= |l2| <= |l3|.
struct EigenTriple {
    double l1 = 0.0, l2 = 0.0, l3 = 0.0;
};

// Smooth at scale_mm, then second central differences in physical units,
// multiplied by scale_mm^2 so responses are comparable across scales.
HessianField hessian_at_scale(const Volume3D& vol, double scale_mm);

// Analytic (trigonometric) eigenvalues of the symmetric 3x3 matrix
// [[xx,xy,xz],[xy,yy,yz],[xz,yz,zz]], with a symmetric-QL fallback near
// degenerate spectra. Input order: xx, yy, zz, xy, xz, yz.
EigenTriple eig3_symmetric(const std::array<double, 6>& h);

// Jerman response for bright-convention eigenvalues (l2, l3 already
// sign-flipped). lambda_rho is the regularized eigenvalue.
double jerman_response(const EigenTriple& e, double lambda_rho);

// Full multiscale filter: per scale, eigen-decompose the Hessian, flip to the
// bright convention, regularize lambda3 against tau_cut times its volume
// maximum (over analysis_mask when given), apply the Jerman functional, and
// max-combine across scales. Input voxels must be >= 0 (clip_rescale first).
ProbabilityMap vesselness_multiscale(
    const Volume3D& vol, const std::vector<double>& scales_mm, double tau_cut,
    const std::optional<LabelMask>& analysis_mask = std::nullopt);

} // namespace autocomb

#endif
