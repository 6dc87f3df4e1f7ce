// gmm.hpp -- intestinal-wall estimation: k-component 1D Gaussian mixture
// fitted to the bowel HU histogram by weighted EM, BIC model selection with
// knee detection, and the wall threshold at the intersection of the two
// highest-mean components.

#ifndef AUTOCOMB_GMM_HPP
#define AUTOCOMB_GMM_HPP

#include <vector>

#include "autocomb/mask.hpp"
#include "autocomb/volume.hpp"

namespace autocomb {

// k-component 1D mixture; components stored sorted by ascending mean.
struct GmmModel {
    int k = 0;
    std::vector<double> weights;   // sum to 1
    std::vector<double> means;     // HU, ascending
    std::vector<double> variances; // HU^2, floored at bin_width^2
    double log_likelihood = 0.0;
    std::vector<double> ll_trace; // per EM iteration of the winning restart
    int iterations = 0;
    bool converged = false;
};

enum class BicPenalty {
    literal_k,   // penalty term k ln N
    full_params, // penalty term (3k-1) ln N
};

struct FitOptions {
    std::uint64_t seed = 7;
    double tol = 1e-6; // relative log-likelihood change
    int max_iter = 500;
    int restarts = 3;
};

struct BicCurve {
    std::vector<int> ks; // strictly increasing
    std::vector<double> bic_values;
    std::vector<GmmModel> models;
};

struct WallThreshold {
    double threshold_hu = 0.0;
    bool degenerate = false; // no intersection between the two means
};

// Histogram over non-sentinel voxels; uniform bins of bin_width covering
// [min, max] of the retained values. Requires at least min_voxels retained.
Histogram build_histogram(const Volume3D& vol, double bin_width,
                          std::size_t min_voxels = 1000);

// Weighted EM over bin centers with counts as weights. Deterministic per
// seed; variance floor bin_width^2 prevents singular collapse.
GmmModel fit_gmm(const Histogram& hist, int k, const FitOptions& opt = {});

// BIC(k) = -2 ln L + p ln N with p per the penalty convention.
double bic(const GmmModel& model, double n_points,
           BicPenalty penalty = BicPenalty::full_params);

BicCurve bic_scan(const Histogram& hist, int k_min, int k_max,
                  const FitOptions& opt = {},
                  BicPenalty penalty = BicPenalty::full_params);

// k maximizing perpendicular distance to the chord joining the curve's
// endpoints after min-max normalizing both axes; ties break toward smaller k.
int knee_of_curve(const BicCurve& curve);

// HU where the weighted densities of the two highest-mean components are
// equal; falls back to the weighted midpoint when no root lies between the
// means (flagged degenerate).
WallThreshold wall_threshold(const GmmModel& model);

// 1 where a non-sentinel voxel value >= threshold.
LabelMask wall_mask(const Volume3D& vol, double threshold_hu);

} // namespace autocomb

#endif
