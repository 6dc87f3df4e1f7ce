// enhance.hpp -- iterative probabilistic enhancement of the vessel map:
// 27-neighborhood maximization, geometric-mean update, nonzero-percentile
// thresholding, and exclusion of irrelevant regions.

#ifndef AUTOCOMB_ENHANCE_HPP
#define AUTOCOMB_ENHANCE_HPP

#include "autocomb/mask.hpp"
#include "autocomb/volume.hpp"

namespace autocomb {

struct EnhanceParams {
    int iterations = 3;
    // one lambda per iteration, or a single value broadcast to all; each
    // must lie in [0,1]
    std::vector<double> lambda_schedule{0.5};
    double tau_percent = 5.0;
    double min_floor = 0.01; // the preset absolute threshold

    double lambda_at(int k) const {
        return lambda_schedule.size() == 1
                   ? lambda_schedule[0]
                   : lambda_schedule[static_cast<std::size_t>(k)];
    }
    void validate() const;
};

// M(x) = max over the 3x3x3 neighborhood of x (inclusive); boundary voxels
// use the in-bounds part of the neighborhood.
ProbabilityMap local_max_27(const ProbabilityMap& p);

// P_hat = M^(1-lambda) * P^lambda, with 0^0 pinned so the limits are exact:
// lambda=1 returns P, lambda=0 returns M, and P=0 stays 0 for lambda>0.
// lambda=0.5 is evaluated as sqrt(M*P).
ProbabilityMap geometric_update(const ProbabilityMap& p,
                                const ProbabilityMap& m, double lambda);

// tau = max(percentile_nonzero(p_hat, tau_percent), min_floor); voxels below
// tau or inside the exclusion mask become 0. An all-zero input passes
// through (with exclusion applied).
ProbabilityMap threshold_step(const ProbabilityMap& p_hat, double tau_percent,
                              double min_floor, const LabelMask& exclusion);

// K sequential rounds of the three steps above; K=0 returns p0 with the
// exclusion applied.
ProbabilityMap enhance(const ProbabilityMap& p0, const EnhanceParams& params,
                       const LabelMask& exclusion);

} // namespace autocomb

#endif
