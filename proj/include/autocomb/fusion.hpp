// fusion.hpp -- wall-proximity weighting, probability fusion, and region
// scoring for the final comb-sign verdict.

#ifndef AUTOCOMB_FUSION_HPP
#define AUTOCOMB_FUSION_HPP

#include <optional>
#include <string>

#include "autocomb/mask.hpp"
#include "autocomb/volume.hpp"

namespace autocomb {

struct FusionParams {
    double sigma_wall_mm = 5.0;
    double roi_distance_mm = 15.0;
    double theta = 0.05;
    void validate() const;
};

struct RegionScore {
    int id = 0;
    double mean = 0.0;
    double max = 0.0;
    std::size_t voxels = 0;
    bool verdict = false;
    // proximity mean over the region exceeds the 99th percentile of nonzero
    // proximity -- the region may be enclosed by bowel on all sides
    bool enclosure_artifact = false;
};

struct CombReport {
    std::vector<RegionScore> regions;
    double global_max = 0.0;
    double theta = 0.0;
    double sigma_wall_mm = 0.0;
    std::string to_json() const;
};

// Gaussian-smoothed wall mask normalized by its global maximum so the output
// peaks at exactly 1. Thick wall slabs accumulate more kernel mass than thin
// sheets, so they weigh higher before normalization.
ProbabilityMap proximity_map(const LabelMask& wall, double sigma_wall_mm);

// Voxelwise product of the two probability maps (never exceeds either).
ProbabilityMap comb_map(const ProbabilityMap& vessel,
                        const ProbabilityMap& proximity);

// Voxels within roi_distance_mm (Euclidean, physical units) of any wall
// voxel, excluding the wall itself.
LabelMask auto_roi(const LabelMask& wall, double roi_distance_mm);

// Mean comb probability over the ROI; verdict = mean >= theta.
CombReport region_score(const ProbabilityMap& comb, const LabelMask& roi,
                        double theta,
                        const std::optional<ProbabilityMap>& proximity =
                            std::nullopt);

// Multi-region variant: labels holds nonnegative integers, one region per
// distinct positive label, scored in ascending label order.
CombReport score_regions(const ProbabilityMap& comb, const Volume3D& labels,
                         double theta,
                         const std::optional<ProbabilityMap>& proximity =
                             std::nullopt);

} // namespace autocomb

#endif
