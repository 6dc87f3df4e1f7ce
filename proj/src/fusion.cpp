#include "autocomb/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "json.hpp"

#include "autocomb/kernels.hpp"
#include "autocomb/ops.hpp"
#include "autocomb/parallel.hpp"

namespace autocomb {

void FusionParams::validate() const {
    if (!(sigma_wall_mm > 0.0))
        throw precondition_error("sigma_wall_mm must be > 0");
    if (!(roi_distance_mm > 0.0))
        throw precondition_error("roi_distance_mm must be > 0");
    if (!(theta >= 0.0 && theta <= 1.0))
        throw precondition_error("theta must lie in [0,1]");
}

ProbabilityMap proximity_map(const LabelMask& wall, double sigma_wall_mm) {
    if (!(sigma_wall_mm > 0.0))
        throw precondition_error("proximity_map requires sigma_wall_mm > 0");
    if (wall.empty())
        throw insufficient_data_error("proximity_map: wall mask is empty");

    Volume3D conv = gaussian_smooth(wall.to_volume(), sigma_wall_mm);
    const auto& k = kernels::active();
    float peak = k.max_value(conv.data.data(), conv.size());
    if (!(peak > 0.f))
        throw insufficient_data_error("proximity_map: degenerate convolution");
    Volume3D out = conv.like();
    parallel_for(conv.size(), [&](std::size_t b, std::size_t e) {
        k.div_scalar(conv.data.data() + b, out.data.data() + b, e - b, peak);
    });
    return ProbabilityMap::adopt(std::move(out));
}

ProbabilityMap comb_map(const ProbabilityMap& vessel,
                        const ProbabilityMap& proximity) {
    require_same_geometry(vessel.vol, proximity.vol, "comb_map");
    Volume3D out = vessel.vol.like();
    const auto& k = kernels::active();
    parallel_for(vessel.size(), [&](std::size_t b, std::size_t e) {
        k.mul(vessel.vol.data.data() + b, proximity.vol.data.data() + b,
              out.data.data() + b, e - b);
    });
    ProbabilityMap r;
    r.vol = std::move(out); // product of [0,1] values stays in [0,1]
    return r;
}

LabelMask auto_roi(const LabelMask& wall, double roi_distance_mm) {
    if (!(roi_distance_mm > 0.0))
        throw precondition_error("auto_roi requires roi_distance_mm > 0");
    if (wall.empty())
        throw insufficient_data_error("auto_roi: wall mask is empty");

    std::vector<double> d2 = squared_edt(wall.data, wall.dims, wall.spacing);
    double limit = roi_distance_mm * roi_distance_mm;
    LabelMask roi = wall;
    for (std::size_t i = 0; i < roi.data.size(); ++i)
        roi.data[i] = (!wall.data[i] && d2[i] <= limit) ? 1 : 0;
    return roi;
}

namespace {

RegionScore score_one(const ProbabilityMap& comb,
                      const std::vector<std::size_t>& voxels, int id,
                      double theta,
                      const std::optional<ProbabilityMap>& proximity,
                      double prox_p99) {
    RegionScore s;
    s.id = id;
    s.voxels = voxels.size();
    double sum = 0.0, prox_sum = 0.0;
    double mx = 0.0;
    for (std::size_t i : voxels) { // fixed index order
        double v = comb.vol.data[i];
        sum += v;
        if (v > mx) mx = v;
        if (proximity) prox_sum += proximity->vol.data[i];
    }
    s.mean = sum / static_cast<double>(voxels.size());
    s.max = mx;
    s.verdict = s.mean >= theta;
    if (proximity)
        s.enclosure_artifact =
            prox_sum / static_cast<double>(voxels.size()) > prox_p99;
    return s;
}

double proximity_p99(const std::optional<ProbabilityMap>& proximity) {
    if (!proximity) return std::numeric_limits<double>::infinity();
    return percentile_nonzero(*proximity, 99.0);
}

} // namespace

CombReport region_score(const ProbabilityMap& comb, const LabelMask& roi,
                        double theta,
                        const std::optional<ProbabilityMap>& proximity) {
    require_same_geometry(comb.vol, roi, "region_score");
    if (proximity)
        require_same_geometry(comb.vol, proximity->vol, "region_score");
    std::vector<std::size_t> voxels;
    for (std::size_t i = 0; i < roi.data.size(); ++i)
        if (roi.data[i]) voxels.push_back(i);
    if (voxels.empty())
        throw insufficient_data_error("region_score: ROI is empty");

    CombReport rep;
    rep.theta = theta;
    rep.regions.push_back(
        score_one(comb, voxels, 1, theta, proximity, proximity_p99(proximity)));
    rep.global_max =
        kernels::active().max_value(comb.vol.data.data(), comb.size());
    return rep;
}

CombReport score_regions(const ProbabilityMap& comb, const Volume3D& labels,
                         double theta,
                         const std::optional<ProbabilityMap>& proximity) {
    require_same_geometry(comb.vol, labels, "score_regions");
    std::map<int, std::vector<std::size_t>> by_label;
    for (std::size_t i = 0; i < labels.data.size(); ++i) {
        int l = static_cast<int>(std::lround(labels.data[i]));
        if (l > 0) by_label[l].push_back(i);
    }
    if (by_label.empty())
        throw insufficient_data_error("score_regions: no labeled voxels");

    CombReport rep;
    rep.theta = theta;
    double p99 = proximity_p99(proximity);
    for (const auto& [id, voxels] : by_label)
        rep.regions.push_back(
            score_one(comb, voxels, id, theta, proximity, p99));
    rep.global_max =
        kernels::active().max_value(comb.vol.data.data(), comb.size());
    return rep;
}

std::string CombReport::to_json() const {
    nlohmann::json j;
    j["theta"] = theta;
    j["sigma_wall_mm"] = sigma_wall_mm;
    j["global_max"] = global_max;
    j["regions"] = nlohmann::json::array();
    for (const auto& r : regions) {
        nlohmann::json jr;
        jr["id"] = r.id;
        jr["score"] = r.mean;
        jr["max"] = r.max;
        jr["voxels"] = r.voxels;
        jr["verdict"] = r.verdict;
        jr["enclosure_artifact"] = r.enclosure_artifact;
        j["regions"].push_back(jr);
    }
    return j.dump(2);
}

} // namespace autocomb
