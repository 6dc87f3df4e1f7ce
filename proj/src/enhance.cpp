#include "autocomb/enhance.hpp"

#include <algorithm>
#include <cmath>

#include "autocomb/kernels.hpp"
#include "autocomb/ops.hpp"
#include "autocomb/parallel.hpp"

namespace autocomb {

void EnhanceParams::validate() const {
    if (iterations < 0)
        throw precondition_error("enhance iterations must be >= 0");
    if (lambda_schedule.empty())
        throw precondition_error("lambda schedule must be nonempty");
    if (lambda_schedule.size() != 1 &&
        lambda_schedule.size() != static_cast<std::size_t>(iterations))
        throw precondition_error(
            "lambda schedule must have one entry or one per iteration");
    for (double l : lambda_schedule)
        if (!(l >= 0.0 && l <= 1.0))
            throw precondition_error("lambda must lie in [0,1]");
    if (!(tau_percent > 0.0 && tau_percent < 100.0))
        throw precondition_error("tau_percent must lie in (0,100)");
    if (!(min_floor >= 0.0))
        throw precondition_error("min_floor must be >= 0");
}

ProbabilityMap local_max_27(const ProbabilityMap& p) {
    const Volume3D& src = p.vol;
    const int nx = src.dims[0], ny = src.dims[1], nz = src.dims[2];
    const auto& k = kernels::active();

    // separable box max: x, then y, then z (clipped at borders)
    Volume3D a = src.like();
    parallel_for(static_cast<std::size_t>(ny) * nz,
                 [&](std::size_t b, std::size_t e) {
        std::vector<float> padded(nx + 2);
        for (std::size_t row = b; row < e; ++row) {
            const float* s = src.data.data() + row * nx;
            padded[0] = s[0];
            std::copy(s, s + nx, padded.begin() + 1);
            padded[nx + 1] = s[nx - 1];
            k.max3(padded.data(), padded.data() + 1, padded.data() + 2,
                   a.data.data() + row * nx, nx);
        }
    });

    Volume3D out = src.like();
    auto axis_max = [&](const Volume3D& in, Volume3D& dst, int axis) {
        const int extent = axis == 1 ? ny : nz;
        parallel_for(static_cast<std::size_t>(ny) * nz,
                     [&](std::size_t b, std::size_t e) {
            for (std::size_t row = b; row < e; ++row) {
                int y = static_cast<int>(row % ny);
                int z = static_cast<int>(row / ny);
                int pos = axis == 1 ? y : z;
                int lo = std::max(pos - 1, 0), hi = std::min(pos + 1, extent - 1);
                auto line = [&](int q) {
                    return in.data.data() +
                           (axis == 1 ? in.index(0, q, z) : in.index(0, y, q));
                };
                k.max3(line(lo), line(pos), line(hi),
                       dst.data.data() + row * nx, nx);
            }
        });
    };
    Volume3D c = src.like();
    axis_max(a, c, 1);
    axis_max(c, out, 2);

    ProbabilityMap r;
    r.vol = std::move(out);
    return r;
}

ProbabilityMap geometric_update(const ProbabilityMap& p,
                                const ProbabilityMap& m, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw precondition_error("geometric_update requires lambda in [0,1]");
    require_same_geometry(p.vol, m.vol, "geometric_update");

    Volume3D out = p.vol.like();
    const std::size_t n = p.size();
    const auto& k = kernels::active();

    if (lambda == 1.0) {
        out.data = p.vol.data;
    } else if (lambda == 0.0) {
        out.data = m.vol.data;
    } else if (lambda == 0.5) {
        parallel_for(n, [&](std::size_t b, std::size_t e) {
            k.geo_mean_sqrt(m.vol.data.data() + b, p.vol.data.data() + b,
                            out.data.data() + b, e - b);
        });
    } else {
        const float lm = static_cast<float>(1.0 - lambda);
        const float lp = static_cast<float>(lambda);
        parallel_for(n, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) {
                float pv = p.vol.data[i];
                out.data[i] = pv == 0.f ? 0.f
                                        : std::pow(m.vol.data[i], lm) *
                                              std::pow(pv, lp);
            }
        });
    }
    ProbabilityMap r;
    r.vol = std::move(out);
    return r;
}

ProbabilityMap threshold_step(const ProbabilityMap& p_hat, double tau_percent,
                              double min_floor, const LabelMask& exclusion) {
    require_same_geometry(p_hat.vol, exclusion, "threshold_step");
    const std::size_t n = p_hat.size();
    const auto& k = kernels::active();

    bool any_nonzero = false;
    for (float v : p_hat.vol.data)
        if (v != 0.f) {
            any_nonzero = true;
            break;
        }

    float tau = 0.f;
    if (any_nonzero) {
        double pct = percentile_nonzero(p_hat, tau_percent);
        tau = static_cast<float>(std::max(pct, min_floor));
    }

    Volume3D out = p_hat.vol.like();
    parallel_for(n, [&](std::size_t b, std::size_t e) {
        k.threshold_zero(p_hat.vol.data.data() + b, exclusion.data.data() + b,
                         out.data.data() + b, e - b, tau);
    });
    ProbabilityMap r;
    r.vol = std::move(out);
    return r;
}

ProbabilityMap enhance(const ProbabilityMap& p0, const EnhanceParams& params,
                       const LabelMask& exclusion) {
    params.validate();
    require_same_geometry(p0.vol, exclusion, "enhance");

    if (params.iterations == 0) {
        Volume3D out = p0.vol.like();
        const auto& k = kernels::active();
        parallel_for(p0.size(), [&](std::size_t b, std::size_t e) {
            k.threshold_zero(p0.vol.data.data() + b,
                             exclusion.data.data() + b, out.data.data() + b,
                             e - b, 0.f);
        });
        ProbabilityMap r;
        r.vol = std::move(out);
        return r;
    }

    ProbabilityMap p;
    p.vol = p0.vol;
    for (int it = 0; it < params.iterations; ++it) {
        ProbabilityMap m = local_max_27(p);
        ProbabilityMap p_hat = geometric_update(p, m, params.lambda_at(it));
        p = threshold_step(p_hat, params.tau_percent, params.min_floor,
                           exclusion);
    }
    return p;
}

} // namespace autocomb
