#include "autocomb/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace autocomb {

Histogram build_histogram(const Volume3D& vol, double bin_width,
                          std::size_t min_voxels) {
    if (!(bin_width > 0.0))
        throw precondition_error("build_histogram requires bin_width > 0");
    float lo = std::numeric_limits<float>::infinity();
    float hi = -std::numeric_limits<float>::infinity();
    std::size_t kept = 0;
    for (float v : vol.data) {
        if (!std::isfinite(v)) continue; // sentinel
        ++kept;
        if (v < lo) lo = v;
        if (v > hi) hi = v;
    }
    if (kept < min_voxels)
        throw insufficient_data_error(
            "build_histogram: only " + std::to_string(kept) +
            " non-sentinel voxels (need " + std::to_string(min_voxels) + ")");

    std::size_t nbins =
        static_cast<std::size_t>(std::floor((hi - lo) / bin_width)) + 1;
    Histogram h;
    h.bin_edges.resize(nbins + 1);
    for (std::size_t i = 0; i <= nbins; ++i)
        h.bin_edges[i] = lo + static_cast<double>(i) * bin_width;
    h.counts.assign(nbins, 0.0);
    for (float v : vol.data) {
        if (!std::isfinite(v)) continue;
        auto b = static_cast<std::size_t>((v - lo) / bin_width);
        if (b >= nbins) b = nbins - 1;
        h.counts[b] += 1.0;
    }
    h.total = static_cast<double>(kept);
    return h;
}

namespace {

double log_normal_pdf(double x, double mean, double var) {
    double d = x - mean;
    return -0.5 * std::log(2.0 * M_PI * var) - 0.5 * d * d / var;
}

// uniform in [0,1) from the raw engine output, pinned bit layout
double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct WeightedPoints {
    std::vector<double> x; // occupied bin centers
    std::vector<double> w; // counts
    double total = 0.0;
};

WeightedPoints occupied_points(const Histogram& hist) {
    WeightedPoints p;
    for (std::size_t i = 0; i < hist.bins(); ++i) {
        if (hist.counts[i] <= 0.0) continue;
        p.x.push_back(hist.center(i));
        p.w.push_back(hist.counts[i]);
        p.total += hist.counts[i];
    }
    return p;
}

struct EmResult {
    std::vector<double> weights, means, vars;
    double ll = -std::numeric_limits<double>::infinity();
    std::vector<double> trace;
    int iterations = 0;
    bool converged = false;
};

EmResult run_em(const WeightedPoints& pts, int k, std::vector<double> means,
                double init_var, double var_floor, const FitOptions& opt) {
    const std::size_t m = pts.x.size();
    EmResult r;
    r.weights.assign(k, 1.0 / k);
    r.means = std::move(means);
    r.vars.assign(k, std::max(init_var, var_floor));

    std::vector<double> resp(m * k);
    double prev_ll = -std::numeric_limits<double>::infinity();

    for (int iter = 0; iter < opt.max_iter; ++iter) {
        // E step with log-sum-exp; long double accumulation keeps the
        // recorded likelihood trace monotone to well under 1e-8.
        long double ll_acc = 0.0L;
        for (std::size_t j = 0; j < m; ++j) {
            double best = -std::numeric_limits<double>::infinity();
            for (int i = 0; i < k; ++i) {
                double lp = std::log(std::max(r.weights[i], 1e-300)) +
                            log_normal_pdf(pts.x[j], r.means[i], r.vars[i]);
                resp[j * k + i] = lp;
                if (lp > best) best = lp;
            }
            double sum = 0.0;
            for (int i = 0; i < k; ++i)
                sum += std::exp(resp[j * k + i] - best);
            double lse = best + std::log(sum);
            ll_acc += static_cast<long double>(pts.w[j]) * lse;
            for (int i = 0; i < k; ++i)
                resp[j * k + i] = std::exp(resp[j * k + i] - lse);
        }
        double ll = static_cast<double>(ll_acc);
        r.trace.push_back(ll);
        r.ll = ll;
        r.iterations = iter + 1;

        if (iter > 0) {
            double rel = std::fabs(ll - prev_ll) /
                         std::max(1.0, std::fabs(prev_ll));
            if (rel < opt.tol) {
                r.converged = true;
                break;
            }
        }
        prev_ll = ll;
        if (iter == opt.max_iter - 1) break; // params stay consistent with ll

        // M step
        for (int i = 0; i < k; ++i) {
            double s = 0.0, sx = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                double wr = pts.w[j] * resp[j * k + i];
                s += wr;
                sx += wr * pts.x[j];
            }
            if (s < 1e-12) { // dead component: keep location, drop weight
                r.weights[i] = 0.0;
                continue;
            }
            double mu = sx / s;
            double sv = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                double d = pts.x[j] - mu;
                sv += pts.w[j] * resp[j * k + i] * d * d;
            }
            r.weights[i] = s / pts.total;
            r.means[i] = mu;
            r.vars[i] = std::max(sv / s, var_floor);
        }
        double wsum = std::accumulate(r.weights.begin(), r.weights.end(), 0.0);
        if (wsum > 0.0)
            for (double& w : r.weights) w /= wsum;
    }
    return r;
}

} // namespace

GmmModel fit_gmm(const Histogram& hist, int k, const FitOptions& opt) {
    if (k < 1) throw precondition_error("fit_gmm requires k >= 1");
    WeightedPoints pts = occupied_points(hist);
    if (static_cast<std::size_t>(k) > pts.x.size())
        throw precondition_error("fit_gmm: k exceeds occupied bin count (" +
                                 std::to_string(pts.x.size()) + ")");

    double bw = hist.bin_width();
    double var_floor = bw > 0.0 ? bw * bw : 1.0;

    // global weighted mean/variance for initialization
    double gm = 0.0;
    for (std::size_t j = 0; j < pts.x.size(); ++j) gm += pts.w[j] * pts.x[j];
    gm /= pts.total;
    double gv = 0.0;
    for (std::size_t j = 0; j < pts.x.size(); ++j) {
        double d = pts.x[j] - gm;
        gv += pts.w[j] * d * d;
    }
    gv /= pts.total;

    // CDF-quantile means
    std::vector<double> base_means(k);
    {
        double cum = 0.0;
        std::size_t j = 0;
        for (int i = 0; i < k; ++i) {
            double target = (i + 0.5) / k * pts.total;
            while (j + 1 < pts.x.size() && cum + pts.w[j] < target) {
                cum += pts.w[j];
                ++j;
            }
            base_means[i] = pts.x[j];
        }
    }

    EmResult best;
    int restarts = std::max(1, opt.restarts);
    for (int rs = 0; rs < restarts; ++rs) {
        std::vector<double> means = base_means;
        if (rs > 0) {
            std::mt19937_64 rng(opt.seed * 0x9E3779B97F4A7C15ULL +
                                static_cast<std::uint64_t>(rs));
            double span = std::sqrt(gv);
            for (double& mu : means)
                mu += (unit_uniform(rng) - 0.5) * span / k;
            std::sort(means.begin(), means.end());
        }
        EmResult r = run_em(pts, k, std::move(means), gv, var_floor, opt);
        if (r.ll > best.ll) best = std::move(r);
    }

    // sort components by ascending mean
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return best.means[a] < best.means[b]; });

    GmmModel model;
    model.k = k;
    model.weights.resize(k);
    model.means.resize(k);
    model.variances.resize(k);
    for (int i = 0; i < k; ++i) {
        model.weights[i] = best.weights[order[i]];
        model.means[i] = best.means[order[i]];
        model.variances[i] = best.vars[order[i]];
    }
    model.log_likelihood = best.ll;
    model.ll_trace = std::move(best.trace);
    model.iterations = best.iterations;
    model.converged = best.converged;
    return model;
}

double bic(const GmmModel& model, double n_points, BicPenalty penalty) {
    if (!(n_points >= 1.0))
        throw precondition_error("bic requires N >= 1");
    double p = penalty == BicPenalty::literal_k
                   ? static_cast<double>(model.k)
                   : static_cast<double>(3 * model.k - 1);
    return -2.0 * model.log_likelihood + p * std::log(n_points);
}

BicCurve bic_scan(const Histogram& hist, int k_min, int k_max,
                  const FitOptions& opt, BicPenalty penalty) {
    if (!(1 <= k_min && k_min <= k_max))
        throw precondition_error("bic_scan requires 1 <= k_min <= k_max");
    BicCurve c;
    for (int k = k_min; k <= k_max; ++k) {
        GmmModel m = fit_gmm(hist, k, opt);
        c.ks.push_back(k);
        c.bic_values.push_back(bic(m, hist.total, penalty));
        c.models.push_back(std::move(m));
    }
    return c;
}

int knee_of_curve(const BicCurve& curve) {
    const std::size_t n = curve.ks.size();
    if (n < 3)
        throw precondition_error("knee_of_curve requires at least 3 points");

    double kmin = curve.ks.front(), kmax = curve.ks.back();
    auto [bmin_it, bmax_it] =
        std::minmax_element(curve.bic_values.begin(), curve.bic_values.end());
    double bmin = *bmin_it, bmax = *bmax_it;
    double kspan = std::max(kmax - kmin, 1e-12);
    double bspan = std::max(bmax - bmin, 1e-12);

    auto norm = [&](std::size_t i) {
        return std::array<double, 2>{(curve.ks[i] - kmin) / kspan,
                                     (curve.bic_values[i] - bmin) / bspan};
    };
    auto a = norm(0);
    auto b = norm(n - 1);
    double dx = b[0] - a[0], dy = b[1] - a[1];
    double len = std::hypot(dx, dy);

    int best_k = curve.ks[1];
    double best_d = -1.0;
    for (std::size_t i = 1; i + 1 < n; ++i) { // interior points only
        auto p = norm(i);
        double d = std::fabs(dx * (p[1] - a[1]) - dy * (p[0] - a[0])) / len;
        if (d > best_d) {
            best_d = d;
            best_k = curve.ks[i];
        }
    }
    return best_k;
}

WallThreshold wall_threshold(const GmmModel& model) {
    if (model.k < 2)
        throw precondition_error("wall_threshold requires k >= 2");
    // components sorted by mean: b = second highest (contents), a = highest
    // (wall)
    int ia = model.k - 1, ib = model.k - 2;
    double wa = model.weights[ia], wb = model.weights[ib];
    double ma = model.means[ia], mb = model.means[ib];
    double va = model.variances[ia], vb = model.variances[ib];

    auto weighted_midpoint = [&] {
        WallThreshold t;
        t.threshold_hu = (wa * mb + wb * ma) / std::max(wa + wb, 1e-300);
        t.degenerate = true;
        return t;
    };
    if (wa <= 0.0 || wb <= 0.0) return weighted_midpoint();

    // log w_a N(x;ma,va) = log w_b N(x;mb,vb)  =>  A x^2 + B x + C = 0
    double A = 0.5 / vb - 0.5 / va;
    double B = ma / va - mb / vb;
    double C = 0.5 * mb * mb / vb - 0.5 * ma * ma / va + std::log(wa / wb) +
               0.5 * std::log(vb / va);

    double lo = std::min(ma, mb), hi = std::max(ma, mb);
    std::vector<double> roots;
    if (std::fabs(A) < 1e-14 * std::max(1.0, std::fabs(B))) {
        if (std::fabs(B) < 1e-300) return weighted_midpoint();
        roots.push_back(-C / B);
    } else {
        double disc = B * B - 4.0 * A * C;
        if (disc < 0.0) return weighted_midpoint();
        double sq = std::sqrt(disc);
        // numerically stable pair
        double q = -0.5 * (B + std::copysign(sq, B));
        roots.push_back(q / A);
        if (q != 0.0) roots.push_back(C / q);
    }

    double mid = 0.5 * (lo + hi);
    double best = std::numeric_limits<double>::quiet_NaN();
    for (double rt : roots) {
        if (!(rt >= lo && rt <= hi)) continue;
        if (std::isnan(best) || std::fabs(rt - mid) < std::fabs(best - mid))
            best = rt;
    }
    if (std::isnan(best)) return weighted_midpoint();
    WallThreshold t;
    t.threshold_hu = best;
    t.degenerate = false;
    return t;
}

LabelMask wall_mask(const Volume3D& vol, double threshold_hu) {
    if (!std::isfinite(threshold_hu))
        throw precondition_error("wall_mask requires a finite threshold");
    LabelMask m(vol);
    float t = static_cast<float>(threshold_hu);
    for (std::size_t i = 0; i < vol.data.size(); ++i) {
        float v = vol.data[i];
        m.data[i] = (std::isfinite(v) && v >= t) ? 1 : 0;
    }
    return m;
}

} // namespace autocomb
