#include "autocomb/vesselness.hpp"

#include <algorithm>
#include <cmath>

#include "autocomb/kernels.hpp"
#include "autocomb/ops.hpp"
#include "autocomb/parallel.hpp"

namespace autocomb {

namespace {

// Pad one x-row with replicated edge voxels (radius 1).
void pad_row(const float* s, int nx, float* padded) {
    padded[0] = s[0];
    std::copy(s, s + nx, padded + 1);
    padded[nx + 1] = s[nx - 1];
}

} // namespace

HessianField hessian_at_scale(const Volume3D& vol, double scale_mm) {
    if (!(scale_mm > 0.0))
        throw precondition_error("hessian_at_scale requires scale_mm > 0");
    Volume3D g = gaussian_smooth(vol, scale_mm);

    const int nx = vol.dims[0], ny = vol.dims[1], nz = vol.dims[2];
    const double sx = vol.spacing[0], sy = vol.spacing[1],
                 sz = vol.spacing[2];
    const float gamma = static_cast<float>(scale_mm * scale_mm);

    HessianField h;
    h.scale_mm = scale_mm;
    h.xx = vol.like();
    h.yy = vol.like();
    h.zz = vol.like();
    h.xy = vol.like();
    h.xz = vol.like();
    h.yz = vol.like();

    const float cxx = gamma / static_cast<float>(sx * sx);
    const float cyy = gamma / static_cast<float>(sy * sy);
    const float czz = gamma / static_cast<float>(sz * sz);
    const float cxy = gamma / static_cast<float>(4.0 * sx * sy);
    const float cxz = gamma / static_cast<float>(4.0 * sx * sz);
    const float cyz = gamma / static_cast<float>(4.0 * sy * sz);

    const auto& k = kernels::active();
    parallel_for(static_cast<std::size_t>(ny) * nz,
                 [&](std::size_t b, std::size_t e) {
        std::vector<float> pc(nx + 2), pa(nx + 2), pb(nx + 2);
        for (std::size_t row = b; row < e; ++row) {
            int y = static_cast<int>(row % ny);
            int z = static_cast<int>(row / ny);
            int ym = std::max(y - 1, 0), yp = std::min(y + 1, ny - 1);
            int zm = std::max(z - 1, 0), zp = std::min(z + 1, nz - 1);

            const float* rc = g.data.data() + g.index(0, y, z);
            const float* rym = g.data.data() + g.index(0, ym, z);
            const float* ryp = g.data.data() + g.index(0, yp, z);
            const float* rzm = g.data.data() + g.index(0, y, zm);
            const float* rzp = g.data.data() + g.index(0, y, zp);
            std::size_t o = row * static_cast<std::size_t>(nx);

            // xx: shifted row against itself
            pad_row(rc, nx, pc.data());
            k.stencil3(pc.data(), pc.data() + 1, pc.data() + 2,
                       h.xx.data.data() + o, nx, cxx);
            // yy, zz: neighbor rows
            k.stencil3(rym, rc, ryp, h.yy.data.data() + o, nx, cyy);
            k.stencil3(rzm, rc, rzp, h.zz.data.data() + o, nx, czz);
            // xy: x-shifts of the y-neighbor rows
            pad_row(ryp, nx, pa.data());
            pad_row(rym, nx, pb.data());
            k.stencil4(pa.data() + 2, pa.data(), pb.data() + 2, pb.data(),
                       h.xy.data.data() + o, nx, cxy);
            // xz: x-shifts of the z-neighbor rows
            pad_row(rzp, nx, pa.data());
            pad_row(rzm, nx, pb.data());
            k.stencil4(pa.data() + 2, pa.data(), pb.data() + 2, pb.data(),
                       h.xz.data.data() + o, nx, cxz);
            // yz: diagonal neighbor rows, no x-shift
            const float* rpp = g.data.data() + g.index(0, yp, zp);
            const float* rpm = g.data.data() + g.index(0, ym, zp);
            const float* rmp = g.data.data() + g.index(0, yp, zm);
            const float* rmm = g.data.data() + g.index(0, ym, zm);
            k.stencil4(rpp, rpm, rmp, rmm, h.yz.data.data() + o, nx, cyz);
        }
    });
    return h;
}

namespace {

void sort_by_magnitude(double e[3]) {
    if (std::fabs(e[0]) > std::fabs(e[1])) std::swap(e[0], e[1]);
    if (std::fabs(e[1]) > std::fabs(e[2])) std::swap(e[1], e[2]);
    if (std::fabs(e[0]) > std::fabs(e[1])) std::swap(e[0], e[1]);
}

// Symmetric QL with implicit shifts after a Givens tridiagonalization; used
// when the trigonometric route loses precision (|r| ~ 1, i.e. repeated
// eigenvalues -- the generic case for ideal tube cross-sections).
void eig3_ql(const std::array<double, 6>& h, double out[3]) {
    const double a11 = h[0], a22 = h[1], a33 = h[2];
    const double a12 = h[3], a13 = h[4], a23 = h[5];

    // one rotation in the (y,z) plane zeroes the (1,3) entry
    double d[3], e[3];
    double w = std::hypot(a12, a13);
    if (w > 0.0) {
        double c = a12 / w, s = a13 / w;
        d[0] = a11;
        d[1] = c * c * a22 + 2.0 * c * s * a23 + s * s * a33;
        d[2] = s * s * a22 - 2.0 * c * s * a23 + c * c * a33;
        e[0] = w;
        e[1] = c * s * (a33 - a22) + (c * c - s * s) * a23;
    } else {
        d[0] = a11;
        d[1] = a22;
        d[2] = a33;
        e[0] = 0.0;
        e[1] = a23;
    }
    e[2] = 0.0;

    for (int l = 0; l < 2; ++l) {
        for (int iter = 0; iter < 64; ++iter) {
            int m;
            for (m = l; m < 2; ++m) {
                double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= 2.3e-16 * dd) break;
            }
            if (m == l) break;
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            bool deflated = false;
            for (int i = m - 1; i >= l; --i) {
                double f = s * e[i], b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if (deflated) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    out[0] = d[0];
    out[1] = d[1];
    out[2] = d[2];
}

} // namespace

EigenTriple eig3_symmetric(const std::array<double, 6>& h) {
    for (double v : h)
        if (!std::isfinite(v))
            throw precondition_error("eig3_symmetric: non-finite entry");

    const double xx = h[0], yy = h[1], zz = h[2];
    const double xy = h[3], xz = h[4], yz = h[5];

    double e[3];
    double p1 = xy * xy + xz * xz + yz * yz;
    if (p1 == 0.0) {
        e[0] = xx;
        e[1] = yy;
        e[2] = zz;
    } else {
        double q = (xx + yy + zz) / 3.0;
        double p2 = (xx - q) * (xx - q) + (yy - q) * (yy - q) +
                    (zz - q) * (zz - q) + 2.0 * p1;
        double p = std::sqrt(p2 / 6.0);
        // B = (A - qI)/p
        double b11 = (xx - q) / p, b22 = (yy - q) / p, b33 = (zz - q) / p;
        double b12 = xy / p, b13 = xz / p, b23 = yz / p;
        double detB = b11 * (b22 * b33 - b23 * b23) -
                      b12 * (b12 * b33 - b23 * b13) +
                      b13 * (b12 * b23 - b22 * b13);
        double r = detB / 2.0;
        if (r < -1.0) r = -1.0;
        if (r > 1.0) r = 1.0;
        if (1.0 - std::fabs(r) < 1e-12) {
            eig3_ql(h, e);
        } else {
            double phi = std::acos(r) / 3.0;
            double e1 = q + 2.0 * p * std::cos(phi);
            double e3 = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
            e[0] = e1;
            e[1] = 3.0 * q - e1 - e3;
            e[2] = e3;
        }
    }
    sort_by_magnitude(e);
    return EigenTriple{e[0], e[1], e[2]};
}

double jerman_response(const EigenTriple& e, double lambda_rho) {
    double l2 = e.l2;
    if (!(l2 > 0.0) || !(lambda_rho > 0.0)) return 0.0;
    if (l2 >= 0.5 * lambda_rho) return 1.0;
    double t = 3.0 / (l2 + lambda_rho);
    double r = (l2 * l2) * (lambda_rho - l2) * ((t * t) * t);
    return std::clamp(r, 0.0, 1.0);
}

ProbabilityMap vesselness_multiscale(
    const Volume3D& vol, const std::vector<double>& scales_mm, double tau_cut,
    const std::optional<LabelMask>& analysis_mask) {
    if (scales_mm.empty())
        throw precondition_error("vesselness requires a nonempty scale list");
    if (!(tau_cut > 0.0 && tau_cut <= 1.0))
        throw precondition_error("vesselness requires tau_cut in (0,1]");
    for (float v : vol.data)
        if (!(v >= 0.f))
            throw precondition_error(
                "vesselness input has negative or non-finite voxels; run "
                "clip_rescale first");
    if (analysis_mask)
        require_same_geometry(vol, *analysis_mask, "vesselness");

    const std::size_t n = vol.size();
    Volume3D result = vol.like();
    Volume3D l2v = vol.like();
    Volume3D l3v = vol.like();
    Volume3D resp = vol.like();
    const auto& k = kernels::active();

    for (double scale : scales_mm) {
        HessianField hf = hessian_at_scale(vol, scale);

        parallel_for(n, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) {
                std::array<double, 6> hm = {
                    hf.xx.data[i], hf.yy.data[i], hf.zz.data[i],
                    hf.xy.data[i], hf.xz.data[i], hf.yz.data[i]};
                EigenTriple t = eig3_symmetric(hm);
                // bright tubes have l2, l3 < 0
                l2v.data[i] = static_cast<float>(-t.l2);
                l3v.data[i] = static_cast<float>(-t.l3);
            }
        });

        float l3max =
            analysis_mask
                ? k.max_value_masked(l3v.data.data(),
                                     analysis_mask->data.data(), n)
                : k.max_value(l3v.data.data(), n);
        float cap = l3max > 0.f
                        ? static_cast<float>(tau_cut) * l3max
                        : 0.f;

        parallel_for(n, [&](std::size_t b, std::size_t e) {
            k.jerman(l2v.data.data() + b, l3v.data.data() + b,
                     resp.data.data() + b, e - b, cap);
        });
        parallel_for(n, [&](std::size_t b, std::size_t e) {
            k.max2(result.data.data() + b, resp.data.data() + b,
                   result.data.data() + b, e - b);
        });
    }
    return ProbabilityMap::adopt(std::move(result));
}

} // namespace autocomb
