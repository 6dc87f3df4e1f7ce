#include "autocomb/mask.hpp"

#include <algorithm>
#include <cmath>

#include "autocomb/ops.hpp"

namespace autocomb {

std::size_t LabelMask::count() const {
    std::size_t c = 0;
    for (std::uint8_t v : data) c += v;
    return c;
}

Volume3D LabelMask::to_volume() const {
    Volume3D v;
    v.dims = dims;
    v.spacing = spacing;
    v.affine = affine;
    v.data.resize(size());
    for (std::size_t i = 0; i < data.size(); ++i)
        v.data[i] = data[i] ? 1.f : 0.f;
    return v;
}

LabelMask mask_from_volume(const Volume3D& vol) {
    LabelMask m(vol);
    for (std::size_t i = 0; i < vol.data.size(); ++i)
        m.data[i] = vol.data[i] != 0.f ? 1 : 0;
    return m;
}

namespace {
Volume3D geometry_proxy(const LabelMask& m) {
    Volume3D v;
    v.dims = m.dims;
    v.spacing = m.spacing;
    v.affine = m.affine;
    return v;
}
} // namespace

bool geometry_equal(const LabelMask& a, const LabelMask& b) {
    Volume3D va = geometry_proxy(a), vb = geometry_proxy(b);
    return geometry_equal(va, vb);
}

void require_same_geometry(const LabelMask& a, const LabelMask& b,
                           const char* what) {
    if (!geometry_equal(a, b))
        throw geometry_error(std::string(what) +
                             ": masks do not share one voxel grid");
}

void require_same_geometry(const Volume3D& v, const LabelMask& m,
                           const char* what) {
    Volume3D proxy = geometry_proxy(m);
    Volume3D vv;
    vv.dims = v.dims;
    vv.spacing = v.spacing;
    vv.affine = v.affine;
    if (!geometry_equal(vv, proxy))
        throw geometry_error(std::string(what) +
                             ": volume and mask do not share one voxel grid");
}

LabelMask dilate(const LabelMask& mask, double radius_vox) {
    if (radius_vox < 0.0)
        throw precondition_error("dilate requires radius_vox >= 0");
    if (radius_vox == 0.0) return mask;

    // squared-distance offset enumeration of the Euclidean ball
    int r = static_cast<int>(std::floor(radius_vox));
    double r2 = radius_vox * radius_vox;
    struct Off {
        int x, y, z;
    };
    std::vector<Off> ball;
    for (int dz = -r; dz <= r; ++dz)
        for (int dy = -r; dy <= r; ++dy)
            for (int dx = -r; dx <= r; ++dx)
                if (dx * dx + dy * dy + dz * dz <= r2)
                    ball.push_back({dx, dy, dz});

    LabelMask out = mask;
    const int nx = mask.dims[0], ny = mask.dims[1], nz = mask.dims[2];
    for (int z = 0; z < nz; ++z)
        for (int y = 0; y < ny; ++y)
            for (int x = 0; x < nx; ++x) {
                if (!mask.at(x, y, z)) continue;
                for (const Off& o : ball) {
                    int px = x + o.x, py = y + o.y, pz = z + o.z;
                    if (px < 0 || px >= nx || py < 0 || py >= ny || pz < 0 ||
                        pz >= nz)
                        continue;
                    out.at(px, py, pz) = 1;
                }
            }
    return out;
}

LabelMask merge(const std::vector<LabelMask>& masks) {
    if (masks.empty())
        throw precondition_error("merge requires a nonempty mask list");
    LabelMask out = masks.front();
    for (std::size_t i = 1; i < masks.size(); ++i) {
        require_same_geometry(out, masks[i], "merge");
        for (std::size_t j = 0; j < out.data.size(); ++j)
            out.data[j] |= masks[i].data[j];
    }
    return out;
}

LabelMask subtract(const LabelMask& a, const LabelMask& b) {
    require_same_geometry(a, b, "subtract");
    LabelMask out = a;
    for (std::size_t i = 0; i < out.data.size(); ++i)
        if (b.data[i]) out.data[i] = 0;
    return out;
}

Volume3D apply_mask(const Volume3D& vol, const LabelMask& mask) {
    require_same_geometry(vol, mask, "apply_mask");
    Volume3D out = vol;
    for (std::size_t i = 0; i < out.data.size(); ++i)
        if (!mask.data[i]) out.data[i] = kSentinel;
    return out;
}

Volume3D remove_organs(const Volume3D& vol,
                       const std::vector<LabelMask>& organ_masks,
                       double dilation_vox, double blur_sigma_mm,
                       float fill_value) {
    if (blur_sigma_mm < 0.0)
        throw precondition_error("remove_organs requires blur_sigma_mm >= 0");
    if (organ_masks.empty()) return vol;

    std::vector<LabelMask> dilated;
    dilated.reserve(organ_masks.size());
    for (const auto& m : organ_masks) {
        require_same_geometry(vol, m, "remove_organs");
        dilated.push_back(dilate(m, dilation_vox));
    }
    LabelMask removal = merge(dilated);

    Volume3D w = vol.like(1.f);
    for (std::size_t i = 0; i < w.data.size(); ++i)
        if (removal.data[i]) w.data[i] = 0.f;
    if (blur_sigma_mm > 0.0) {
        w = gaussian_smooth(w, blur_sigma_mm);
        for (float& v : w.data) v = std::clamp(v, 0.f, 1.f);
    }

    Volume3D out = vol.like();
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        float wi = w.data[i];
        out.data[i] = wi * vol.data[i] + (1.f - wi) * fill_value;
    }
    return out;
}

} // namespace autocomb
