// mask.hpp -- binary voxel masks and morphology: Euclidean dilation, merge,
// masked application with a NaN sentinel, and soft organ removal.

#ifndef AUTOCOMB_MASK_HPP
#define AUTOCOMB_MASK_HPP

#include <vector>

#include "autocomb/volume.hpp"

namespace autocomb {

// The sentinel assigned to masked-out voxels so they drop out of statistics.
inline constexpr float kSentinel = std::numeric_limits<float>::quiet_NaN();

// Binary grid aligned to a reference Volume3D; values are exactly 0 or 1.
struct LabelMask {
    std::array<int, 3> dims{0, 0, 0};
    std::array<double, 3> spacing{1.0, 1.0, 1.0};
    Affine affine = identity_affine();
    std::vector<std::uint8_t> data;

    LabelMask() = default;
    explicit LabelMask(const Volume3D& ref, std::uint8_t fill = 0)
        : dims(ref.dims), spacing(ref.spacing), affine(ref.affine),
          data(ref.size(), fill) {}

    std::size_t size() const {
        return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
    }
    std::size_t index(int x, int y, int z) const {
        return static_cast<std::size_t>(x) +
               static_cast<std::size_t>(dims[0]) *
                   (static_cast<std::size_t>(y) +
                    static_cast<std::size_t>(dims[1]) * z);
    }
    std::uint8_t& at(int x, int y, int z) { return data[index(x, y, z)]; }
    std::uint8_t at(int x, int y, int z) const { return data[index(x, y, z)]; }

    std::size_t count() const;
    bool empty() const { return count() == 0; }

    // Geometry carrier for ops that need a Volume3D view (0/1 floats).
    Volume3D to_volume() const;
};

// Mask from a volume: nonzero -> 1. Used when masks arrive as NIfTI files.
LabelMask mask_from_volume(const Volume3D& vol);

bool geometry_equal(const LabelMask& a, const LabelMask& b);
void require_same_geometry(const LabelMask& a, const LabelMask& b,
                           const char* what);
void require_same_geometry(const Volume3D& v, const LabelMask& m,
                           const char* what);

// Euclidean dilation by a voxel-space ball: output voxel is set iff some
// input voxel at offset ||o|| <= radius_vox is set. Radius 0 is the identity.
LabelMask dilate(const LabelMask& mask, double radius_vox);

// Voxelwise OR of a nonempty list of aligned masks.
LabelMask merge(const std::vector<LabelMask>& masks);

// a AND NOT b.
LabelMask subtract(const LabelMask& a, const LabelMask& b);

// Keep voxels where mask = 1, set the NaN sentinel elsewhere.
Volume3D apply_mask(const Volume3D& vol, const LabelMask& mask);

// Soft organ removal: dilate each organ mask by dilation_vox, merge, build a
// blend weight w (0 inside the removal region, 1 outside) smoothed by
// blur_sigma_mm and re-clamped to [0,1], then output = w*v + (1-w)*fill.
// blur_sigma_mm = 0 is hard replacement by fill_value.
Volume3D remove_organs(const Volume3D& vol,
                       const std::vector<LabelMask>& organ_masks,
                       double dilation_vox, double blur_sigma_mm,
                       float fill_value);

} // namespace autocomb

#endif
