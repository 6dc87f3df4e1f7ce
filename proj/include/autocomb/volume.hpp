// volume.hpp -- dense 3D scalar grids and their geometry.
//
// Voxel order is x-fastest (NIfTI native): index = x + nx*(y + ny*z).
// All modules index volumes identically.

#ifndef AUTOCOMB_VOLUME_HPP
#define AUTOCOMB_VOLUME_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "autocomb/errors.hpp"

namespace autocomb {

using Affine = std::array<std::array<double, 4>, 4>; // voxel -> world (mm)

inline Affine identity_affine() {
    Affine a{};
    for (int i = 0; i < 4; ++i) a[i][i] = 1.0;
    return a;
}

inline Affine diagonal_affine(const std::array<double, 3>& spacing) {
    Affine a{};
    a[0][0] = spacing[0];
    a[1][1] = spacing[1];
    a[2][2] = spacing[2];
    a[3][3] = 1.0;
    return a;
}

// Scalar voxel grid (HU or probability) with physical spacing and a
// voxel->world affine.
struct Volume3D {
    std::array<int, 3> dims{0, 0, 0};
    std::array<double, 3> spacing{1.0, 1.0, 1.0};
    Affine affine = identity_affine();
    std::vector<float> data;

    Volume3D() = default;
    Volume3D(std::array<int, 3> d, std::array<double, 3> s, float fill = 0.f)
        : dims(d), spacing(s), affine(diagonal_affine(s)),
          data(static_cast<std::size_t>(d[0]) * d[1] * d[2], fill) {}

    std::size_t size() const {
        return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
    }
    std::size_t index(int x, int y, int z) const {
        return static_cast<std::size_t>(x) +
               static_cast<std::size_t>(dims[0]) *
                   (static_cast<std::size_t>(y) +
                    static_cast<std::size_t>(dims[1]) * z);
    }
    float& at(int x, int y, int z) { return data[index(x, y, z)]; }
    float at(int x, int y, int z) const { return data[index(x, y, z)]; }

    // Fresh volume sharing this geometry.
    Volume3D like(float fill = 0.f) const {
        Volume3D v;
        v.dims = dims;
        v.spacing = spacing;
        v.affine = affine;
        v.data.assign(size(), fill);
        return v;
    }

    void validate() const;
};

// Same-grid check; affine tolerated to float32 rounding since geometry may
// round-trip through NIfTI headers.
bool geometry_equal(const Volume3D& a, const Volume3D& b);
void require_same_geometry(const Volume3D& a, const Volume3D& b,
                           const char* what);

// Volume3D constrained to [0,1]. Geometry must match the source volume.
struct ProbabilityMap {
    Volume3D vol;

    ProbabilityMap() = default;

    // Validates the [0,1] range; values within `eps` outside are clamped,
    // anything further is a precondition violation.
    static ProbabilityMap adopt(Volume3D&& v, float eps = 1e-5f);

    std::size_t size() const { return vol.size(); }
    const std::array<int, 3>& dims() const { return vol.dims; }
};

// Uniform-width 1D histogram over HU values.
struct Histogram {
    std::vector<double> bin_edges; // size = counts.size() + 1, monotone
    std::vector<double> counts;    // nonnegative
    double total = 0.0;            // sum of counts

    std::size_t bins() const { return counts.size(); }
    double bin_width() const {
        return bins() ? bin_edges[1] - bin_edges[0] : 0.0;
    }
    double center(std::size_t i) const {
        return 0.5 * (bin_edges[i] + bin_edges[i + 1]);
    }
};

} // namespace autocomb

#endif
