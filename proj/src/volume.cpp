#include "autocomb/volume.hpp"

#include <sstream>

namespace autocomb {

void Volume3D::validate() const {
    if (dims[0] <= 0 || dims[1] <= 0 || dims[2] <= 0)
        throw precondition_error("volume dims must be positive");
    if (data.size() != size())
        throw precondition_error("volume data length does not match dims");
    for (double s : spacing)
        if (!(s > 0.0) || !std::isfinite(s))
            throw precondition_error("voxel spacing must be positive and finite");
    // upper-left 3x3 block must be invertible
    const auto& m = affine;
    double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                 m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                 m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    if (det == 0.0 || !std::isfinite(det))
        throw precondition_error("affine rotation block is singular");
}

namespace {
bool close(double a, double b, double tol) {
    return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}
} // namespace

bool geometry_equal(const Volume3D& a, const Volume3D& b) {
    if (a.dims != b.dims) return false;
    for (int i = 0; i < 3; ++i)
        if (!close(a.spacing[i], b.spacing[i], 1e-4)) return false;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            if (!close(a.affine[r][c], b.affine[r][c], 1e-3)) return false;
    return true;
}

void require_same_geometry(const Volume3D& a, const Volume3D& b,
                           const char* what) {
    if (!geometry_equal(a, b)) {
        std::ostringstream os;
        os << what << ": inputs do not share one voxel grid ("
           << a.dims[0] << "x" << a.dims[1] << "x" << a.dims[2] << " vs "
           << b.dims[0] << "x" << b.dims[1] << "x" << b.dims[2] << ")";
        throw geometry_error(os.str());
    }
}

ProbabilityMap ProbabilityMap::adopt(Volume3D&& v, float eps) {
    for (float& x : v.data) {
        if (!(x >= -eps && x <= 1.f + eps)) // catches NaN too
            throw precondition_error("probability map value outside [0,1]");
        if (x < 0.f) x = 0.f;
        if (x > 1.f) x = 1.f;
    }
    ProbabilityMap p;
    p.vol = std::move(v);
    return p;
}

} // namespace autocomb
