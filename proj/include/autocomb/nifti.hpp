// nifti.hpp -- NIfTI-1 single-file volume I/O.
//
// Read: accepts int16, uint8, int32, float32, float64 payloads, applies
// scl_slope/scl_inter when scl_slope != 0, takes the affine from sform when
// sform_code > 0, else qform, else diagonal(pixdim). Gzip containers are
// detected transparently.
//
// Write: float32 payload, scl_slope=1, scl_inter=0, sform from the volume's
// affine, magic "n+1", vox_offset 352; gzip-compressed iff the path ends
// in ".gz". Mask and int16 writers exist for phantom/mask artifacts.

#ifndef AUTOCOMB_NIFTI_HPP
#define AUTOCOMB_NIFTI_HPP

#include <string>

#include "autocomb/volume.hpp"

namespace autocomb {

Volume3D read_nifti(const std::string& path);

void write_nifti(const Volume3D& vol, const std::string& path);
void write_nifti(const ProbabilityMap& map, const std::string& path);

// uint8 payload; values taken verbatim (0/1 for masks).
void write_nifti_u8(const Volume3D& vol, const std::string& path);

// int16 payload; values rounded to nearest and clamped to int16 range.
void write_nifti_i16(const Volume3D& vol, const std::string& path);

} // namespace autocomb

#endif
