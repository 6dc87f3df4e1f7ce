#include "autocomb/nifti.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>

namespace autocomb {

namespace {

// NIfTI-1 header, 348 bytes, little-endian on disk.
#pragma pack(push, 1)
struct Nifti1Header {
    std::int32_t sizeof_hdr;   // must be 348
    char data_type[10];
    char db_name[18];
    std::int32_t extents;
    std::int16_t session_error;
    char regular;
    char dim_info;
    std::int16_t dim[8];
    float intent_p1, intent_p2, intent_p3;
    std::int16_t intent_code;
    std::int16_t datatype;
    std::int16_t bitpix;
    std::int16_t slice_start;
    float pixdim[8];
    float vox_offset;
    float scl_slope;
    float scl_inter;
    std::int16_t slice_end;
    char slice_code;
    char xyzt_units;
    float cal_max, cal_min;
    float slice_duration;
    float toffset;
    std::int32_t glmax, glmin;
    char descrip[80];
    char aux_file[24];
    std::int16_t qform_code;
    std::int16_t sform_code;
    float quatern_b, quatern_c, quatern_d;
    float qoffset_x, qoffset_y, qoffset_z;
    float srow_x[4];
    float srow_y[4];
    float srow_z[4];
    char intent_name[16];
    char magic[4];
};
#pragma pack(pop)
static_assert(sizeof(Nifti1Header) == 348, "nifti-1 header must pack to 348 bytes");

constexpr std::int16_t DT_UINT8 = 2;
constexpr std::int16_t DT_INT16 = 4;
constexpr std::int16_t DT_INT32 = 8;
constexpr std::int16_t DT_FLOAT32 = 16;
constexpr std::int16_t DT_FLOAT64 = 64;

// RAII over zlib's gzFile; gzread reads plain files transparently.
class GzFile {
public:
    GzFile(const std::string& path, const char* mode) {
        f_ = gzopen(path.c_str(), mode);
    }
    ~GzFile() {
        if (f_) gzclose(f_);
    }
    GzFile(const GzFile&) = delete;
    GzFile& operator=(const GzFile&) = delete;

    bool ok() const { return f_ != nullptr; }
    int read(void* buf, unsigned len) { return gzread(f_, buf, len); }
    int write(const void* buf, unsigned len) { return gzwrite(f_, buf, len); }

private:
    gzFile f_ = nullptr;
};

Affine affine_from_qform(const Nifti1Header& h) {
    double b = h.quatern_b, c = h.quatern_c, d = h.quatern_d;
    double a2 = 1.0 - (b * b + c * c + d * d);
    double a = a2 > 0.0 ? std::sqrt(a2) : 0.0;
    double qfac = h.pixdim[0] < 0.f ? -1.0 : 1.0;
    double sx = h.pixdim[1], sy = h.pixdim[2], sz = h.pixdim[3] * qfac;
    Affine m{};
    m[0][0] = (a * a + b * b - c * c - d * d) * sx;
    m[0][1] = (2 * b * c - 2 * a * d) * sy;
    m[0][2] = (2 * b * d + 2 * a * c) * sz;
    m[1][0] = (2 * b * c + 2 * a * d) * sx;
    m[1][1] = (a * a + c * c - b * b - d * d) * sy;
    m[1][2] = (2 * c * d - 2 * a * b) * sz;
    m[2][0] = (2 * b * d - 2 * a * c) * sx;
    m[2][1] = (2 * c * d + 2 * a * b) * sy;
    m[2][2] = (a * a + d * d - b * b - c * c) * sz;
    m[0][3] = h.qoffset_x;
    m[1][3] = h.qoffset_y;
    m[2][3] = h.qoffset_z;
    m[3][3] = 1.0;
    return m;
}

template <typename T>
void decode_payload(GzFile& f, std::size_t n, float slope, float inter,
                    bool apply_scl, std::vector<float>& out,
                    const std::string& path) {
    std::vector<T> raw(n);
    std::size_t bytes = n * sizeof(T);
    std::size_t got = 0;
    char* p = reinterpret_cast<char*>(raw.data());
    while (got < bytes) {
        unsigned chunk = static_cast<unsigned>(
            std::min<std::size_t>(bytes - got, 1u << 28));
        int r = f.read(p + got, chunk);
        if (r <= 0)
            throw io_error("truncated NIfTI data section in " + path);
        got += static_cast<std::size_t>(r);
    }
    out.resize(n);
    if (apply_scl) {
        for (std::size_t i = 0; i < n; ++i)
            out[i] = static_cast<float>(raw[i]) * slope + inter;
    } else {
        for (std::size_t i = 0; i < n; ++i)
            out[i] = static_cast<float>(raw[i]);
    }
}

void write_header_and_data(const Volume3D& vol, const std::string& path,
                           std::int16_t datatype, std::int16_t bitpix,
                           const void* payload, std::size_t payload_bytes) {
    Nifti1Header h{};
    h.sizeof_hdr = 348;
    h.regular = 'r';
    h.dim[0] = 3;
    h.dim[1] = static_cast<std::int16_t>(vol.dims[0]);
    h.dim[2] = static_cast<std::int16_t>(vol.dims[1]);
    h.dim[3] = static_cast<std::int16_t>(vol.dims[2]);
    for (int i = 4; i < 8; ++i) h.dim[i] = 1;
    h.datatype = datatype;
    h.bitpix = bitpix;
    h.pixdim[0] = 1.f;
    for (int i = 0; i < 3; ++i)
        h.pixdim[i + 1] = static_cast<float>(vol.spacing[i]);
    h.vox_offset = 352.f;
    h.scl_slope = 1.f;
    h.scl_inter = 0.f;
    h.xyzt_units = 2; // NIFTI_UNITS_MM
    std::strncpy(h.descrip, "autocomb", sizeof(h.descrip) - 1);
    h.qform_code = 0;
    h.sform_code = 1; // scanner-anatomical
    for (int c = 0; c < 4; ++c) {
        h.srow_x[c] = static_cast<float>(vol.affine[0][c]);
        h.srow_y[c] = static_cast<float>(vol.affine[1][c]);
        h.srow_z[c] = static_cast<float>(vol.affine[2][c]);
    }
    std::memcpy(h.magic, "n+1", 4);

    bool compressed = path.size() > 3 && path.rfind(".gz") == path.size() - 3;
    GzFile f(path, compressed ? "wb6" : "wbT"); // T = store uncompressed
    if (!f.ok()) throw io_error("cannot open " + path + " for writing");

    const char pad[4] = {0, 0, 0, 0}; // empty extension indicator
    if (f.write(&h, sizeof(h)) != static_cast<int>(sizeof(h)) ||
        f.write(pad, 4) != 4)
        throw io_error("failed writing NIfTI header to " + path);
    std::size_t off = 0;
    const char* p = static_cast<const char*>(payload);
    while (off < payload_bytes) {
        unsigned chunk = static_cast<unsigned>(
            std::min<std::size_t>(payload_bytes - off, 1u << 28));
        if (f.write(p + off, chunk) != static_cast<int>(chunk))
            throw io_error("failed writing NIfTI data to " + path);
        off += chunk;
    }
}

} // namespace

Volume3D read_nifti(const std::string& path) {
    if (!std::filesystem::exists(path))
        throw io_error("no such file: " + path);
    GzFile f(path, "rb");
    if (!f.ok()) throw io_error("cannot open " + path);

    Nifti1Header h{};
    if (f.read(&h, sizeof(h)) != static_cast<int>(sizeof(h)))
        throw format_error("file too short for a NIfTI-1 header: " + path);

    bool magic_n1 = std::memcmp(h.magic, "n+1", 3) == 0;
    bool magic_ni1 = std::memcmp(h.magic, "ni1", 3) == 0;
    if (!magic_n1 && !magic_ni1)
        throw format_error("bad NIfTI magic in " + path);
    if (h.sizeof_hdr != 348)
        throw format_error("unexpected sizeof_hdr (" +
                           std::to_string(h.sizeof_hdr) +
                           "); big-endian files are not supported: " + path);
    if (magic_ni1)
        throw unsupported_error(".hdr/.img pair files are not supported: " +
                                path);

    if (h.dim[0] < 3 || h.dim[0] > 7)
        throw format_error("expected a 3D volume in " + path);
    std::size_t trailing = 1;
    for (int i = 4; i <= h.dim[0]; ++i)
        trailing *= static_cast<std::size_t>(std::max<std::int16_t>(h.dim[i], 1));
    if (trailing != 1)
        throw unsupported_error("4D+ volumes are not supported: " + path);

    Volume3D vol;
    for (int i = 0; i < 3; ++i) {
        if (h.dim[i + 1] <= 0)
            throw format_error("nonpositive dimension in " + path);
        vol.dims[i] = h.dim[i + 1];
        float s = std::fabs(h.pixdim[i + 1]);
        vol.spacing[i] = s > 0.f ? s : 1.0;
    }

    if (h.sform_code > 0) {
        for (int c = 0; c < 4; ++c) {
            vol.affine[0][c] = h.srow_x[c];
            vol.affine[1][c] = h.srow_y[c];
            vol.affine[2][c] = h.srow_z[c];
        }
        vol.affine[3] = {0, 0, 0, 1};
    } else if (h.qform_code > 0) {
        vol.affine = affine_from_qform(h);
    } else {
        vol.affine = diagonal_affine(vol.spacing);
    }

    // skip from end of header to vox_offset
    long skip = static_cast<long>(h.vox_offset) - 348;
    if (skip < 0)
        throw format_error("vox_offset before end of header in " + path);
    while (skip > 0) {
        char buf[4096];
        int want = static_cast<int>(std::min<long>(skip, sizeof(buf)));
        int r = f.read(buf, want);
        if (r <= 0) throw io_error("truncated NIfTI file: " + path);
        skip -= r;
    }

    std::size_t n = vol.size();
    bool apply = h.scl_slope != 0.f &&
                 !(h.scl_slope == 1.f && h.scl_inter == 0.f);
    switch (h.datatype) {
    case DT_UINT8:
        decode_payload<std::uint8_t>(f, n, h.scl_slope, h.scl_inter, apply,
                                     vol.data, path);
        break;
    case DT_INT16:
        decode_payload<std::int16_t>(f, n, h.scl_slope, h.scl_inter, apply,
                                     vol.data, path);
        break;
    case DT_INT32:
        decode_payload<std::int32_t>(f, n, h.scl_slope, h.scl_inter, apply,
                                     vol.data, path);
        break;
    case DT_FLOAT32:
        decode_payload<float>(f, n, h.scl_slope, h.scl_inter, apply, vol.data,
                              path);
        break;
    case DT_FLOAT64:
        decode_payload<double>(f, n, h.scl_slope, h.scl_inter, apply,
                               vol.data, path);
        break;
    default:
        throw unsupported_error("unsupported NIfTI datatype " +
                                std::to_string(h.datatype) + " in " + path);
    }
    vol.validate();
    return vol;
}

void write_nifti(const Volume3D& vol, const std::string& path) {
    vol.validate();
    write_header_and_data(vol, path, DT_FLOAT32, 32, vol.data.data(),
                          vol.data.size() * sizeof(float));
}

void write_nifti(const ProbabilityMap& map, const std::string& path) {
    write_nifti(map.vol, path);
}

void write_nifti_u8(const Volume3D& vol, const std::string& path) {
    vol.validate();
    std::vector<std::uint8_t> raw(vol.size());
    for (std::size_t i = 0; i < raw.size(); ++i)
        raw[i] = static_cast<std::uint8_t>(vol.data[i]);
    write_header_and_data(vol, path, DT_UINT8, 8, raw.data(), raw.size());
}

void write_nifti_i16(const Volume3D& vol, const std::string& path) {
    vol.validate();
    std::vector<std::int16_t> raw(vol.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        float v = std::nearbyintf(vol.data[i]);
        v = std::clamp(v, -32768.f, 32767.f);
        raw[i] = static_cast<std::int16_t>(v);
    }
    write_header_and_data(vol, path, DT_INT16, 16, raw.data(),
                          raw.size() * sizeof(std::int16_t));
}

} // namespace autocomb
