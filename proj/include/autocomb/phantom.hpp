// phantom.hpp -- synthetic CT phantoms with known ground truth, standing in
// for patient data during testing.

#ifndef AUTOCOMB_PHANTOM_HPP
#define AUTOCOMB_PHANTOM_HPP

#include <optional>
#include <string>

#include "autocomb/mask.hpp"
#include "autocomb/volume.hpp"

namespace autocomb {

struct PhantomWall {
    std::string kind = "tube"; // "tube" or "torus"
    int axis = 2;              // 0=x, 1=y, 2=z (tube axis / torus normal)
    // tube: in-plane center; torus: full 3D center
    std::array<double, 3> center{64.0, 64.0, 64.0};
    double major_radius_vox = 32.0; // torus only
    double inner_radius_vox = 9.0;
    double thickness_vox = 3.0;
    double hu = 180.0;
    double contents_hu = 20.0;
    std::array<int, 2> span{8, 120}; // tube only, along the axis
    double margin_vox = 3.0;         // intestine-mask fat margin
};

struct PhantomVessels {
    bool enabled = true;
    int count = 8;
    double radius_vox = 1.5;
    double length_vox = 10.0;
    double spacing_vox = 12.0;
    double hu = 150.0;
    std::string direction = "+x"; // tube: in-plane axis; torus: radial
    int start = 16;               // tube: first position along the axis
};

struct PhantomOrgan {
    std::string name;
    std::array<double, 3> center{0, 0, 0};
    double radius_vox = 10.0;
    double hu = 90.0;
};

struct PhantomGas {
    int count = 0;
    double radius_vox = 2.5;
    double hu = -400.0;
};

struct PhantomSpec {
    std::array<int, 3> dims{128, 128, 128};
    std::array<double, 3> spacing_mm{1.0, 1.0, 1.0};
    double background_hu = -80.0;
    double noise_sigma_hu = 0.0;
    std::uint64_t seed = 1;
    std::optional<PhantomWall> wall;
    PhantomVessels vessels{.enabled = false};
    std::vector<PhantomOrgan> organs;
    PhantomGas gas;

    static PhantomSpec from_json_file(const std::string& path);
    static PhantomSpec from_json_text(const std::string& text);
    void validate() const;
};

struct PhantomResult {
    Volume3D volume; // HU, already noise-added and int16-clamped
    LabelMask intestine;
    LabelMask wall_truth;
    LabelMask vessel_centerlines;
    LabelMask roi; // band where the vessel comb lives (geometry-derived)
    std::vector<std::pair<std::string, LabelMask>> organ_masks;
    std::string manifest_json;
};

// Deterministic per seed. Pass an output directory to also write the NIfTI
// artifacts (volume as int16, masks as uint8) and manifest.json.
PhantomResult make_phantom(const PhantomSpec& spec,
                           const std::string& out_dir = "");

} // namespace autocomb

#endif
