#pragma once

#include "fgl/radar.hpp"
#include "fgl/types.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace fgl::scene {

// Per-capture description of one hand (or the cutout modeled on it).
// hand_scale is roughly the hand length; aspect stretches the palm taller
// than wide; point_density controls the surface discretization. seed drives
// the per-capture jitter draws only, base geometry is deterministic.
struct SubjectParams {
    double hand_scale = 0.18;      // m, allowed range [0.13, 0.25]
    double aspect = 1.2;           // height / width of the palm plate
    double thumb_length = 0.06;    // m
    double point_density = 4500.0; // points per m^2
    double base_reflectivity = 1.0;
    double jitter_std = 0.0008;    // m, geometric jitter of each point
    std::uint64_t seed = 0;

    void validate() const;
};

// What separates a human capture from a sterile cutout capture: the cutout
// reflects stronger, sits in an empty scene and is recorded nearly
// noise-free, while the human scene carries torso and tripod clutter plus
// receiver noise.
struct VariantSpec {
    Variant kind = Variant::Human;
    double reflectivity_gain = 1.0;
    bool clutter = true;
    double noise_power = 0.0;

    static VariantSpec human_default();
    static VariantSpec sterile_default();
};

// Mechanical scanner volume: the radar translates over a width x height
// window while the hand sits somewhere in [hand_min, hand_max] depth and
// the torso at torso_z behind it.
struct ScanAperture {
    double width = 0.25;  // m
    double height = 0.25; // m
    double hand_min = 0.25;
    double hand_max = 0.55;
    double torso_z = 1.0;

    void validate() const;
};

// Full recipe for one dataset: class-balanced human and sterile captures
// over a pool of subjects, all derived from one master seed.
struct DatasetSpec {
    int samples_per_class_human = 1000;
    int samples_per_class_sterile = 1000;
    std::vector<SubjectParams> human_subjects;   // defaulted to 8 if empty
    std::vector<SubjectParams> sterile_subjects; // defaulted to 8 if empty
    VariantSpec human_variant = VariantSpec::human_default();
    VariantSpec sterile_variant = VariantSpec::sterile_default();
    ScanAperture aperture;
    radar::RadarConfig radar;
    radar::ArrayGeometry geometry = radar::ArrayGeometry::default_2tx4rx();
    double z0_ref = 0.4; // m, reference depth of the monostatic correction
    std::uint64_t master_seed = 0;

    void validate() const;
};

// One simulated capture, already monostatic-corrected.
struct SceneSample {
    radar::BeatCube cube;
    GestureClass label = GestureClass::Palm;
    Variant variant = Variant::Human;
};

// Pool of subject parameter sets with mildly varying hand size and shape.
// Sterile pools should use jitter_std = 0 (rigid cutouts).
std::vector<SubjectParams> default_subjects(int n, std::uint64_t seed, bool sterile);

// Builds the point cloud for one capture. Base geometry per class:
//   Palm          flat plate facing the array (normal along z)
//   Perpendicular the same plate rotated 90 degrees about the vertical
//                 axis, so the array sees it edge-on
//   ThumbsUp      ellipsoidal fist with a vertical thumb segment on top
// Human variant jitters point positions (jitter_std) and per-point
// reflectivity, and appends torso and tripod clutter when enabled. Sterile
// scales reflectivity uniformly and adds nothing else. hand_center.z must
// lie within the aperture's hand range.
radar::TargetCloud make_gesture_cloud(GestureClass cls,
                                      const SubjectParams& subject,
                                      const VariantSpec& variant,
                                      double center_x, double center_y, double center_z,
                                      const ScanAperture& aperture = {});

// n scanner positions uniform over the aperture window, centered on (0,0).
std::vector<std::pair<double, double>> scan_positions(const ScanAperture& aperture,
                                                      int n, std::uint64_t seed);

// Generates the full dataset: for every class and variant, samples a
// subject, a scan position and a hand depth, renders the cloud, simulates
// the beat cube and applies the monostatic correction. The radar
// translation is realized by translating the scene the opposite way.
// Sample order and content are a pure function of the DatasetSpec fields;
// per-sample seeds are derived from master_seed and a (class, variant,
// index) counter.
std::vector<SceneSample> synth_dataset(const DatasetSpec& spec);

} // namespace fgl::scene
