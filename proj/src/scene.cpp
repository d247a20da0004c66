#include "fgl/scene.hpp"

#include "fgl/rng.hpp"

#include <cmath>
#include <numbers>

namespace fgl::scene {

namespace {

constexpr double kGoldenAngle = 2.39996322972865332; // pi * (3 - sqrt(5))

// Lattice coordinates spanning [-extent/2, extent/2] at roughly `step`
// spacing, always symmetric about zero.
std::vector<double> lattice_axis(double extent, double step)
{
    int n = static_cast<int>(std::floor(extent / step)) + 1;
    if (n < 2) n = 2;
    std::vector<double> v(static_cast<std::size_t>(n));
    const double pitch = extent / static_cast<double>(n - 1);
    for (int i = 0; i < n; ++i)
        v[static_cast<std::size_t>(i)] = pitch * static_cast<double>(i) - extent / 2.0;
    return v;
}

// Flat palm plate in the x-y plane, height hand_scale, width
// hand_scale/aspect. The perpendicular gesture reuses this rotated.
std::vector<radar::PointTarget> palm_plate(const SubjectParams& s)
{
    const double step = 1.0 / std::sqrt(s.point_density);
    const double w = s.hand_scale / s.aspect;
    const double h = s.hand_scale;
    std::vector<radar::PointTarget> pts;
    for (double y : lattice_axis(h, step))
        for (double x : lattice_axis(w, step))
            pts.push_back({x, y, 0.0, s.base_reflectivity});
    return pts;
}

// Ellipsoidal fist via a spherical Fibonacci lattice, plus a vertical
// thumb segment rising from the top of the fist.
std::vector<radar::PointTarget> fist_with_thumb(const SubjectParams& s)
{
    const double rx = 0.26 * s.hand_scale;
    const double ry = 0.30 * s.hand_scale;
    const double rz = 0.20 * s.hand_scale;
    // Thomsen's approximation of the ellipsoid surface area.
    const double p = 1.6075;
    const double ap = std::pow(rx, p), bp = std::pow(ry, p), cp = std::pow(rz, p);
    const double area = 4.0 * std::numbers::pi * std::pow((ap * bp + ap * cp + bp * cp) / 3.0, 1.0 / p);
    int n = static_cast<int>(std::round(area * s.point_density));
    if (n < 16) n = 16;

    std::vector<radar::PointTarget> pts;
    pts.reserve(static_cast<std::size_t>(n) + 32);
    for (int i = 0; i < n; ++i) {
        const double v = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        const double r = std::sqrt(1.0 - v * v);
        const double phi = kGoldenAngle * static_cast<double>(i);
        pts.push_back({rx * r * std::cos(phi), ry * v, rz * r * std::sin(phi), s.base_reflectivity});
    }

    const double step = 1.0 / std::sqrt(s.point_density);
    const int levels = std::max(2, static_cast<int>(std::round(s.thumb_length / step)));
    for (int i = 0; i <= levels; ++i) {
        const double y = ry + s.thumb_length * static_cast<double>(i) / static_cast<double>(levels);
        // Two points per level give the thumb a little width in x.
        pts.push_back({-0.006, y, 0.0, s.base_reflectivity});
        pts.push_back({0.006, y, 0.0, s.base_reflectivity});
    }
    return pts;
}

std::vector<radar::PointTarget> base_geometry(GestureClass cls, const SubjectParams& s)
{
    switch (cls) {
    case GestureClass::Palm:
        return palm_plate(s);
    case GestureClass::Perpendicular: {
        // Rotate the plate 90 degrees about the vertical axis: the array
        // now sees it edge-on, its width becomes depth extent.
        std::vector<radar::PointTarget> pts = palm_plate(s);
        for (auto& t : pts) {
            const double x = t.x;
            t.x = 0.0;
            t.z = -x;
        }
        return pts;
    }
    case GestureClass::ThumbsUp:
        return fist_with_thumb(s);
    }
    throw std::invalid_argument("scene: unknown gesture class");
}

// Torso disk and tripod column, in absolute scene coordinates. These do
// not follow the hand center.
void append_clutter(std::vector<radar::PointTarget>& pts, const SubjectParams& s, double torso_z)
{
    const double torso_r = 0.2;
    const double torso_refl = 3.0 * s.base_reflectivity;
    const double dr = 0.025;
    const int rings = static_cast<int>(std::round(torso_r / dr));
    for (int i = 0; i < rings; ++i) {
        const double r = (static_cast<double>(i) + 0.5) * dr;
        const int m = std::max(6, static_cast<int>(std::round(2.0 * std::numbers::pi * r / dr)));
        for (int j = 0; j < m; ++j) {
            const double a = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
            pts.push_back({r * std::cos(a), -0.1 + r * std::sin(a), torso_z, torso_refl});
        }
    }
    // Tripod leg off to the side, between hand and torso depth.
    for (int i = 0; i <= 16; ++i)
        pts.push_back({0.30, -0.45 + 0.025 * static_cast<double>(i), 0.70, 1.5 * s.base_reflectivity});
}

} // namespace

void SubjectParams::validate() const
{
    if (!(hand_scale >= 0.13 && hand_scale <= 0.25))
        throw std::invalid_argument("scene: hand_scale outside [0.13, 0.25] m");
    if (!(point_density > 0.0))
        throw std::invalid_argument("scene: point_density must be positive");
    if (!(jitter_std >= 0.0))
        throw std::invalid_argument("scene: jitter_std must be non-negative");
    if (!(aspect > 0.0) || !(thumb_length > 0.0) || !(base_reflectivity >= 0.0))
        throw std::invalid_argument("scene: invalid subject parameters");
}

VariantSpec VariantSpec::human_default()
{
    return {Variant::Human, 1.0, true, 300.0};
}

VariantSpec VariantSpec::sterile_default()
{
    return {Variant::Sterile, 10.0, false, 1.0e2};
}

void ScanAperture::validate() const
{
    if (!(width > 0.0) || !(height > 0.0))
        throw std::invalid_argument("scene: aperture sides must be positive");
    if (!(hand_min > 0.0) || !(hand_min < hand_max) || !(hand_max < torso_z))
        throw std::invalid_argument("scene: hand range must lie strictly between radar and torso");
}

void DatasetSpec::validate() const
{
    if (samples_per_class_human <= 0 || samples_per_class_sterile <= 0)
        throw std::invalid_argument("scene: per-class sample counts must be positive");
    if (!(z0_ref > 0.0))
        throw std::invalid_argument("scene: z0_ref must be positive");
    if (!(sterile_variant.reflectivity_gain > human_variant.reflectivity_gain))
        throw std::invalid_argument("scene: sterile reflectivity gain must exceed human gain");
    if (sterile_variant.noise_power > human_variant.noise_power)
        throw std::invalid_argument("scene: sterile noise must not exceed human noise");
    aperture.validate();
    radar.validate();
}

std::vector<SubjectParams> default_subjects(int n, std::uint64_t seed, bool sterile)
{
    if (n <= 0) throw std::invalid_argument("scene: subject count must be positive");
    Rng rng(seed);
    std::vector<SubjectParams> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        SubjectParams s;
        s.hand_scale = rng.uniform(0.15, 0.22);
        s.aspect = rng.uniform(1.05, 1.35);
        s.thumb_length = rng.uniform(0.05, 0.07);
        s.point_density = 4500.0;
        s.base_reflectivity = 1.0;
        s.jitter_std = sterile ? 0.0 : 0.0008;
        s.seed = 0;
        out.push_back(s);
    }
    return out;
}

radar::TargetCloud make_gesture_cloud(GestureClass cls,
                                      const SubjectParams& subject,
                                      const VariantSpec& variant,
                                      double center_x, double center_y, double center_z,
                                      const ScanAperture& aperture)
{
    subject.validate();
    aperture.validate();
    if (center_z < aperture.hand_min || center_z > aperture.hand_max)
        throw std::invalid_argument("scene: hand center depth outside the allowed hand range");
    if (!(variant.reflectivity_gain > 0.0))
        throw std::invalid_argument("scene: reflectivity gain must be positive");

    std::vector<radar::PointTarget> pts = base_geometry(cls, subject);

    if (variant.kind == Variant::Human) {
        Rng rng(subject.seed);
        for (auto& t : pts) {
            t.x += subject.jitter_std * rng.gaussian();
            t.y += subject.jitter_std * rng.gaussian();
            t.z += subject.jitter_std * rng.gaussian();
            t.reflectivity *= variant.reflectivity_gain * rng.uniform(0.7, 1.3);
        }
    } else {
        for (auto& t : pts)
            t.reflectivity *= variant.reflectivity_gain;
    }

    for (auto& t : pts) {
        t.x += center_x;
        t.y += center_y;
        t.z += center_z;
    }

    if (variant.clutter)
        append_clutter(pts, subject, aperture.torso_z);

    return {std::move(pts)};
}

std::vector<std::pair<double, double>> scan_positions(const ScanAperture& aperture,
                                                      int n, std::uint64_t seed)
{
    aperture.validate();
    if (n <= 0) throw std::invalid_argument("scene: need at least one scan position");
    Rng rng(seed);
    std::vector<std::pair<double, double>> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double x = rng.uniform(-aperture.width / 2.0, aperture.width / 2.0);
        const double y = rng.uniform(-aperture.height / 2.0, aperture.height / 2.0);
        out.emplace_back(x, y);
    }
    return out;
}

std::vector<SceneSample> synth_dataset(const DatasetSpec& spec)
{
    spec.validate();
    const std::vector<SubjectParams> human_pool =
        spec.human_subjects.empty() ? default_subjects(8, mix_seed(spec.master_seed, 0xA11CE), false)
                                    : spec.human_subjects;
    const std::vector<SubjectParams> sterile_pool =
        spec.sterile_subjects.empty() ? default_subjects(8, mix_seed(spec.master_seed, 0xB0B), true)
                                      : spec.sterile_subjects;

    struct Slot {
        GestureClass cls;
        Variant var;
        int index;
    };
    std::vector<Slot> slots;
    for (int c = 0; c < kNumClasses; ++c) {
        for (int i = 0; i < spec.samples_per_class_human; ++i)
            slots.push_back({static_cast<GestureClass>(c), Variant::Human, i});
        for (int i = 0; i < spec.samples_per_class_sterile; ++i)
            slots.push_back({static_cast<GestureClass>(c), Variant::Sterile, i});
    }

    std::vector<SceneSample> out(slots.size());

#pragma omp parallel for schedule(static)
    for (long long si = 0; si < static_cast<long long>(slots.size()); ++si) {
        const Slot& sl = slots[static_cast<std::size_t>(si)];
        const bool human = sl.var == Variant::Human;
        const std::uint64_t stream =
            (static_cast<std::uint64_t>(static_cast<int>(sl.cls) * 2 + (human ? 0 : 1)) << 32) |
            static_cast<std::uint64_t>(sl.index);
        Rng rng(mix_seed(spec.master_seed, stream));

        const auto& pool = human ? human_pool : sterile_pool;
        SubjectParams subject = pool[rng.below(pool.size())];
        const double sx = rng.uniform(-spec.aperture.width / 2.0, spec.aperture.width / 2.0);
        const double sy = rng.uniform(-spec.aperture.height / 2.0, spec.aperture.height / 2.0);
        const double hz = rng.uniform(spec.aperture.hand_min, spec.aperture.hand_max);
        subject.seed = rng.raw();
        const std::uint64_t noise_seed = rng.raw();

        const VariantSpec& var = human ? spec.human_variant : spec.sterile_variant;
        radar::TargetCloud cloud =
            make_gesture_cloud(sl.cls, subject, var, 0.0, 0.0, hz, spec.aperture);
        // The scanner moved to (sx, sy); equivalently the scene moves the
        // other way relative to a fixed array.
        for (auto& t : cloud.points) {
            t.x -= sx;
            t.y -= sy;
        }

        radar::BeatCube cube =
            radar::simulate_scene(cloud, spec.geometry, spec.radar, {var.noise_power, noise_seed});
        SceneSample& dst = out[static_cast<std::size_t>(si)];
        dst.cube = radar::multistatic_to_monostatic(cube, spec.z0_ref);
        dst.label = sl.cls;
        dst.variant = sl.var;
    }
    return out;
}

} // namespace fgl::scene
