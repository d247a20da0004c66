#include "fgl/sar.hpp"

#include "fgl/rng.hpp"

#include <cmath>
#include <limits>

namespace fgl::sar {

void GridSpec::validate() const
{
    if (nx < 2 || ny < 2) throw std::invalid_argument("sar: image grid needs at least 2x2 pixels");
    if (!(x_min < x_max) || !(y_min < y_max))
        throw std::invalid_argument("sar: image extent is empty");
}

ApertureScan make_aperture_scan(const radar::TargetCloud& cloud,
                                const radar::ArrayGeometry& geom,
                                const radar::RadarConfig& cfg,
                                const std::vector<std::pair<double, double>>& positions,
                                double z0_ref,
                                double noise_power,
                                std::uint64_t seed)
{
    if (positions.empty()) throw std::invalid_argument("sar: no scan positions");
    ApertureScan scan;
    scan.positions = positions;
    scan.cubes.resize(positions.size());
    scan.z_plane = geom.z_plane;

#pragma omp parallel for schedule(static)
    for (long long p = 0; p < static_cast<long long>(positions.size()); ++p) {
        radar::TargetCloud shifted = cloud;
        for (auto& t : shifted.points) {
            t.x -= positions[static_cast<std::size_t>(p)].first;
            t.y -= positions[static_cast<std::size_t>(p)].second;
        }
        radar::BeatCube cube = radar::simulate_scene(
            shifted, geom, cfg, {noise_power, mix_seed(seed, static_cast<std::uint64_t>(p))});
        scan.cubes[static_cast<std::size_t>(p)] = radar::multistatic_to_monostatic(cube, z0_ref);
    }
    return scan;
}

std::vector<std::pair<double, double>> raster_positions(double width, double height, int per_axis)
{
    if (per_axis < 2) throw std::invalid_argument("sar: need at least 2 positions per axis");
    if (!(width > 0.0) || !(height > 0.0)) throw std::invalid_argument("sar: aperture must be positive");
    std::vector<std::pair<double, double>> out;
    out.reserve(static_cast<std::size_t>(per_axis) * per_axis);
    for (int iy = 0; iy < per_axis; ++iy) {
        const double y = -height / 2.0 + height * iy / (per_axis - 1);
        for (int ix = 0; ix < per_axis; ++ix) {
            const double x = -width / 2.0 + width * ix / (per_axis - 1);
            out.emplace_back(x, y);
        }
    }
    return out;
}

std::vector<std::complex<double>> backproject_complex(const ApertureScan& scan,
                                                      const GridSpec& grid, double z_slice)
{
    grid.validate();
    if (scan.positions.empty() || scan.cubes.size() != scan.positions.size())
        throw std::invalid_argument("sar: empty or inconsistent aperture scan");
    const std::size_t nk = scan.cubes.front().k_grid.size();
    for (const auto& cube : scan.cubes) {
        if (!cube.mono_corrected)
            throw std::invalid_argument("sar: backprojection needs monostatic-corrected cubes");
        if (cube.k_grid.size() != nk || cube.k_grid.front() != scan.cubes.front().k_grid.front() ||
            cube.k_grid.back() != scan.cubes.front().k_grid.back())
            throw std::invalid_argument("sar: cubes in a scan must share one radar config");
    }

    const std::vector<double>& k = scan.cubes.front().k_grid;
    const double k0 = k.front();
    const double dk = nk > 1 ? (k.back() - k.front()) / static_cast<double>(nk - 1) : 0.0;
    const double dz = z_slice - scan.z_plane;

    std::vector<std::complex<double>> img(static_cast<std::size_t>(grid.nx) * grid.ny, {0.0, 0.0});

#pragma omp parallel for schedule(static)
    for (int iy = 0; iy < grid.ny; ++iy) {
        const double py = grid.y_at(iy);
        std::complex<double>* row = img.data() + static_cast<std::size_t>(iy) * grid.nx;
        for (int ix = 0; ix < grid.nx; ++ix) {
            const double px = grid.x_at(ix);
            std::complex<double> acc(0.0, 0.0);
            for (std::size_t p = 0; p < scan.positions.size(); ++p) {
                const double ex = scan.positions[p].first;
                const double ey = scan.positions[p].second;
                const radar::BeatCube& cube = scan.cubes[p];
                for (int ch = 0; ch < cube.num_channels(); ++ch) {
                    const double vy = ey + cube.channels[static_cast<std::size_t>(ch)].virtual_y();
                    const double ddx = px - ex;
                    const double ddy = py - vy;
                    const double r = std::sqrt(ddx * ddx + ddy * ddy + dz * dz);
                    // Matched filter against exp(j*2k*r); advance the
                    // conjugate phase by one complex multiply per sample.
                    std::complex<double> w = std::polar(1.0, -2.0 * k0 * r);
                    const std::complex<double> step = std::polar(1.0, -2.0 * dk * r);
                    const std::complex<double>* s =
                        cube.data.data() + static_cast<std::size_t>(ch) * nk;
                    for (std::size_t i = 0; i < nk; ++i) {
                        acc += s[i] * w;
                        w *= step;
                    }
                }
            }
            row[ix] = acc;
        }
    }
    return img;
}

SarImage backproject(const ApertureScan& scan, const GridSpec& grid, double z_slice)
{
    std::vector<std::complex<double>> img = backproject_complex(scan, grid, z_slice);

    SarImage out;
    out.nx = grid.nx;
    out.ny = grid.ny;
    out.x_min = grid.x_min;
    out.x_max = grid.x_max;
    out.y_min = grid.y_min;
    out.y_max = grid.y_max;
    out.z_slice = z_slice;
    out.pixels.resize(img.size());

    double peak = 0.0;
    for (std::size_t i = 0; i < img.size(); ++i) {
        out.pixels[i] = std::abs(img[i]);
        if (out.pixels[i] > peak) peak = out.pixels[i];
    }
    out.peak_value = peak;
    if (peak > 0.0)
        for (auto& v : out.pixels) v /= peak;
    return out;
}

double image_snr(const SarImage& image, const MaskRect& mask)
{
    if (!(mask.x_min < mask.x_max) || !(mask.y_min < mask.y_max))
        throw std::invalid_argument("sar: empty mask");
    if (mask.x_min < image.x_min || mask.x_max > image.x_max ||
        mask.y_min < image.y_min || mask.y_max > image.y_max)
        throw std::invalid_argument("sar: mask extends outside the image");

    const double wx = (image.x_max - image.x_min) / image.nx;
    const double wy = (image.y_max - image.y_min) / image.ny;
    double peak = -1.0;
    double sumsq = 0.0;
    long long outside = 0;
    for (int iy = 0; iy < image.ny; ++iy) {
        const double y = image.y_min + (iy + 0.5) * wy;
        for (int ix = 0; ix < image.nx; ++ix) {
            const double x = image.x_min + (ix + 0.5) * wx;
            const double v = image.at(ix, iy);
            if (mask.contains(x, y)) {
                if (v > peak) peak = v;
            } else {
                sumsq += v * v;
                ++outside;
            }
        }
    }
    if (peak < 0.0) throw std::invalid_argument("sar: mask covers no pixel");
    if (outside == 0) throw std::invalid_argument("sar: mask leaves no pixel outside");
    const double rms = std::sqrt(sumsq / static_cast<double>(outside));
    return rms > 0.0 ? peak / rms : (peak > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
}

} // namespace fgl::sar
