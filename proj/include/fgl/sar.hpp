#pragma once

#include "fgl/radar.hpp"
#include "fgl/types.hpp"

#include <complex>
#include <utility>
#include <vector>

namespace fgl::sar {

// One full 2-D mechanical scan: a monostatic-corrected beat cube per
// scanner position. Positions are offsets of the array center in the
// scan plane.
struct ApertureScan {
    std::vector<std::pair<double, double>> positions; // (x', y') m
    std::vector<radar::BeatCube> cubes;               // aligned with positions
    double z_plane = 0.0;
};

// Reconstruction grid at a single depth slice.
struct GridSpec {
    int nx = 128;
    int ny = 128;
    double x_min = -0.2, x_max = 0.2;
    double y_min = -0.2, y_max = 0.2;

    double x_at(int ix) const { return x_min + (x_max - x_min) * (ix + 0.5) / nx; }
    double y_at(int iy) const { return y_min + (y_max - y_min) * (iy + 0.5) / ny; }
    void validate() const;
};

struct SarImage {
    int nx = 0, ny = 0;
    std::vector<double> pixels; // row-major [iy][ix], normalized to peak 1
    double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;
    double z_slice = 0.0;
    double peak_value = 0.0; // magnitude before normalization

    double at(int ix, int iy) const { return pixels[static_cast<std::size_t>(iy) * nx + ix]; }
};

// Rectangular evaluation mask in physical coordinates.
struct MaskRect {
    double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;

    bool contains(double x, double y) const
    {
        return x >= x_min && x <= x_max && y >= y_min && y <= y_max;
    }
};

// Simulates the scan: for each position the scene is rendered with the
// array translated by (x', y') (realized as the opposite scene shift),
// simulated and monostatic-corrected. Noise seeds derive from `seed` per
// position.
ApertureScan make_aperture_scan(const radar::TargetCloud& cloud,
                                const radar::ArrayGeometry& geom,
                                const radar::RadarConfig& cfg,
                                const std::vector<std::pair<double, double>>& positions,
                                double z0_ref,
                                double noise_power = 0.0,
                                std::uint64_t seed = 0);

// Convenience n x n uniform grid of scan positions over a centered
// width x height window.
std::vector<std::pair<double, double>> raster_positions(double width, double height, int per_axis);

// Matched-filter back-projection at depth z_slice:
//   pixel(x, y) = | sum over positions, channels, k of s * exp(-j*2k*R) |
// with R the distance from the translated virtual element to the pixel.
// The complex variant returns the unnormalized sums (row-major [iy][ix]).
std::vector<std::complex<double>> backproject_complex(const ApertureScan& scan,
                                                      const GridSpec& grid, double z_slice);
SarImage backproject(const ApertureScan& scan, const GridSpec& grid, double z_slice);

// Peak inside the mask over RMS outside it. The mask must cover at least
// one pixel and leave at least one pixel outside.
double image_snr(const SarImage& image, const MaskRect& mask);

} // namespace fgl::sar
