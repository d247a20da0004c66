#pragma once

#include "fgl/rng.hpp"
#include "fgl/types.hpp"

#include <complex>
#include <span>
#include <vector>

namespace fgl::radar {

// Stepped-frequency view of one FMCW chirp. The beat signal is sampled on
// n_samples uniformly spaced wavenumbers between start_freq and
// start_freq + bandwidth. slope and duration are kept so configs can be
// cross-checked against capture hardware, with bandwidth == slope * duration.
struct RadarConfig {
    double start_freq = 77.0e9;  // Hz
    double bandwidth = 4.0e9;    // Hz swept over one chirp
    double slope = 1.0e14;       // Hz/s
    double duration = 40.0e-6;   // s
    int n_samples = 256;
    double c = kSpeedOfLight;

    double wavelength() const { return c / start_freq; }

    // Throws std::invalid_argument on non-positive frequencies, n_samples < 2
    // or an inconsistent slope/duration/bandwidth triple.
    void validate() const;
};

// One transmit/receive pairing. Elements sit on the y axis of the radar
// plane; x is the horizontal scan direction and z points at the scene.
struct ChannelPair {
    double tx_y = 0.0;
    double rx_y = 0.0;

    double virtual_y() const { return 0.5 * (tx_y + rx_y); }
    double separation() const { return tx_y > rx_y ? tx_y - rx_y : rx_y - tx_y; }
};

// Physical MIMO layout. Channels are enumerated tx-major, so channel
// index = itx * rx_y.size() + irx.
struct ArrayGeometry {
    std::vector<double> tx_y;
    std::vector<double> rx_y;
    double z_plane = 0.0; // z coordinate of the element plane

    int num_channels() const { return static_cast<int>(tx_y.size() * rx_y.size()); }
    std::vector<ChannelPair> channels() const;

    // The layout used throughout: 2 Tx spaced 2*lambda and 4 Rx spaced
    // lambda/2, shifted so the 8 virtual elements form a lambda/4 grid
    // centered on y = 0.
    static ArrayGeometry default_2tx4rx(double start_freq = 77.0e9, double c = kSpeedOfLight);
};

struct PointTarget {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double reflectivity = 1.0;
};

struct TargetCloud {
    std::vector<PointTarget> points;
};

// Additive circular complex gaussian noise with E[|n|^2] = power, applied
// per beat sample. power == 0 keeps the cube exactly deterministic.
struct NoiseSpec {
    double power = 0.0;
    std::uint64_t seed = 0;
};

// Beat samples for every channel over the wavenumber grid, row-major
// [channel][k]. Before the monostatic correction `channels` holds physical
// tx/rx positions; afterwards both are collapsed onto the virtual midpoint
// and mono_corrected is set.
struct BeatCube {
    std::vector<ChannelPair> channels;
    std::vector<double> k_grid;
    std::vector<std::complex<double>> data;
    bool mono_corrected = false;

    int num_channels() const { return static_cast<int>(channels.size()); }
    int num_samples() const { return static_cast<int>(k_grid.size()); }

    std::complex<double>& at(int ch, int ik) { return data[static_cast<std::size_t>(ch) * k_grid.size() + ik]; }
    const std::complex<double>& at(int ch, int ik) const { return data[static_cast<std::size_t>(ch) * k_grid.size() + ik]; }
};

// k_i = 2*pi*f_i/c with f_i stepping linearly from start_freq to
// start_freq + bandwidth inclusive.
std::vector<double> wavenumber_grid(const RadarConfig& cfg);

// Beat contribution of a single scatterer on one channel:
//   sigma / (R_T * R_R) * exp(j*k*(R_T + R_R))
// with R_T, R_R the element-to-target distances. Residual video phase is
// neglected, which holds when the beat bandwidth is far below start_freq.
// Throws std::invalid_argument if the target touches either element.
std::vector<std::complex<double>> simulate_point_echo(const ChannelPair& ch,
                                                      double z_plane,
                                                      const PointTarget& target,
                                                      std::span<const double> k_grid);

// Coherent superposition of every target in the cloud over every channel,
// plus optional receiver noise. Output is not monostatic-corrected.
BeatCube simulate_scene(const TargetCloud& cloud,
                        const ArrayGeometry& geom,
                        const RadarConfig& cfg,
                        const NoiseSpec& noise = {});

// Phase-only compensation that maps each bistatic pair onto its virtual
// midpoint element: multiply channel rows by exp(-j*k*d_y^2/(4*z0_ref)),
// d_y being the tx/rx separation. Valid for targets in a neighbourhood of
// the reference depth z0_ref. Throws if the cube is already corrected or
// z0_ref <= 0.
BeatCube multistatic_to_monostatic(const BeatCube& cube, double z0_ref);

} // namespace fgl::radar
