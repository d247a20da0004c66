#include "fgl/radar.hpp"

#include <cmath>
#include <numbers>

namespace fgl::radar {

namespace {

double element_range(double el_y, double z_plane, const PointTarget& t)
{
    const double dy = t.y - el_y;
    const double dz = t.z - z_plane;
    return std::sqrt(t.x * t.x + dy * dy + dz * dz);
}

// Adds sigma/(R_T*R_R)*exp(j*k_i*(R_T+R_R)) for all i onto row. The grid is
// uniform in k, so the per-sample phase increment is constant and the
// exponential advances by one complex multiply instead of a sin/cos pair.
void accumulate_echo(std::complex<double>* row,
                     std::span<const double> k_grid,
                     double amplitude,
                     double path_sum)
{
    const std::size_t n = k_grid.size();
    std::complex<double> val = std::polar(amplitude, k_grid[0] * path_sum);
    if (n == 1) {
        row[0] += val;
        return;
    }
    const double dk = (k_grid[n - 1] - k_grid[0]) / static_cast<double>(n - 1);
    const std::complex<double> step = std::polar(1.0, dk * path_sum);
    for (std::size_t i = 0; i < n; ++i) {
        row[i] += val;
        val *= step;
    }
}

} // namespace

void RadarConfig::validate() const
{
    if (!(start_freq > 0.0)) throw std::invalid_argument("radar: start_freq must be positive");
    if (!(bandwidth > 0.0)) throw std::invalid_argument("radar: bandwidth must be positive");
    if (!(slope > 0.0) || !(duration > 0.0)) throw std::invalid_argument("radar: slope and duration must be positive");
    if (n_samples < 2) throw std::invalid_argument("radar: n_samples must be at least 2");
    if (!(c > 0.0)) throw std::invalid_argument("radar: propagation speed must be positive");
    const double swept = slope * duration;
    if (std::abs(swept - bandwidth) > 1e-9 * bandwidth)
        throw std::invalid_argument("radar: bandwidth != slope * duration");
}

std::vector<ChannelPair> ArrayGeometry::channels() const
{
    std::vector<ChannelPair> out;
    out.reserve(tx_y.size() * rx_y.size());
    for (double t : tx_y)
        for (double r : rx_y)
            out.push_back({t, r});
    return out;
}

ArrayGeometry ArrayGeometry::default_2tx4rx(double start_freq, double c)
{
    const double lambda = c / start_freq;
    // Midpoints (tx+rx)/2 then cover {0, 1, ..., 7} * lambda/4; the shift
    // recentres that grid on y = 0.
    const double shift = -7.0 * lambda / 8.0;
    ArrayGeometry g;
    g.tx_y = {shift, shift + 2.0 * lambda};
    g.rx_y = {shift, shift + 0.5 * lambda, shift + lambda, shift + 1.5 * lambda};
    g.z_plane = 0.0;
    return g;
}

std::vector<double> wavenumber_grid(const RadarConfig& cfg)
{
    cfg.validate();
    std::vector<double> k(static_cast<std::size_t>(cfg.n_samples));
    const double df = cfg.bandwidth / static_cast<double>(cfg.n_samples - 1);
    const double scale = 2.0 * std::numbers::pi / cfg.c;
    for (int i = 0; i < cfg.n_samples; ++i)
        k[static_cast<std::size_t>(i)] = scale * (cfg.start_freq + df * static_cast<double>(i));
    return k;
}

std::vector<std::complex<double>> simulate_point_echo(const ChannelPair& ch,
                                                      double z_plane,
                                                      const PointTarget& target,
                                                      std::span<const double> k_grid)
{
    if (k_grid.empty()) throw std::invalid_argument("radar: empty wavenumber grid");
    if (!(target.reflectivity >= 0.0)) throw std::invalid_argument("radar: reflectivity must be non-negative");
    const double r_t = element_range(ch.tx_y, z_plane, target);
    const double r_r = element_range(ch.rx_y, z_plane, target);
    if (r_t < 1e-9 || r_r < 1e-9)
        throw std::invalid_argument("radar: target coincides with an array element");

    std::vector<std::complex<double>> echo(k_grid.size(), std::complex<double>(0.0, 0.0));
    accumulate_echo(echo.data(), k_grid, target.reflectivity / (r_t * r_r), r_t + r_r);
    return echo;
}

BeatCube simulate_scene(const TargetCloud& cloud,
                        const ArrayGeometry& geom,
                        const RadarConfig& cfg,
                        const NoiseSpec& noise)
{
    if (cloud.points.empty()) throw std::invalid_argument("radar: target cloud is empty");
    if (geom.tx_y.empty() || geom.rx_y.empty()) throw std::invalid_argument("radar: array has no elements");
    if (noise.power < 0.0) throw std::invalid_argument("radar: noise power must be non-negative");

    BeatCube cube;
    cube.channels = geom.channels();
    cube.k_grid = wavenumber_grid(cfg);
    cube.data.assign(cube.channels.size() * cube.k_grid.size(), {0.0, 0.0});
    cube.mono_corrected = false;

    const std::size_t nk = cube.k_grid.size();
    for (std::size_t c = 0; c < cube.channels.size(); ++c) {
        const ChannelPair& ch = cube.channels[c];
        std::complex<double>* row = cube.data.data() + c * nk;
        for (const PointTarget& t : cloud.points) {
            if (!(t.reflectivity >= 0.0)) throw std::invalid_argument("radar: reflectivity must be non-negative");
            const double r_t = element_range(ch.tx_y, geom.z_plane, t);
            const double r_r = element_range(ch.rx_y, geom.z_plane, t);
            if (r_t < 1e-9 || r_r < 1e-9)
                throw std::invalid_argument("radar: target coincides with an array element");
            accumulate_echo(row, cube.k_grid, t.reflectivity / (r_t * r_r), r_t + r_r);
        }
    }

    if (noise.power > 0.0) {
        Rng rng(noise.seed);
        const double s = std::sqrt(noise.power / 2.0);
        for (auto& v : cube.data)
            v += std::complex<double>(s * rng.gaussian(), s * rng.gaussian());
    }
    return cube;
}

BeatCube multistatic_to_monostatic(const BeatCube& cube, double z0_ref)
{
    if (cube.mono_corrected)
        throw std::invalid_argument("radar: cube is already monostatic-corrected");
    if (!(z0_ref > 0.0))
        throw std::invalid_argument("radar: z0_ref must be positive");
    if (cube.data.size() != cube.channels.size() * cube.k_grid.size())
        throw std::invalid_argument("radar: inconsistent beat cube");

    BeatCube out = cube;
    const std::size_t nk = out.k_grid.size();
    for (std::size_t c = 0; c < out.channels.size(); ++c) {
        const double d = out.channels[c].separation();
        const double coeff = -d * d / (4.0 * z0_ref);
        std::complex<double>* row = out.data.data() + c * nk;
        for (std::size_t i = 0; i < nk; ++i)
            row[i] *= std::polar(1.0, out.k_grid[i] * coeff);
        const double mid = out.channels[c].virtual_y();
        out.channels[c] = {mid, mid};
    }
    out.mono_corrected = true;
    return out;
}

} // namespace fgl::radar
