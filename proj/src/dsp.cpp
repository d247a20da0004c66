#include "fgl/dsp.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace fgl::dsp {

namespace {

constexpr double kPi = std::numbers::pi;

// Iterative in-place radix-2 Cooley-Tukey. n must be a power of two.
void fft_pow2(std::complex<double>* a, std::size_t n, bool inverse)
{
    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * kPi / static_cast<double>(len);
        const std::complex<double> wl = std::polar(1.0, ang);
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const std::complex<double> u = a[i + j];
                const std::complex<double> v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

// Bluestein's algorithm: re-expresses an arbitrary-length DFT as a
// convolution, which is evaluated with a power-of-two FFT.
cvec fft_bluestein(const cvec& x, bool inverse)
{
    const std::size_t n = x.size();
    std::size_t m = 1;
    while (m < 2 * n - 1) m <<= 1;

    const double sign = inverse ? 1.0 : -1.0;
    cvec w(n); // w[i] = exp(sign*j*pi*i^2/n)
    for (std::size_t i = 0; i < n; ++i) {
        // i^2 mod 2n keeps the argument small for large transforms.
        const std::size_t q = (i * i) % (2 * n);
        w[i] = std::polar(1.0, sign * kPi * static_cast<double>(q) / static_cast<double>(n));
    }

    cvec a(m, {0.0, 0.0}), b(m, {0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) a[i] = x[i] * w[i];
    b[0] = std::conj(w[0]);
    for (std::size_t i = 1; i < n; ++i) b[i] = b[m - i] = std::conj(w[i]);

    fft_pow2(a.data(), m, false);
    fft_pow2(b.data(), m, false);
    for (std::size_t i = 0; i < m; ++i) a[i] *= b[i];
    fft_pow2(a.data(), m, true);

    cvec out(n);
    const double scale = 1.0 / static_cast<double>(m);
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * scale * w[i];
    return out;
}

} // namespace

cvec fft(const cvec& x, bool inverse)
{
    if (x.empty()) throw std::invalid_argument("dsp: fft of empty vector");
    cvec out;
    if (std::has_single_bit(x.size())) {
        out = x;
        fft_pow2(out.data(), out.size(), inverse);
    } else {
        out = fft_bluestein(x, inverse);
    }
    if (inverse) {
        const double scale = 1.0 / static_cast<double>(x.size());
        for (auto& v : out) v *= scale;
    }
    return out;
}

cvec dft_oracle(const cvec& x, bool inverse)
{
    if (x.empty()) throw std::invalid_argument("dsp: dft of empty vector");
    const std::size_t n = x.size();
    const double sign = inverse ? 1.0 : -1.0;
    cvec out(n, {0.0, 0.0});
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t q = (k * i) % n;
            acc += x[i] * std::polar(1.0, sign * 2.0 * kPi * static_cast<double>(q) / static_cast<double>(n));
        }
        out[k] = inverse ? acc / static_cast<double>(n) : acc;
    }
    return out;
}

RangeProfile range_fft(const radar::BeatCube& cube)
{
    if (!cube.mono_corrected)
        throw std::invalid_argument("dsp: range_fft needs a monostatic-corrected cube");
    if (cube.k_grid.size() < 2 || cube.channels.empty())
        throw std::invalid_argument("dsp: beat cube is empty");

    const int nk = cube.num_samples();
    RangeProfile p;
    p.channels = cube.channels;
    p.n_bins = nk;
    p.start_bin = 0;
    // One-way range per bin. k spans 2*pi*B/c, so pi / span == c/(2B).
    p.bin_spacing = kPi / (cube.k_grid.back() - cube.k_grid.front());
    p.data.resize(cube.data.size());

    cvec row(static_cast<std::size_t>(nk));
    for (int ch = 0; ch < cube.num_channels(); ++ch) {
        for (int i = 0; i < nk; ++i) row[static_cast<std::size_t>(i)] = cube.at(ch, i);
        cvec spec = fft(row, false);
        for (int i = 0; i < nk; ++i) p.at(ch, i) = spec[static_cast<std::size_t>(i)];
    }
    return p;
}

RangeProfile crop_range(const RangeProfile& in, int start_bin, int n_bins)
{
    if (start_bin < 0 || n_bins < 1 || start_bin + n_bins > in.n_bins)
        throw std::invalid_argument("dsp: crop window out of bounds");
    RangeProfile out;
    out.channels = in.channels;
    out.n_bins = n_bins;
    out.start_bin = in.start_bin + start_bin;
    out.bin_spacing = in.bin_spacing;
    out.data.resize(in.channels.size() * static_cast<std::size_t>(n_bins));
    for (std::size_t ch = 0; ch < in.channels.size(); ++ch)
        for (int b = 0; b < n_bins; ++b)
            out.data[ch * n_bins + b] = in.at(static_cast<int>(ch), start_bin + b);
    return out;
}

RangeAngleProfile angle_fft(const RangeProfile& in, int n_angle)
{
    const int nch = static_cast<int>(in.channels.size());
    if (nch < 2) throw std::invalid_argument("dsp: angle_fft needs at least two channels");
    if (n_angle < nch) throw std::invalid_argument("dsp: n_angle smaller than channel count");

    // The shifted-spectrum layout below only makes sense on a uniform
    // linear array, so insist on equispaced virtual positions.
    const double d0 = in.channels[1].virtual_y() - in.channels[0].virtual_y();
    if (!(d0 > 0.0)) throw std::invalid_argument("dsp: channels must be sorted by virtual position");
    for (int c = 1; c + 1 < nch; ++c) {
        const double d = in.channels[c + 1].virtual_y() - in.channels[c].virtual_y();
        if (std::abs(d - d0) > 1e-9 * d0)
            throw std::invalid_argument("dsp: channels are not uniformly spaced");
    }

    RangeAngleProfile out;
    out.n_bins = in.n_bins;
    out.n_angle = n_angle;
    out.start_bin = in.start_bin;
    out.bin_spacing = in.bin_spacing;
    out.data.resize(static_cast<std::size_t>(in.n_bins) * n_angle);

    cvec row(static_cast<std::size_t>(n_angle));
    for (int b = 0; b < in.n_bins; ++b) {
        std::fill(row.begin(), row.end(), std::complex<double>(0.0, 0.0));
        for (int c = 0; c < nch; ++c) row[static_cast<std::size_t>(c)] = in.at(c, b);
        cvec spec = fft(row, false);
        // fftshift: broadside (DC) moves to column n_angle/2.
        for (int a = 0; a < n_angle; ++a)
            out.at(b, a) = spec[static_cast<std::size_t>((a + n_angle / 2) % n_angle)];
    }
    return out;
}

void normalize_complex(cvec& v)
{
    if (v.empty()) throw std::invalid_argument("dsp: normalize of empty sample");
    std::complex<double> mean(0.0, 0.0);
    for (const auto& x : v) mean += x;
    mean /= static_cast<double>(v.size());

    double var = 0.0;
    for (const auto& x : v) var += std::norm(x - mean);
    var /= static_cast<double>(v.size());
    if (var <= 0.0)
        throw std::invalid_argument("dsp: constant sample cannot be normalized");

    const double inv = 1.0 / std::sqrt(var);
    for (auto& x : v) x = (x - mean) * inv;
}

Tensor layer_real_imag(const cvec& v, int height, int width)
{
    if (v.size() != static_cast<std::size_t>(height) * static_cast<std::size_t>(width))
        throw std::invalid_argument("dsp: layer dimensions do not match data");
    Tensor t({height, width, 2});
    for (int h = 0; h < height; ++h)
        for (int w = 0; w < width; ++w) {
            const std::complex<double>& x = v[static_cast<std::size_t>(h) * width + w];
            t.at(h, w, 0) = x.real();
            t.at(h, w, 1) = x.imag();
        }
    return t;
}

ProcessedSample preprocess(const radar::BeatCube& cube, const PreprocessConfig& cfg)
{
    RangeProfile cropped = crop_range(range_fft(cube), cfg.crop_start, cfg.crop_bins);

    ProcessedSample s;
    s.mode = cfg.mode;
    if (cfg.mode == Mode::Range) {
        // Transpose to [range][channel] so range is the image height.
        const int nch = static_cast<int>(cropped.channels.size());
        cvec img(static_cast<std::size_t>(cfg.crop_bins) * nch);
        for (int b = 0; b < cfg.crop_bins; ++b)
            for (int c = 0; c < nch; ++c)
                img[static_cast<std::size_t>(b) * nch + c] = cropped.at(c, b);
        normalize_complex(img);
        s.image = layer_real_imag(img, cfg.crop_bins, nch);
    } else {
        RangeAngleProfile ra = angle_fft(cropped, cfg.n_angle);
        normalize_complex(ra.data);
        s.image = layer_real_imag(ra.data, ra.n_bins, ra.n_angle);
    }
    for (double x : s.image.data)
        if (!std::isfinite(x)) throw NumericError("dsp: non-finite value in processed sample");
    return s;
}

} // namespace fgl::dsp
