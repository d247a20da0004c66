#pragma once

#include "fgl/radar.hpp"
#include "fgl/tensor.hpp"
#include "fgl/types.hpp"

#include <complex>
#include <vector>

namespace fgl::dsp {

using cvec = std::vector<std::complex<double>>;

// Unnormalized forward DFT; the inverse scales by 1/N. Radix-2 when N is a
// power of two, Bluestein's chirp transform otherwise, so any length works.
cvec fft(const cvec& x, bool inverse = false);

// Direct O(N^2) evaluation of the same transform. Slow by construction and
// kept as an independent reference for the fast path.
cvec dft_oracle(const cvec& x, bool inverse = false);

// Beat spectrum per channel. Rows follow the cube's channel order, columns
// are range bins bin_spacing metres apart (c/(2B) for a grid that sweeps
// bandwidth B). start_bin tracks where a cropped window sits on the full
// range axis.
struct RangeProfile {
    std::vector<radar::ChannelPair> channels;
    int n_bins = 0;
    int start_bin = 0;
    double bin_spacing = 0.0; // m
    cvec data; // [channel][bin]

    std::complex<double>& at(int ch, int bin) { return data[static_cast<std::size_t>(ch) * n_bins + bin]; }
    const std::complex<double>& at(int ch, int bin) const { return data[static_cast<std::size_t>(ch) * n_bins + bin]; }
};

// Range rows by angle columns, broadside at column n_angle/2.
struct RangeAngleProfile {
    int n_bins = 0;
    int n_angle = 0;
    int start_bin = 0;
    double bin_spacing = 0.0;
    cvec data; // [bin][angle]

    std::complex<double>& at(int bin, int a) { return data[static_cast<std::size_t>(bin) * n_angle + a]; }
    const std::complex<double>& at(int bin, int a) const { return data[static_cast<std::size_t>(bin) * n_angle + a]; }
};

// Network-ready sample: real/imaginary parts of the normalized profile
// stacked on the channel axis, [H=range][W=channel or angle][C=2].
struct ProcessedSample {
    Tensor image;
    GestureClass label = GestureClass::Palm;
    Variant variant = Variant::Human;
    Mode mode = Mode::Range;
};

// FFT along the wavenumber axis of every channel. No window is applied;
// the point response stays a plain Dirichlet kernel. Requires a
// monostatic-corrected cube.
RangeProfile range_fft(const radar::BeatCube& cube);

// Keeps bins [start_bin, start_bin + n_bins). Throws when the window falls
// outside the profile.
RangeProfile crop_range(const RangeProfile& in, int start_bin, int n_bins);

// FFT across channels for every range bin, zero-padded to n_angle and
// fftshifted so broadside lands in the middle column. The channels must
// form a uniform linear array.
RangeAngleProfile angle_fft(const RangeProfile& in, int n_angle = 16);

// Removes the complex mean and scales to unit variance, both taken over
// the whole sample. Variance here is E[|x - mean|^2] over all entries.
// Throws std::invalid_argument if the sample is constant.
void normalize_complex(cvec& v);

// Splits complex H x W data into a real [H][W][2] tensor, real part in
// channel 0 and imaginary in channel 1.
Tensor layer_real_imag(const cvec& v, int height, int width);

struct PreprocessConfig {
    Mode mode = Mode::Range;
    int crop_start = 6;
    int crop_bins = 64;
    int n_angle = 16;
};

// Full chain: range FFT, crop, optional angle FFT, normalization, layering.
// Range mode keeps [crop_bins x n_channels x 2], range-angle mode
// [crop_bins x n_angle x 2]. label/variant on the result are left at their
// defaults for the caller to fill in.
ProcessedSample preprocess(const radar::BeatCube& cube, const PreprocessConfig& cfg);

} // namespace fgl::dsp
