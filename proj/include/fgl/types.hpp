#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fgl {

// Propagation speed used everywhere a wavenumber or a range bin is computed.
inline constexpr double kSpeedOfLight = 299792458.0; // m/s

enum class GestureClass : std::uint8_t {
    Palm = 0,          // flat hand facing the array
    Perpendicular = 1, // flat hand rotated edge-on
    ThumbsUp = 2,      // fist with extended thumb
};
inline constexpr int kNumClasses = 3;

enum class Variant : std::uint8_t {
    Human = 0,   // jittered geometry, clutter, measurement noise
    Sterile = 1, // clean high-reflectivity render of the same geometry
};

// Output layout of the preprocessing chain. Range keeps the 8 virtual
// channels as-is, RangeAngle runs a zero-padded FFT across them.
enum class Mode : std::uint8_t {
    Range = 0,
    RangeAngle = 1,
};

const char* to_string(GestureClass c);
const char* to_string(Variant v);
const char* to_string(Mode m);

// Parses "range" / "range-angle"; throws std::invalid_argument otherwise.
Mode mode_from_string(const std::string& s);
GestureClass gesture_from_string(const std::string& s);

// A file or stream violated one of the binary layouts (bad magic, short
// read, inconsistent header fields).
struct DataFormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A numeric pipeline produced NaN or Inf where finite values are required.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace fgl
