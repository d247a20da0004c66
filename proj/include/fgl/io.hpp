#pragma once

#include "fgl/dsp.hpp"
#include "fgl/nn.hpp"
#include "fgl/sar.hpp"
#include "fgl/types.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace fgl::io {

// Dataset container, magic "FGL1". Little-endian header:
//   magic[4], version u16, mode u8, count u32, H u16, W u16, C u16
// then per sample: label u8, variant u8, H*W*C float32 values.
// Samples are stored at 32-bit precision; everything in memory is double.
void write_dataset(const std::string& path, const std::vector<dsp::ProcessedSample>& samples,
                   Mode mode);
std::vector<dsp::ProcessedSample> read_dataset(const std::string& path, Mode* mode_out = nullptr);

// Model checkpoint, magic "FGLM". Header stores the architecture, then an
// ordered list of named tensors with 64-bit values.
void write_checkpoint(const std::string& path, const nn::Cnn& model);
nn::Cnn read_checkpoint(const std::string& path);

// Flat "key = value" config text. '#' starts a comment, blank lines are
// skipped. Typed getters fall back to the given default when the key is
// absent and throw DataFormatError for malformed values.
class Config {
public:
    static Config parse_file(const std::string& path);
    static Config parse_text(const std::string& text);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::string str(const std::string& key, const std::string& fallback) const;
    std::int64_t integer(const std::string& key, std::int64_t fallback) const;
    std::uint64_t u64(const std::string& key, std::uint64_t fallback) const;
    double real(const std::string& key, double fallback) const;
    bool boolean(const std::string& key, bool fallback) const;

    const std::map<std::string, std::string>& entries() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

// FNV-1a, 64-bit. Used for the dataset manifest and determinism checks.
std::uint64_t fnv1a64(const void* data, std::size_t n);
std::uint64_t fnv1a64_file(const std::string& path);

// Manifest: one "<16-hex-digit checksum> <filename>" line per file.
void write_manifest(const std::string& path, const std::vector<std::pair<std::string, std::uint64_t>>& entries);
std::map<std::string, std::uint64_t> read_manifest(const std::string& path);

// 16-bit binary PGM (P5, maxval 65535, big-endian samples) plus a
// "<path>.txt" sidecar with the physical extent and the pre-normalization
// peak.
void write_pgm16(const sar::SarImage& image, const std::string& path);

} // namespace fgl::io
