#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace fgl {

// All randomness in the project flows through this wrapper. std::mt19937_64
// itself is bit-exact across implementations, but the standard library
// distributions are not, so the transforms below are spelled out by hand.
// Same seed, same draw order, same bytes, on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1), 53-bit resolution.
    double uniform()
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi)
    {
        return lo + (hi - lo) * uniform();
    }

    // Standard normal via the Marsaglia polar method. Pairs are cached.
    double gaussian();

    // Uniform integer in [0, n). Rejection sampled, so unbiased.
    std::uint64_t below(std::uint64_t n);

    // Fisher-Yates. Used instead of std::shuffle for the same
    // reproducibility reason as above.
    template <typename T>
    void shuffle(std::vector<T>& v)
    {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// splitmix64 finalizer. Used to derive well-separated child seeds from a
// master seed plus a stream index, so that per-sample generators are
// independent of how work is chunked across threads.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream)
{
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace fgl
