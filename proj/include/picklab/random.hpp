#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace picklab {

// Platform-independent sampling. std::uniform_real_distribution is not
// bit-reproducible across standard libraries, so draws are built directly
// from the 64-bit engine output.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}
    /// Independent stream for trial `index` of a run seeded with `seed`.
    static Rng stream(std::uint64_t seed, std::uint64_t index) {
        return Rng(splitmix64(seed) ^ splitmix64(index + 0x5851f42d4c957f2dULL));
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::uint64_t below(std::uint64_t n) { return n ? engine_() % n : 0; }

    /// Uniform in the open complex disk of the given radius (rejection sampling).
    std::complex<double> in_disk(double radius = 1.0) {
        for (;;) {
            const double x = uniform(-1.0, 1.0);
            const double y = uniform(-1.0, 1.0);
            if (x * x + y * y < 1.0) return {radius * x, radius * y};
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace picklab
