// Deterministic random generator used for all sensing-matrix draws.
//
// The generator algorithm is pinned so that measurement files can name it and
// any implementation can regenerate identical matrices:
//   - stream: std::mt19937_64 seeded directly with the 64-bit seed (the
//     engine's output sequence is fully specified by the C++ standard).
//   - uniform doubles: u = (x >> 11) * 2^-53, giving u in [0, 1).
//   - gaussians: Box-Muller on consecutive uniforms, with
//       u1 = ((x >> 11) + 1) * 2^-53  in (0, 1]
//       u2 = (x >> 11) * 2^-53        in [0, 1)
//       z0 = sqrt(-2 ln u1) cos(2 pi u2),  z1 = sqrt(-2 ln u1) sin(2 pi u2);
//     z0 is returned first, z1 on the following call.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

namespace scbcs {

inline constexpr const char* kGeneratorId = "mt19937_64-boxmuller-v1";

class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
        double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Derives the per-block seed when a run uses independent matrices per block.
// splitmix64 finalizer over seed + (block_id + 1) * golden-ratio increment.
inline uint64_t block_seed(uint64_t seed, uint64_t block_id) {
    uint64_t z = seed + (block_id + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace scbcs
