#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace csd {

/// Deterministic standard-normal stream. Draws 53-bit uniforms from
/// std::mt19937_64 (whose output sequence is fixed by the standard) and
/// applies the basic Box-Muller transform, caching the second variate.
/// Identical seeds therefore give bit-identical streams on every platform;
/// do not swap the generator or the transform without versioning outputs.
class NormalSampler {
  public:
    explicit NormalSampler(std::uint64_t seed) : gen_(seed) {}

    double next() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        // u1 in (0, 1], u2 in [0, 1)
        const double u1 = 1.0 - uniform01();
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * pi * u2;
        cached_ = radius * std::sin(angle);
        has_cached_ = true;
        return radius * std::cos(angle);
    }

    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  private:
    static constexpr double pi = 3.14159265358979323846;
    std::mt19937_64 gen_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace csd
