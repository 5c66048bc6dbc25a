#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace ripsrecon {

/**
 * Reproducible random source.
 *
 * The engine is std::mt19937_64, whose output sequence is fixed by the C++
 * standard. The standard distributions are not (their algorithms are
 * implementation-defined), so every conversion to a real number is done here
 * explicitly:
 *
 *  - uniform01(): top 53 bits of one engine output, scaled by 2^-53, in [0, 1).
 *  - normal(): Box-Muller on two uniform01() draws, cosine branch only.
 *
 * Same seed, same compiler-independent stream of doubles.
 */
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform index in [0, n). Multiply-shift reduction; bias is below 2^-40 for n < 2^24.
    std::size_t index(std::size_t n)
    {
        return static_cast<std::size_t>(uniform01() * static_cast<double>(n)) % n;
    }

    double normal()
    {
        // 1 - u keeps the log argument in (0, 1].
        const double u1 = 1.0 - uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
};

} // namespace ripsrecon
