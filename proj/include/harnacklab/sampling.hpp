#pragma once

/**
 * @file sampling.hpp
 * @brief Seeded, portable random streams and quasi-random sample points.
 *
 * All streams are built on std::mt19937_64 (whose output sequence is fixed
 * by the standard) with an explicit 53-bit conversion to doubles, so results
 * do not depend on the standard library's distribution implementations.
 */

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace hl {

std::uint64_t splitmix64(std::uint64_t x);
/// Mixes a global seed, a point index and a purpose tag into one stream seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t tag);

class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : rng_(seed) {}
    RandomStream(std::uint64_t seed, std::uint64_t index, std::uint64_t tag)
        : rng_(derive_seed(seed, index, tag)) {}

    /// Uniform on [0, 1).
    double uniform01() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    std::uint64_t next() { return rng_(); }

private:
    std::mt19937_64 rng_;
};

/// Axis-aligned sampling region in space and time.
struct SampleBox {
    std::vector<double> lo, hi;
    double t_lo = 0.0, t_hi = 0.0;
    bool samples_time() const { return t_hi > t_lo; }
};

struct SamplePoint {
    std::vector<double> x;
    double t = 0.0;
};

/// Radical inverse of i in the given prime base.
double radical_inverse(std::uint64_t i, unsigned base);

/// `count` Halton points in the box with a seeded Cranley-Patterson shift.
/// Coordinates that land within a small band around zero are pushed off the
/// coordinate axes by a fixed offset.
std::vector<SamplePoint> sample_points(const SampleBox& box, int count, std::uint64_t seed);

} // namespace hl
