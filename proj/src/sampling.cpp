#include <harnacklab/errors.hpp>
#include <harnacklab/sampling.hpp>

#include <algorithm>
#include <cmath>
#include <iterator>

namespace hl {

namespace {

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17};
constexpr std::uint64_t kShiftTag = 0x5348494654ULL;
constexpr double kAxisBand = 0.02;

double wrap01(double v) { return v - std::floor(v); }

} // namespace

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t tag) {
    return splitmix64(splitmix64(splitmix64(seed) ^ index) ^ tag);
}

double radical_inverse(std::uint64_t i, unsigned base) {
    double inv = 1.0 / base, f = inv, r = 0.0;
    while (i > 0) {
        r += f * static_cast<double>(i % base);
        i /= base;
        f *= inv;
    }
    return r;
}

std::vector<SamplePoint> sample_points(const SampleBox& box, int count, std::uint64_t seed) {
    const int n = static_cast<int>(box.lo.size());
    if (box.hi.size() != box.lo.size()) throw ConfigError("sample box bounds have different dimensions");
    const int dims = n + (box.samples_time() ? 1 : 0);
    if (dims > static_cast<int>(std::size(kPrimes))) throw ConfigError("too many sampling dimensions");
    if (count < 0) throw ConfigError("negative sample count");

    RandomStream shift_rng(seed, 0, kShiftTag);
    std::vector<double> shift(dims);
    for (auto& s : shift) s = shift_rng.uniform01();

    std::vector<SamplePoint> pts;
    pts.reserve(count);
    for (int k = 0; k < count; ++k) {
        SamplePoint sp;
        sp.x.resize(n);
        for (int d = 0; d < dims; ++d) {
            const double u = wrap01(radical_inverse(static_cast<std::uint64_t>(k) + 1, kPrimes[d]) + shift[d]);
            if (d < n) {
                const double w = box.hi[d] - box.lo[d];
                double v = box.lo[d] + w * u;
                if (std::abs(v) < kAxisBand * w) v += (v < 0 ? -1.0 : 1.0) * kAxisBand * w;
                sp.x[d] = std::clamp(v, box.lo[d], box.hi[d]);
            } else {
                sp.t = box.t_lo + (box.t_hi - box.t_lo) * u;
            }
        }
        if (!box.samples_time()) sp.t = box.t_lo;
        pts.push_back(std::move(sp));
    }
    return pts;
}

} // namespace hl
