#pragma once

/**
 * @file trig.hpp
 * @brief Seeded real trigonometric polynomials on the 2-torus [0, 2pi)^2.
 */

#include <harnacklab/sampling.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

namespace hl {

struct TrigTerm {
    int kx = 0, ky = 0;
    double a = 0.0;  ///< cosine coefficient
    double b = 0.0;  ///< sine coefficient
};

/// p(x, y) = constant + sum a cos(kx x + ky y) + b sin(kx x + ky y).
struct TrigPolynomial {
    double constant = 0.0;
    std::vector<TrigTerm> terms;

    /// Works for doubles and for any type with ADL sin/cos (e.g. Jet).
    template <class T>
    T operator()(const T& x, const T& y) const {
        using std::cos;
        using std::sin;
        T s = 0.0 * x + constant;
        for (const auto& m : terms) {
            const T ph = static_cast<double>(m.kx) * x + static_cast<double>(m.ky) * y;
            if (m.a != 0.0) s = s + m.a * cos(ph);
            if (m.b != 0.0) s = s + m.b * sin(ph);
        }
        return s;
    }

    /// Exact Laplacian of the flat torus: -|k|^2 on each mode.
    TrigPolynomial laplacian() const {
        TrigPolynomial r;
        for (auto m : terms) {
            const double k2 = m.kx * m.kx + m.ky * m.ky;
            m.a *= -k2;
            m.b *= -k2;
            r.terms.push_back(m);
        }
        return r;
    }

    int bandlimit() const {
        int b = 0;
        for (const auto& m : terms) b = std::max({b, std::abs(m.kx), std::abs(m.ky)});
        return b;
    }
};

/// Modes with max(|kx|, |ky|) <= bandlimit (one per +-k pair), coefficients
/// uniform in [-scale, scale].
inline TrigPolynomial random_trig(RandomStream& rng, int bandlimit, double scale) {
    TrigPolynomial p;
    for (int kx = 0; kx <= bandlimit; ++kx)
        for (int ky = -bandlimit; ky <= bandlimit; ++ky) {
            if (kx == 0 && ky <= 0) continue;
            TrigTerm m{kx, ky, rng.uniform(-scale, scale), rng.uniform(-scale, scale)};
            p.terms.push_back(m);
        }
    return p;
}

} // namespace hl
