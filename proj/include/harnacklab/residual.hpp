#pragma once

/**
 * @file residual.hpp
 * @brief Relative residuals of identities LHS = RHS given as sums of terms.
 *
 * For scalar identities the relative residual is
 *     |sum(lhs) - sum(rhs)| / (sum |term| + 1e-30).
 * For tensor identities the same is formed per component and combined
 * norm-wise: max_c |diff_c| / (max_c sum_k |term_kc| + 1e-30), so that a
 * component that happens to be tiny is measured against the tensor's scale.
 */

#include <harnacklab/errors.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace hl {

constexpr double kResidualFloor = 1e-30;

class Residual {
public:
    explicit Residual(std::size_t components = 1) : diff_(components, 0.0), mag_(components, 0.0) {}

    Residual& lhs(double v) { return add({v}, 1.0); }
    Residual& rhs(double v) { return add({v}, -1.0); }
    Residual& lhs(const std::vector<double>& v) { return add(v, 1.0); }
    Residual& rhs(const std::vector<double>& v) { return add(v, -1.0); }

    /// Adds |v| to the scale without contributing to the difference; used
    /// when a term's own magnitude understates the size of its factors.
    Residual& scale(double v) { return scale(std::vector<double>{v}); }
    Residual& scale(const std::vector<double>& v) {
        if (v.size() != mag_.size()) throw ConfigError("scale has the wrong number of components");
        for (std::size_t c = 0; c < v.size(); ++c) mag_[c] += std::abs(v[c]);
        return *this;
    }

    double absolute() const {
        double m = 0.0;
        for (double d : diff_) m = std::max(m, std::abs(d));
        return m;
    }
    double magnitude() const { return *std::max_element(mag_.begin(), mag_.end()); }
    double relative() const { return absolute() / (magnitude() + kResidualFloor); }

private:
    Residual& add(const std::vector<double>& v, double sign) {
        if (v.size() != diff_.size())
            throw ConfigError("residual term has " + std::to_string(v.size()) + " components, expected " +
                              std::to_string(diff_.size()));
        for (std::size_t c = 0; c < v.size(); ++c) {
            diff_[c] += sign * v[c];
            mag_[c] += std::abs(v[c]);
        }
        return *this;
    }

    std::vector<double> diff_;
    std::vector<double> mag_;
};

/// One named sub-identity evaluated at one sample point.
struct NamedResidual {
    std::string name;
    double relative = 0.0;
    double absolute = 0.0;
};

inline NamedResidual named(std::string name, const Residual& r) {
    return {std::move(name), r.relative(), r.absolute()};
}

} // namespace hl
