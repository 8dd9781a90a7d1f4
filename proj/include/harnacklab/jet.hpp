#pragma once

/**
 * @file jet.hpp
 * @brief Truncated multivariate Taylor expansions ("jets") at a base point.
 *
 * A Jet stores normalized Taylor coefficients c_a of a scalar function,
 * so that the represented function is sum_a c_a (z - z0)^a with a ranging
 * over multi-indices of weighted degree at most K. Space and deformation
 * variables carry weight 1; the time variable carries weight 2 by default
 * (parabolic grading), so that the heat operator lowers the order of a jet
 * uniformly by 2 and PDE propagation fills a closed coefficient set.
 *
 * Every jet also tracks the order through which its coefficients are exact.
 * Differentiation lowers it by the weight of the variable; arithmetic takes
 * the minimum of its operands. Reading a coefficient beyond it throws.
 */

#include <harnacklab/errors.hpp>

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace hl {

enum class VarRole : std::uint8_t { space, time, deform };

/// Layout of a jet: variables, weights, truncation order and the
/// precomputed tables used by multiplication and differentiation.
class JetSpace {
public:
    static constexpr int max_vars = 6;
    static constexpr int max_order = 8;

    /// Weights default to 1 for space/deform variables and 2 for time.
    JetSpace(std::vector<VarRole> roles, int order, std::vector<int> weights = {});

    static std::shared_ptr<const JetSpace> make(std::vector<VarRole> roles, int order,
                                                std::vector<int> weights = {});
    /// n space variables, optionally followed by time and/or deformation.
    static std::shared_ptr<const JetSpace> make_chart(int n, bool with_time, bool with_deform,
                                                      int order);

    int num_vars() const { return static_cast<int>(roles_.size()); }
    int order() const { return order_; }
    int size() const { return static_cast<int>(degree_.size()); }

    VarRole role(int var) const { return roles_[var]; }
    int weight(int var) const { return weights_[var]; }
    int num_space() const { return static_cast<int>(space_vars_.size()); }
    /// Variable index of the i-th space coordinate.
    int space_var(int i) const { return space_vars_.at(i); }
    int time_var() const { return time_var_; }
    int deform_var() const { return deform_var_; }
    bool has_time() const { return time_var_ >= 0; }
    bool has_deform() const { return deform_var_ >= 0; }

    std::span<const std::uint8_t> exponents(int index) const;
    int degree(int index) const { return degree_[index]; }
    /// -1 when the multi-index is not part of the layout.
    int index_of(std::span<const int> alpha) const;
    int weighted_degree(std::span<const int> alpha) const;

    /// Products c_a * c_b -> c_out, sorted by output index (hence by degree).
    struct Product {
        std::uint32_t a, b, out;
    };
    std::span<const Product> products() const { return products_; }
    /// products()[0, products_through(d)) are exactly the products of output degree <= d.
    std::size_t products_through(int degree) const;
    /// Products that contribute to output index `out`.
    std::span<const Product> products_into(int out) const;

    /// For variable v and index i: index of a + e_v (or -1) and the factor (a_v + 1).
    int shift_index(int var, int index) const { return shift_[var][index]; }

    bool operator==(const JetSpace& other) const {
        return roles_ == other.roles_ && weights_ == other.weights_ && order_ == other.order_;
    }

private:
    int code(std::span<const int> alpha) const;

    std::vector<VarRole> roles_;
    std::vector<int> weights_;
    int order_;
    std::vector<int> space_vars_;
    int time_var_ = -1;
    int deform_var_ = -1;

    std::vector<std::uint8_t> exps_;  // size() * num_vars()
    std::vector<int> degree_;
    std::vector<int> lookup_;         // dense code -> index
    std::vector<Product> products_;
    std::vector<std::size_t> degree_end_;   // per output degree
    std::vector<std::size_t> out_begin_;    // per output index, size()+1
    std::vector<std::vector<int>> shift_;
};

using JetSpacePtr = std::shared_ptr<const JetSpace>;

class Jet {
public:
    Jet() = default;
    /// Zero jet, exact through the full order of the space.
    explicit Jet(JetSpacePtr space);
    static Jet constant(JetSpacePtr space, double value);
    /// The jet of coordinate `var` at base value `base`.
    static Jet variable(JetSpacePtr space, int var, double base);

    const JetSpacePtr& space() const { return space_; }
    bool empty() const { return !space_; }
    /// Weighted order through which the coefficients are exact.
    int order() const { return order_; }
    Jet& with_order(int order);

    double value() const { return c_.at(0); }
    double coeff(std::span<const int> alpha) const;
    double coeff(std::initializer_list<int> alpha) const;
    /// Partial derivative d^alpha at the base point: c_alpha * alpha!.
    double deriv(std::span<const int> alpha) const;
    double deriv(std::initializer_list<int> alpha) const;

    std::span<const double> coefficients() const { return c_; }
    std::span<double> coefficients() { return c_; }
    double& operator[](int index) { return c_[index]; }
    double operator[](int index) const { return c_[index]; }

    Jet& operator+=(const Jet& b);
    Jet& operator-=(const Jet& b);
    Jet& operator*=(const Jet& b);
    Jet& operator/=(const Jet& b);
    Jet& operator+=(double s);
    Jet& operator-=(double s);
    Jet& operator*=(double s);
    Jet& operator/=(double s);

    friend Jet operator-(Jet a);
    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& a, const Jet& b);
    friend Jet operator+(Jet a, double s) { return a += s; }
    friend Jet operator+(double s, Jet a) { return a += s; }
    friend Jet operator-(Jet a, double s) { return a -= s; }
    friend Jet operator-(double s, const Jet& a) { return (-a) += s; }
    friend Jet operator*(Jet a, double s) { return a *= s; }
    friend Jet operator*(double s, Jet a) { return a *= s; }
    friend Jet operator/(Jet a, double s) { return a /= s; }
    friend Jet operator/(double s, const Jet& a);

private:
    void require_same_space(const Jet& b) const;
    void truncate_above(int order);

    JetSpacePtr space_;
    std::vector<double> c_;
    int order_ = 0;
};

/// One jet per space variable: value p_i, unit linear coefficient in its own slot.
std::vector<Jet> seed_variables(std::span<const double> p, const JetSpacePtr& space);
/// Jet of t at base time t0; requires a time variable.
Jet seed_time(double t0, const JetSpacePtr& space);
/// Jet of the deformation parameter s at s = 0.
Jet seed_deform(const JetSpacePtr& space);

/// Partial derivative with respect to jet variable `var`.
Jet differentiate(const Jet& a, int var);
/// Partial derivative with respect to the i-th space coordinate.
Jet partial(const Jet& a, int i);
/// Partial derivative with respect to time.
Jet partial_t(const Jet& a);
/// Partial derivative with respect to the deformation parameter.
Jet partial_s(const Jet& a);
/// Antiderivative in `var` with zero constant of integration; raises the
/// exact order by the variable's weight (capped at the space order).
Jet integrate(const Jet& a, int var);
/// Keeps the coefficients whose exponent of `var` is zero.
Jet restrict_to_slice(const Jet& a, int var);

using JetSystem = std::function<std::vector<Jet>(const std::vector<Jet>&)>;

/// Time-dependent coefficients of a state that solves d/dt state = rhs(state).
///
/// Only the time-free coefficients of `initial` are used. The state is
/// rebuilt as slice + integral_t rhs(state) until every time degree allowed
/// by the order is filled; each pass fixes one more power of (t - t0).
std::vector<Jet> propagate_in_time(const std::vector<Jet>& initial, const JetSystem& rhs);

Jet constant_like(const Jet& proto, double value);

enum class AnalyticFn { exp, log, sqrt, pow_real, sin, cos };
/// Composition fn(a), exact through the order of a. `exponent` is used by pow_real.
Jet analytic(AnalyticFn fn, const Jet& a, double exponent = 0.0);

Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sqrt(const Jet& a);
Jet pow(const Jet& a, double exponent);
Jet sin(const Jet& a);
Jet cos(const Jet& a);

double value_of(const Jet& a);
/// Largest |coefficient| within the exact order.
double max_abs(const Jet& a);
/// Constant term; used for pointwise positivity checks.
double min_value(const Jet& a);

std::string to_string(const Jet& a);

} // namespace hl
