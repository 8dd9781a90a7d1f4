#include <harnacklab/jet.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace hl {

namespace {

void enumerate(const std::vector<int>& weights, int order, int var, std::vector<int>& current,
               int used, std::vector<std::vector<int>>& out) {
    if (var == static_cast<int>(weights.size())) {
        out.push_back(current);
        return;
    }
    for (int e = 0; used + e * weights[var] <= order; ++e) {
        current[var] = e;
        enumerate(weights, order, var + 1, current, used + e * weights[var], out);
    }
    current[var] = 0;
}

} // namespace

JetSpace::JetSpace(std::vector<VarRole> roles, int order, std::vector<int> weights)
    : roles_(std::move(roles)), weights_(std::move(weights)), order_(order) {
    const int nv = num_vars();
    if (nv < 1 || nv > max_vars)
        throw ConfigError("jet space needs between 1 and 6 variables, got " + std::to_string(nv));
    if (order_ < 1 || order_ > max_order)
        throw ConfigError("jet order must lie in [1, 8], got " + std::to_string(order_));
    if (weights_.empty()) {
        for (VarRole r : roles_)
            weights_.push_back(r == VarRole::time ? 2 : 1);
    }
    if (static_cast<int>(weights_.size()) != nv)
        throw ConfigError("jet space weights do not match the number of variables");
    for (int v = 0; v < nv; ++v) {
        if (weights_[v] < 1) throw ConfigError("jet variable weights must be positive");
        switch (roles_[v]) {
        case VarRole::space: space_vars_.push_back(v); break;
        case VarRole::time:
            if (time_var_ >= 0) throw ConfigError("jet space has two time variables");
            time_var_ = v;
            break;
        case VarRole::deform:
            if (deform_var_ >= 0) throw ConfigError("jet space has two deformation variables");
            deform_var_ = v;
            break;
        }
    }

    std::vector<std::vector<int>> all;
    std::vector<int> cur(nv, 0);
    enumerate(weights_, order_, 0, cur, 0, all);
    // graded by weighted degree, then reverse lexicographic so x comes before y
    std::stable_sort(all.begin(), all.end(), [&](const auto& a, const auto& b) {
        const int da = weighted_degree(a), db = weighted_degree(b);
        if (da != db) return da < db;
        return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
    });

    const int n = static_cast<int>(all.size());
    exps_.resize(static_cast<std::size_t>(n) * nv);
    degree_.resize(n);
    std::size_t dense = 1;
    for (int v = 0; v < nv; ++v) dense *= static_cast<std::size_t>(order_ + 1);
    lookup_.assign(dense, -1);
    for (int i = 0; i < n; ++i) {
        for (int v = 0; v < nv; ++v) exps_[static_cast<std::size_t>(i) * nv + v] = static_cast<std::uint8_t>(all[i][v]);
        degree_[i] = weighted_degree(all[i]);
        lookup_[code(all[i])] = i;
    }

    std::vector<int> sum(nv);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (degree_[a] + degree_[b] > order_) continue;
            for (int v = 0; v < nv; ++v) sum[v] = all[a][v] + all[b][v];
            products_.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
                                 static_cast<std::uint32_t>(lookup_[code(sum)])});
        }
    }
    std::stable_sort(products_.begin(), products_.end(),
                     [](const Product& x, const Product& y) { return x.out < y.out; });
    out_begin_.assign(n + 1, 0);
    for (const Product& p : products_) ++out_begin_[p.out + 1];
    std::partial_sum(out_begin_.begin(), out_begin_.end(), out_begin_.begin());
    degree_end_.assign(order_ + 1, 0);
    for (int d = 0; d <= order_; ++d) {
        int last = -1;
        for (int i = 0; i < n && degree_[i] <= d; ++i) last = i;
        degree_end_[d] = out_begin_[last + 1];
    }

    shift_.assign(nv, std::vector<int>(n, -1));
    for (int v = 0; v < nv; ++v) {
        for (int i = 0; i < n; ++i) {
            if (degree_[i] + weights_[v] > order_) continue;
            sum = all[i];
            ++sum[v];
            shift_[v][i] = lookup_[code(sum)];
        }
    }
}

std::shared_ptr<const JetSpace> JetSpace::make(std::vector<VarRole> roles, int order,
                                               std::vector<int> weights) {
    return std::make_shared<const JetSpace>(std::move(roles), order, std::move(weights));
}

std::shared_ptr<const JetSpace> JetSpace::make_chart(int n, bool with_time, bool with_deform,
                                                     int order) {
    std::vector<VarRole> roles(n, VarRole::space);
    if (with_time) roles.push_back(VarRole::time);
    if (with_deform) roles.push_back(VarRole::deform);
    return make(std::move(roles), order);
}

std::span<const std::uint8_t> JetSpace::exponents(int index) const {
    return {exps_.data() + static_cast<std::size_t>(index) * num_vars(),
            static_cast<std::size_t>(num_vars())};
}

int JetSpace::code(std::span<const int> alpha) const {
    int c = 0;
    for (int v = num_vars() - 1; v >= 0; --v) c = c * (order_ + 1) + alpha[v];
    return c;
}

int JetSpace::weighted_degree(std::span<const int> alpha) const {
    int d = 0;
    for (int v = 0; v < num_vars(); ++v) d += alpha[v] * weights_[v];
    return d;
}

int JetSpace::index_of(std::span<const int> alpha) const {
    if (static_cast<int>(alpha.size()) != num_vars()) return -1;
    for (int a : alpha)
        if (a < 0 || a > order_) return -1;
    if (weighted_degree(alpha) > order_) return -1;
    return lookup_[code(alpha)];
}

std::size_t JetSpace::products_through(int degree) const {
    if (degree < 0) return 0;
    return degree_end_[std::min(degree, order_)];
}

std::span<const JetSpace::Product> JetSpace::products_into(int out) const {
    return {products_.data() + out_begin_[out], out_begin_[out + 1] - out_begin_[out]};
}

// ---------------------------------------------------------------------------

Jet::Jet(JetSpacePtr space) : space_(std::move(space)) {
    if (!space_) throw ConfigError("jet requires a jet space");
    c_.assign(space_->size(), 0.0);
    order_ = space_->order();
}

Jet Jet::constant(JetSpacePtr space, double value) {
    Jet j(std::move(space));
    j.c_[0] = value;
    return j;
}

Jet Jet::variable(JetSpacePtr space, int var, double base) {
    Jet j(std::move(space));
    if (var < 0 || var >= j.space_->num_vars()) throw ConfigError("jet variable index out of range");
    j.c_[0] = base;
    if (j.space_->weight(var) <= j.space_->order()) j.c_[j.space_->shift_index(var, 0)] = 1.0;
    return j;
}

Jet& Jet::with_order(int order) {
    if (order < order_) {
        order_ = order;
        truncate_above(order_);
    }
    return *this;
}

void Jet::truncate_above(int order) {
    for (int i = 0; i < space_->size(); ++i)
        if (space_->degree(i) > order) c_[i] = 0.0;
}

void Jet::require_same_space(const Jet& b) const {
    if (space_ == b.space_) return;
    if (!space_ || !b.space_ || !(*space_ == *b.space_))
        throw ConfigError("jet operands live in different jet spaces");
}

double Jet::coeff(std::span<const int> alpha) const {
    const int idx = space_->index_of(alpha);
    if (idx < 0 || space_->degree(idx) > order_)
        throw OrderError("coefficient requested beyond the exact order " + std::to_string(order_) +
                         " of the jet");
    return c_[idx];
}

double Jet::coeff(std::initializer_list<int> alpha) const {
    return coeff(std::span<const int>(alpha.begin(), alpha.size()));
}

double Jet::deriv(std::span<const int> alpha) const {
    double fact = 1.0;
    for (int a : alpha)
        for (int k = 2; k <= a; ++k) fact *= k;
    return coeff(alpha) * fact;
}

double Jet::deriv(std::initializer_list<int> alpha) const {
    return deriv(std::span<const int>(alpha.begin(), alpha.size()));
}

Jet& Jet::operator+=(const Jet& b) {
    require_same_space(b);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += b.c_[i];
    if (b.order_ < order_) with_order(b.order_);
    return *this;
}

Jet& Jet::operator-=(const Jet& b) {
    require_same_space(b);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= b.c_[i];
    if (b.order_ < order_) with_order(b.order_);
    return *this;
}

Jet& Jet::operator*=(const Jet& b) { return *this = *this * b; }
Jet& Jet::operator/=(const Jet& b) { return *this = *this / b; }

Jet& Jet::operator+=(double s) {
    c_[0] += s;
    return *this;
}
Jet& Jet::operator-=(double s) {
    c_[0] -= s;
    return *this;
}
Jet& Jet::operator*=(double s) {
    for (double& x : c_) x *= s;
    return *this;
}
Jet& Jet::operator/=(double s) {
    if (s == 0.0) throw SingularPointError("division of a jet by zero");
    for (double& x : c_) x /= s;
    return *this;
}

Jet operator-(Jet a) {
    for (double& x : a.c_) x = -x;
    return a;
}

Jet operator*(const Jet& a, const Jet& b) {
    a.require_same_space(b);
    Jet r(a.space_);
    r.order_ = std::min(a.order_, b.order_);
    const auto prods = a.space_->products();
    const std::size_t end = a.space_->products_through(r.order_);
    const double* pa = a.c_.data();
    const double* pb = b.c_.data();
    double* pr = r.c_.data();
    for (std::size_t k = 0; k < end; ++k) {
        const auto& p = prods[k];
        pr[p.out] += pa[p.a] * pb[p.b];
    }
    return r;
}

Jet operator/(const Jet& a, const Jet& b) {
    a.require_same_space(b);
    const double b0 = b.c_[0];
    if (b0 == 0.0) throw SingularPointError("division by a jet with zero constant term");
    Jet r(a.space_);
    r.order_ = std::min(a.order_, b.order_);
    const auto& sp = *a.space_;
    for (int k = 0; k < sp.size() && sp.degree(k) <= r.order_; ++k) {
        double s = a.c_[k];
        for (const auto& p : sp.products_into(k))
            if (p.b != 0) s -= r.c_[p.a] * b.c_[p.b];
        r.c_[k] = s / b0;
    }
    return r;
}

Jet operator/(double s, const Jet& a) { return Jet::constant(a.space_, s) / a; }

// ---------------------------------------------------------------------------

std::vector<Jet> seed_variables(std::span<const double> p, const JetSpacePtr& space) {
    if (static_cast<int>(p.size()) != space->num_space())
        throw ConfigError("base point has " + std::to_string(p.size()) +
                          " coordinates but the jet space has " +
                          std::to_string(space->num_space()) + " space variables");
    std::vector<Jet> out;
    out.reserve(p.size());
    for (int i = 0; i < space->num_space(); ++i)
        out.push_back(Jet::variable(space, space->space_var(i), p[i]));
    return out;
}

Jet seed_time(double t0, const JetSpacePtr& space) {
    if (!space->has_time()) throw ConfigError("jet space has no time variable");
    return Jet::variable(space, space->time_var(), t0);
}

Jet seed_deform(const JetSpacePtr& space) {
    if (!space->has_deform()) throw ConfigError("jet space has no deformation variable");
    return Jet::variable(space, space->deform_var(), 0.0);
}

Jet differentiate(const Jet& a, int var) {
    const auto& sp = *a.space();
    const int w = sp.weight(var);
    if (a.order() < w)
        throw OrderError("insufficient jet order: cannot differentiate a jet of order " +
                         std::to_string(a.order()));
    Jet r(a.space());
    auto rc = r.coefficients();
    auto ac = a.coefficients();
    for (int i = 0; i < sp.size(); ++i) {
        const int src = sp.shift_index(var, i);
        if (src >= 0) rc[i] = ac[src] * (sp.exponents(i)[var] + 1);
    }
    r.with_order(a.order() - w);
    return r;
}

Jet partial(const Jet& a, int i) { return differentiate(a, a.space()->space_var(i)); }

Jet partial_t(const Jet& a) {
    if (!a.space()->has_time()) throw ConfigError("jet space has no time variable");
    return differentiate(a, a.space()->time_var());
}

Jet partial_s(const Jet& a) {
    if (!a.space()->has_deform()) throw ConfigError("jet space has no deformation variable");
    return differentiate(a, a.space()->deform_var());
}

Jet integrate(const Jet& a, int var) {
    const auto& sp = *a.space();
    Jet r(a.space());
    auto rc = r.coefficients();
    auto ac = a.coefficients();
    for (int i = 0; i < sp.size(); ++i) {
        const int dst = sp.shift_index(var, i);
        if (dst >= 0) rc[dst] = ac[i] / (sp.exponents(i)[var] + 1);
    }
    r.with_order(std::min(sp.order(), a.order() + sp.weight(var)));
    return r;
}

Jet restrict_to_slice(const Jet& a, int var) {
    Jet r = a;
    const auto& sp = *a.space();
    for (int i = 0; i < sp.size(); ++i)
        if (sp.exponents(i)[var] != 0) r[i] = 0.0;
    return r;
}

std::vector<Jet> propagate_in_time(const std::vector<Jet>& initial, const JetSystem& rhs) {
    if (initial.empty()) return {};
    const auto& sp = initial.front().space();
    if (!sp->has_time()) throw ConfigError("time propagation needs a jet space with a time variable");
    const int tv = sp->time_var();
    std::vector<Jet> slice;
    slice.reserve(initial.size());
    for (const auto& a : initial) slice.push_back(restrict_to_slice(a, tv));
    std::vector<Jet> state = slice;
    const int passes = sp->order() / sp->weight(tv) + 1;
    for (int pass = 0; pass < passes; ++pass) {
        auto d = rhs(state);
        if (d.size() != state.size()) throw ConfigError("propagation right-hand side has the wrong size");
        for (std::size_t k = 0; k < state.size(); ++k) state[k] = slice[k] + integrate(d[k], tv);
    }
    return state;
}

Jet constant_like(const Jet& proto, double value) { return Jet::constant(proto.space(), value); }

Jet analytic(AnalyticFn fn, const Jet& a, double exponent) {
    const double a0 = a.value();
    const int k_max = a.order();
    std::vector<double> d(k_max + 1);
    switch (fn) {
    case AnalyticFn::exp: {
        double f = std::exp(a0);
        for (int k = 0; k <= k_max; ++k) {
            d[k] = f;
            f /= (k + 1);
        }
        break;
    }
    case AnalyticFn::log:
        if (!(a0 > 0.0)) throw SingularPointError("log of a jet with non-positive constant term");
        d[0] = std::log(a0);
        for (int k = 1; k <= k_max; ++k)
            d[k] = ((k % 2) ? 1.0 : -1.0) / (k * std::pow(a0, k));
        break;
    case AnalyticFn::sqrt:
        exponent = 0.5;
        [[fallthrough]];
    case AnalyticFn::pow_real: {
        const bool nonneg_int = exponent >= 0 && std::floor(exponent) == exponent;
        if (!(a0 > 0.0) && !(nonneg_int && a0 == 0.0) && !(nonneg_int && a0 < 0.0))
            throw SingularPointError("power of a jet with non-positive constant term");
        if (a0 == 0.0) {
            // non-negative integer power of a jet vanishing at the base point
            for (int k = 0; k <= k_max; ++k) d[k] = (k == exponent) ? 1.0 : 0.0;
            break;
        }
        double binom = 1.0;
        for (int k = 0; k <= k_max; ++k) {
            d[k] = binom * std::pow(a0, exponent - k);
            binom *= (exponent - k) / (k + 1);
        }
        break;
    }
    case AnalyticFn::sin:
    case AnalyticFn::cos: {
        const double s = std::sin(a0), c = std::cos(a0);
        // derivatives cycle through sin, cos, -sin, -cos
        const double cyc_sin[4] = {s, c, -s, -c};
        const double cyc_cos[4] = {c, -s, -c, s};
        double fact = 1.0;
        for (int k = 0; k <= k_max; ++k) {
            if (k > 0) fact *= k;
            d[k] = (fn == AnalyticFn::sin ? cyc_sin[k % 4] : cyc_cos[k % 4]) / fact;
        }
        break;
    }
    }
    Jet tail = a;
    tail[0] = 0.0;
    Jet r = Jet::constant(a.space(), d[k_max]);
    for (int k = k_max - 1; k >= 0; --k) {
        r = r * tail;
        r += d[k];
    }
    r.with_order(a.order());
    return r;
}

Jet exp(const Jet& a) { return analytic(AnalyticFn::exp, a); }
Jet log(const Jet& a) { return analytic(AnalyticFn::log, a); }
Jet sqrt(const Jet& a) { return analytic(AnalyticFn::sqrt, a); }
Jet pow(const Jet& a, double exponent) { return analytic(AnalyticFn::pow_real, a, exponent); }
Jet sin(const Jet& a) { return analytic(AnalyticFn::sin, a); }
Jet cos(const Jet& a) { return analytic(AnalyticFn::cos, a); }

double value_of(const Jet& a) { return a.value(); }

double max_abs(const Jet& a) {
    double m = 0.0;
    const auto& sp = *a.space();
    for (int i = 0; i < sp.size() && sp.degree(i) <= a.order(); ++i) m = std::max(m, std::abs(a[i]));
    return m;
}

double min_value(const Jet& a) { return a.value(); }

std::string to_string(const Jet& a) {
    std::ostringstream os;
    os.precision(17);
    const auto& sp = *a.space();
    os << "Jet(order " << a.order() << ") {";
    bool first = true;
    for (int i = 0; i < sp.size() && sp.degree(i) <= a.order(); ++i) {
        if (a[i] == 0.0) continue;
        if (!first) os << ", ";
        first = false;
        os << "[";
        auto e = sp.exponents(i);
        for (int v = 0; v < sp.num_vars(); ++v) os << (v ? "," : "") << int(e[v]);
        os << "]:" << a[i];
    }
    os << "}";
    return os.str();
}

} // namespace hl
