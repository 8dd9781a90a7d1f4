#include <harnacklab/grid.hpp>

#include <harnacklab/fields.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace hl {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class Op>
GridField stencil(const GridField& a, int axis, Op op) {
    const int n = a.n();
    GridField out(n);
    auto w = [n](int k) { return (k % n + n) % n; };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (axis == 0)
                out(i, j) = op(a(w(i - 2), j), a(w(i - 1), j), a(i, j), a(w(i + 1), j), a(w(i + 2), j));
            else
                out(i, j) = op(a(i, w(j - 2)), a(i, w(j - 1)), a(i, j), a(i, w(j + 1)), a(i, w(j + 2)));
        }
    return out;
}

template <class Fn>
GridField map(GridField a, Fn fn) {
    for (auto& v : a.data()) v = fn(v);
    return a;
}

GridField sample_trig(int n, const TrigPolynomial& p) {
    return GridField::sample(n, [&p](double x, double y) { return p(x, y); });
}

/// Trigonometric polynomial with coefficient sum 1 (so |p| <= 1).
TrigPolynomial unit_trig(RandomStream& rng, int bandlimit) {
    auto p = random_trig(rng, bandlimit, 1.0);
    double l1 = 0.0;
    for (const auto& m : p.terms) l1 += std::abs(m.a) + std::abs(m.b);
    for (auto& m : p.terms) {
        m.a /= l1;
        m.b /= l1;
    }
    return p;
}

GridTensor sym2(const GridField& a00, const GridField& a01, const GridField& a11) {
    GridTensor t(2, {Slot::lower, Slot::lower}, constant_like(a00, 0.0));
    t(0, 0) = a00;
    t(0, 1) = a01;
    t(1, 0) = a01;
    t(1, 1) = a11;
    return t;
}

// RK4 state packing: [g00, g01, g11, h00, h01, h11, u]
using Packed = std::vector<GridField>;

Packed pack(const GridState& s) { return {s.g(0, 0), s.g(0, 1), s.g(1, 1), s.h(0, 0), s.h(0, 1), s.h(1, 1), s.u}; }

void unpack(const Packed& p, GridState& s) {
    s.g = sym2(p[0], p[1], p[2]);
    s.h = sym2(p[3], p[4], p[5]);
    s.u = p[6];
}

Packed rhs(const Packed& p, const GridState& s) {
    const GridField zero = constant_like(p[0], 0.0);
    if (!s.evolve_metric) {
        return {zero,
                zero,
                zero,
                flat_laplacian(p[3]),
                flat_laplacian(p[4]),
                flat_laplacian(p[5]),
                flat_laplacian(p[6]) / s.eps};
    }
    const auto cp = curvature(sym2(p[0], p[1], p[2]));
    const auto lh = lichnerowicz(sym2(p[3], p[4], p[5]), cp);
    return {-2.0 * cp.ricci(0, 0),
            -2.0 * cp.ricci(0, 1),
            -2.0 * cp.ricci(1, 1),
            lh(0, 0),
            lh(0, 1),
            lh(1, 1),
            laplacian(p[6], cp) / s.eps + cp.scalar * p[6]};
}

Packed axpy(const Packed& y, double a, const Packed& k) {
    Packed out = y;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += k[i] * a;
    return out;
}

double stable_dt(const GridState& s) {
    const double dx = kTwoPi / s.n;
    return s.cfl * dx * dx;
}

/// Snapshot quantities needed by one identity.
struct Slice {
    GridState state;
    GridField z;  ///< the quantity whose time derivative enters (Z or Q)
};

double band_hi_for(const std::string& id) {
    return id == "CHK-EQ1" ? std::numeric_limits<double>::infinity() : 4.7;
}
double band_lo_for(const std::string& id) { return id == "CHK-EQ1" ? 1.8 : 3.3; }

} // namespace

// ---------------------------------------------------------------- GridField

GridField::GridField(int n, double value) : n_(n), data_(static_cast<std::size_t>(n) * n, value) {
    if (n < 1) throw ConfigError("grid resolution must be positive");
}

GridField GridField::sample(int n, const std::function<double(double, double)>& fn) {
    GridField f(n);
    const double dx = kTwoPi / n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) f(i, j) = fn(i * dx, j * dx);
    return f;
}

double GridField::dx() const { return kTwoPi / n_; }

void GridField::require_same(const GridField& b) const {
    if (b.n_ != n_) throw ConfigError("grid resolution mismatch");
}

GridField& GridField::operator+=(const GridField& b) {
    require_same(b);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += b.data_[k];
    return *this;
}
GridField& GridField::operator-=(const GridField& b) {
    require_same(b);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= b.data_[k];
    return *this;
}
GridField& GridField::operator*=(const GridField& b) {
    require_same(b);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] *= b.data_[k];
    return *this;
}
GridField& GridField::operator/=(const GridField& b) {
    require_same(b);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] /= b.data_[k];
    return *this;
}
GridField& GridField::operator+=(double s) {
    for (auto& v : data_) v += s;
    return *this;
}
GridField& GridField::operator*=(double s) {
    for (auto& v : data_) v *= s;
    return *this;
}

GridField operator/(double s, const GridField& a) {
    return map(a, [s](double v) { return s / v; });
}

GridField partial(const GridField& a, int axis) {
    const double c = 1.0 / (12.0 * a.dx());
    return stencil(a, axis, [c](double m2, double m1, double, double p1, double p2) {
        return c * ((m2 - p2) + 8.0 * (p1 - m1));
    });
}

GridField second_partial(const GridField& a, int axis) {
    const double c = 1.0 / (12.0 * a.dx() * a.dx());
    return stencil(a, axis, [c](double m2, double m1, double z, double p1, double p2) {
        return c * (-(m2 + p2) + 16.0 * (m1 + p1) - 30.0 * z);
    });
}

GridField flat_laplacian(const GridField& a) { return second_partial(a, 0) + second_partial(a, 1); }

GridField constant_like(const GridField& a, double value) { return GridField(a.n(), value); }

double max_abs(const GridField& a) {
    double m = 0.0;
    for (double v : a.data()) m = std::max(m, std::abs(v));
    return m;
}

double min_value(const GridField& a) { return *std::min_element(a.data().begin(), a.data().end()); }

GridField sqrt(GridField a) {
    return map(std::move(a), [](double v) { return std::sqrt(v); });
}
GridField log(GridField a) {
    return map(std::move(a), [](double v) { return std::log(v); });
}
GridField exp(GridField a) {
    return map(std::move(a), [](double v) { return std::exp(v); });
}

double integral(const GridField& a) {
    double s = 0.0;
    for (double v : a.data()) s += v;
    return s * a.dx() * a.dx();
}

// ------------------------------------------------------------ vector field

GridTensor GridVectorField::at(int n, double t) const {
    GridTensor x(2, {Slot::upper}, GridField(n));
    for (int i = 0; i < 2; ++i) x(i) = sample_trig(n, a[i]) + t * sample_trig(n, b[i]);
    return x;
}

GridTensor GridVectorField::rate(int n) const {
    GridTensor x(2, {Slot::upper}, GridField(n));
    for (int i = 0; i < 2; ++i) x(i) = sample_trig(n, b[i]);
    return x;
}

GridVectorField grid_vector_field(std::uint64_t seed, int bandlimit) {
    RandomStream rng(seed, 0, stream_tag::vector);
    GridVectorField v;
    for (int i = 0; i < 2; ++i) {
        v.a[i] = unit_trig(rng, bandlimit);
        v.b[i] = unit_trig(rng, bandlimit);
    }
    return v;
}

// ------------------------------------------------------------------- state

GridState init_torus(const TorusOptions& o) {
    if (o.n < 16) throw ConfigError("grid resolution must be at least 16");
    if (o.bandlimit < 1 || o.bandlimit > o.n / 4) throw ConfigError("field bandlimit must be in [1, N/4]");
    if (!(o.cfl > 0.0)) throw ConfigError("the CFL coefficient must be positive");
    if (o.eps == 0.0) throw ConfigError("eps must be nonzero");
    GridState s;
    s.n = o.n;
    s.cfl = o.cfl;
    s.eps = o.eps;
    s.evolve_metric = o.amplitude != 0.0;
    const GridField one(o.n, 1.0);
    if (s.evolve_metric) {
        const auto tp = torus_perturbation(o.amplitude, o.metric_seed);
        s.g = sym2(one + o.amplitude * sample_trig(o.n, tp.p00), o.amplitude * sample_trig(o.n, tp.p01),
                   one + o.amplitude * sample_trig(o.n, tp.p11));
        const GridField det = s.g(0, 0) * s.g(1, 1) - s.g(0, 1) * s.g(0, 1);
        if (!(min_value(s.g(0, 0)) > 0.0) || !(min_value(det) > 0.0))
            throw DomainError("perturbation amplitude too large: the metric is not positive-definite on the grid");
    } else {
        s.g = sym2(one, constant_like(one, 0.0), one);
    }
    RandomStream hr(o.field_seed, 0, stream_tag::perturbation);
    const auto p00 = random_trig(hr, o.bandlimit, 1.0);
    const auto p01 = random_trig(hr, o.bandlimit, 1.0);
    const auto p11 = random_trig(hr, o.bandlimit, 1.0);
    s.h = sym2(sample_trig(o.n, p00), sample_trig(o.n, p01), sample_trig(o.n, p11));
    RandomStream ur(o.field_seed, 0, stream_tag::scalar);
    s.u = o.u_offset + sample_trig(o.n, unit_trig(ur, o.bandlimit));
    if (!(min_value(s.u) > 0.0)) throw DomainError("u must be positive on the grid");
    s.f = GridField(o.n, 0.0);
    s.dt = stable_dt(s);
    return s;
}

void step(GridState& s) {
    if (!(s.dt > 0.0)) throw ConfigError("time step must be positive");
    if (s.dt > stable_dt(s) * (1.0 + 1e-12))
        throw ConfigError("time step violates the CFL bound dt <= cfl * dx^2");
    const Packed y = pack(s);
    const double dt = s.dt;
    const Packed k1 = rhs(y, s);
    const Packed k2 = rhs(axpy(y, 0.5 * dt, k1), s);
    const Packed k3 = rhs(axpy(y, 0.5 * dt, k2), s);
    const Packed k4 = rhs(axpy(y, dt, k3), s);
    Packed next = y;
    for (std::size_t i = 0; i < next.size(); ++i)
        next[i] += (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (!(min_value(next[6]) > 0.0)) throw DomainError("u lost positivity at t = " + std::to_string(s.t + dt));
    unpack(next, s);
    s.t += dt;
}

void advance_to(GridState& s, double t_end) {
    const double span = t_end - s.t;
    if (span <= 0.0) return;
    const double steps = std::ceil(span / stable_dt(s) - 1e-9);
    s.dt = span / steps;
    for (int k = 0; k < static_cast<int>(steps); ++k) step(s);
    s.t = t_end;
}

// ------------------------------------------------------------- residuals

const char* to_string(GridStatus s) {
    switch (s) {
    case GridStatus::pass: return "pass";
    case GridStatus::fail: return "fail";
    case GridStatus::inconclusive: return "inconclusive";
    }
    return "?";
}

const std::vector<std::string>& grid_check_ids() {
    static const std::vector<std::string> ids = {"CHK-L1", "CHK-B2", "CHK-EQ1"};
    return ids;
}

ConvergenceRow grid_residual(const std::string& id, int n, const GridStudyOptions& opts) {
    const auto& ids = grid_check_ids();
    if (std::find(ids.begin(), ids.end(), id) == ids.end())
        throw UnknownNameError("no grid study for '" + id + "'; valid ids: CHK-L1, CHK-B2, CHK-EQ1");
    TorusOptions to;
    to.n = n;
    to.cfl = opts.cfl;
    to.metric_seed = opts.metric_seed;
    to.field_seed = opts.field_seed;
    to.amplitude = id == "CHK-EQ1" ? opts.amplitude : 0.0;
    GridState s = init_torus(to);
    const auto xfield = grid_vector_field(opts.field_seed);

    // Uniform steps landing exactly on t*, with two extra steps on each side.
    const double dx = kTwoPi / n;
    const int steps = static_cast<int>(std::ceil(opts.t_star / (opts.cfl * dx * dx) - 1e-9));
    if (steps < 2) throw ConfigError("t* is too small for the 5-point time derivative");
    s.dt = opts.t_star / steps;

    auto quantity = [&](const GridState& st) {
        const auto cp = curvature(st.g);
        if (id == "CHK-B2") return laplacian(log(st.u), cp) + cp.scalar;
        GridTensor x = id == "CHK-EQ1" ? xfield.at(n, st.t) : GridTensor(2, {Slot::upper}, GridField(n));
        return linear_trace_Z(st.h, x, cp);
    };

    for (int k = 0; k < steps - 2; ++k) step(s);
    std::vector<Slice> slices;
    for (int k = 0; k < 5; ++k) {
        slices.push_back({s, quantity(s)});
        if (k < 4) step(s);
    }
    const double dt = s.dt;
    const GridField dzdt = ((slices[0].z - slices[4].z) + 8.0 * (slices[3].z - slices[1].z)) / (12.0 * dt);
    const GridState& c = slices[2].state;
    const GridField& z = slices[2].z;
    const auto cp = curvature(c.g);

    GridField lhs, rhs_sum, mag;
    if (id == "CHK-B2") {
        // LQ = |grad grad v|^2 + <Rc, grad grad v> + Rc(grad(v - f), grad(v - f))
        const GridField v = log(c.u);
        const auto grad_v = gradient(v, cp);
        const auto hess_v = hessian(v, cp);
        const auto gvf = grad_v - gradient(c.f, cp);
        const GridField lap_q = laplacian(z, cp);
        const GridField adv = pair(differential(z, cp), grad_v);
        lhs = 0.5 * (dzdt - lap_q) - adv;
        const GridField t1 = norm2(hess_v, cp), t2 = inner(cp.ricci, hess_v, cp), t3 = apply(cp.ricci, gvf, gvf);
        rhs_sum = t1 + t2 + t3;
        mag = 0.5 * (map(dzdt, [](double a) { return std::abs(a); }) + map(lap_q, [](double a) { return std::abs(a); })) +
              map(adv, [](double a) { return std::abs(a); }) + map(t1, [](double a) { return std::abs(a); }) +
              map(t2, [](double a) { return std::abs(a); }) + map(t3, [](double a) { return std::abs(a); });
    } else {
        const GridField lap_z = laplacian(z, cp);
        lhs = dzdt - lap_z;
        mag = map(dzdt, [](double a) { return std::abs(a); }) + map(lap_z, [](double a) { return std::abs(a); });
        rhs_sum = constant_like(z, 0.0);
        if (id == "CHK-EQ1") {
            const auto x = xfield.at(n, c.t);
            const auto terms = z_evolution_terms(c.h, x, xfield.rate(n), cp, matrix_harnack(cp));
            for (const GridField* t : {&terms.t1, &terms.t2, &terms.t3, &terms.t4}) {
                rhs_sum += *t;
                mag += map(*t, [](double a) { return std::abs(a); });
            }
        }
    }
    ConvergenceRow row;
    row.n = n;
    row.residual = max_abs(lhs - rhs_sum);
    row.scale = max_abs(mag);
    row.observed_order = std::numeric_limits<double>::quiet_NaN();
    return row;
}

ConvergenceReport dynamic_residual(const std::string& id, const std::vector<int>& resolutions,
                                   const GridStudyOptions& opts) {
    if (resolutions.size() < 3) throw ConfigError("a convergence study needs at least 3 resolutions");
    for (std::size_t k = 1; k < resolutions.size(); ++k)
        if (resolutions[k] != 2 * resolutions[k - 1])
            throw ConfigError("each resolution must double the previous one");
    const auto start = std::chrono::steady_clock::now();
    ConvergenceReport rep;
    rep.check_id = id;
    rep.band_lo = band_lo_for(id);
    rep.band_hi = band_hi_for(id);
    for (int n : resolutions) rep.rows.push_back(grid_residual(id, n, opts));

    bool in_band = true;
    for (std::size_t k = 1; k < rep.rows.size(); ++k) {
        auto& r = rep.rows[k];
        const double prev = rep.rows[k - 1].residual;
        if (!(r.residual < prev)) rep.monotone = false;
        r.observed_order = std::log2(prev / r.residual);
        if (!(r.observed_order >= rep.band_lo && r.observed_order <= rep.band_hi)) in_band = false;
    }
    // least-squares slope of log2 residual against log2 N
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(rep.rows.size());
    for (const auto& r : rep.rows) {
        const double x = std::log2(static_cast<double>(r.n)), y = std::log2(r.residual);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    rep.fitted_order = -(m * sxy - sx * sy) / (m * sxx - sx * sx);

    if (!rep.monotone) {
        rep.status = GridStatus::inconclusive;
        rep.note = "residuals do not decrease monotonically under refinement";
    } else if (in_band) {
        rep.status = GridStatus::pass;
    } else {
        rep.status = GridStatus::fail;
        std::ostringstream os;
        os << "observed order outside [" << rep.band_lo << ", " << rep.band_hi << "]";
        rep.note = os.str();
    }
    rep.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

std::string to_csv(const ConvergenceReport& r) {
    std::ostringstream os;
    os.precision(17);
    os << "N,residual,observed_order\n";
    for (const auto& row : r.rows) {
        os << row.n << ',' << row.residual << ',';
        if (!std::isnan(row.observed_order)) os << row.observed_order;
        os << '\n';
    }
    return os.str();
}

} // namespace hl
