#include <harnacklab/harnack.hpp>

#include <cmath>

namespace hl {

namespace {

double av(const Jet& a) { return std::abs(a.value()); }

} // namespace

Jet heat_operator(const Jet& phi, const JetPack& cp) { return partial_t(phi) - laplacian(phi, cp); }

JetTensor time_derivative(const JetTensor& x) {
    JetTensor d = x;
    for (auto& c : d.components()) c = partial_t(c);
    return d;
}

ZEvolutionScales z_evolution_scales(const JetTensor& h, const JetTensor& x, const JetTensor& dxdt,
                                    const JetPack& cp, const MatrixHarnack<Jet>& mh) {
    const int n = cp.dim;
    const auto hu = raise_both(h, cp);
    const auto dx = covariant_derivative(x, cp);
    const auto dh = covariant_derivative(h, cp);
    const auto divh = divergence(h, cp);
    const auto ddivh = covariant_derivative(divh, cp);
    const auto lap_x = laplacian(x, cp);
    ZEvolutionScales s;

    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            double f = av(mh.M(p, q));
            for (int i = 0; i < n; ++i) {
                f += 2.0 * av(mh.P(i, p, q)) * av(x(i));
                for (int j = 0; j < n; ++j) f += av(cp.riemann(p, i, j, q)) * av(x(i)) * av(x(j));
            }
            s.t1 += 2.0 * av(hu(p, q)) * f;
        }

    // |a(j, i)| bounded by |grad_j X^i| + |R^i_j|
    auto a = [&](int j, int i) { return av(dx(j, i)) + av(cp.ricci_mixed(j, i)); };
    // |grad_k b_i| bounded by its three product-rule parts
    auto db = [&](int k, int i) {
        double v = av(ddivh(k, i));
        for (int l = 0; l < n; ++l) v += av(dh(k, i, l)) * av(x(l)) + av(h(i, l)) * av(dx(k, l));
        return v;
    };
    auto b = [&](int j) {
        double v = av(divh(j));
        for (int i = 0; i < n; ++i) v += av(h(i, j)) * av(x(i));
        return v;
    };

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) s.t2 += 4.0 * a(j, i) * av(cp.inverse(j, k)) * db(k, i);

    for (int j = 0; j < n; ++j) {
        double c = av(dxdt(j)) + av(lap_x(j));
        for (int k = 0; k < n; ++k) c += av(cp.ricci_mixed(k, j)) * av(x(k));
        s.t3 += 2.0 * b(j) * c;
    }

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q) s.t4 += 2.0 * av(h(i, j)) * a(p, i) * av(cp.inverse(p, q)) * a(q, j);
    return s;
}

ShrinkerQuantities shrinker_W(const JetTensor& h, const Background& bg) {
    if (bg.cls != SolitonClass::shrinking) throw DomainError("the shrinker quantity needs a shrinking soliton");
    if (!(bg.time < 0.0)) throw DomainError("the shrinker quantity needs t < 0");
    const auto x = gradient(bg.f, bg.cp) * -1.0;
    ShrinkerQuantities q;
    q.Z = linear_trace_Z(h, x, bg.cp);
    q.H = trace(h, bg.cp);
    q.W = bg.t * bg.t * (q.Z + q.H / (2.0 * bg.t));
    return q;
}

PerelmanQuantities perelman_quantities(const Jet& f, const JetPack& cp) {
    const auto df = differential(f, cp);
    const Jet lap_f = laplacian(f, cp);
    const Jet grad2 = form_inner(df, df, cp);
    PerelmanQuantities q;
    q.scalar = cp.scalar + 2.0 * lap_f - grad2;
    const Jet ef = exp(-f);
    q.V = (2.0 * lap_f - grad2 + cp.scalar) * ef;
    if (f.space()->has_time()) q.minus_dt_v = -partial_t(q.V).value();
    q.minus_lap_v = -laplacian(q.V, cp).value();
    q.r_v = (cp.scalar * q.V).value();
    const auto a = cp.ricci + hessian(f, cp);
    q.rhs = -2.0 * (norm2(a, cp) * ef).value();
    return q;
}

LiYauQuantities li_yau_quantities(const Jet& u, double eps, const Jet& f, const JetPack& cp) {
    if (eps == 0.0) throw ConfigError("eps must be nonzero");
    if (!(u.value() > 0.0)) throw DomainError("u must be positive");
    LiYauQuantities s;
    s.eps = eps;
    s.v = log(u);
    s.grad_v = gradient(s.v, cp);
    s.hess_v = hessian(s.v, cp);
    s.grad_f = gradient(f, cp);
    const Jet lap_v = trace(s.hess_v, cp);
    const Jet dv2 = pair(differential(s.v, cp), s.grad_v);
    s.Q = lap_v + cp.scalar;
    s.P = 2.0 * s.Q + dv2 + cp.scalar;
    s.P_eps = 2.0 * lap_v + dv2 + (2.0 * eps + 1.0) * cp.scalar;
    return s;
}

Jet apply_L(const Jet& phi, const LiYauQuantities& s, const JetPack& cp) {
    return 0.5 * (partial_t(phi) - laplacian(phi, cp) / s.eps) - pair(differential(phi, cp), s.grad_v) / s.eps;
}

} // namespace hl
