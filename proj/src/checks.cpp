#include <harnacklab/checks.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

namespace hl {

namespace {

using Parts = std::vector<NamedResidual>;

// ---------------------------------------------------------------- helpers

Background static_bg(const PointContext& c) {
    return make_background(c.spec, c.point.x, c.point.t, {c.order, false, false});
}

Background timed_bg(const PointContext& c) {
    return make_background(c.spec, c.point.x, c.point.t, {c.order, true, false});
}

JetTensor random_h(const PointContext& c, const Background& bg) {
    return evaluate(make_perturbation(PerturbationKind::random_jet_seed, c.seed), bg, c.index);
}

JetTensor random_x(const PointContext& c, const Background& bg) {
    VectorFieldSpec v;
    v.kind = VectorKind::random_polynomial;
    v.seed = c.seed;
    return evaluate(v, bg, c.index);
}

JetTensor neg_grad_f(const Background& bg) { return gradient(bg.f, bg.cp) * -1.0; }

Jet random_u(const PointContext& c, const Background& bg, double eps) {
    ScalarFieldSpec s;
    s.seed = c.seed;
    return propagate_scalar(evaluate(s, bg, c.index), EvolutionPde::scalar_heat_eps, bg, eps);
}

/// Rc(grad a, grad a) for a vector field given by its gradient.
Jet ricci_on(const JetPack& cp, const JetTensor& v) { return apply(cp.ricci, v, v); }

std::vector<double> z_term_values(const ZTerms<Jet>& z) {
    return {z.div_div.value(), z.ricci_h.value(), z.div_x.value(), z.h_xx.value()};
}

Residual& add_terms(Residual& r, const ZTerms<Jet>& z, bool lhs_side, double factor = 1.0) {
    for (double v : z_term_values(z)) lhs_side ? r.lhs(factor * v) : r.rhs(factor * v);
    return r;
}

std::string eps_label(double eps) {
    std::ostringstream os;
    os << "eps=" << eps;
    return os.str();
}

// ---------------------------------------------------------- applicability

std::string need_soliton(const SolitonSpec& s) {
    if (!s.jet_checks) return "grid-only flow";
    if (!s.is_soliton()) return "not a soliton";
    return {};
}

std::string need_steady(const SolitonSpec& s) {
    auto r = need_soliton(s);
    if (r.empty() && s.cls != SolitonClass::steady) r = "needs a steady soliton";
    return r;
}

std::string need_shrinking(const SolitonSpec& s) {
    auto r = need_soliton(s);
    if (r.empty() && s.cls != SolitonClass::shrinking) r = "needs a shrinking soliton";
    return r;
}

std::string need_unit(const SolitonSpec& s) {
    auto r = need_soliton(s);
    if (r.empty() && !s.unit_normalized) r = "needs the normalization R + |grad f|^2 = 1";
    return r;
}

std::string need_steady_gradient_rule(const SolitonSpec& s) {
    auto r = need_steady(s);
    if (r.empty() && s.rule != PotentialRule::gradient_squared) r = "needs df/dt = |grad f|^2";
    return r;
}

// ------------------------------------------------------------- evaluators

Parts eval_s1(const PointContext& c) { return soliton_residual(c.spec, c.point.x, c.point.t, c.order); }
Parts eval_s2(const PointContext& c) { return structural_identities(c.spec, c.point.x, c.point.t, c.order); }
Parts eval_s3(const PointContext& c) { return normalization_identities(c.spec, c.point.x, c.point.t, c.order); }

/// M_pq (+ R_pq / 2t) = P_ipq grad^i f
Parts eval_h1(const PointContext& c) {
    auto bg = static_bg(c);
    const auto& cp = bg.cp;
    const int n = cp.dim;
    const auto mh = matrix_harnack(cp);
    const auto df = gradient(bg.f, cp);
    Residual r(n * n);
    std::vector<double> pdf(n * n);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            Jet s = constant_like(bg.f, 0.0);
            for (int i = 0; i < n; ++i) s += mh.P(i, p, q) * df(i);
            pdf[p * n + q] = s.value();
        }
    r.lhs(values(mh.M)).rhs(pdf);
    if (c.spec.cls == SolitonClass::shrinking) r.lhs(values(cp.ricci * (1.0 / (2.0 * c.point.t))));
    return {named("M_equals_P_grad_f", r)};
}

/// P_ipq = Rm_pijq grad^j f
Parts eval_h2(const PointContext& c) {
    auto bg = static_bg(c);
    const auto& cp = bg.cp;
    const int n = cp.dim;
    const auto mh = matrix_harnack(cp);
    const auto df = gradient(bg.f, cp);
    std::vector<double> rhs(n * n * n);
    for (int i = 0; i < n; ++i)
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) {
                Jet s = constant_like(bg.f, 0.0);
                for (int j = 0; j < n; ++j) s += cp.riemann(p, i, j, q) * df(j);
                rhs[(i * n + p) * n + q] = s.value();
            }
    // P_ipq = d_rc(i, p, q) - d_rc(p, q, i); both pieces count towards the scale
    const auto sc = covariant_derivative_scale(cp.ricci, cp);
    std::vector<double> scale(n * n * n);
    for (int i = 0; i < n; ++i)
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) scale[(i * n + p) * n + q] = sc[(i * n + p) * n + q] + sc[(p * n + q) * n + i];
    Residual r(n * n * n);
    r.lhs(values(mh.P)).rhs(rhs).scale(scale);
    return {named("P_equals_Rm_grad_f", r)};
}

/// grad_j grad^i f + R^i_j (+ delta/2t) = 0 and the heat equation for grad f.
Parts eval_h3(const PointContext& c) {
    auto bg = timed_bg(c);
    const auto& cp = bg.cp;
    const int n = cp.dim;
    const double t = c.point.t;
    const bool shrink = c.spec.cls == SolitonClass::shrinking;
    const auto hess = hessian(bg.f, cp);
    std::vector<double> mixed(n * n), ric(n * n), lam(n * n, 0.0);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            Jet s = constant_like(bg.f, 0.0);
            for (int k = 0; k < n; ++k) s += hess(j, k) * cp.inverse(k, i);
            mixed[j * n + i] = s.value();
            ric[j * n + i] = cp.ricci_mixed(j, i).value();
            if (shrink && i == j) lam[j * n + i] = 1.0 / (2.0 * t);
        }
    Residual factor(n * n);
    factor.lhs(mixed).lhs(ric).lhs(lam);

    const auto y = gradient(bg.f, cp);
    const auto dy = time_derivative(y);
    const auto lap = laplacian(y, cp);
    std::vector<double> a(n), b(n), rc(n), tail(n);
    for (int j = 0; j < n; ++j) {
        Jet s = constant_like(bg.f, 0.0);
        for (int k = 0; k < n; ++k) s += cp.ricci_mixed(k, j) * y(k);
        a[j] = dy(j).value();
        b[j] = -lap(j).value();
        rc[j] = s.value();
        tail[j] = -y(j).value() / t;
    }
    Residual heat(n);
    heat.lhs(a).lhs(b).rhs(rc);
    if (shrink) heat.rhs(tail);
    return {named("hessian_plus_ricci", factor), named("heat_equation_grad_f", heat)};
}

/// Z(Rc, -grad f) (+ R/2t) = 0
Parts eval_h4(const PointContext& c) {
    auto bg = static_bg(c);
    const auto z = linear_trace_terms(bg.cp.ricci, neg_grad_f(bg), bg.cp);
    Residual r;
    add_terms(r, z, true);
    if (c.spec.cls == SolitonClass::shrinking) r.lhs(bg.cp.scalar.value() / (2.0 * c.point.t));
    return {named("Z_ricci_vanishes", r)};
}

/// Laplacian R + 2|Rc|^2 + 2<grad R, X> + 2 Rc(X, X) = 2 Z(Rc, X)
Parts eval_h4t(const PointContext& c) {
    auto bg = static_bg(c);
    const auto x = random_x(c, bg);
    const auto th = trace_harnack_terms(x, bg.cp);
    const auto z = linear_trace_terms(bg.cp.ricci, x, bg.cp);
    Residual r;
    r.lhs(th.laplacian_r.value()).lhs(th.ricci_sq.value()).lhs(th.grad_r_x.value()).lhs(th.ricci_xx.value());
    add_terms(r, z, false, 2.0);
    return {named("trace_harnack_equals_2Z", r)};
}

/// (d/dt - Laplacian) Z(h, X) = t1 + t2 + t3 + t4
Parts eval_eq1(const PointContext& c) {
    auto bg = timed_bg(c);
    const auto& cp = bg.cp;
    const auto h = propagate_lichnerowicz(random_h(c, bg), bg);
    const auto x = random_x(c, bg);
    const Jet z = linear_trace_Z(h, x, cp);
    const auto mh = matrix_harnack(cp);
    const auto terms = z_evolution_terms(h, x, time_derivative(x), cp, mh);
    Residual r;
    r.lhs(partial_t(z).value()).lhs(-laplacian(z, cp).value());
    r.rhs(terms.t1.value()).rhs(terms.t2.value()).rhs(terms.t3.value()).rhs(terms.t4.value());
    Parts out{named("Z_evolution", r)};
    if (c.spec.cls == SolitonClass::steady) {
        const auto tw = termwise_z_evolution(c.spec, c.point.x, c.point.t, c.order);
        for (int k = 0; k < 4; ++k)
            out.push_back({"term" + std::to_string(k + 1) + "_vanishes_for_ricci", tw.relative(k), std::abs(tw.t[k])});
    }
    return out;
}

/// (d/dt - Laplacian) Z(h, -grad f) = 0
Parts eval_l1(const PointContext& c) {
    auto bg = timed_bg(c);
    const auto h = propagate_lichnerowicz(random_h(c, bg), bg);
    const Jet z = linear_trace_Z(h, neg_grad_f(bg), bg.cp);
    Residual r;
    r.lhs(partial_t(z).value()).rhs(laplacian(z, bg.cp).value());
    return {named("heat_equation_Z", r)};
}

/// Shrinker identities for Y = Z + H/2t and W = t^2 Y, plus the H evolution.
Parts eval_l2(const PointContext& c) {
    auto bg = timed_bg(c);
    const auto& cp = bg.cp;
    const double t = c.point.t;
    const auto h = propagate_lichnerowicz(random_h(c, bg), bg);
    const auto q = shrinker_W(h, bg);
    const Jet y = q.Z + q.H / (2.0 * bg.t);
    const double hr = inner(h, cp.ricci, cp).value();
    Parts out;

    Residual w;
    w.lhs(partial_t(q.W).value()).rhs(laplacian(q.W, cp).value());
    w.scale(2.0 * t * y.value()).scale(t * t * partial_t(y).value()).scale(t * t * laplacian(y, cp).value());
    out.push_back(named("t2_form", w));

    Residual mid;
    mid.lhs(partial_t(y).value()).lhs(-laplacian(y, cp).value()).rhs(-2.0 / t * y.value());
    out.push_back(named("intermediate", mid));

    Residual zf;
    zf.lhs(partial_t(q.Z).value()).lhs(-laplacian(q.Z, cp).value());
    zf.rhs(-2.0 / t * q.Z.value()).rhs(-hr / t).rhs(-q.H.value() / (2.0 * t * t));
    out.push_back(named("Z_evolution_shrinker", zf));

    Residual he;
    he.lhs(partial_t(q.H).value()).lhs(-laplacian(q.H, cp).value()).rhs(2.0 * hr);
    out.push_back(named("H_evolution", he));
    return out;
}

/// d/ds (R + 2 Laplacian f - |grad f|^2) = Z(h, -grad f) - 2 <h, Rc + grad grad f>
/// along g + s h, f + s H/2, and d/ds (e^-f dmu) = 0.
Parts eval_r1(const PointContext& c) {
    auto bg = make_background(c.spec, c.point.x, c.point.t, {c.order, false, true});
    const auto& cp = bg.cp;
    const auto h = random_h(c, bg);
    const Jet s = seed_deform(bg.space);
    const Jet big_h = trace(h, cp);
    const auto cps = curvature(bg.g + h * s);
    const Jet fs = bg.f + 0.5 * s * big_h;
    const auto pq = perelman_quantities(fs, cps);

    const auto z = linear_trace_terms(h, neg_grad_f(bg), cp);
    Residual var;
    var.lhs(partial_s(pq.scalar).value());
    add_terms(var, z, false);
    var.rhs(-2.0 * inner(h, cp.ricci, cp).value()).rhs(-2.0 * inner(h, hessian(bg.f, cp), cp).value());

    const Jet ef = exp(-fs);
    Residual measure;
    measure.lhs((partial_s(ef) * cps.volume_density).value()).lhs((ef * partial_s(cps.volume_density)).value());
    return {named("perelman_scalar_variation", var), named("measure_invariance", measure)};
}

Residual box_star_residual(const PerelmanQuantities& q) {
    Residual r;
    r.lhs(q.minus_dt_v).lhs(q.minus_lap_v).lhs(q.r_v).rhs(q.rhs);
    return r;
}

/// conjugate heat operator on V = (2 Laplacian f - |grad f|^2 + R) e^-f
Parts eval_r2(const PointContext& c) {
    auto bg = timed_bg(c);
    ScalarFieldSpec fs;
    fs.seed = c.seed;
    fs.tag = stream_tag::potential;
    fs.positive = false;
    const Jet f = propagate_scalar(evaluate(fs, bg, c.index), EvolutionPde::conjugate_potential, bg);
    Parts out{named("generic_potential", box_star_residual(perelman_quantities(f, bg.cp)))};
    if (c.spec.cls == SolitonClass::steady) {
        const Jet fsol = propagate_scalar(bg.f, EvolutionPde::conjugate_potential, bg);
        const auto q = perelman_quantities(fsol, bg.cp);
        out.push_back(named("soliton_potential", box_star_residual(q)));
        Residual zero;
        zero.lhs(q.rhs).scale(std::abs(q.minus_dt_v) + std::abs(q.minus_lap_v) + std::abs(q.r_v));
        out.push_back(named("soliton_potential_rhs_zero", zero));
    }
    return out;
}

/// d/dt e^f = Laplacian e^f + R e^f
Parts eval_b1(const PointContext& c) {
    auto bg = timed_bg(c);
    const Jet u = exp(bg.f);
    Residual r;
    r.lhs(partial_t(u).value()).rhs(laplacian(u, bg.cp).value()).rhs((bg.cp.scalar * u).value());
    return {named("exp_f_solves_heat", r)};
}

struct S2Point {
    Background bg;
    LiYauQuantities s;
    JetTensor grad_vf;  ///< grad (v - f)
};

S2Point li_yau_point(const PointContext& c, double eps) {
    auto bg = timed_bg(c);
    auto s = li_yau_quantities(random_u(c, bg, eps), eps, bg.f, bg.cp);
    auto gvf = s.grad_v - s.grad_f;
    return {std::move(bg), std::move(s), std::move(gvf)};
}

/// LQ = |grad grad v|^2 + <Rc, grad grad v> + Rc(grad(v - f), grad(v - f))
Parts eval_b2(const PointContext& c) {
    auto [bg, s, gvf] = li_yau_point(c, 1.0);
    const auto& cp = bg.cp;
    Residual r;
    r.lhs(apply_L(s.Q, s, cp).value());
    r.rhs(norm2(s.hess_v, cp).value()).rhs(inner(cp.ricci, s.hess_v, cp).value()).rhs(ricci_on(cp, gvf).value());
    return {named("LQ", r)};
}

/// L(|grad v|^2 + R) = |Rc|^2 - |grad grad v|^2
Parts eval_b3(const PointContext& c) {
    auto [bg, s, gvf] = li_yau_point(c, 1.0);
    const auto& cp = bg.cp;
    const Jet a = pair(differential(s.v, cp), s.grad_v) + cp.scalar;
    Residual r;
    r.lhs(apply_L(a, s, cp).value()).rhs(norm2(cp.ricci, cp).value()).rhs(-norm2(s.hess_v, cp).value());
    return {named("L_grad_v_squared_plus_R", r)};
}

/// LP = |grad grad v + Rc|^2 + 2 Rc(grad(v - f), grad(v - f)); grad grad v + Rc = grad grad (v - f)
Parts eval_b4(const PointContext& c) {
    auto [bg, s, gvf] = li_yau_point(c, 1.0);
    const auto& cp = bg.cp;
    const auto a = s.hess_v + cp.ricci;
    Residual r;
    r.lhs(apply_L(s.P, s, cp).value()).rhs(norm2(a, cp).value()).rhs(2.0 * ricci_on(cp, gvf).value());
    Residual t(cp.dim * cp.dim);
    t.lhs(values(s.hess_v)).lhs(values(cp.ricci)).rhs(values(hessian(s.v - bg.f, cp)));
    return {named("LP", r), named("hessian_v_minus_f", t)};
}

/// LP >= Q^2 / n where Rc >= 0; the residual measures the violation.
Parts eval_b5(const PointContext& c) {
    auto [bg, s, gvf] = li_yau_point(c, 1.0);
    const auto& cp = bg.cp;
    const int n = cp.dim;
    // Rc >= 0 at the point, via the leading principal minors of R_ij
    const double r00 = cp.ricci(0, 0).value();
    const double det = n == 2 ? r00 * cp.ricci(1, 1).value() - std::pow(cp.ricci(0, 1).value(), 2) : 0.0;
    if (n != 2 || r00 < -1e-14 || det < -1e-14) throw DomainError("the inequality needs Rc >= 0 at the point");
    const double lp = apply_L(s.P, s, cp).value();
    const double q2 = s.Q.value() * s.Q.value() / n;
    return {{"LP_at_least_Q2_over_n", std::max(0.0, q2 - lp) / (std::abs(lp) + q2 + kResidualFloor),
             std::max(0.0, q2 - lp)}};
}

/// Right-hand side terms of L_eps P_eps.
std::vector<double> b6_rhs(const S2Point& sp, double eps) {
    const auto& cp = sp.bg.cp;
    const double ie = 1.0 / eps;
    const auto v_eps_f = sp.s.grad_v - sp.s.grad_f * eps;
    const auto v_plus_f = sp.s.grad_v + sp.s.grad_f;
    return {ie * norm2(sp.s.hess_v, cp).value(), 2.0 * inner(cp.ricci, sp.s.hess_v, cp).value(),
            ie * norm2(cp.ricci, cp).value(), 2.0 * ie * ricci_on(cp, v_eps_f).value(),
            (1.0 - ie) * ricci_on(cp, v_plus_f).value()};
}

Parts eval_b6(const PointContext& c) {
    Parts out;
    for (double eps : kEpsilonSamples) {
        const auto sp = li_yau_point(c, eps);
        Residual r;
        r.lhs(apply_L(sp.s.P_eps, sp.s, sp.bg.cp).value());
        for (double v : b6_rhs(sp, eps)) r.rhs(v);
        out.push_back(named("L_eps_P_eps " + eps_label(eps), r));
    }
    return out;
}

/// Two groupings of the Ricci terms agree; pure algebra in (Rc, grad v, grad f).
Parts eval_b7(const PointContext& c) {
    auto bg = static_bg(c);
    const auto& cp = bg.cp;
    ScalarFieldSpec us;
    us.seed = c.seed;
    const Jet u = evaluate(us, bg, c.index);
    const auto s = li_yau_quantities(u, 1.0, bg.f, cp);
    Parts out;
    for (double eps : kEpsilonSamples) {
        const double ie = 1.0 / eps;
        Residual r;
        r.lhs(2.0 * ie * ricci_on(cp, s.grad_v - s.grad_f * eps).value());
        r.lhs((1.0 - ie) * ricci_on(cp, s.grad_v + s.grad_f).value());
        r.rhs((1.0 + ie) * ricci_on(cp, s.grad_v - s.grad_f).value());
        r.rhs(2.0 * (eps - ie) * ricci_on(cp, s.grad_f).value());
        out.push_back(named("ricci_regrouping " + eps_label(eps), r));
    }
    return out;
}

/// (1/2 (d/dt + Laplacian) + grad v . grad)(2 Laplacian v + |grad v|^2 - R)
///   = -|Rc - grad grad v|^2 = -|grad grad (f + v)|^2
Parts eval_b8(const PointContext& c) {
    auto [bg, s, gvf] = li_yau_point(c, -1.0);
    const auto& cp = bg.cp;
    const double lhs = apply_L(s.P_eps, s, cp).value();
    const double a = -norm2(cp.ricci - s.hess_v, cp).value();
    const double b = -norm2(hessian(bg.f + s.v, cp), cp).value();
    Residual r1, r2;
    r1.lhs(lhs).rhs(a);
    r2.lhs(a).rhs(b);
    return {named("energy_identity", r1), named("hessian_f_plus_v", r2)};
}

// --------------------------------------------------------------- registry

std::vector<CheckSpec> build_registry() {
    std::vector<CheckSpec> r;
    auto add = [&r](std::string id, std::string desc, std::string anchor, std::string fields, int min_order,
                    std::function<std::string(const SolitonSpec&)> app, CheckEvaluator ev) {
        CheckSpec c;
        c.id = std::move(id);
        c.description = std::move(desc);
        c.anchor = std::move(anchor);
        c.fields = std::move(fields);
        c.min_order = min_order;
        c.applicability = std::move(app);
        c.evaluate = std::move(ev);
        r.push_back(std::move(c));
    };
    add("CHK-S1", "soliton equation, Ricci flow and potential rule",
        "dg/dt = -2Rc = 2 grad grad f (steady); -2Rc = 2 grad grad f + g/t (shrinking)", "none", 2, need_soliton,
        eval_s1);
    add("CHK-S2", "static soliton identities",
        "Laplacian R + 2|Rc|^2 = <grad R, grad f> and 2 R_ij grad^j f = grad_i R "
        "(shrinker: 1/2 Laplacian R + |Rc|^2 = 1/2 <grad R, grad f> - R/2t)",
        "none", 4, need_soliton, eval_s2);
    add("CHK-S3", "unit normalization of a steady soliton", "R = -Laplacian f = 1 - |grad f|^2", "none", 2,
        need_unit, eval_s3);
    add("CHK-H1", "matrix Harnack on a steady soliton", "M_pq = P_ipq grad^i f", "none", 4, need_steady, eval_h1);
    add("CHK-H1s", "matrix Harnack on a shrinking soliton", "M_pq + R_pq/2t = P_ipq grad^i f", "none", 4,
        need_shrinking, eval_h1);
    add("CHK-H2", "P tensor on a soliton", "P_ipq = R_pijq grad^j f", "none", 3,
        [](const SolitonSpec& s) { return need_soliton(s); }, eval_h2);
    add("CHK-H3", "steady factor identities",
        "grad_j grad^i f + R^i_j = 0 and ((d/dt - Laplacian) grad f)^j = R^j_k grad^k f", "none", 3, need_steady,
        eval_h3);
    add("CHK-H3s", "shrinker factor identities",
        "R_ij + grad_i grad_j f = -g_ij/2t and ((d/dt - Laplacian) grad f)^j - R^j_k grad^k f = -grad^j f / t",
        "none", 3, need_shrinking, eval_h3);
    add("CHK-H4", "linear trace Harnack of Rc on a steady soliton", "Z(Rc, -grad f) = 0", "none", 4, need_steady,
        eval_h4);
    add("CHK-H4s", "linear trace Harnack of Rc on a shrinker", "Z(Rc, -grad f) + R/2t = 0", "none", 4,
        need_shrinking, eval_h4);
    add("CHK-H4t", "trace Harnack quadratic",
        "2 Z(Rc, X) = Laplacian R + 2|Rc|^2 + 2 <grad R, X> + 2 Rc(X, X)", "X: random polynomial", 4, need_soliton,
        eval_h4t);
    add("CHK-EQ1", "evolution of the linear trace Harnack quantity",
        "(d/dt - Laplacian) Z(h, X) = 2h^pq(M_pq + 2P_ipq X^i + R_pijq X^i X^j) - 4(grad_j X^i - R^i_j) "
        "grad^j(div(h)_i + h_ik X^k) + 2(div(h)_j + h_ij X^i)(dX^j/dt - Laplacian X^j - R^j_k X^k) "
        "+ 2h_ij(grad_p X^i - R^i_p)(grad^p X^j - R^pj)",
        "h: random, dh/dt = Delta_L h; X: random space-time polynomial", 4, need_soliton, eval_eq1);
    add("CHK-L1", "linear trace Harnack solves the heat equation on a steady soliton",
        "(d/dt - Laplacian) Z(h, -grad f) = 0", "h: random, dh/dt = Delta_L h", 4, need_steady, eval_l1);
    add("CHK-L2", "shrinker analogue of the heat equation",
        "(d/dt - Laplacian)(t^2 (Z(h, -grad f) + H/2t)) = 0; (d/dt - Laplacian)(Z + H/2t) = -(2/t)(Z + H/2t); "
        "(d/dt - Laplacian) H = 2<h, Rc>",
        "h: random, dh/dt = Delta_L h", 4, need_shrinking, eval_l2);
    add("CHK-R1", "variation of Perelman's scalar curvature",
        "d/ds (R + 2 Laplacian f - |grad f|^2) = Z(h, -grad f) - 2<h, Rc + grad grad f> for dg/ds = h, "
        "df/ds = H/2; d/ds (e^-f dmu) = 0",
        "h: random", 3, need_soliton, eval_r1);
    add("CHK-R2", "conjugate heat equation for Perelman's V",
        "box* V = -2|R_ij + grad_i grad_j f|^2 e^-f, V = (2 Laplacian f - |grad f|^2 + R) e^-f, "
        "box* = -d/dt - Laplacian + R",
        "f: random, df/dt = -Laplacian f + |grad f|^2 - R", 4, need_soliton, eval_r2);
    add("CHK-B1", "e^f solves the linearized equation", "d/dt e^f = Laplacian e^f + R e^f", "none", 2,
        need_steady_gradient_rule, eval_b1);
    add("CHK-B2", "Li-Yau-Hamilton quantity Q = Laplacian v + R",
        "LQ = |grad grad v|^2 + <Rc, grad grad v> + Rc(grad(v - f), grad(v - f))",
        "u: random positive, du/dt = Laplacian u + R u", 4, need_steady, eval_b2);
    add("CHK-B3", "evolution of |grad v|^2 + R", "L(|grad v|^2 + R) = |Rc|^2 - |grad grad v|^2",
        "u: random positive, du/dt = Laplacian u + R u", 4, need_steady, eval_b3);
    add("CHK-B4", "Bochner-type formula for P = 2 Laplacian v + |grad v|^2 + 3R",
        "LP = |grad grad v + Rc|^2 + 2 Rc(grad(v - f), grad(v - f)); grad grad v + Rc = grad grad (v - f)",
        "u: random positive, du/dt = Laplacian u + R u", 4, need_steady, eval_b4);
    add("CHK-B5", "sampled inequality where Rc >= 0", "LP >= Q^2 / n",
        "u: random positive, du/dt = Laplacian u + R u", 4, need_steady, eval_b5);
    add("CHK-B6", "interpolating Bochner-type formula",
        "L_eps P_eps = eps^-1 |grad grad v|^2 + 2<Rc, grad grad v> + eps^-1 |Rc|^2 "
        "+ 2 eps^-1 Rc(grad(v - eps f), grad(v - eps f)) + (1 - eps^-1) Rc(grad(v + f), grad(v + f))",
        "u: random positive, du/dt = eps^-1 Laplacian u + R u", 4, need_steady, eval_b6);
    add("CHK-B7", "regrouping of the Ricci terms",
        "2 eps^-1 Rc(grad(v - eps f), .) + (1 - eps^-1) Rc(grad(v + f), .) "
        "= (1 + eps^-1) Rc(grad(v - f), .) + 2(eps - eps^-1) Rc(grad f, grad f)",
        "u: random positive", 2, need_steady, eval_b7);
    add("CHK-B8", "the eps = -1 case, a pointwise energy identity",
        "(1/2 (d/dt + Laplacian) + grad v . grad)(2 Laplacian v + |grad v|^2 - R) = -|Rc - grad grad v|^2 "
        "= -|grad grad (f + v)|^2",
        "u: random positive, du/dt = -Laplacian u + R u", 4, need_steady, eval_b8);
    return r;
}

bool glob_match(const char* pat, const char* s) {
    if (*pat == '\0') return *s == '\0';
    if (*pat == '*') return glob_match(pat + 1, s) || (*s != '\0' && glob_match(pat, s + 1));
    if (*s == '\0') return false;
    return (*pat == '?' || *pat == *s) && glob_match(pat + 1, s + 1);
}

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

template <class Fn>
void parallel_for(int count, int threads, Fn fn) {
    if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&, w] {
            try {
                for (int i = next++; i < count; i = next++) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace

const char* to_string(CheckStatus s) {
    switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::skipped: return "skipped";
    }
    return "?";
}

const std::vector<CheckSpec>& check_registry() {
    static const std::vector<CheckSpec> reg = build_registry();
    return reg;
}

const CheckSpec& check_get(const std::string& id) {
    for (const auto& c : check_registry())
        if (c.id == id) return c;
    throw UnknownNameError("unknown check id '" + id + "'");
}

void validate(const CheckConfig& cfg) {
    if (cfg.order < 1 || cfg.order > JetSpace::max_order)
        throw ConfigError("jet order must be between 1 and " + std::to_string(JetSpace::max_order));
    if (cfg.points < 1) throw ConfigError("at least one sample point is needed");
    for (const auto& [id, tol] : cfg.tolerance_overrides) {
        check_get(id);
        if (!(tol > 0.0) || tol > kMaxTolerance)
            throw ConfigError("tolerance for " + id + " must be in (0, 1e-6]");
    }
}

TermwiseZEvolution termwise_z_evolution(const SolitonSpec& spec, std::span<const double> p, double t, int order) {
    if (spec.cls != SolitonClass::steady) throw DomainError("the term-by-term vanishing needs a steady soliton");
    auto bg = make_background(spec, p, t, {order, true, false});
    const auto& cp = bg.cp;
    const auto x = neg_grad_f(bg);
    const auto dx = time_derivative(x);
    const auto mh = matrix_harnack(cp);
    const auto terms = z_evolution_terms(cp.ricci, x, dx, cp, mh);
    const auto sc = z_evolution_scales(cp.ricci, x, dx, cp, mh);
    TermwiseZEvolution tw;
    tw.t[0] = terms.t1.value();
    tw.t[1] = terms.t2.value();
    tw.t[2] = terms.t3.value();
    tw.t[3] = terms.t4.value();
    tw.scale[0] = sc.t1;
    tw.scale[1] = sc.t2;
    tw.scale[2] = sc.t3;
    tw.scale[3] = sc.t4;
    return tw;
}

CheckReport run_check(const std::string& id, const std::string& soliton, const CheckConfig& cfg) {
    validate(cfg);
    const auto& check = check_get(id);
    const auto& spec = catalog_get(soliton);
    CheckReport rep;
    rep.check_id = id;
    rep.soliton = soliton;
    rep.seed = cfg.seed;
    rep.order = cfg.order;
    auto it = cfg.tolerance_overrides.find(id);
    rep.tolerance = it != cfg.tolerance_overrides.end() ? it->second : check.tolerance;

    if (auto reason = check.applicability(spec); !reason.empty()) {
        rep.status = CheckStatus::skipped;
        rep.note = reason;
        return rep;
    }
    if (cfg.order < check.min_order)
        throw ConfigError(id + " needs jet order >= " + std::to_string(check.min_order) + ", got " +
                          std::to_string(cfg.order));

    const auto start = std::chrono::steady_clock::now();
    const auto pts = sample_points(spec.box, cfg.points, cfg.seed);
    std::vector<PointRecord> records(pts.size());
    std::vector<std::string> errors(pts.size());
    parallel_for(static_cast<int>(pts.size()), cfg.threads, [&](int k) {
        PointRecord& pr = records[k];
        pr.index = k;
        pr.x = pts[k].x;
        pr.t = pts[k].t;
        try {
            PointContext ctx{spec, pts[k], cfg.seed, static_cast<std::uint64_t>(k), cfg.order};
            pr.parts = check.evaluate(ctx);
            for (const auto& part : pr.parts) pr.residual = std::max(pr.residual, part.relative);
            if (std::isnan(pr.residual)) pr.residual = std::numeric_limits<double>::infinity();
        } catch (const OrderError& e) {
            errors[k] = std::string("jet order shortfall: ") + e.what();
            pr.residual = std::numeric_limits<double>::infinity();
        } catch (const Error& e) {
            errors[k] = e.what();
            pr.residual = std::numeric_limits<double>::infinity();
        }
    });

    rep.n_points = static_cast<int>(records.size());
    for (const auto& pr : records) {
        rep.residuals.push_back(pr.residual);
        for (const auto& part : pr.parts) {
            auto& m = rep.part_max[part.name];
            m = std::max(m, part.relative);
        }
    }
    for (const auto& e : errors)
        if (!e.empty()) {
            rep.note = e;
            break;
        }
    rep.max_rel_residual = rep.residuals.empty() ? 0.0 : *std::max_element(rep.residuals.begin(), rep.residuals.end());
    rep.median_rel_residual = median_of(rep.residuals);
    rep.status = rep.max_rel_residual <= rep.tolerance ? CheckStatus::pass : CheckStatus::fail;
    if (cfg.keep_points) rep.points = std::move(records);
    rep.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

bool matches_filter(const std::string& filter, const std::string& name) {
    std::stringstream ss(filter);
    std::string pat;
    while (std::getline(ss, pat, ',')) {
        if (pat.empty()) continue;
        if (pat == "all" || glob_match(pat.c_str(), name.c_str())) return true;
    }
    return false;
}

std::vector<std::string> select_checks(const std::string& filter) {
    std::vector<std::string> out;
    for (const auto& c : check_registry())
        if (matches_filter(filter, c.id)) out.push_back(c.id);
    return out;
}

std::vector<std::string> select_solitons(const std::string& filter) {
    std::vector<std::string> out;
    for (const auto& n : catalog_names())
        if (matches_filter(filter, n)) out.push_back(n);
    return out;
}

bool SuiteResult::passed() const {
    return std::none_of(reports.begin(), reports.end(), [](const auto& r) { return r.status == CheckStatus::fail; });
}

int SuiteResult::count(CheckStatus s) const {
    return static_cast<int>(std::count_if(reports.begin(), reports.end(), [s](const auto& r) { return r.status == s; }));
}

SuiteResult run_suite(const std::string& check_filter, const std::string& soliton_filter, const CheckConfig& cfg) {
    validate(cfg);
    SuiteResult res;
    const auto ids = select_checks(check_filter);
    const auto sols = select_solitons(soliton_filter);
    if (ids.empty()) res.warnings.push_back("no check matches '" + check_filter + "'");
    if (sols.empty()) res.warnings.push_back("no soliton matches '" + soliton_filter + "'");
    for (const auto& id : ids)
        for (const auto& s : sols) res.reports.push_back(run_check(id, s, cfg));
    if (!res.reports.empty() && res.count(CheckStatus::skipped) == static_cast<int>(res.reports.size()))
        res.warnings.push_back("every selected pairing was skipped");
    return res;
}

} // namespace hl
