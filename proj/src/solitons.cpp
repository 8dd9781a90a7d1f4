#include <harnacklab/solitons.hpp>

#include <cmath>
#include <numbers>

namespace hl {

namespace {

Jet radius2(std::span<const Jet> x) {
    Jet r = x[0] * x[0];
    for (std::size_t i = 1; i < x.size(); ++i) r += x[i] * x[i];
    return r;
}

SampleBox square_box(int n, double lo, double hi, double t_lo, double t_hi) {
    SampleBox b;
    b.lo.assign(n, lo);
    b.hi.assign(n, hi);
    b.t_lo = t_lo;
    b.t_hi = t_hi;
    return b;
}

MetricChart cigar_flow_chart() {
    MetricChart c;
    c.dim = 2;
    c.time_dependent = true;
    c.metric = [](std::span<const Jet> x, const Jet& t) {
        const Jet factor = 4.0 / (exp(t) + radius2(x));
        auto g = make_tensor(2, {Slot::lower, Slot::lower}, factor);
        g(0, 0) = g(1, 1) = factor;
        return g;
    };
    return c;
}

MetricChart perturbed_torus_chart(const TorusPerturbation& tp) {
    MetricChart c;
    c.dim = 2;
    c.metric = [tp](std::span<const Jet> x, const Jet&) {
        auto g = make_tensor(2, {Slot::lower, Slot::lower}, x[0]);
        g(0, 0) = 1.0 + tp.amplitude * tp.p00(x[0], x[1]);
        g(0, 1) = g(1, 0) = tp.amplitude * tp.p01(x[0], x[1]);
        g(1, 1) = 1.0 + tp.amplitude * tp.p11(x[0], x[1]);
        return g;
    };
    return c;
}

std::vector<SolitonSpec> build_catalog() {
    std::vector<SolitonSpec> cat;
    const double two_pi = 2.0 * std::numbers::pi;

    {
        SolitonSpec s;
        s.name = "cigar_static";
        s.description = "cigar 4 delta / (1 + r^2), f = -log(1 + r^2); flow obtained by propagation";
        s.chart = charts::cigar(4.0);
        s.potential = [](std::span<const Jet> x, const Jet&) { return -log(1.0 + radius2(x)); };
        s.rule = PotentialRule::heat;
        s.time_model = TimeModel::lifted;
        s.box = square_box(2, -3.0, 3.0, 0.0, 0.0);
        s.unit_normalized = true;
        cat.push_back(std::move(s));
    }
    {
        SolitonSpec s;
        s.name = "cigar_flow";
        s.description = "cigar flow 4 delta / (e^t + r^2), f = -log(e^t + r^2), df/dt = Laplacian f";
        s.chart = cigar_flow_chart();
        s.potential = [](std::span<const Jet> x, const Jet& t) { return -log(exp(t) + radius2(x)); };
        s.rule = PotentialRule::heat;
        s.box = square_box(2, -3.0, 3.0, -1.0, 1.0);
        s.unit_normalized = true;
        cat.push_back(std::move(s));
    }
    {
        SolitonSpec s;
        s.name = "cigar_flow_v2";
        s.description = "cigar flow with f = t - log(e^t + r^2), df/dt = |grad f|^2";
        s.chart = cigar_flow_chart();
        s.potential = [](std::span<const Jet> x, const Jet& t) { return t - log(exp(t) + radius2(x)); };
        s.rule = PotentialRule::gradient_squared;
        s.box = square_box(2, -3.0, 3.0, -1.0, 1.0);
        s.unit_normalized = true;
        cat.push_back(std::move(s));
    }
    cat.push_back(make_flat_steady_linear({0.6, 0.8}));
    {
        SolitonSpec s;
        s.name = "gaussian_shrinker";
        s.description = "flat R^2 with f = |x|^2 / (-4t) - n/2, t < 0";
        s.chart = charts::flat(2);
        s.potential = [](std::span<const Jet> x, const Jet& t) { return radius2(x) / (-4.0 * t) - 1.0; };
        s.cls = SolitonClass::shrinking;
        s.rule = PotentialRule::gradient_squared;
        s.t_valid_hi = 0.0;
        s.box = square_box(2, -2.0, 2.0, -2.0, -0.5);
        cat.push_back(std::move(s));
    }
    {
        SolitonSpec s;
        s.name = "sphere_shrinker";
        s.description = "round 2-sphere g(t) = -2t g_unit in stereographic coordinates, f = 0, t < 0";
        s.chart.dim = 2;
        s.chart.time_dependent = true;
        s.chart.metric = [](std::span<const Jet> x, const Jet& t) {
            const Jet d = 1.0 + radius2(x);
            const Jet factor = -8.0 * t / (d * d);
            auto g = make_tensor(2, {Slot::lower, Slot::lower}, factor);
            g(0, 0) = g(1, 1) = factor;
            return g;
        };
        s.potential = [](std::span<const Jet> x, const Jet&) { return constant_like(x[0], 0.0); };
        s.cls = SolitonClass::shrinking;
        s.rule = PotentialRule::gradient_squared;
        s.t_valid_hi = 0.0;
        s.box = square_box(2, -2.0, 2.0, -2.0, -0.5);
        cat.push_back(std::move(s));
    }
    {
        SolitonSpec s;
        s.name = "flat_torus";
        s.description = "flat torus [0, 2pi)^2 with f = 0";
        s.chart = charts::flat(2);
        s.potential = [](std::span<const Jet> x, const Jet&) { return constant_like(x[0], 0.0); };
        s.rule = PotentialRule::gradient_squared;
        s.box = square_box(2, 0.0, two_pi, 0.0, 1.0);
        s.periodic = true;
        cat.push_back(std::move(s));
    }
    {
        SolitonSpec s;
        s.name = "torus_generic";
        s.description = "torus with a small seeded metric perturbation under plain Ricci flow (grid only)";
        s.chart = perturbed_torus_chart(torus_perturbation(0.05, 1));
        s.cls = SolitonClass::plain_flow;
        s.jet_checks = false;
        s.box = square_box(2, 0.0, two_pi, 0.0, 0.0);
        s.periodic = true;
        cat.push_back(std::move(s));
    }
    return cat;
}

const std::vector<SolitonSpec>& catalog() {
    static const std::vector<SolitonSpec> cat = build_catalog();
    return cat;
}

JetTensor unpack_metric(const std::vector<Jet>& state, int n) {
    auto g = make_tensor(n, {Slot::lower, Slot::lower}, state[0]);
    int k = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            g(i, j) = state[k];
            g(j, i) = state[k];
            ++k;
        }
    return g;
}

void check_point(const SolitonSpec& spec, std::span<const double> p, double t) {
    if (static_cast<int>(p.size()) != spec.dim())
        throw DomainError("point has dimension " + std::to_string(p.size()) + " but " + spec.name + " has " +
                          std::to_string(spec.dim()));
    if (!(t > spec.t_valid_lo && t < spec.t_valid_hi))
        throw DomainError("time " + std::to_string(t) + " is outside the valid interval of " + spec.name);
    if (spec.chart.domain && !spec.chart.domain(p, t)) throw DomainError("point outside the chart of " + spec.name);
}

} // namespace

const char* to_string(SolitonClass c) {
    switch (c) {
    case SolitonClass::steady: return "steady";
    case SolitonClass::shrinking: return "shrinking";
    case SolitonClass::plain_flow: return "plain-flow";
    }
    return "?";
}

const char* to_string(PotentialRule r) {
    switch (r) {
    case PotentialRule::heat: return "df/dt = Laplacian f";
    case PotentialRule::gradient_squared: return "df/dt = |grad f|^2";
    case PotentialRule::conjugate: return "df/dt = -Laplacian f + |grad f|^2 - R";
    case PotentialRule::fixed: return "df/dt = 0";
    }
    return "?";
}

const std::vector<std::string>& catalog_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& s : catalog()) v.push_back(s.name);
        return v;
    }();
    return names;
}

const SolitonSpec& catalog_get(const std::string& name) {
    for (const auto& s : catalog())
        if (s.name == name) return s;
    std::string list;
    for (const auto& n : catalog_names()) list += (list.empty() ? "" : ", ") + n;
    throw UnknownNameError("unknown soliton '" + name + "'; valid names: " + list);
}

SolitonSpec make_flat_steady_linear(std::vector<double> a) {
    if (a.empty() || a.size() > 3) throw ConfigError("flat_steady_linear needs 1 to 3 components");
    double a2 = 0.0;
    for (double v : a) a2 += v * v;
    const int n = static_cast<int>(a.size());
    SolitonSpec s;
    s.name = "flat_steady_linear";
    s.description = "flat R^n with f = a.x + |a|^2 t";
    s.chart = charts::flat(n);
    s.potential = [a, a2](std::span<const Jet> x, const Jet& t) {
        Jet f = a2 * t;
        for (std::size_t i = 0; i < a.size(); ++i) f += a[i] * x[i];
        return f;
    };
    s.rule = PotentialRule::gradient_squared;
    s.box = square_box(n, -2.0, 2.0, -1.0, 1.0);
    s.unit_normalized = std::abs(a2 - 1.0) < 1e-14;
    return s;
}

TorusPerturbation torus_perturbation(double amplitude, std::uint64_t seed) {
    TorusPerturbation tp;
    tp.amplitude = amplitude;
    RandomStream rng(seed, 0, 0x544f525553ULL);
    auto normalized = [&rng] {
        auto p = random_trig(rng, 2, 1.0);
        double l1 = 0.0;
        for (const auto& m : p.terms) l1 += std::abs(m.a) + std::abs(m.b);
        for (auto& m : p.terms) {
            m.a /= l1;
            m.b /= l1;
        }
        return p;
    };
    tp.p00 = normalized();
    tp.p01 = normalized();
    tp.p11 = normalized();
    return tp;
}

Jet potential_rate(PotentialRule rule, const Jet& f, const JetPack& cp) {
    switch (rule) {
    case PotentialRule::heat: return laplacian(f, cp);
    case PotentialRule::gradient_squared: {
        auto df = differential(f, cp);
        return form_inner(df, df, cp);
    }
    case PotentialRule::conjugate: {
        auto df = differential(f, cp);
        return -laplacian(f, cp) + form_inner(df, df, cp) - cp.scalar;
    }
    case PotentialRule::fixed: return constant_like(f, 0.0);
    }
    throw ConfigError("unknown potential rule");
}

Background make_background(const SolitonSpec& spec, std::span<const double> p, double t,
                           const BackgroundOptions& opts) {
    check_point(spec, p, t);
    const int n = spec.dim();
    Background bg;
    bg.soliton = spec.name;
    bg.cls = spec.cls;
    bg.space = JetSpace::make_chart(n, opts.time, opts.deform, opts.order);
    bg.point.assign(p.begin(), p.end());
    bg.time = t;
    bg.x = seed_variables(p, bg.space);
    bg.t = opts.time ? seed_time(t, bg.space) : Jet::constant(bg.space, t);
    auto potential = [&](const Jet& tj) {
        return spec.potential ? spec.potential(bg.x, tj) : Jet(bg.space);
    };

    if (opts.time && spec.time_model == TimeModel::lifted) {
        const Jet t0 = Jet::constant(bg.space, t);
        const auto g0 = spec.chart.metric(bg.x, t0);
        std::vector<Jet> state;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) state.push_back(g0(i, j));
        state.push_back(potential(t0));
        const auto rule = spec.rule;
        state = propagate_in_time(state, [n, rule](const std::vector<Jet>& s) {
            auto cp = curvature(unpack_metric(s, n));
            std::vector<Jet> d;
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) d.push_back(-2.0 * cp.ricci(i, j));
            d.push_back(potential_rate(rule, s.back(), cp));
            return d;
        });
        bg.g = unpack_metric(state, n);
        bg.f = state.back();
    } else {
        bg.g = spec.chart.metric(bg.x, bg.t);
        bg.f = potential(bg.t);
    }
    bg.cp = curvature(bg.g);
    return bg;
}

std::vector<NamedResidual> soliton_residual(const SolitonSpec& spec, std::span<const double> p, double t,
                                            int order) {
    if (!spec.is_soliton()) return {};
    const bool timed = spec.time_model == TimeModel::explicit_formula;
    auto bg = make_background(spec, p, t, {order, timed, false});
    const auto& cp = bg.cp;
    const int n = cp.dim;
    std::vector<NamedResidual> out;

    Residual eq(n * n);
    eq.lhs(values(cp.ricci)).lhs(values(hessian(bg.f, cp)));
    if (spec.cls == SolitonClass::shrinking) eq.lhs(values(cp.metric * (1.0 / (2.0 * t))));
    out.push_back(named("soliton_equation", eq));

    if (timed) {
        Residual flow(n * n);
        std::vector<double> dg;
        for (const auto& c : bg.g.components()) dg.push_back(partial_t(c).value());
        flow.lhs(dg).lhs(values(cp.ricci * 2.0));
        out.push_back(named("ricci_flow", flow));

        Residual rule;
        rule.lhs(partial_t(bg.f).value()).rhs(potential_rate(spec.rule, bg.f, cp).value());
        out.push_back(named("potential_rule", rule));
    }
    if (spec.cls == SolitonClass::shrinking) {
        // |grad f|^2 = Laplacian f - f / t
        auto df = differential(bg.f, cp);
        Residual alt;
        alt.lhs(form_inner(df, df, cp).value()).rhs(laplacian(bg.f, cp).value()).rhs(-bg.f.value() / t);
        out.push_back(named("potential_shrinker_form", alt));
    }
    return out;
}

std::vector<NamedResidual> structural_identities(const SolitonSpec& spec, std::span<const double> p, double t,
                                                 int order) {
    if (!spec.is_soliton()) return {};
    auto bg = make_background(spec, p, t, {order, false, false});
    const auto& cp = bg.cp;
    const int n = cp.dim;
    const auto dR = differential(cp.scalar, cp);
    const auto grad_f = gradient(bg.f, cp);
    const double lapR = laplacian(cp.scalar, cp).value();
    const double rc2 = norm2(cp.ricci, cp).value();
    const double dRdf = pair(dR, grad_f).value();

    std::vector<NamedResidual> out;
    Residual scalar;
    if (spec.cls == SolitonClass::steady) {
        scalar.lhs(lapR).lhs(2.0 * rc2).rhs(dRdf);
        out.push_back(named("laplacian_R", scalar));
    } else {
        scalar.lhs(0.5 * lapR).lhs(rc2).rhs(0.5 * dRdf).rhs(-cp.scalar.value() / (2.0 * t));
        out.push_back(named("laplacian_R_shrinker", scalar));
    }
    Residual vec(n);
    std::vector<double> rcf(n), dr(n);
    for (int i = 0; i < n; ++i) {
        Jet s = constant_like(bg.f, 0.0);
        for (int j = 0; j < n; ++j) s += cp.ricci(i, j) * grad_f(j);
        rcf[i] = 2.0 * s.value();
        dr[i] = dR(i).value();
    }
    vec.lhs(rcf).rhs(dr).scale(scalar_gradient_scale(cp));
    out.push_back(named("ricci_gradient", vec));
    return out;
}

std::vector<NamedResidual> normalization_identities(const SolitonSpec& spec, std::span<const double> p,
                                                    double t, int order) {
    if (!spec.is_soliton() || !spec.unit_normalized) return {};
    auto bg = make_background(spec, p, t, {order, false, false});
    const auto& cp = bg.cp;
    auto df = differential(bg.f, cp);
    std::vector<NamedResidual> out;
    Residual unit;
    unit.lhs(cp.scalar.value()).lhs(form_inner(df, df, cp).value()).rhs(1.0);
    out.push_back(named("R_plus_grad_f_squared", unit));
    Residual trace;
    trace.lhs(cp.scalar.value()).lhs(laplacian(bg.f, cp).value());
    out.push_back(named("R_equals_minus_laplacian_f", trace));
    return out;
}

} // namespace hl
