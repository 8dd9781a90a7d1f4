#include <harnacklab/fields.hpp>
#include <harnacklab/harnack.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace hl;

namespace {

double coeff_max(const Jet& a) {
    double m = 0.0;
    for (double c : a.coefficients()) m = std::max(m, std::abs(c));
    return m;
}

/// Largest coefficient difference relative to the largest coefficient of b.
double rel_diff(const Jet& a, const Jet& b) { return coeff_max(a - b) / (coeff_max(b) + 1e-300); }

double rel_diff(const JetTensor& a, const JetTensor& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        num = std::max(num, coeff_max(a.components()[k] - b.components()[k]));
        den = std::max(den, coeff_max(b.components()[k]));
    }
    return num / (den + 1e-300);
}

Background time_background(const std::string& name, std::vector<double> p, double t, int order = 6) {
    BackgroundOptions o;
    o.order = order;
    o.time = true;
    return make_background(catalog_get(name), p, t, o);
}

} // namespace

TEST(Fields, FlatHeatPropagationOfSine) {
    auto bg = time_background("flat_steady_linear", {0.0, 0.0}, 0.0);
    const Jet u0 = sin(bg.x[0]);
    const Jet u = propagate_scalar(u0, EvolutionPde::scalar_heat_eps, bg, 1.0);
    // d_t d_x u = d_x (Laplacian sin x) = -cos 0.
    EXPECT_NEAR(u.deriv({1, 0, 1}), -1.0, 1e-14);
    // d_t u = -sin 0 = 0, d_t^2 d_x u = cos 0.
    EXPECT_NEAR(u.deriv({0, 0, 1}), 0.0, 1e-14);
    EXPECT_NEAR(u.deriv({1, 0, 2}), 1.0, 1e-13);
}

TEST(Fields, FlatLichnerowiczIsComponentwiseHeat) {
    auto bg = time_background("flat_steady_linear", {0.3, -0.2}, 0.1);
    const auto h = propagate_evolution_jet(make_perturbation(PerturbationKind::random_jet_seed, 9), bg, 4);
    for (const auto& c : h.components()) {
        const Jet heat = propagate_scalar(c, EvolutionPde::scalar_heat_eps, bg, 1.0);
        EXPECT_LE(rel_diff(c, heat), 1e-14);
    }
}

TEST(Fields, PropagatedRicciMatchesExplicitFlow) {
    for (double t : {-0.5, 0.0, 0.3}) {
        auto bg = time_background("cigar_flow", {0.7, -0.4}, t);
        const auto rc = evaluate(make_perturbation(PerturbationKind::ricci, 0), bg, 0);
        const auto propagated = propagate_lichnerowicz(rc, bg);
        EXPECT_LE(rel_diff(propagated, rc), 1e-9) << "t = " << t;
        // The explicit Rc really carries time dependence.
        EXPECT_GT(std::abs(rc(0, 0).deriv({0, 0, 1})), 1e-3);
    }
}

TEST(Fields, ExpFSolvesTheHeatRuleOnTheSecondCigarFlow) {
    auto bg = time_background("cigar_flow_v2", {0.5, 1.1}, -0.2);
    ScalarFieldSpec spec;
    spec.kind = ScalarKind::exp_f;
    const Jet u = evaluate(spec, bg, 0);
    const Jet propagated = propagate_scalar(u, EvolutionPde::scalar_heat_eps, bg, 1.0);
    EXPECT_LE(rel_diff(propagated, u), 1e-9);
}

TEST(Fields, PropagationIsLinear) {
    auto bg = time_background("cigar_flow", {-0.8, 0.6}, 0.2);
    const auto h1 = evaluate(make_perturbation(PerturbationKind::random_jet_seed, 1), bg, 3);
    const auto h2 = evaluate(make_perturbation(PerturbationKind::random_jet_seed, 2), bg, 3);
    const double a = 2.5, b = -0.75;
    const auto lhs = propagate_lichnerowicz(h1 * a + h2 * b, bg);
    const auto rhs = propagate_lichnerowicz(h1, bg) * a + propagate_lichnerowicz(h2, bg) * b;
    EXPECT_LE(rel_diff(lhs, rhs), 1e-13);
}

TEST(Fields, TraceEvolutionOfPropagatedPerturbation) {
    for (const char* name : {"cigar_flow", "sphere_shrinker", "cigar_static"}) {
        const auto& spec = catalog_get(name);
        for (const auto& sp : sample_points(spec.box, 4, 11)) {
            BackgroundOptions o;
            o.time = true;
            auto bg = make_background(spec, sp.x, sp.t, o);
            const auto h = propagate_evolution_jet(make_perturbation(PerturbationKind::random_jet_seed, 5), bg, 1);
            const Jet H = trace(h, bg.cp);
            const double lhs = heat_operator(H, bg.cp).value();
            const double rhs = 2.0 * inner(h, bg.cp.ricci, bg.cp).value();
            const double scale = std::abs(H.deriv({0, 0, 1})) + std::abs(laplacian(H, bg.cp).value()) + std::abs(rhs);
            EXPECT_LE(std::abs(lhs - rhs) / (scale + 1e-30), 1e-8) << name;
        }
    }
}

TEST(Fields, SameSeedGivesIdenticalCoefficients) {
    auto bg = time_background("cigar_flow", {0.4, 0.9}, 0.0);
    const auto f = make_perturbation(PerturbationKind::random_jet_seed, 77);
    const auto a = evaluate(f, bg, 12), b = evaluate(f, bg, 12);
    for (std::size_t k = 0; k < a.size(); ++k) {
        const auto ca = a.components()[k].coefficients(), cb = b.components()[k].coefficients();
        EXPECT_TRUE(std::equal(ca.begin(), ca.end(), cb.begin()));
    }
    const auto c = evaluate(make_perturbation(PerturbationKind::random_jet_seed, 78), bg, 12);
    const auto d = evaluate(f, bg, 13);
    EXPECT_GT(rel_diff(a, c), 1e-3);
    EXPECT_GT(rel_diff(a, d), 1e-3);
}

TEST(Fields, RandomCoefficientsAreUniformInTheUnitInterval) {
    auto bg = time_background("cigar_flow", {0.4, 0.9}, 0.0);
    const auto h = evaluate(make_perturbation(PerturbationKind::random_jet_seed, 3), bg, 0);
    const auto& sp = *bg.space;
    for (const auto& c : h.components())
        for (int k = 0; k < sp.size(); ++k) {
            EXPECT_LE(std::abs(c[k]), 1.0);
            if (sp.degree(k) > 5 || sp.exponents(k)[sp.time_var()] != 0) EXPECT_EQ(c[k], 0.0);
        }
    const auto a = h(0, 1).coefficients(), b = h(1, 0).coefficients();
    EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin()));
}

TEST(Fields, MetricKindHasTraceNAndNoDivergence) {
    auto bg = time_background("cigar_flow", {0.6, -1.3}, 0.4);
    const auto h = evaluate(make_perturbation(PerturbationKind::metric, 0), bg, 0);
    EXPECT_NEAR(trace(h, bg.cp).value(), 2.0, 1e-14);
    const auto d = divergence(h, bg.cp);
    for (const auto& c : d.components()) EXPECT_NEAR(c.value(), 0.0, 1e-13);
}

TEST(Fields, RicciKindHasTraceR) {
    const double p[2] = {1.2, 0.35};
    auto bg = make_background(catalog_get("cigar_static"), p, 0.0, {});
    const auto h = evaluate(make_perturbation(PerturbationKind::ricci, 0), bg, 0);
    const double r = 1.0 / (1.0 + p[0] * p[0] + p[1] * p[1]);
    EXPECT_NEAR(trace(h, bg.cp).value(), r, 1e-13);
}

TEST(Fields, NegGradFIsMinusRaisedDifferential) {
    const double p[2] = {0.8, -0.5};
    auto bg = make_background(catalog_get("cigar_static"), p, 0.0, {});
    VectorFieldSpec spec;
    spec.kind = VectorKind::neg_grad_f;
    const auto x = evaluate(spec, bg, 0);
    // g^ij = (1 + r^2)/4 delta, d_j f = -2 x_j / (1 + r^2), so X^i = x_i / 2.
    EXPECT_NEAR(x(0).value(), p[0] / 2.0, 1e-14);
    EXPECT_NEAR(x(1).value(), p[1] / 2.0, 1e-14);
}

TEST(Fields, RandomVectorFieldHasExactTimeDerivative) {
    auto bg = time_background("cigar_flow", {0.4, 0.9}, 0.1);
    VectorFieldSpec spec;
    spec.seed = 5;
    const auto x = evaluate(spec, bg, 2);
    const auto dx = time_derivative(x);
    bool nonzero = false;
    for (int i = 0; i < 2; ++i) {
        EXPECT_DOUBLE_EQ(dx(i).value(), x(i).deriv({0, 0, 1}));
        nonzero = nonzero || std::abs(dx(i).value()) > 1e-6;
        // Time degree is at most one.
        EXPECT_EQ(x(i).deriv({0, 0, 2}), 0.0);
    }
    EXPECT_TRUE(nonzero);
}

TEST(Fields, Errors) {
    EXPECT_THROW(parse_perturbation_kind("ricci_flow"), UnknownNameError);
    EXPECT_THROW(parse_vector_kind("grad"), UnknownNameError);
    EXPECT_THROW(parse_scalar_kind("u"), UnknownNameError);
    EXPECT_EQ(parse_perturbation_kind("metric"), PerturbationKind::metric);
    EXPECT_THROW(make_perturbation(PerturbationKind::explicit_closed_form, 0), ConfigError);

    auto bg = time_background("cigar_flow", {0.4, 0.9}, 0.0);
    ScalarFieldSpec neg;
    neg.kind = ScalarKind::closed_form;
    neg.closed_form = [](const Background& b) { return constant_like(b.f, -1.0); };
    EXPECT_THROW(evaluate(neg, bg, 0), DomainError);
    EXPECT_THROW(propagate_scalar(bg.f, EvolutionPde::scalar_heat_eps, bg, 0.0), ConfigError);
    EXPECT_THROW(propagate_scalar(bg.f, EvolutionPde::lichnerowicz_flow, bg), ConfigError);
}
