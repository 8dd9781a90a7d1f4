#include <harnacklab/fields.hpp>
#include <harnacklab/harnack.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace hl;

namespace {

Background background(const std::string& name, std::vector<double> p, double t, bool time = false) {
    BackgroundOptions o;
    o.time = time;
    return make_background(catalog_get(name), p, t, o);
}

JetTensor neg_grad_f(const Background& bg) { return gradient(bg.f, bg.cp) * -1.0; }

JetTensor random_vector(const Background& bg, std::uint64_t seed) {
    VectorFieldSpec spec;
    spec.seed = seed;
    return evaluate(spec, bg, 0);
}

JetTensor random_h(const Background& bg, std::uint64_t seed) {
    return evaluate(make_perturbation(PerturbationKind::random_jet_seed, seed), bg, 0);
}

} // namespace

TEST(MatrixHarnack, VanishesOnFlatSpace) {
    auto bg = background("flat_steady_linear", {0.4, -1.1}, 0.3);
    const auto mh = matrix_harnack(bg.cp);
    for (const auto& c : mh.M.components()) EXPECT_EQ(c.value(), 0.0);
    for (const auto& c : mh.P.components()) EXPECT_EQ(c.value(), 0.0);
}

TEST(MatrixHarnack, CigarRelations) {
    for (const auto& sp : sample_points(catalog_get("cigar_static").box, 8, 3)) {
        auto bg = background("cigar_static", sp.x, 0.0);
        const auto mh = matrix_harnack(bg.cp);
        const auto grad_f = gradient(bg.f, bg.cp);
        double scale = 0.0;
        for (const auto& c : mh.M.components()) scale = std::max(scale, std::abs(c.value()));
        ASSERT_GT(scale, 1e-4);
        for (int p = 0; p < 2; ++p)
            for (int q = 0; q < 2; ++q) {
                double m_from_p = 0.0;
                for (int i = 0; i < 2; ++i) m_from_p += mh.P(i, p, q).value() * grad_f(i).value();
                EXPECT_NEAR(mh.M(p, q).value(), m_from_p, 1e-10 * scale);
                EXPECT_NEAR(mh.M(p, q).value(), mh.M(q, p).value(), 1e-12 * scale);
                for (int i = 0; i < 2; ++i) {
                    double rm = 0.0;
                    for (int j = 0; j < 2; ++j) rm += bg.cp.riemann(p, i, j, q).value() * grad_f(j).value();
                    EXPECT_NEAR(mh.P(i, p, q).value(), rm, 1e-10 * scale);
                }
            }
    }
}

TEST(MatrixHarnack, TracedPIsHalfGradR) {
    for (const char* name : {"cigar_static", "sphere_shrinker", "torus_generic"}) {
        const auto& spec = catalog_get(name);
        const double t = spec.box.samples_time() ? spec.box.t_lo : 0.0;
        auto bg = background(name, {0.7, 0.45}, t);
        const auto mh = matrix_harnack(bg.cp);
        const auto dr = differential(bg.cp.scalar, bg.cp);
        for (int i = 0; i < 2; ++i) {
            double traced = 0.0;
            for (int p = 0; p < 2; ++p)
                for (int q = 0; q < 2; ++q) traced += bg.cp.inverse(p, q).value() * mh.P(i, p, q).value();
            EXPECT_NEAR(traced, 0.5 * dr(i).value(), 1e-12) << name;
        }
    }
}

TEST(LinearTraceZ, SpecialValues) {
    auto flat = background("flat_steady_linear", {0.2, 0.3}, 0.0);
    auto zero = make_tensor(2, {Slot::upper}, flat.f);
    EXPECT_EQ(linear_trace_Z(flat.g, zero, flat.cp).value(), 0.0);

    for (const auto& sp : sample_points(catalog_get("cigar_static").box, 8, 5)) {
        auto bg = background("cigar_static", sp.x, 0.0);
        const auto x = neg_grad_f(bg);
        EXPECT_NEAR(linear_trace_Z(bg.g, x, bg.cp).value(), 1.0, 1e-12);
        EXPECT_NEAR(linear_trace_Z(bg.cp.ricci, x, bg.cp).value(), 0.0, 1e-12);
    }
}

TEST(LinearTraceZ, QuadraticInX) {
    auto bg = background("cigar_flow", {-0.9, 1.4}, 0.2, true);
    const auto h = random_h(bg, 4);
    const auto x = random_vector(bg, 8);
    auto zero = make_tensor(2, {Slot::upper}, bg.f);
    const double z = linear_trace_Z(h, x, bg.cp).value();
    const double z0 = linear_trace_Z(h, zero, bg.cp).value();
    const double lin = 2.0 * pair(divergence(h, bg.cp), x).value();
    const double quad = apply(h, x, x).value();
    EXPECT_NEAR(z - z0 - lin - quad, 0.0, 1e-12 * (std::abs(z) + std::abs(z0) + std::abs(lin) + std::abs(quad)));
    // Scaling X by 2 scales the linear part by 2 and the quadratic part by 4.
    const double z2 = linear_trace_Z(h, x * 2.0, bg.cp).value();
    EXPECT_NEAR(z2, z0 + 2.0 * lin + 4.0 * quad, 1e-12 * (std::abs(z2) + std::abs(z0) + 2 * std::abs(lin) + 4 * std::abs(quad)));
}

TEST(LinearTraceZ, RejectsAsymmetricPerturbation) {
    auto bg = background("cigar_static", {0.5, 0.5}, 0.0);
    auto h = bg.g;
    h(0, 1) = h(0, 1) + 1.0;
    EXPECT_THROW(linear_trace_Z(h, neg_grad_f(bg), bg.cp), ConfigError);
}

TEST(TraceHarnack, FlatAndCigar) {
    auto flat = background("flat_steady_linear", {0.2, 0.3}, 0.0, true);
    EXPECT_EQ(trace_harnack(random_vector(flat, 2), flat.cp).value(), 0.0);
    auto bg = background("cigar_static", {1.3, -0.6}, 0.0);
    EXPECT_NEAR(trace_harnack(neg_grad_f(bg), bg.cp).value(), 0.0, 1e-12);
}

TEST(TraceHarnack, EqualsTwiceZOfRicci) {
    for (const auto& name : catalog_names()) {
        const auto& spec = catalog_get(name);
        for (const auto& sp : sample_points(spec.box, 4, 21)) {
            auto bg = background(name, sp.x, sp.t, true);
            const auto x = random_vector(bg, 13);
            const auto terms = trace_harnack_terms(x, bg.cp);
            const double lhs = terms.total().value();
            const double rhs = 2.0 * linear_trace_Z(bg.cp.ricci, x, bg.cp).value();
            const double scale = std::abs(terms.laplacian_r.value()) + std::abs(terms.ricci_sq.value()) +
                                 std::abs(terms.grad_r_x.value()) + std::abs(terms.ricci_xx.value()) + std::abs(rhs);
            EXPECT_LE(std::abs(lhs - rhs) / (scale + 1e-30), 1e-9) << name;
        }
    }
}

TEST(ShrinkerW, RicciPerturbationGivesZero) {
    auto gauss = background("gaussian_shrinker", {0.6, -0.3}, -1.2);
    EXPECT_NEAR(shrinker_W(gauss.cp.ricci, gauss).W.value(), 0.0, 1e-14);
    for (const auto& sp : sample_points(catalog_get("sphere_shrinker").box, 6, 7)) {
        auto bg = background("sphere_shrinker", sp.x, sp.t);
        const auto q = shrinker_W(bg.cp.ricci, bg);
        EXPECT_NEAR(q.H.value(), bg.cp.scalar.value(), 1e-13);
        EXPECT_NEAR(q.W.value(), 0.0, 1e-12);
    }
}

TEST(ShrinkerW, MetricPerturbationOnGaussian) {
    const double t = -1.0;
    auto origin = background("gaussian_shrinker", {0.0, 0.0}, t);
    const auto q0 = shrinker_W(origin.g, origin);
    EXPECT_NEAR(q0.H.value(), 2.0, 1e-15);
    EXPECT_NEAR(q0.W.value(), -1.0, 1e-15);

    const std::vector<double> p = {0.8, -1.4};
    auto bg = background("gaussian_shrinker", p, t);
    const auto q = shrinker_W(bg.g, bg);
    const double r2 = p[0] * p[0] + p[1] * p[1];
    EXPECT_NEAR(q.Z.value(), r2 / 4.0, 1e-14);
    EXPECT_NEAR(q.W.value(), t * t * (r2 / 4.0 + 2.0 / (2.0 * t)), 1e-14);
}

TEST(ShrinkerW, Errors) {
    auto steady = background("cigar_static", {0.5, 0.5}, 0.0);
    EXPECT_THROW(shrinker_W(steady.g, steady), DomainError);
}

TEST(Perelman, ScalarOracles) {
    auto flat = background("flat_steady_linear", {0.9, -0.2}, 0.4);
    EXPECT_NEAR(perelman_quantities(flat.f, flat.cp).scalar.value(), -1.0, 1e-14);
    // Origin of the cigar: R = 1, Laplacian f = -1 and grad f = 0, so 1 - 2 - 0.
    auto origin = background("cigar_static", {0.0, 0.0}, 0.0);
    EXPECT_NEAR(perelman_quantities(origin.f, origin.cp).scalar.value(), -1.0, 1e-14);
    // Elsewhere Laplacian f = -R and |grad f|^2 = 1 - R give R - 2R - (1 - R) = -1.
    const std::vector<double> p = {1.1, -0.7};
    auto bg = background("cigar_static", p, 0.0);
    const double r2 = p[0] * p[0] + p[1] * p[1];
    const double r = 1.0 / (1.0 + r2);
    EXPECT_NEAR(bg.cp.scalar.value(), r, 1e-14);
    // Independent evaluation: f = -log(1 + r^2) has flat Laplacian -4/(1+r^2)^2 and
    // |df|^2_delta = 4 r^2/(1+r^2)^2; the metric is 4 delta/(1+r^2).
    const double lap_f = (1.0 + r2) / 4.0 * (-4.0 / ((1.0 + r2) * (1.0 + r2)));
    const double grad2 = (1.0 + r2) / 4.0 * (4.0 * r2 / ((1.0 + r2) * (1.0 + r2)));
    EXPECT_NEAR(perelman_quantities(bg.f, bg.cp).scalar.value(), r + 2.0 * lap_f - grad2, 1e-13);
    EXPECT_NEAR(r + 2.0 * lap_f - grad2, -1.0, 1e-14);
}

TEST(Perelman, ConjugateVOnSolitonVanishes) {
    auto bg = background("cigar_flow", {0.5, -0.8}, 0.1, true);
    const Jet f = propagate_scalar(bg.f, EvolutionPde::conjugate_potential, bg);
    const auto q = perelman_quantities(f, bg.cp);
    const double scale = std::abs(q.minus_dt_v) + std::abs(q.minus_lap_v) + std::abs(q.r_v);
    ASSERT_GT(scale, 1e-3);
    EXPECT_LE(std::abs(q.box_star_v() - q.rhs) / scale, 1e-12);
    EXPECT_NEAR(q.rhs, 0.0, 1e-13);
}

TEST(LiYau, ExpFOnSecondCigarFlow) {
    for (const auto& sp : sample_points(catalog_get("cigar_flow_v2").box, 6, 9)) {
        auto bg = background("cigar_flow_v2", sp.x, sp.t, true);
        const Jet u = propagate_scalar(exp(bg.f), EvolutionPde::scalar_heat_eps, bg, 1.0);
        const auto s = li_yau_quantities(u, 1.0, bg.f, bg.cp);
        EXPECT_NEAR(s.v.value(), bg.f.value(), 1e-13);
        EXPECT_NEAR(s.Q.value(), 0.0, 1e-12);
        EXPECT_NEAR(s.P.value(), 1.0, 1e-12);
        EXPECT_NEAR(s.P_eps.value(), s.P.value(), 1e-12);
    }
}

TEST(LiYau, EpsilonInterpolation) {
    auto bg = background("cigar_flow_v2", {0.3, 0.6}, 0.0, true);
    Jet u = exp(bg.f);
    u[0] = u[0] + 0.5;  // a non-soliton positive u
    const auto s1 = li_yau_quantities(u, 1.0, bg.f, bg.cp);
    EXPECT_NEAR(s1.P_eps.value(), s1.P.value(), 1e-13);
    const auto s = li_yau_quantities(u, -0.5, bg.f, bg.cp);
    // P_eps - P = (2 eps - 2) R.
    EXPECT_NEAR(s.P_eps.value() - s1.P.value(), -3.0 * bg.cp.scalar.value(), 1e-13);
}

TEST(LiYau, FlatOperatorL) {
    // u = exp(a.x + |a|^2 t) on flat space: v is linear, Q = 0, P = |a|^2.
    auto bg = background("flat_steady_linear", {0.2, 0.7}, 0.3, true);
    const auto s = li_yau_quantities(exp(bg.f), 1.0, bg.f, bg.cp);
    EXPECT_NEAR(s.Q.value(), 0.0, 1e-14);
    EXPECT_NEAR(s.P.value(), 1.0, 1e-14);
    EXPECT_NEAR(apply_L(s.P, s, bg.cp).value(), 0.0, 1e-14);
    // L t = 1/2; L x = -<grad v, grad x> = -a_1.
    EXPECT_NEAR(apply_L(bg.t, s, bg.cp).value(), 0.5, 1e-14);
    EXPECT_NEAR(apply_L(bg.x[0], s, bg.cp).value(), -0.6, 1e-14);
    const auto s2 = li_yau_quantities(exp(bg.f), 2.0, bg.f, bg.cp);
    EXPECT_NEAR(apply_L(bg.x[0], s2, bg.cp).value(), -0.3, 1e-14);
}

TEST(LiYau, Errors) {
    auto bg = background("cigar_flow_v2", {0.3, 0.6}, 0.0, true);
    EXPECT_THROW(li_yau_quantities(exp(bg.f), 0.0, bg.f, bg.cp), ConfigError);
    EXPECT_THROW(li_yau_quantities(-exp(bg.f), 1.0, bg.f, bg.cp), DomainError);
}

TEST(CigarFlow, ScalarCurvatureAtOriginIsOneForAllTimes) {
    for (double t : {-1.0, -0.3, 0.0, 0.5, 1.0}) {
        auto bg = background("cigar_flow", {0.0, 0.0}, t);
        EXPECT_NEAR(bg.cp.scalar.value(), 1.0, 1e-13) << t;
    }
}
