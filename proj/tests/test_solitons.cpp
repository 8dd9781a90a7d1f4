#include <harnacklab/solitons.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace hl;

namespace {

double max_of(const std::vector<NamedResidual>& rs, bool relative = true) {
    double m = 0.0;
    for (const auto& r : rs) m = std::max(m, relative ? r.relative : r.absolute);
    return m;
}

} // namespace

TEST(Catalog, LookupAndClasses) {
    const auto& c = catalog_get("cigar_static");
    EXPECT_EQ(c.dim(), 2);
    EXPECT_EQ(c.cls, SolitonClass::steady);
    const auto& g = catalog_get("gaussian_shrinker");
    EXPECT_EQ(g.cls, SolitonClass::shrinking);
    EXPECT_EQ(g.t_valid_hi, 0.0);
    EXPECT_LT(g.t_valid_lo, -1e100);
    EXPECT_EQ(catalog_get("torus_generic").cls, SolitonClass::plain_flow);
    EXPECT_EQ(catalog_names().size(), 8u);
}

TEST(Catalog, UnknownNameListsValidNames) {
    try {
        catalog_get("bryant");
        FAIL() << "expected an exception";
    } catch (const UnknownNameError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("bryant"), std::string::npos);
        for (const auto& n : catalog_names()) EXPECT_NE(msg.find(n), std::string::npos) << n;
    }
}

TEST(Catalog, ShrinkerRejectsNonNegativeTime) {
    const double p[2] = {0.5, 0.5};
    EXPECT_THROW(soliton_residual(catalog_get("gaussian_shrinker"), p, 0.0), DomainError);
    EXPECT_THROW(soliton_residual(catalog_get("sphere_shrinker"), p, 0.3), DomainError);
}

TEST(SolitonEquation, EveryCatalogSolitonAtSampledPoints) {
    for (const auto& name : catalog_names()) {
        const auto& spec = catalog_get(name);
        if (!spec.is_soliton()) {
            const double p[2] = {1.0, 1.0};
            EXPECT_TRUE(soliton_residual(spec, p, 0.0).empty());
            continue;
        }
        for (const auto& sp : sample_points(spec.box, 32, 42)) {
            auto rs = soliton_residual(spec, sp.x, sp.t);
            EXPECT_LE(max_of(rs, false), 1e-9) << name;
            EXPECT_LE(max_of(rs), 1e-9) << name;
        }
    }
}

TEST(SolitonEquation, CigarFlowAtFixedPoint) {
    const double p[2] = {1.0, 0.5};
    auto rs = soliton_residual(catalog_get("cigar_flow"), p, 0.3);
    ASSERT_EQ(rs.size(), 3u);
    EXPECT_LE(max_of(rs, false), 1e-9);
}

TEST(SolitonEquation, FlatLinearIsExact) {
    const double p[2] = {0.7, -1.3};
    for (const auto& r : soliton_residual(catalog_get("flat_steady_linear"), p, 0.4)) EXPECT_EQ(r.absolute, 0.0);
}

TEST(SolitonEquation, GaussianAtMinusOne) {
    const double p[2] = {1.1, 0.4};
    auto rs = soliton_residual(catalog_get("gaussian_shrinker"), p, -1.0);
    EXPECT_LE(max_of(rs, false), 1e-15);
}

TEST(SolitonEquation, SphereShrinkerRicciIsMinusMetricOverTwoT) {
    const auto& spec = catalog_get("sphere_shrinker");
    const double p[2] = {0.3, -0.8};
    const double t = -1.3;
    auto bg = make_background(spec, p, t, {4, false, false});
    for (std::size_t k = 0; k < bg.g.size(); ++k)
        EXPECT_NEAR(bg.cp.ricci.components()[k].value(), -bg.g.components()[k].value() / (2 * t), 1e-12);
}

TEST(Background, CigarFlowAtTimeZeroMatchesStatic) {
    const double p[2] = {0.9, -0.4};
    auto a = make_background(catalog_get("cigar_flow"), p, 0.0, {6, false, false});
    auto b = make_background(catalog_get("cigar_static"), p, 0.0, {6, false, false});
    for (std::size_t k = 0; k < a.g.size(); ++k)
        for (int c = 0; c < a.space->size(); ++c)
            EXPECT_NEAR(a.g.components()[k][c], b.g.components()[k][c], 1e-13);
    for (int c = 0; c < a.space->size(); ++c) EXPECT_NEAR(a.f[c], b.f[c], 1e-13);
}

TEST(Background, LiftedCigarReproducesExplicitFlow) {
    // the Ricci flow from the static cigar is the explicit cigar flow
    for (const auto& sp : sample_points(catalog_get("cigar_static").box, 6, 3)) {
        auto lifted = make_background(catalog_get("cigar_static"), sp.x, 0.0, {6, true, false});
        auto direct = make_background(catalog_get("cigar_flow"), sp.x, 0.0, {6, true, false});
        ASSERT_EQ(lifted.g(0, 0).order(), 6);
        for (std::size_t k = 0; k < lifted.g.size(); ++k)
            for (int c = 0; c < lifted.space->size(); ++c)
                EXPECT_NEAR(lifted.g.components()[k][c], direct.g.components()[k][c], 1e-10);
        for (int c = 0; c < lifted.space->size(); ++c) EXPECT_NEAR(lifted.f[c], direct.f[c], 1e-10);
    }
}

TEST(Structural, SteadyIdentitiesOnCigarAndLinear) {
    for (const char* name : {"cigar_static", "cigar_flow", "cigar_flow_v2", "flat_steady_linear", "flat_torus"}) {
        const auto& spec = catalog_get(name);
        for (const auto& sp : sample_points(spec.box, 16, 7)) {
            auto rs = structural_identities(spec, sp.x, sp.t);
            ASSERT_EQ(rs.size(), 2u);
            EXPECT_LE(max_of(rs), 1e-10) << name;
        }
    }
}

TEST(Structural, ShrinkerForm) {
    for (const char* name : {"gaussian_shrinker", "sphere_shrinker"}) {
        const auto& spec = catalog_get(name);
        for (const auto& sp : sample_points(spec.box, 16, 7)) {
            auto rs = structural_identities(spec, sp.x, sp.t);
            EXPECT_EQ(rs.front().name, "laplacian_R_shrinker");
            EXPECT_LE(max_of(rs, false), 1e-10) << name;
        }
    }
}

TEST(Structural, UnitNormalization) {
    const double o[2] = {0.0, 0.0};
    auto bg = make_background(catalog_get("cigar_static"), o, 0.0, {4, false, false});
    EXPECT_NEAR(bg.cp.scalar.value(), 1.0, 1e-14);
    for (const char* name : {"cigar_static", "cigar_flow", "cigar_flow_v2", "flat_steady_linear"}) {
        const auto& spec = catalog_get(name);
        EXPECT_TRUE(spec.unit_normalized);
        for (const auto& sp : sample_points(spec.box, 16, 5)) {
            auto rs = normalization_identities(spec, sp.x, sp.t);
            ASSERT_EQ(rs.size(), 2u);
            EXPECT_LE(max_of(rs, false), 1e-12) << name;
        }
    }
    const double p[2] = {1.0, 2.0};
    EXPECT_TRUE(normalization_identities(catalog_get("flat_torus"), p, 0.5).empty());
    EXPECT_FALSE(make_flat_steady_linear({0.3, 0.4}).unit_normalized);
}

TEST(Potential, RulesOnGaussian) {
    const auto& spec = catalog_get("gaussian_shrinker");
    const double p[2] = {0.6, -1.2};
    auto bg = make_background(spec, p, -0.8, {4, true, false});
    const double x2 = 0.36 + 1.44;
    // df/dt = |x|^2 / 4t^2
    EXPECT_NEAR(partial_t(bg.f).value(), x2 / (4 * 0.64), 1e-13);
    EXPECT_NEAR(potential_rate(PotentialRule::gradient_squared, bg.f, bg.cp).value(), x2 / (4 * 0.64), 1e-13);
    EXPECT_NEAR(potential_rate(PotentialRule::heat, bg.f, bg.cp).value(), 2.0 / (4 * 0.8) * 2, 1e-13);
}
