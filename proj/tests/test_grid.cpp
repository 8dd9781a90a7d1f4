#include <harnacklab/grid.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace hl;

namespace {

GridTensor diag(const GridField& a) {
    GridTensor t(2, {Slot::lower, Slot::lower}, constant_like(a, 0.0));
    t(0, 0) = a;
    t(1, 1) = a;
    return t;
}

bool bitwise_equal(const GridField& a, const GridField& b) { return a.data() == b.data(); }

} // namespace

TEST(GridField, DifferencesAreFourthOrder) {
    double prev = 0.0;
    for (int n : {16, 32, 64}) {
        const auto f = GridField::sample(n, [](double x, double y) { return std::sin(2 * x) * std::cos(y); });
        const auto fx = GridField::sample(n, [](double x, double y) { return 2 * std::cos(2 * x) * std::cos(y); });
        const auto fxx = GridField::sample(n, [](double x, double y) { return -4 * std::sin(2 * x) * std::cos(y); });
        const double e1 = max_abs(partial(f, 0) - fx);
        const double e2 = max_abs(second_partial(f, 0) - fxx);
        if (prev > 0.0) EXPECT_NEAR(std::log2(prev / e1), 4.0, 0.15);
        prev = e1;
        EXPECT_LT(e2, e1 * 2.0);
    }
    const GridField c(32, 3.5);
    EXPECT_EQ(max_abs(partial(c, 1)), 0.0);
    EXPECT_EQ(max_abs(second_partial(c, 0)), 0.0);
}

TEST(Torus, FlatMetricHasExactlyZeroCurvature) {
    TorusOptions o;
    o.n = 32;
    const auto s = init_torus(o);
    EXPECT_FALSE(s.evolve_metric);
    EXPECT_EQ(min_value(s.g(0, 0)), 1.0);
    EXPECT_EQ(max_abs(s.g(0, 0)), 1.0);
    EXPECT_EQ(max_abs(s.g(0, 1)), 0.0);
    const auto cp = curvature(s.g);
    for (const auto& c : cp.riemann.components()) EXPECT_EQ(max_abs(c), 0.0);
    EXPECT_EQ(max_abs(cp.scalar), 0.0);
}

TEST(Torus, ZeroAmplitudeIsFlatAndSeedsReproduce) {
    TorusOptions flat;
    flat.n = 32;
    TorusOptions zero = flat;
    zero.amplitude = 0.0;
    zero.metric_seed = 99;
    const auto a = init_torus(flat), b = init_torus(zero);
    for (std::size_t k = 0; k < a.g.size(); ++k) EXPECT_TRUE(bitwise_equal(a.g.components()[k], b.g.components()[k]));

    TorusOptions pert = flat;
    pert.amplitude = 0.05;
    const auto p1 = init_torus(pert), p2 = init_torus(pert);
    for (std::size_t k = 0; k < p1.g.size(); ++k) {
        EXPECT_TRUE(bitwise_equal(p1.g.components()[k], p2.g.components()[k]));
        EXPECT_TRUE(bitwise_equal(p1.h.components()[k], p2.h.components()[k]));
    }
    EXPECT_TRUE(bitwise_equal(p1.u, p2.u));
    EXPECT_GT(max_abs(p1.g(0, 1)), 1e-3);
    EXPECT_GT(min_value(p1.u), 0.0);
}

TEST(Torus, GridCurvatureMatchesJetCurvature) {
    TorusOptions o;
    o.n = 64;
    o.amplitude = 0.05;
    const auto s = init_torus(o);
    const auto cp = curvature(s.g);
    const auto& spec = catalog_get("torus_generic");
    const double dx = 2.0 * std::numbers::pi / o.n;
    double err = 0.0, scale = 0.0;
    for (auto [i, j] : {std::pair{3, 7}, std::pair{20, 41}, std::pair{50, 12}}) {
        const double p[2] = {i * dx, j * dx};
        const auto jet = curvature(spec.chart, p, 0.0, 4);
        err = std::max(err, std::abs(cp.scalar(i, j) - jet.scalar.value()));
        scale = std::max(scale, std::abs(jet.scalar.value()));
    }
    ASSERT_GT(scale, 1e-3);
    EXPECT_LT(err / scale, 1e-4);
}

TEST(Torus, HeatSolutionForH) {
    TorusOptions o;
    o.n = 64;
    auto s = init_torus(o);
    s.h = diag(GridField::sample(o.n, [](double x, double) { return std::cos(x); }));
    advance_to(s, 0.1);
    EXPECT_DOUBLE_EQ(s.t, 0.1);
    const auto exact = GridField::sample(o.n, [](double x, double) { return std::exp(-0.1) * std::cos(x); });
    EXPECT_LE(max_abs(s.h(0, 0) - exact) / max_abs(exact), 1e-6);
    EXPECT_LE(max_abs(s.h(1, 1) - exact) / max_abs(exact), 1e-6);
    EXPECT_EQ(max_abs(s.h(0, 1)), 0.0);
}

TEST(Torus, HeatSolutionForU) {
    TorusOptions o;
    o.n = 64;
    auto s = init_torus(o);
    s.u = GridField::sample(o.n, [](double, double y) { return 2.0 + std::sin(y); });
    advance_to(s, 0.1);
    const auto exact = GridField::sample(o.n, [](double, double y) { return 2.0 + std::exp(-0.1) * std::sin(y); });
    EXPECT_LE(max_abs(s.u - exact) / max_abs(exact), 1e-6);
}

TEST(Torus, ZeroPerturbationStaysZero) {
    TorusOptions o;
    o.n = 32;
    o.amplitude = 0.05;
    auto s = init_torus(o);
    s.h = diag(GridField(o.n, 0.0));
    for (int k = 0; k < 5; ++k) step(s);
    for (const auto& c : s.h.components()) EXPECT_EQ(max_abs(c), 0.0);
}

TEST(Torus, TotalHeatIsConserved) {
    TorusOptions o;
    o.n = 64;
    auto s = init_torus(o);
    const double before = integral(s.u);
    advance_to(s, 0.05);
    EXPECT_NEAR(integral(s.u), before, 1e-12 * before);
}

TEST(Torus, Errors) {
    TorusOptions o;
    o.n = 8;
    EXPECT_THROW(init_torus(o), ConfigError);
    o.n = 32;
    o.amplitude = 10.0;
    EXPECT_THROW(init_torus(o), DomainError);
    o.amplitude = 0.0;
    o.u_offset = 0.0;
    EXPECT_THROW(init_torus(o), DomainError);

    o.u_offset = 2.0;
    auto s = init_torus(o);
    s.dt *= 2.0;
    EXPECT_THROW(step(s), ConfigError);

    // A lone spike: the stencil's negative weights drive neighbours below zero.
    auto spike = init_torus(o);
    spike.u = GridField(o.n, 1e-3);
    spike.u(10, 10) = 1.0;
    EXPECT_THROW(step(spike), DomainError);
}

TEST(Convergence, FourthOrderForTheFlatTorusIdentities) {
    for (const char* id : {"CHK-L1", "CHK-B2"}) {
        const auto r = dynamic_residual(id, {32, 64, 128});
        EXPECT_EQ(r.status, GridStatus::pass) << id << " " << r.note;
        EXPECT_TRUE(r.monotone);
        ASSERT_EQ(r.rows.size(), 3u);
        EXPECT_TRUE(std::isnan(r.rows[0].observed_order));
        for (std::size_t k = 1; k < r.rows.size(); ++k) {
            EXPECT_GE(r.rows[k].observed_order, 3.3) << id;
            EXPECT_LE(r.rows[k].observed_order, 4.7) << id;
        }
    }
}

TEST(Convergence, StudyIsDeterministic) {
    const auto a = grid_residual("CHK-B2", 32), b = grid_residual("CHK-B2", 32);
    EXPECT_EQ(a.residual, b.residual);
    EXPECT_EQ(a.scale, b.scale);
}

TEST(Convergence, Errors) {
    EXPECT_THROW(dynamic_residual("CHK-L1", {32, 64}), ConfigError);
    EXPECT_THROW(dynamic_residual("CHK-L1", {32, 64, 96}), ConfigError);
    EXPECT_THROW(dynamic_residual("CHK-H4", {16, 32, 64}), UnknownNameError);
}

TEST(Convergence, CsvColumns) {
    ConvergenceReport r;
    r.rows = {{32, 0.5, 1.0, std::nan("")}, {64, 0.03125, 1.0, 4.0}};
    EXPECT_EQ(to_csv(r), "N,residual,observed_order\n32,0.5,\n64,0.03125,4\n");
}
