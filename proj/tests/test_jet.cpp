#include <harnacklab/jet.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace hl;

namespace {

JetSpacePtr space1(int order) { return JetSpace::make({VarRole::space}, order); }
JetSpacePtr space2(int order) { return JetSpace::make({VarRole::space, VarRole::space}, order); }

// Dense polynomial in two variables, coefficient map keyed by (i, j); used as
// an independent multiplication oracle.
struct Poly2 {
    int order;
    std::vector<std::vector<double>> c;
    explicit Poly2(int k) : order(k), c(k + 1, std::vector<double>(k + 1, 0.0)) {}
    Poly2 operator*(const Poly2& b) const {
        Poly2 r(order);
        for (int i = 0; i <= order; ++i)
            for (int j = 0; i + j <= order; ++j)
                for (int k = 0; i + k <= order; ++k)
                    for (int l = 0; j + l <= order && i + k + j + l <= order; ++l)
                        r.c[i + k][j + l] += c[i][j] * b.c[k][l];
        return r;
    }
};

Jet to_jet(const Poly2& p, const JetSpacePtr& sp) {
    Jet j(sp);
    for (int a = 0; a <= p.order; ++a)
        for (int b = 0; a + b <= p.order; ++b) {
            const int alpha[2] = {a, b};
            j[sp->index_of(alpha)] = p.c[a][b];
        }
    return j;
}

} // namespace

TEST(JetSpace, CountsAndInvariants) {
    auto sp = space2(2);
    EXPECT_EQ(sp->size(), 6);
    auto st = JetSpace::make_chart(2, true, false, 6);
    // a + b + 2c <= 6
    EXPECT_EQ(st->size(), 28 + 15 + 6 + 1);
    EXPECT_THROW(JetSpace::make({}, 2), ConfigError);
    EXPECT_THROW(space1(9), ConfigError);
    EXPECT_THROW(space1(0), ConfigError);
    EXPECT_THROW(JetSpace::make(std::vector<VarRole>(7, VarRole::space), 2), ConfigError);
}

TEST(JetSeed, IdentitySeed) {
    auto sp = space1(3);
    const double p[1] = {2.0};
    auto x = seed_variables(p, sp);
    ASSERT_EQ(x.size(), 1u);
    EXPECT_EQ(x[0].coeff({0}), 2.0);
    EXPECT_EQ(x[0].coeff({1}), 1.0);
    EXPECT_EQ(x[0].coeff({2}), 0.0);
    EXPECT_EQ(x[0].coeff({3}), 0.0);
}

TEST(JetSeed, UnitLinearSlots) {
    auto sp = space2(2);
    const double p[2] = {0.0, 0.0};
    auto x = seed_variables(p, sp);
    EXPECT_EQ(x[0].coeff({1, 0}), 1.0);
    EXPECT_EQ(x[0].coeff({0, 1}), 0.0);
    EXPECT_EQ(x[1].coeff({0, 1}), 1.0);
    EXPECT_EQ(x[1].coeff({1, 0}), 0.0);
    EXPECT_EQ(x[0].value(), 0.0);
}

TEST(JetSeed, SquareOfShiftedVariable) {
    auto sp = space1(3);
    const double p[1] = {1.0};
    auto x = seed_variables(p, sp)[0];
    auto y = x * x;
    EXPECT_EQ(y.coeff({0}), 1.0);
    EXPECT_EQ(y.coeff({1}), 2.0);
    EXPECT_EQ(y.coeff({2}), 1.0);
    EXPECT_EQ(y.coeff({3}), 0.0);
}

TEST(JetSeed, DimensionMismatch) {
    auto sp = space2(2);
    const double p[1] = {0.0};
    EXPECT_THROW(seed_variables(p, sp), ConfigError);
}

TEST(JetRing, ProductOfAffineFactors) {
    auto sp = space2(2);
    const double p[2] = {0.0, 0.0};
    auto v = seed_variables(p, sp);
    auto r = (1.0 + v[0]) * (1.0 + v[1]);
    EXPECT_EQ(r.coeff({0, 0}), 1.0);
    EXPECT_EQ(r.coeff({1, 0}), 1.0);
    EXPECT_EQ(r.coeff({0, 1}), 1.0);
    EXPECT_EQ(r.coeff({1, 1}), 1.0);
    EXPECT_EQ(r.coeff({2, 0}), 0.0);
    EXPECT_EQ(r.coeff({0, 2}), 0.0);
}

TEST(JetRing, GeometricSeries) {
    auto sp = space1(3);
    const double p[1] = {0.0};
    auto x = seed_variables(p, sp)[0];
    auto r = 1.0 / (1.0 + x);
    EXPECT_DOUBLE_EQ(r.coeff({0}), 1.0);
    EXPECT_DOUBLE_EQ(r.coeff({1}), -1.0);
    EXPECT_DOUBLE_EQ(r.coeff({2}), 1.0);
    EXPECT_DOUBLE_EQ(r.coeff({3}), -1.0);
}

TEST(JetRing, SelfDifferenceIsZero) {
    auto sp = space2(4);
    const double p[2] = {0.3, -1.2};
    auto v = seed_variables(p, sp);
    auto d = v[0] - v[0];
    for (double c : d.coefficients()) EXPECT_EQ(c, 0.0);
}

TEST(JetRing, DivisionBySingularJet) {
    auto sp = space1(3);
    const double p[1] = {0.0};
    auto x = seed_variables(p, sp)[0];
    EXPECT_THROW(1.0 / x, SingularPointError);
    EXPECT_THROW(x / x, SingularPointError);
}

TEST(JetRing, MixedSpacesRejected) {
    auto a = Jet::constant(space1(3), 1.0);
    auto b = Jet::constant(space1(4), 1.0);
    EXPECT_THROW(a + b, ConfigError);
}

TEST(JetAnalytic, ExpAtZero) {
    auto sp = space1(2);
    const double p[1] = {0.0};
    auto r = exp(seed_variables(p, sp)[0]);
    EXPECT_DOUBLE_EQ(r.coeff({0}), 1.0);
    EXPECT_DOUBLE_EQ(r.coeff({1}), 1.0);
    EXPECT_DOUBLE_EQ(r.coeff({2}), 0.5);
}

TEST(JetAnalytic, LogOnePlusX) {
    auto sp = space1(3);
    const double p[1] = {0.0};
    auto r = log(1.0 + seed_variables(p, sp)[0]);
    EXPECT_DOUBLE_EQ(r.coeff({0}), 0.0);
    EXPECT_DOUBLE_EQ(r.coeff({1}), 1.0);
    EXPECT_DOUBLE_EQ(r.coeff({2}), -0.5);
    EXPECT_DOUBLE_EQ(r.coeff({3}), 1.0 / 3.0);
}

TEST(JetAnalytic, SqrtFourPlusX) {
    auto sp = space1(1);
    const double p[1] = {0.0};
    auto r = sqrt(4.0 + seed_variables(p, sp)[0]);
    EXPECT_DOUBLE_EQ(r.coeff({0}), 2.0);
    EXPECT_DOUBLE_EQ(r.coeff({1}), 0.25);
}

TEST(JetAnalytic, DomainViolations) {
    auto sp = space1(3);
    const double p[1] = {0.0};
    auto x = seed_variables(p, sp)[0];
    EXPECT_THROW(log(x), SingularPointError);
    EXPECT_THROW(sqrt(x - 1.0), SingularPointError);
    EXPECT_THROW(pow(x - 2.0, 0.5), SingularPointError);
    EXPECT_NO_THROW(pow(x - 2.0, 3.0));
}

TEST(JetAnalytic, SinCosMatchClosedForm) {
    auto sp = space1(6);
    const double p[1] = {0.7};
    auto x = seed_variables(p, sp)[0];
    auto s = sin(x), c = cos(x);
    const double d_sin[4] = {std::sin(0.7), std::cos(0.7), -std::sin(0.7), -std::cos(0.7)};
    for (int k = 0; k <= 6; ++k) {
        EXPECT_NEAR(s.deriv({k}), d_sin[k % 4], 1e-13);
        EXPECT_NEAR(c.deriv({k}), d_sin[(k + 1) % 4], 1e-13);
    }
    auto one = s * s + c * c;
    EXPECT_NEAR(one.value(), 1.0, 1e-15);
    for (int k = 1; k <= 6; ++k) EXPECT_NEAR(one.coeff({k}), 0.0, 1e-14);
}

TEST(JetAnalytic, PowMatchesRepeatedProduct) {
    auto sp = space2(5);
    const double p[2] = {1.3, 0.4};
    auto v = seed_variables(p, sp);
    auto a = 1.0 + v[0] * v[0] + v[1];
    auto cube = a * a * a;
    auto pw = pow(a, 3.0);
    for (int i = 0; i < sp->size(); ++i) EXPECT_NEAR(pw[i], cube[i], 1e-12 * (1.0 + std::abs(cube[i])));
    auto inv = pow(a, -1.0);
    auto ref = 1.0 / a;
    for (int i = 0; i < sp->size(); ++i) EXPECT_NEAR(inv[i], ref[i], 1e-13 * (1.0 + std::abs(ref[i])));
}

TEST(JetCoeff, DerivativeOfCubic) {
    auto sp = space1(3);
    const double p[1] = {2.0};
    auto x = seed_variables(p, sp)[0];
    auto c = x * x * x;
    EXPECT_DOUBLE_EQ(c.deriv({2}), 12.0);
    EXPECT_DOUBLE_EQ(c.deriv({3}), 6.0);
}

TEST(JetCoeff, MixedDerivative) {
    auto sp = space2(2);
    const double p[2] = {0.0, 0.0};
    auto v = seed_variables(p, sp);
    auto r = (1.0 + v[0]) * (1.0 + v[1]);
    EXPECT_DOUBLE_EQ(r.deriv({1, 1}), 1.0);
}

TEST(JetCoeff, ZeroJetAndOverflow) {
    auto sp = space2(3);
    Jet z(sp);
    EXPECT_EQ(z.coeff({2, 1}), 0.0);
    EXPECT_THROW(z.coeff({3, 1}), OrderError);
    auto dz = partial(z, 0);
    EXPECT_EQ(dz.order(), 2);
    EXPECT_THROW(dz.coeff({2, 1}), OrderError);
}

TEST(JetCalculus, DifferentiationLowersOrderByWeight) {
    auto sp = JetSpace::make_chart(1, true, false, 4);
    const double p[1] = {0.0};
    auto x = seed_variables(p, sp)[0];
    auto t = seed_time(0.5, sp);
    auto u = x * x * t;
    auto ut = partial_t(u);
    EXPECT_EQ(ut.order(), 2);
    EXPECT_DOUBLE_EQ(ut.coeff({2, 0}), 1.0);
    auto ux = partial(u, 0);
    EXPECT_EQ(ux.order(), 3);
    EXPECT_DOUBLE_EQ(ux.coeff({1, 0}), 1.0);
    EXPECT_DOUBLE_EQ(ux.coeff({1, 1}), 2.0);
    EXPECT_THROW(partial_t(partial_t(partial_t(u))), OrderError);
}

TEST(JetCalculus, IntegrateInvertsDifferentiate) {
    auto sp = JetSpace::make_chart(2, true, false, 6);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1, 1);
    Jet a(sp);
    for (int i = 0; i < sp->size(); ++i) a[i] = U(rng);
    auto b = partial_t(integrate(a.with_order(4), sp->time_var()));
    for (int i = 0; i < sp->size() && sp->degree(i) <= 4; ++i) EXPECT_NEAR(b[i], a[i], 1e-15);
}

// Leibniz / exactness of truncated multiplication, against the dense oracle.
TEST(JetProperty, ProductMatchesDenseOracle) {
    auto sp = space2(6);
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int trial = 0; trial < 100; ++trial) {
        Poly2 p(6), q(6);
        for (int i = 0; i <= 6; ++i)
            for (int j = 0; i + j <= 6; ++j) {
                p.c[i][j] = U(rng);
                q.c[i][j] = U(rng);
            }
        auto ref = p * q;
        auto got = to_jet(p, sp) * to_jet(q, sp);
        auto exp_jet = to_jet(ref, sp);
        for (int i = 0; i < sp->size(); ++i)
            EXPECT_NEAR(got[i], exp_jet[i], 1e-14 * (1.0 + std::abs(exp_jet[i])));
    }
}

TEST(JetProperty, ExpLogRoundTrip) {
    auto sp = JetSpace::make_chart(2, true, false, 6);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int trial = 0; trial < 50; ++trial) {
        Jet a(sp);
        for (int i = 0; i < sp->size(); ++i) a[i] = U(rng);
        a[0] = 1.5 + 0.5 * U(rng);
        auto back = exp(log(a));
        for (int i = 0; i < sp->size(); ++i) EXPECT_NEAR(back[i], a[i], 1e-12 * (1.0 + std::abs(a[i])));
        auto q = (a * a) / a;
        for (int i = 0; i < sp->size(); ++i) EXPECT_NEAR(q[i], a[i], 1e-12 * (1.0 + std::abs(a[i])));
    }
}

// deriv() against central finite differences of the closed-form function.
TEST(JetProperty, DerivMatchesFiniteDifferences) {
    auto sp = space2(4);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-1, 1);
    auto fn = [](double x, double y) { return std::exp(0.3 * x) * std::sin(x + 2.0 * y) / (2.0 + x * x); };
    for (int trial = 0; trial < 20; ++trial) {
        const double p[2] = {U(rng), U(rng)};
        auto v = seed_variables(p, sp);
        auto j = exp(0.3 * v[0]) * sin(v[0] + 2.0 * v[1]) / (2.0 + v[0] * v[0]);
        const double h = 1e-3;
        const double fx = (fn(p[0] + h, p[1]) - fn(p[0] - h, p[1])) / (2 * h);
        const double fxy = (fn(p[0] + h, p[1] + h) - fn(p[0] + h, p[1] - h) - fn(p[0] - h, p[1] + h) +
                            fn(p[0] - h, p[1] - h)) / (4 * h * h);
        const double fyy = (fn(p[0], p[1] + h) - 2 * fn(p[0], p[1]) + fn(p[0], p[1] - h)) / (h * h);
        EXPECT_NEAR(j.value(), fn(p[0], p[1]), 1e-15);
        EXPECT_NEAR(j.deriv({1, 0}), fx, 1e-5);
        EXPECT_NEAR(j.deriv({1, 1}), fxy, 1e-5);
        EXPECT_NEAR(j.deriv({0, 2}), fyy, 1e-5);
    }
}
