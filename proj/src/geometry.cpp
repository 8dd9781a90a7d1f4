#include <harnacklab/chart.hpp>

#include <cmath>

namespace hl {

std::vector<double> values(const JetTensor& t) {
    std::vector<double> out;
    out.reserve(t.size());
    for (const auto& c : t.components()) out.push_back(c.value());
    return out;
}

std::vector<double> covariant_derivative_scale(const JetTensor& t, const JetPack& cp) {
    const int n = cp.dim;
    const int r = t.rank();
    const auto& G = cp.christoffel;
    std::vector<double> out(static_cast<std::size_t>(n) * t.size(), 0.0);
    for (std::size_t k = 0; k < t.size(); ++k) {
        const auto idx = t.unflatten(k);
        for (int i = 0; i < n; ++i) {
            double v = std::abs(partial(t.components()[k], i).value());
            for (int s = 0; s < r; ++s) {
                auto j = idx;
                for (int m = 0; m < n; ++m) {
                    j[s] = m;
                    const double tm = std::abs(t.components()[t.flatten(j)].value());
                    v += tm * std::abs(t.slots()[s] == Slot::lower ? G(m, i, idx[s]).value() : G(idx[s], i, m).value());
                }
            }
            out[static_cast<std::size_t>(i) * t.size() + k] = v;
        }
    }
    return out;
}

std::vector<double> scalar_gradient_scale(const JetPack& cp) {
    const int n = cp.dim;
    std::vector<double> out(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q)
                out[i] += std::abs(partial(cp.inverse(p, q), i).value() * cp.ricci(p, q).value()) +
                          std::abs(cp.inverse(p, q).value() * partial(cp.ricci(p, q), i).value());
    return out;
}

JetPack curvature(const MetricChart& chart, std::span<const double> p, double t, int order) {
    if (static_cast<int>(p.size()) != chart.dim)
        throw DomainError("point dimension does not match the chart");
    if (chart.domain && !chart.domain(p, t)) throw DomainError("point outside the chart domain");
    auto sp = JetSpace::make_chart(chart.dim, false, false, order);
    auto x = seed_variables(p, sp);
    auto g = chart.metric(x, Jet::constant(sp, t));
    return curvature(g);
}

namespace charts {

namespace {

Jet radius2(std::span<const Jet> x) {
    Jet r = x[0] * x[0];
    for (std::size_t i = 1; i < x.size(); ++i) r += x[i] * x[i];
    return r;
}

JetTensor conformal(int n, const Jet& factor) {
    auto g = make_tensor(n, {Slot::lower, Slot::lower}, factor);
    for (int i = 0; i < n; ++i) g(i, i) = factor;
    return g;
}

} // namespace

MetricChart flat(int n) {
    MetricChart c;
    c.dim = n;
    c.metric = [n](std::span<const Jet> x, const Jet&) { return conformal(n, constant_like(x[0], 1.0)); };
    return c;
}

MetricChart unit_sphere(int n) {
    MetricChart c;
    c.dim = n;
    c.metric = [n](std::span<const Jet> x, const Jet&) {
        const Jet d = 1.0 + radius2(x);
        return conformal(n, 4.0 / (d * d));
    };
    return c;
}

MetricChart cigar(double scale) {
    MetricChart c;
    c.dim = 2;
    c.metric = [scale](std::span<const Jet> x, const Jet&) {
        return conformal(2, scale / (1.0 + radius2(x)));
    };
    return c;
}

MetricChart scaled(MetricChart base, double k) {
    auto inner = base.metric;
    base.metric = [inner, k](std::span<const Jet> x, const Jet& t) { return inner(x, t) * k; };
    return base;
}

} // namespace charts

} // namespace hl
