#pragma once

/**
 * @file chart.hpp
 * @brief Coordinate charts evaluated on jets, and a few standard metrics.
 */

#include <harnacklab/geometry.hpp>
#include <harnacklab/jet.hpp>

#include <functional>
#include <span>

namespace hl {

using JetTensor = Tensor<Jet>;
using JetPack = CurvaturePack<Jet>;

/// Metric components g_ij(x, t) evaluated on coordinate and time jets.
struct MetricChart {
    int dim = 2;
    bool time_dependent = false;
    std::function<JetTensor(std::span<const Jet> x, const Jet& t)> metric;
    /// Valid chart region; an empty predicate accepts every point.
    std::function<bool(std::span<const double> p, double t)> domain;
};

/// Component values at the base point.
std::vector<double> values(const JetTensor& t);

/// Size of the pieces of grad T at the base point, per component of grad T:
/// |d_i T| plus the absolute connection terms. Used to scale identities
/// whose covariant derivatives vanish through cancellation.
std::vector<double> covariant_derivative_scale(const JetTensor& t, const JetPack& cp);
/// Size of the product-rule pieces of d_i R with R = g^pq R_pq.
std::vector<double> scalar_gradient_scale(const JetPack& cp);

/// Curvature of the chart at (p, t) from purely spatial jets of order K.
JetPack curvature(const MetricChart& chart, std::span<const double> p, double t, int order);

namespace charts {

MetricChart flat(int n);
/// Round unit sphere in stereographic coordinates, 4 delta / (1 + |x|^2)^2.
MetricChart unit_sphere(int n);
/// Hamilton's cigar scaled by `scale`: scale * delta / (1 + x^2 + y^2).
MetricChart cigar(double scale);
/// c * g for a constant c.
MetricChart scaled(MetricChart base, double c);

} // namespace charts

} // namespace hl
