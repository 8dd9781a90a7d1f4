#pragma once

/**
 * @file grid.hpp
 * @brief Finite-difference cross-check on the periodic torus [0, 2pi)^2.
 *
 * GridField stores N x N samples and implements the same field algebra as
 * Jet, so the geometry and Harnack templates run unchanged on grids with
 * partial derivatives replaced by 4th-order central differences. States
 * are advanced with classical RK4; identities are evaluated at a fixed
 * time with a 5-point centered time derivative and their max-norm
 * residual is tracked under refinement.
 */

#include <harnacklab/harnack.hpp>
#include <harnacklab/trig.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace hl {

class GridField {
public:
    GridField() = default;
    explicit GridField(int n, double value = 0.0);
    /// Samples fn(x, y) at x_i = i dx, y_j = j dx.
    static GridField sample(int n, const std::function<double(double, double)>& fn);

    int n() const { return n_; }
    double dx() const;
    std::size_t size() const { return data_.size(); }
    /// Cell (i, j); i runs along x, j along y.
    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * n_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * n_ + j]; }
    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    GridField& operator+=(const GridField& b);
    GridField& operator-=(const GridField& b);
    GridField& operator*=(const GridField& b);
    GridField& operator/=(const GridField& b);
    GridField& operator+=(double s);
    GridField& operator*=(double s);

    friend GridField operator+(GridField a, const GridField& b) { return a += b; }
    friend GridField operator-(GridField a, const GridField& b) { return a -= b; }
    friend GridField operator*(GridField a, const GridField& b) { return a *= b; }
    friend GridField operator/(GridField a, const GridField& b) { return a /= b; }
    friend GridField operator+(GridField a, double s) { return a += s; }
    friend GridField operator+(double s, GridField a) { return a += s; }
    friend GridField operator-(GridField a, double s) { return a += -s; }
    friend GridField operator-(double s, GridField a) { return (a *= -1.0) += s; }
    friend GridField operator*(GridField a, double s) { return a *= s; }
    friend GridField operator*(double s, GridField a) { return a *= s; }
    friend GridField operator/(GridField a, double s) { return a *= 1.0 / s; }
    friend GridField operator/(double s, const GridField& a);
    friend GridField operator-(GridField a) { return a *= -1.0; }

private:
    void require_same(const GridField& b) const;

    int n_ = 0;
    std::vector<double> data_;
};

/// 4th-order central first difference along axis 0 (x) or 1 (y).
GridField partial(const GridField& a, int axis);
/// Compact 4th-order second difference along one axis.
GridField second_partial(const GridField& a, int axis);
/// Flat Laplacian from the compact stencil.
GridField flat_laplacian(const GridField& a);
GridField constant_like(const GridField& a, double value);
double max_abs(const GridField& a);
double min_value(const GridField& a);
GridField sqrt(GridField a);
GridField log(GridField a);
GridField exp(GridField a);
/// Sum of samples times dx^2 (flat measure).
double integral(const GridField& a);

using GridTensor = Tensor<GridField>;
using GridPack = CurvaturePack<GridField>;

/// Seeded X^i(x, y, t) = a_i(x, y) + t b_i(x, y) with trigonometric a_i, b_i.
struct GridVectorField {
    TrigPolynomial a[2], b[2];
    GridTensor at(int n, double t) const;
    /// dX/dt, exact.
    GridTensor rate(int n) const;
};
GridVectorField grid_vector_field(std::uint64_t seed, int bandlimit = 2);

struct TorusOptions {
    int n = 64;
    /// Metric perturbation amplitude; 0 gives the flat torus. The perturbation
    /// is the one used by the torus_generic catalog entry.
    double amplitude = 0.0;
    std::uint64_t metric_seed = 1;
    std::uint64_t field_seed = 42;
    int bandlimit = 2;
    double cfl = 0.2;
    /// u solves du/dt = eps^-1 Laplacian u + R u.
    double eps = 1.0;
    /// u = u_offset + a trigonometric polynomial with coefficient sum 1.
    double u_offset = 2.0;
};

struct GridState {
    int n = 0;
    double t = 0.0;
    double dt = 0.0;
    double cfl = 0.2;
    double eps = 1.0;
    /// Ricci flow for g; off for the flat torus, where g stays exactly delta.
    bool evolve_metric = false;
    GridTensor g, h;
    GridField u, f;
};

/// Throws ConfigError for N < 16 and DomainError when the perturbed metric
/// or u is not positive on the grid. The step size is cfl * dx^2.
GridState init_torus(const TorusOptions& opts);

/// One RK4 step: dg/dt = -2Rc, dh/dt = Delta_L h, du/dt = eps^-1 Laplacian u + R u.
/// The flat torus uses the compact stencil for the componentwise heat flow.
/// Throws ConfigError if dt exceeds cfl * dx^2 and DomainError if u loses positivity.
void step(GridState& s);

/// Advances with uniform steps to exactly time t_end (adjusting dt down).
void advance_to(GridState& s, double t_end);

enum class GridStatus { pass, fail, inconclusive };
const char* to_string(GridStatus s);

struct ConvergenceRow {
    int n = 0;
    double residual = 0.0;  ///< max-norm of LHS - RHS at t*
    double scale = 0.0;     ///< max-norm of the summed term magnitudes
    double observed_order = 0.0;  ///< log2 of the residual ratio to the previous row; NaN on the first row
};

struct ConvergenceReport {
    std::string check_id;
    std::vector<ConvergenceRow> rows;
    double fitted_order = 0.0;  ///< least-squares slope of -log residual against log N
    bool monotone = true;
    double band_lo = 0.0, band_hi = 0.0;  ///< accepted range for every observed order
    GridStatus status = GridStatus::inconclusive;
    std::string note;
    double millis = 0.0;
};

struct GridStudyOptions {
    double t_star = 0.05;
    double cfl = 0.2;
    /// Perturbation amplitude used by CHK-EQ1; CHK-L1 and CHK-B2 use the flat torus.
    double amplitude = 0.05;
    std::uint64_t metric_seed = 1;
    std::uint64_t field_seed = 42;
};

/// Check ids supported by dynamic_residual.
const std::vector<std::string>& grid_check_ids();

/// Max-norm residual of the identity at t* for one resolution.
ConvergenceRow grid_residual(const std::string& check_id, int n, const GridStudyOptions& opts = {});

/// Residuals over resolutions (at least 3, each double the previous) with
/// observed orders. Non-monotone residuals give an inconclusive report.
ConvergenceReport dynamic_residual(const std::string& check_id, const std::vector<int>& resolutions,
                                   const GridStudyOptions& opts = {});

/// CSV with columns N, residual, observed_order.
std::string to_csv(const ConvergenceReport& r);

} // namespace hl
