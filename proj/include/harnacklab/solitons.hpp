#pragma once

/**
 * @file solitons.hpp
 * @brief Catalog of explicit gradient Ricci solitons and flows, and the
 *        space-time jet backgrounds built from them.
 */

#include <harnacklab/chart.hpp>
#include <harnacklab/residual.hpp>
#include <harnacklab/sampling.hpp>
#include <harnacklab/trig.hpp>

#include <functional>
#include <string>
#include <vector>

namespace hl {

enum class SolitonClass { steady, shrinking, plain_flow };

/// Evolution law of the potential f.
enum class PotentialRule {
    heat,              ///< df/dt = Laplacian f
    gradient_squared,  ///< df/dt = |grad f|^2
    conjugate,         ///< df/dt = -Laplacian f + |grad f|^2 - R
    fixed,             ///< df/dt = 0
};

/// How time derivatives of g and f are obtained.
enum class TimeModel {
    explicit_formula,  ///< the chart and potential are closed-form in t
    lifted,            ///< static data at one time, propagated by Ricci flow and the potential rule
};

using PotentialFn = std::function<Jet(std::span<const Jet> x, const Jet& t)>;

struct SolitonSpec {
    std::string name;
    std::string description;
    MetricChart chart;
    PotentialFn potential;
    SolitonClass cls = SolitonClass::steady;
    PotentialRule rule = PotentialRule::fixed;
    TimeModel time_model = TimeModel::explicit_formula;
    /// Open interval of times where the formulas are valid.
    double t_valid_lo = -1e300, t_valid_hi = 1e300;
    SampleBox box;
    /// R + |grad f|^2 = 1 holds.
    bool unit_normalized = false;
    /// false for grid-only flows, which have no potential.
    bool jet_checks = true;
    bool periodic = false;

    int dim() const { return chart.dim; }
    bool is_soliton() const { return cls != SolitonClass::plain_flow; }
};

const char* to_string(SolitonClass c);
const char* to_string(PotentialRule r);

const std::vector<std::string>& catalog_names();
/// Throws UnknownNameError listing the valid names.
const SolitonSpec& catalog_get(const std::string& name);

/// f = a.x + |a|^2 t on flat R^n.
SolitonSpec make_flat_steady_linear(std::vector<double> a);
/// The metric perturbation used by torus_generic: g = delta + amplitude * p_ij.
struct TorusPerturbation {
    double amplitude = 0.0;
    TrigPolynomial p00, p01, p11;
};
TorusPerturbation torus_perturbation(double amplitude, std::uint64_t seed);

struct BackgroundOptions {
    int order = 6;
    bool time = false;    ///< include t as a jet variable
    bool deform = false;  ///< include a deformation parameter s
};

/// Metric and potential of a catalog entry as jets around (p, t).
struct Background {
    std::string soliton;
    SolitonClass cls = SolitonClass::steady;
    JetSpacePtr space;
    std::vector<double> point;
    double time = 0.0;
    std::vector<Jet> x;  ///< coordinate jets
    Jet t;               ///< time jet (a constant when time is not a variable)
    JetTensor g;
    Jet f;
    JetPack cp;
};

Background make_background(const SolitonSpec& spec, std::span<const double> p, double t,
                           const BackgroundOptions& opts);

/// Right-hand side of the potential rule on a given geometry.
Jet potential_rate(PotentialRule rule, const Jet& f, const JetPack& cp);

/// Soliton equation residuals at (p, t): Rc + grad grad f (+ g / 2t for
/// shrinkers); for explicit flows also dg/dt + 2 Rc and the potential rule.
/// Empty for plain flows.
std::vector<NamedResidual> soliton_residual(const SolitonSpec& spec, std::span<const double> p, double t,
                                            int order = 6);

/// Steady: Laplacian R + 2|Rc|^2 = <grad R, grad f> and 2 Rc(grad f) = grad R.
/// Shrinking: 1/2 Laplacian R + |Rc|^2 = 1/2 <grad R, grad f> - R / 2t and
/// 2 Rc(grad f) = grad R. Empty for plain flows.
std::vector<NamedResidual> structural_identities(const SolitonSpec& spec, std::span<const double> p, double t,
                                                 int order = 6);

/// R + |grad f|^2 = 1 and R = -Laplacian f. Empty unless unit-normalized.
std::vector<NamedResidual> normalization_identities(const SolitonSpec& spec, std::span<const double> p,
                                                    double t, int order = 6);

} // namespace hl
