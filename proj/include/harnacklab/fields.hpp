#pragma once

/**
 * @file fields.hpp
 * @brief Perturbations h, vector fields X and scalar fields u on a jet
 *        background, and PDE-constrained propagation of their time jets.
 *
 * Random fields are jet-local: their spatial Taylor coefficients at the
 * evaluation point are drawn from a stream derived from (seed, point index,
 * field tag), uniform in [-1, 1].
 */

#include <harnacklab/solitons.hpp>

#include <cstdint>
#include <functional>
#include <string>

namespace hl {

/// Stream tags separating the random fields drawn at one point.
namespace stream_tag {
constexpr std::uint64_t perturbation = 0x68;   // h
constexpr std::uint64_t perturbation2 = 0x6832;
constexpr std::uint64_t vector = 0x58;         // X
constexpr std::uint64_t scalar = 0x75;         // u
constexpr std::uint64_t potential = 0x66;      // generic f
} // namespace stream_tag

enum class PerturbationKind { ricci, metric, explicit_closed_form, random_jet_seed };
enum class VectorKind { neg_grad_f, explicit_closed_form, random_polynomial };
enum class ScalarKind { exp_f, closed_form, random_jet_seed };

/// Evolution equations used for time propagation.
enum class EvolutionPde {
    lichnerowicz_flow,    ///< dh/dt = Delta_L h
    scalar_heat_eps,      ///< du/dt = eps^-1 Laplacian u + R u
    conjugate_potential,  ///< df/dt = -Laplacian f + |grad f|^2 - R
    potential_rule,       ///< the soliton's own potential rule
};

PerturbationKind parse_perturbation_kind(const std::string& s);
VectorKind parse_vector_kind(const std::string& s);
ScalarKind parse_scalar_kind(const std::string& s);
const char* to_string(PerturbationKind k);
const char* to_string(VectorKind k);
const char* to_string(ScalarKind k);

using TensorFn = std::function<JetTensor(const Background&)>;
using ScalarFn = std::function<Jet(const Background&)>;

struct PerturbationField {
    PerturbationKind kind = PerturbationKind::random_jet_seed;
    std::uint64_t seed = 0;
    std::uint64_t tag = stream_tag::perturbation;
    TensorFn closed_form;    ///< explicit_closed_form only
    int max_degree = 5;      ///< random_jet_seed: highest spatial degree drawn
};

struct VectorFieldSpec {
    VectorKind kind = VectorKind::random_polynomial;
    std::uint64_t seed = 0;
    TensorFn closed_form;
    int space_degree = 3;
    int time_degree = 1;
};

struct ScalarFieldSpec {
    ScalarKind kind = ScalarKind::random_jet_seed;
    std::uint64_t seed = 0;
    std::uint64_t tag = stream_tag::scalar;
    bool positive = true;
    ScalarFn closed_form;
    int max_degree = 5;
};

PerturbationField make_perturbation(PerturbationKind kind, std::uint64_t seed, TensorFn closed_form = {});

/// Spatial field values at the background point. Random kinds depend only
/// on (seed, point_index) and carry no time dependence; ricci and metric
/// inherit the background's time dependence.
JetTensor evaluate(const PerturbationField& field, const Background& bg, std::uint64_t point_index);
/// X^i as a space-time field (random polynomials include powers of t - t0).
JetTensor evaluate(const VectorFieldSpec& field, const Background& bg, std::uint64_t point_index);
Jet evaluate(const ScalarFieldSpec& field, const Background& bg, std::uint64_t point_index);

/// Symmetric tensor whose spatial Taylor coefficients up to `max_degree`
/// are uniform in [-1, 1].
JetTensor random_symmetric_jet(const Background& bg, RandomStream& rng, int max_degree);
/// Scalar with uniform [-1, 1] coefficients; a positive field gets its
/// constant term from (1, 3).
Jet random_scalar_jet(const Background& bg, RandomStream& rng, int max_degree, bool positive);

/// dh/dt = Delta_L h on the background geometry.
JetTensor propagate_lichnerowicz(const JetTensor& h0, const Background& bg);
/// Scalar propagation; `eps` is used by scalar_heat_eps only.
Jet propagate_scalar(const Jet& u0, EvolutionPde pde, const Background& bg, double eps = 1.0,
                     PotentialRule rule = PotentialRule::heat);
/// Dispatch on a field: h is propagated with the Lichnerowicz flow.
JetTensor propagate_evolution_jet(const PerturbationField& field, const Background& bg,
                                  std::uint64_t point_index);

} // namespace hl
