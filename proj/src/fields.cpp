#include <harnacklab/fields.hpp>

namespace hl {

namespace {

/// Product of (x_i - p_i)^alpha_i over the space variables (and (t - t0)^beta).
Jet monomial(const Background& bg, std::span<const std::uint8_t> alpha, int time_power) {
    const auto& sp = *bg.space;
    Jet m = Jet::constant(bg.space, 1.0);
    for (int i = 0; i < sp.num_space(); ++i) {
        const int e = alpha[sp.space_var(i)];
        if (e == 0) continue;
        const Jet dx = bg.x[i] - bg.point[i];
        for (int k = 0; k < e; ++k) m *= dx;
    }
    if (time_power > 0) {
        const Jet dt = bg.t - bg.time;
        for (int k = 0; k < time_power; ++k) m *= dt;
    }
    return m;
}

bool is_spatial(const JetSpace& sp, int index) {
    const auto e = sp.exponents(index);
    for (int v = 0; v < sp.num_vars(); ++v)
        if (sp.role(v) != VarRole::space && e[v] != 0) return false;
    return true;
}

Jet random_spatial_poly(const Background& bg, RandomStream& rng, int max_degree) {
    const auto& sp = *bg.space;
    Jet a(bg.space);
    for (int k = 0; k < sp.size(); ++k)
        if (is_spatial(sp, k) && sp.degree(k) <= max_degree) a[k] = rng.uniform(-1.0, 1.0);
    return a;
}

} // namespace

PerturbationKind parse_perturbation_kind(const std::string& s) {
    if (s == "ricci") return PerturbationKind::ricci;
    if (s == "metric") return PerturbationKind::metric;
    if (s == "explicit_closed_form") return PerturbationKind::explicit_closed_form;
    if (s == "random_jet_seed") return PerturbationKind::random_jet_seed;
    throw UnknownNameError("unknown perturbation kind '" + s +
                           "'; valid kinds: ricci, metric, explicit_closed_form, random_jet_seed");
}

VectorKind parse_vector_kind(const std::string& s) {
    if (s == "neg_grad_f") return VectorKind::neg_grad_f;
    if (s == "explicit_closed_form") return VectorKind::explicit_closed_form;
    if (s == "random_polynomial") return VectorKind::random_polynomial;
    throw UnknownNameError("unknown vector field kind '" + s +
                           "'; valid kinds: neg_grad_f, explicit_closed_form, random_polynomial");
}

ScalarKind parse_scalar_kind(const std::string& s) {
    if (s == "exp_f") return ScalarKind::exp_f;
    if (s == "closed_form") return ScalarKind::closed_form;
    if (s == "random_jet_seed") return ScalarKind::random_jet_seed;
    throw UnknownNameError("unknown scalar field kind '" + s + "'; valid kinds: exp_f, closed_form, random_jet_seed");
}

const char* to_string(PerturbationKind k) {
    switch (k) {
    case PerturbationKind::ricci: return "ricci";
    case PerturbationKind::metric: return "metric";
    case PerturbationKind::explicit_closed_form: return "explicit_closed_form";
    case PerturbationKind::random_jet_seed: return "random_jet_seed";
    }
    return "?";
}

const char* to_string(VectorKind k) {
    switch (k) {
    case VectorKind::neg_grad_f: return "neg_grad_f";
    case VectorKind::explicit_closed_form: return "explicit_closed_form";
    case VectorKind::random_polynomial: return "random_polynomial";
    }
    return "?";
}

const char* to_string(ScalarKind k) {
    switch (k) {
    case ScalarKind::exp_f: return "exp_f";
    case ScalarKind::closed_form: return "closed_form";
    case ScalarKind::random_jet_seed: return "random_jet_seed";
    }
    return "?";
}

PerturbationField make_perturbation(PerturbationKind kind, std::uint64_t seed, TensorFn closed_form) {
    if (kind == PerturbationKind::explicit_closed_form && !closed_form)
        throw ConfigError("an explicit perturbation needs a closed-form evaluator");
    PerturbationField f;
    f.kind = kind;
    f.seed = seed;
    f.closed_form = std::move(closed_form);
    return f;
}

JetTensor random_symmetric_jet(const Background& bg, RandomStream& rng, int max_degree) {
    const int n = bg.cp.dim;
    auto h = make_tensor(n, {Slot::lower, Slot::lower}, bg.f);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            h(i, j) = random_spatial_poly(bg, rng, max_degree);
            h(j, i) = h(i, j);
        }
    return h;
}

Jet random_scalar_jet(const Background& bg, RandomStream& rng, int max_degree, bool positive) {
    Jet u = random_spatial_poly(bg, rng, max_degree);
    if (positive) u[0] = rng.uniform(1.0, 3.0);
    return u;
}

JetTensor evaluate(const PerturbationField& field, const Background& bg, std::uint64_t point_index) {
    switch (field.kind) {
    case PerturbationKind::ricci: return bg.cp.ricci;
    case PerturbationKind::metric: return bg.g;
    case PerturbationKind::explicit_closed_form: {
        auto h = field.closed_form(bg);
        require_symmetric(h, "perturbation");
        return h;
    }
    case PerturbationKind::random_jet_seed: {
        RandomStream rng(field.seed, point_index, field.tag);
        return random_symmetric_jet(bg, rng, field.max_degree);
    }
    }
    throw ConfigError("unknown perturbation kind");
}

JetTensor evaluate(const VectorFieldSpec& field, const Background& bg, std::uint64_t point_index) {
    const int n = bg.cp.dim;
    switch (field.kind) {
    case VectorKind::neg_grad_f: return gradient(bg.f, bg.cp) * -1.0;
    case VectorKind::explicit_closed_form:
        if (!field.closed_form) throw ConfigError("an explicit vector field needs a closed-form evaluator");
        return field.closed_form(bg);
    case VectorKind::random_polynomial: {
        RandomStream rng(field.seed, point_index, stream_tag::vector);
        const auto& sp = *bg.space;
        const int max_tp = sp.has_time() ? field.time_degree : 0;
        auto x = make_tensor(n, {Slot::upper}, bg.f);
        for (int i = 0; i < n; ++i) {
            Jet xi(bg.space);
            for (int tp = 0; tp <= max_tp; ++tp)
                for (int k = 0; k < sp.size(); ++k)
                    if (is_spatial(sp, k) && sp.degree(k) <= field.space_degree)
                        xi += rng.uniform(-1.0, 1.0) * monomial(bg, sp.exponents(k), tp);
            x(i) = xi;
        }
        return x;
    }
    }
    throw ConfigError("unknown vector field kind");
}

Jet evaluate(const ScalarFieldSpec& field, const Background& bg, std::uint64_t point_index) {
    Jet u;
    switch (field.kind) {
    case ScalarKind::exp_f: u = exp(bg.f); break;
    case ScalarKind::closed_form:
        if (!field.closed_form) throw ConfigError("a closed-form scalar field needs an evaluator");
        u = field.closed_form(bg);
        break;
    case ScalarKind::random_jet_seed: {
        RandomStream rng(field.seed, point_index, field.tag);
        u = random_scalar_jet(bg, rng, field.max_degree, field.positive);
        break;
    }
    }
    if (field.positive && !(u.value() > 0.0)) throw DomainError("scalar field must be positive at the point");
    return u;
}

JetTensor propagate_lichnerowicz(const JetTensor& h0, const Background& bg) {
    require_symmetric(h0, "perturbation");
    const int n = bg.cp.dim;
    std::vector<Jet> state;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) state.push_back(h0(i, j));
    const auto& cp = bg.cp;
    auto unpack = [n](const std::vector<Jet>& s) {
        auto h = make_tensor(n, {Slot::lower, Slot::lower}, s[0]);
        int k = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j, ++k) h(i, j) = h(j, i) = s[k];
        return h;
    };
    state = propagate_in_time(state, [&](const std::vector<Jet>& s) {
        auto l = lichnerowicz(unpack(s), cp);
        std::vector<Jet> d;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) d.push_back(l(i, j));
        return d;
    });
    return unpack(state);
}

Jet propagate_scalar(const Jet& u0, EvolutionPde pde, const Background& bg, double eps, PotentialRule rule) {
    const auto& cp = bg.cp;
    JetSystem rhs;
    switch (pde) {
    case EvolutionPde::scalar_heat_eps:
        if (eps == 0.0) throw ConfigError("eps must be nonzero");
        rhs = [&cp, eps](const std::vector<Jet>& s) {
            return std::vector<Jet>{laplacian(s[0], cp) / eps + cp.scalar * s[0]};
        };
        break;
    case EvolutionPde::conjugate_potential:
        rhs = [&cp](const std::vector<Jet>& s) {
            return std::vector<Jet>{potential_rate(PotentialRule::conjugate, s[0], cp)};
        };
        break;
    case EvolutionPde::potential_rule:
        rhs = [&cp, rule](const std::vector<Jet>& s) { return std::vector<Jet>{potential_rate(rule, s[0], cp)}; };
        break;
    case EvolutionPde::lichnerowicz_flow: throw ConfigError("the Lichnerowicz flow acts on 2-tensors, not scalars");
    }
    return propagate_in_time({u0}, rhs).front();
}

JetTensor propagate_evolution_jet(const PerturbationField& field, const Background& bg,
                                  std::uint64_t point_index) {
    return propagate_lichnerowicz(evaluate(field, bg, point_index), bg);
}

} // namespace hl
