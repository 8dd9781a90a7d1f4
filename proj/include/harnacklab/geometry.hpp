#pragma once

/**
 * @file geometry.hpp
 * @brief Coordinate Riemannian calculus over a field algebra.
 *
 * Conventions (pinned by tests: unit sphere R = +2, Lichnerowicz-harmonic
 * metric, Z(Rc, -grad f) = 0 on the cigar):
 *
 *   Gamma^k_ij = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij)
 *   R^l_kij    = d_i Gamma^l_jk - d_j Gamma^l_ik + Gamma^l_ip Gamma^p_jk - Gamma^l_jp Gamma^p_ik
 *   Rm_ijkl    = g_lm R^m_kij  = <R(d_i, d_j) d_k, d_l>
 *   R_jk       = g^il Rm_ijkl,   R = g^jk R_jk
 *
 * so that sectional curvatures are Rm(X,Y,Y,X) and (Lichnerowicz)
 *   (Delta_L h)_pq = Delta h_pq + 2 Rm_pijq h^ij - R_p^k h_kq - R_q^k h_pk.
 *
 * Tensors produced by covariant_derivative carry the new index first:
 * (grad T)_{i a1 ... ar}.
 */

#include <harnacklab/tensor.hpp>

#include <string>

namespace hl {

template <class F>
struct CurvaturePack {
    int dim = 0;
    Tensor<F> metric;        ///< g_ij
    Tensor<F> inverse;       ///< g^ij
    Tensor<F> christoffel;   ///< Gamma^k_ij stored as (k, i, j)
    Tensor<F> riemann;       ///< Rm_ijkl, all covariant
    Tensor<F> ricci;         ///< R_ij
    Tensor<F> ricci_mixed;   ///< R_i^j = R_ik g^kj stored as (i, j)
    F scalar;                ///< R
    F volume_density;        ///< sqrt(det g)
};

namespace detail {

template <class F>
F determinant(const Tensor<F>& g) {
    switch (g.dim()) {
    case 1: return g(0, 0);
    case 2: return g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
    case 3:
        return g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1)) -
               g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0)) +
               g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0));
    default: throw ConfigError("metrics of dimension " + std::to_string(g.dim()) + " are not supported");
    }
}

} // namespace detail

template <class F>
Tensor<F> inverse_metric(const Tensor<F>& g, const F& det) {
    const int n = g.dim();
    auto inv = make_tensor(n, {Slot::upper, Slot::upper}, g(0, 0));
    if (n == 1) {
        inv(0, 0) = constant_like(det, 1.0) / g(0, 0);
    } else if (n == 2) {
        inv(0, 0) = g(1, 1) / det;
        inv(1, 1) = g(0, 0) / det;
        inv(0, 1) = -g(0, 1) / det;
        inv(1, 0) = -g(1, 0) / det;
    } else {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const int a = (j + 1) % 3, b = (j + 2) % 3, c = (i + 1) % 3, d = (i + 2) % 3;
                inv(i, j) = (g(a, c) * g(b, d) - g(a, d) * g(b, c)) / det;
            }
    }
    return inv;
}

/// Validates the metric (symmetric, positive-definite where sampled) and
/// builds Christoffel symbols, curvature tensors and the volume density.
template <class F>
CurvaturePack<F> curvature(const Tensor<F>& g) {
    const int n = g.dim();
    if (g.rank() != 2 || n < 1 || n > 3) throw ConfigError("curvature needs a rank-2 metric with 1 <= n <= 3");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
            if (max_abs(g(i, j) - g(j, i)) > 1e-13 * (max_abs(g(i, j)) + 1e-300))
                throw DomainError("metric is not symmetric");
    CurvaturePack<F> cp;
    cp.dim = n;
    cp.metric = g;
    // leading principal minors positive <=> positive-definite
    for (int m = 1; m <= n; ++m) {
        auto minor = make_tensor(m, {Slot::lower, Slot::lower}, g(0, 0));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) minor(i, j) = g(i, j);
        if (!(min_value(detail::determinant(minor)) > 0.0))
            throw DomainError("metric is not positive-definite at the evaluation point");
    }
    const F det = detail::determinant(g);
    cp.inverse = inverse_metric(g, det);
    cp.volume_density = sqrt(det);

    // dg(l, i, j) = d_l g_ij
    auto dg = make_tensor(n, {Slot::lower, Slot::lower, Slot::lower}, g(0, 0));
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                dg(l, i, j) = partial(g(i, j), l);
                if (j != i) dg(l, j, i) = dg(l, i, j);
            }

    cp.christoffel = make_tensor(n, {Slot::upper, Slot::lower, Slot::lower}, dg(0, 0, 0));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            std::vector<F> first;  // Gamma_{ij l}
            first.reserve(n);
            for (int l = 0; l < n; ++l) first.push_back(0.5 * (dg(i, j, l) + dg(j, i, l) - dg(l, i, j)));
            for (int k = 0; k < n; ++k) {
                F s = cp.inverse(k, 0) * first[0];
                for (int l = 1; l < n; ++l) s = s + cp.inverse(k, l) * first[l];
                cp.christoffel(k, i, j) = s;
                if (j != i) cp.christoffel(k, j, i) = s;
            }
        }

    // dgamma(m, l, j, k) = d_m Gamma^l_jk
    const auto& G = cp.christoffel;
    auto dG = make_tensor(n, {Slot::lower, Slot::upper, Slot::lower, Slot::lower}, G(0, 0, 0));
    for (int m = 0; m < n; ++m)
        for (int l = 0; l < n; ++l)
            for (int j = 0; j < n; ++j)
                for (int k = j; k < n; ++k) {
                    dG(m, l, j, k) = partial(G(l, j, k), m);
                    if (k != j) dG(m, l, k, j) = dG(m, l, j, k);
                }

    // R^l_kij, stored as up(l, k, i, j)
    auto up = make_tensor(n, {Slot::upper, Slot::lower, Slot::lower, Slot::lower}, dG(0, 0, 0, 0));
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    F s = dG(i, l, j, k) - dG(j, l, i, k);
                    for (int p = 0; p < n; ++p) s = s + G(l, i, p) * G(p, j, k) - G(l, j, p) * G(p, i, k);
                    up(l, k, i, j) = s;
                    up(l, k, j, i) = -s;
                }

    cp.riemann = make_tensor(n, {Slot::lower, Slot::lower, Slot::lower, Slot::lower}, up(0, 0, 0, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    F s = g(l, 0) * up(0, k, i, j);
                    for (int m = 1; m < n; ++m) s = s + g(l, m) * up(m, k, i, j);
                    cp.riemann(i, j, k, l) = s;
                }

    // symmetric by construction; the lower triangle is mirrored
    cp.ricci = make_tensor(n, {Slot::lower, Slot::lower}, g(0, 0));
    for (int j = 0; j < n; ++j)
        for (int k = j; k < n; ++k) {
            F s = constant_like(g(0, 0), 0.0);
            for (int i = 0; i < n; ++i)
                for (int l = 0; l < n; ++l) s = s + cp.inverse(i, l) * cp.riemann(i, j, k, l);
            cp.ricci(j, k) = s;
            if (k != j) cp.ricci(k, j) = s;
        }
    cp.ricci_mixed = make_tensor(n, {Slot::lower, Slot::upper}, g(0, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            F s = cp.ricci(i, 0) * cp.inverse(0, j);
            for (int k = 1; k < n; ++k) s = s + cp.ricci(i, k) * cp.inverse(k, j);
            cp.ricci_mixed(i, j) = s;
        }
    cp.scalar = constant_like(g(0, 0), 0.0);
    for (int i = 0; i < n; ++i) cp.scalar = cp.scalar + cp.ricci_mixed(i, i);
    return cp;
}

/// Covariant derivative; the new (covariant) index is placed first.
template <class F>
Tensor<F> covariant_derivative(const Tensor<F>& t, const CurvaturePack<F>& cp) {
    const int n = cp.dim;
    if (t.rank() > 0 && t.dim() != n) throw ConfigError("tensor dimension does not match the chart");
    std::vector<Slot> slots{Slot::lower};
    slots.insert(slots.end(), t.slots().begin(), t.slots().end());
    Tensor<F> out(n, slots, constant_like(t.components()[0], 0.0));
    const auto& G = cp.christoffel;
    const int r = t.rank();
    std::vector<int> idx;
    for (std::size_t k = 0; k < t.size(); ++k) {
        idx = t.unflatten(k);
        for (int i = 0; i < n; ++i) {
            F v = partial(t.components()[k], i);
            for (int s = 0; s < r; ++s) {
                const int a = idx[s];
                std::vector<int> j = idx;
                for (int m = 0; m < n; ++m) {
                    j[s] = m;
                    const F& tm = t.components()[t.flatten(j)];
                    if (t.slots()[s] == Slot::lower)
                        v = v - G(m, i, a) * tm;
                    else
                        v = v + G(a, i, m) * tm;
                }
            }
            out.components()[static_cast<std::size_t>(i) * t.size() + k] = v;
        }
    }
    return out;
}

/// Contracts the first two (covariant) slots of t with g^ij.
template <class F>
Tensor<F> trace_leading(const Tensor<F>& t, const CurvaturePack<F>& cp) {
    const int n = cp.dim;
    std::vector<Slot> slots(t.slots().begin() + 2, t.slots().end());
    Tensor<F> out(n, slots, constant_like(t.components()[0], 0.0));
    const std::size_t tail = out.size();
    for (std::size_t k = 0; k < tail; ++k) {
        F s = constant_like(t.components()[0], 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                s = s + cp.inverse(i, j) * t.components()[(static_cast<std::size_t>(i) * n + j) * tail + k];
        out.components()[k] = s;
    }
    return out;
}

/// Rough Laplacian g^ij grad_i grad_j T.
template <class F>
Tensor<F> laplacian(const Tensor<F>& t, const CurvaturePack<F>& cp) {
    return trace_leading(covariant_derivative(covariant_derivative(t, cp), cp), cp);
}

template <class F>
Tensor<F> differential(const F& phi, const CurvaturePack<F>& cp) {
    auto d = make_tensor(cp.dim, {Slot::lower}, phi);
    for (int i = 0; i < cp.dim; ++i) d(i) = partial(phi, i);
    return d;
}

/// grad^i phi = g^ij d_j phi.
template <class F>
Tensor<F> gradient(const F& phi, const CurvaturePack<F>& cp) {
    auto d = differential(phi, cp);
    auto v = make_tensor(cp.dim, {Slot::upper}, phi);
    for (int i = 0; i < cp.dim; ++i) {
        F s = cp.inverse(i, 0) * d(0);
        for (int j = 1; j < cp.dim; ++j) s = s + cp.inverse(i, j) * d(j);
        v(i) = s;
    }
    return v;
}

/// grad_i grad_j phi.
template <class F>
Tensor<F> hessian(const F& phi, const CurvaturePack<F>& cp) {
    return covariant_derivative(differential(phi, cp), cp);
}

template <class F>
F laplacian(const F& phi, const CurvaturePack<F>& cp) {
    auto h = hessian(phi, cp);
    F s = constant_like(phi, 0.0);
    for (int i = 0; i < cp.dim; ++i)
        for (int j = 0; j < cp.dim; ++j) s = s + cp.inverse(i, j) * h(i, j);
    return s;
}

/// A^ij = g^ia g^jb A_ab for a covariant 2-tensor.
template <class F>
Tensor<F> raise_both(const Tensor<F>& a, const CurvaturePack<F>& cp) {
    const int n = cp.dim;
    auto out = make_tensor(n, {Slot::upper, Slot::upper}, a(0, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            F s = constant_like(a(0, 0), 0.0);
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q) s = s + cp.inverse(i, p) * cp.inverse(j, q) * a(p, q);
            out(i, j) = s;
        }
    return out;
}

/// X_i = g_ij X^j.
template <class F>
Tensor<F> lower_vector(const Tensor<F>& x, const CurvaturePack<F>& cp) {
    auto out = make_tensor(cp.dim, {Slot::lower}, x(0));
    for (int i = 0; i < cp.dim; ++i) {
        F s = cp.metric(i, 0) * x(0);
        for (int j = 1; j < cp.dim; ++j) s = s + cp.metric(i, j) * x(j);
        out(i) = s;
    }
    return out;
}

/// <A, B> = g^ia g^jb A_ij B_ab for covariant 2-tensors.
template <class F>
F inner(const Tensor<F>& a, const Tensor<F>& b, const CurvaturePack<F>& cp) {
    auto bu = raise_both(b, cp);
    F s = constant_like(a(0, 0), 0.0);
    for (int i = 0; i < cp.dim; ++i)
        for (int j = 0; j < cp.dim; ++j) s = s + a(i, j) * bu(i, j);
    return s;
}

/// A(X, Y) = A_ij X^i Y^j.
template <class F>
F apply(const Tensor<F>& a, const Tensor<F>& x, const Tensor<F>& y) {
    F s = constant_like(a(0, 0), 0.0);
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) s = s + a(i, j) * x(i) * y(j);
    return s;
}

/// w(X) = w_i X^i.
template <class F>
F pair(const Tensor<F>& w, const Tensor<F>& x) {
    F s = w(0) * x(0);
    for (int i = 1; i < w.dim(); ++i) s = s + w(i) * x(i);
    return s;
}

/// <X, Y> = g_ij X^i Y^j for vectors.
template <class F>
F vector_inner(const Tensor<F>& x, const Tensor<F>& y, const CurvaturePack<F>& cp) {
    return apply(cp.metric, x, y);
}

/// <w, v> = g^ij w_i v_j for 1-forms.
template <class F>
F form_inner(const Tensor<F>& w, const Tensor<F>& v, const CurvaturePack<F>& cp) {
    return apply(cp.inverse, w, v);
}

/// g^ij h_ij.
template <class F>
F trace(const Tensor<F>& h, const CurvaturePack<F>& cp) {
    F s = constant_like(h(0, 0), 0.0);
    for (int i = 0; i < cp.dim; ++i)
        for (int j = 0; j < cp.dim; ++j) s = s + cp.inverse(i, j) * h(i, j);
    return s;
}

template <class F>
void require_symmetric(const Tensor<F>& h, const char* what) {
    if (h.rank() != 2) throw ConfigError(std::string(what) + " must be a 2-tensor");
    for (int i = 0; i < h.dim(); ++i)
        for (int j = 0; j < i; ++j)
            if (max_abs(h(i, j) - h(j, i)) > 1e-12 * (max_abs(h(i, j)) + max_abs(h(j, i)) + 1e-300))
                throw ConfigError(std::string(what) + " is not symmetric");
}

/// (Delta_L h)_pq = Delta h_pq + 2 Rm_pijq h^ij - R_p^k h_kq - R_q^k h_pk.
template <class F>
Tensor<F> lichnerowicz(const Tensor<F>& h, const CurvaturePack<F>& cp) {
    require_symmetric(h, "Lichnerowicz Laplacian input");
    const int n = cp.dim;
    auto out = laplacian(h, cp);
    auto hu = raise_both(h, cp);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            F s = out(p, q);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) s = s + 2.0 * cp.riemann(p, i, j, q) * hu(i, j);
            for (int k = 0; k < n; ++k)
                s = s - cp.ricci_mixed(p, k) * h(k, q) - cp.ricci_mixed(q, k) * h(p, k);
            out(p, q) = s;
        }
    return out;
}

/// (div h)_i = g^jk grad_j h_ki.
template <class F>
Tensor<F> divergence(const Tensor<F>& h, const CurvaturePack<F>& cp) {
    return trace_leading(covariant_derivative(h, cp), cp);
}

/// Divergence of a vector field, grad_i X^i.
template <class F>
F divergence_vector(const Tensor<F>& x, const CurvaturePack<F>& cp) {
    auto d = covariant_derivative(x, cp);
    F s = d(0, 0);
    for (int i = 1; i < cp.dim; ++i) s = s + d(i, i);
    return s;
}

/// div(div h) = g^il grad_l (div h)_i.
template <class F>
F div_div(const Tensor<F>& h, const CurvaturePack<F>& cp) {
    auto d = covariant_derivative(divergence(h, cp), cp);
    F s = constant_like(h(0, 0), 0.0);
    for (int l = 0; l < cp.dim; ++l)
        for (int i = 0; i < cp.dim; ++i) s = s + cp.inverse(i, l) * d(l, i);
    return s;
}

template <class F>
F volume_density(const CurvaturePack<F>& cp) {
    return cp.volume_density;
}

/// |A|^2 for a covariant 2-tensor.
template <class F>
F norm2(const Tensor<F>& a, const CurvaturePack<F>& cp) {
    return inner(a, a, cp);
}

} // namespace hl
