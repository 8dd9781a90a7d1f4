#pragma once

/**
 * @file harnack.hpp
 * @brief Matrix and trace Harnack quantities and the evolution of the
 *        linear trace Harnack quantity Z(h, X).
 *
 * The templates work for any field algebra (jets or grid fields); the
 * jet-only quantities involving time derivatives are declared at the end.
 */

#include <harnacklab/fields.hpp>
#include <harnacklab/geometry.hpp>

namespace hl {

template <class F>
struct MatrixHarnack {
    Tensor<F> M;  ///< M_pq = Laplacian R_pq - 1/2 grad_p grad_q R + 2 Rm_pijq R^ij - R_pk R^k_q
    Tensor<F> P;  ///< P_ipq = grad_i R_pq - grad_p R_qi
};

template <class F>
MatrixHarnack<F> matrix_harnack(const CurvaturePack<F>& cp) {
    const int n = cp.dim;
    const auto lap_rc = laplacian(cp.ricci, cp);
    const auto hess_r = hessian(cp.scalar, cp);
    const auto rc_up = raise_both(cp.ricci, cp);
    const auto d_rc = covariant_derivative(cp.ricci, cp);
    MatrixHarnack<F> mh;
    mh.M = make_tensor(n, {Slot::lower, Slot::lower}, cp.scalar);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            F s = lap_rc(p, q) - 0.5 * hess_r(p, q);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) s = s + 2.0 * cp.riemann(p, i, j, q) * rc_up(i, j);
            for (int k = 0; k < n; ++k) s = s - cp.ricci_mixed(p, k) * cp.ricci(k, q);
            mh.M(p, q) = s;
        }
    mh.P = make_tensor(n, {Slot::lower, Slot::lower, Slot::lower}, cp.scalar);
    for (int i = 0; i < n; ++i)
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) mh.P(i, p, q) = d_rc(i, p, q) - d_rc(p, q, i);
    return mh;
}

/// Additive terms of Z(h, X) = div div h + <Rc, h> + 2 <div h, X> + h(X, X).
template <class F>
struct ZTerms {
    F div_div, ricci_h, div_x, h_xx;  ///< div_x and h_xx already include their factors
    F total() const { return div_div + ricci_h + div_x + h_xx; }
};

template <class F>
ZTerms<F> linear_trace_terms(const Tensor<F>& h, const Tensor<F>& x, const CurvaturePack<F>& cp) {
    require_symmetric(h, "perturbation");
    if (x.rank() != 1 || x.slots()[0] != Slot::upper) throw ConfigError("X must be a vector field");
    return {div_div(h, cp), inner(cp.ricci, h, cp), 2.0 * pair(divergence(h, cp), x), apply(h, x, x)};
}

template <class F>
F linear_trace_Z(const Tensor<F>& h, const Tensor<F>& x, const CurvaturePack<F>& cp) {
    return linear_trace_terms(h, x, cp).total();
}

/// Terms of Laplacian R + 2|Rc|^2 + 2 <grad R, X> + 2 Rc(X, X).
template <class F>
struct TraceHarnackTerms {
    F laplacian_r, ricci_sq, grad_r_x, ricci_xx;  ///< with their factors of 2
    F total() const { return laplacian_r + ricci_sq + grad_r_x + ricci_xx; }
};

template <class F>
TraceHarnackTerms<F> trace_harnack_terms(const Tensor<F>& x, const CurvaturePack<F>& cp) {
    return {laplacian(cp.scalar, cp), 2.0 * norm2(cp.ricci, cp), 2.0 * pair(differential(cp.scalar, cp), x),
            2.0 * apply(cp.ricci, x, x)};
}

template <class F>
F trace_harnack(const Tensor<F>& x, const CurvaturePack<F>& cp) {
    return trace_harnack_terms(x, cp).total();
}

/// The four right-hand-side terms of the evolution of Z(h, X) under the
/// Ricci flow with dh/dt = Delta_L h:
///   t1 = 2 h^pq (M_pq + 2 P_ipq X^i + Rm_pijq X^i X^j)
///   t2 = -4 (grad_j X^i - R^i_j) grad^j (div(h)_i + h_ik X^k)
///   t3 = 2 (div(h)_j + h_ij X^i) (dX^j/dt - Laplacian X^j - R^j_k X^k)
///   t4 = 2 h_ij (grad_p X^i - R^i_p)(grad^p X^j - R^pj)
template <class F>
struct ZEvolutionTerms {
    F t1, t2, t3, t4;
    F total() const { return t1 + t2 + t3 + t4; }
};

template <class F>
ZEvolutionTerms<F> z_evolution_terms(const Tensor<F>& h, const Tensor<F>& x, const Tensor<F>& dxdt,
                                     const CurvaturePack<F>& cp, const MatrixHarnack<F>& mh) {
    require_symmetric(h, "perturbation");
    const int n = cp.dim;
    const F zero = constant_like(cp.scalar, 0.0);
    const auto hu = raise_both(h, cp);

    F t1 = zero;
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            F s = mh.M(p, q);
            for (int i = 0; i < n; ++i) {
                s = s + 2.0 * mh.P(i, p, q) * x(i);
                for (int j = 0; j < n; ++j) s = s + cp.riemann(p, i, j, q) * x(i) * x(j);
            }
            t1 = t1 + 2.0 * hu(p, q) * s;
        }

    // a(j, i) = grad_j X^i - R^i_j
    auto a = covariant_derivative(x, cp);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) a(j, i) = a(j, i) - cp.ricci_mixed(j, i);

    // b_i = div(h)_i + h_ik X^k
    auto b = divergence(h, cp);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) b(i) = b(i) + h(i, k) * x(k);
    const auto db = covariant_derivative(b, cp);  // (k, i) = grad_k b_i

    F t2 = zero;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) t2 = t2 - 4.0 * a(j, i) * cp.inverse(j, k) * db(k, i);

    const auto lap_x = laplacian(x, cp);
    F t3 = zero;
    for (int j = 0; j < n; ++j) {
        F c = dxdt(j) - lap_x(j);
        for (int k = 0; k < n; ++k) c = c - cp.ricci_mixed(k, j) * x(k);
        t3 = t3 + 2.0 * b(j) * c;
    }

    F t4 = zero;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q) t4 = t4 + 2.0 * h(i, j) * a(p, i) * cp.inverse(p, q) * a(q, j);
    return {t1, t2, t3, t4};
}

// ---------------------------------------------------------------------------
// Jet-only quantities (time derivatives come from the jet's time variable).

/// (d/dt - Laplacian) phi.
Jet heat_operator(const Jet& phi, const JetPack& cp);

/// Magnitudes of the four evolution terms: each term evaluated with every
/// factor replaced by the sum of the absolute values of its parts. A term
/// that vanishes through cancellation inside one factor is measured against
/// these.
struct ZEvolutionScales {
    double t1 = 0, t2 = 0, t3 = 0, t4 = 0;
};
ZEvolutionScales z_evolution_scales(const JetTensor& h, const JetTensor& x, const JetTensor& dxdt,
                                    const JetPack& cp, const MatrixHarnack<Jet>& mh);

/// Time derivative of a vector field's components.
JetTensor time_derivative(const JetTensor& x);

struct ShrinkerQuantities {
    Jet Z;  ///< Z(h, -grad f)
    Jet H;  ///< g^ij h_ij
    Jet W;  ///< t^2 (Z + H / 2t)
};
/// Requires a shrinking background at t < 0.
ShrinkerQuantities shrinker_W(const JetTensor& h, const Background& bg);

struct PerelmanQuantities {
    Jet scalar;  ///< R + 2 Laplacian f - |grad f|^2
    Jet V;       ///< (2 Laplacian f - |grad f|^2 + R) e^-f
    /// Terms of the conjugate heat operator applied to V: -dV/dt, -Laplacian V, R V.
    double minus_dt_v = 0, minus_lap_v = 0, r_v = 0;
    /// -2 |Rc + grad grad f|^2 e^-f
    double rhs = 0;
    double box_star_v() const { return minus_dt_v + minus_lap_v + r_v; }
};
/// The time terms need a time jet; they are left zero otherwise.
PerelmanQuantities perelman_quantities(const Jet& f, const JetPack& cp);

struct LiYauQuantities {
    double eps = 1.0;
    Jet v;      ///< log u
    Jet Q;      ///< Laplacian v + R
    Jet P;      ///< 2Q + |grad v|^2 + R
    Jet P_eps;  ///< 2 Laplacian v + |grad v|^2 + (2 eps + 1) R
    JetTensor grad_v, hess_v, grad_f;
};
LiYauQuantities li_yau_quantities(const Jet& u, double eps, const Jet& f, const JetPack& cp);

/// L_eps phi = 1/2 (d/dt - eps^-1 Laplacian) phi - eps^-1 <grad v, grad phi>; eps = 1 gives L.
Jet apply_L(const Jet& phi, const LiYauQuantities& s, const JetPack& cp);

} // namespace hl
