#pragma once

/**
 * @file tensor.hpp
 * @brief Dense coordinate tensors over a field algebra.
 *
 * The component type F is either a Jet (pointwise Taylor data) or a
 * GridField (periodic grid samples). Both provide ring arithmetic,
 * `partial(a, i)` for the i-th coordinate derivative and
 * `constant_like(proto, v)`.
 */

#include <harnacklab/errors.hpp>

#include <cmath>
#include <concepts>
#include <cstdint>
#include <string>
#include <vector>

namespace hl {

template <class F>
concept FieldAlgebra = requires(const F& a, const F& b, double s, int i) {
    { a + b } -> std::convertible_to<F>;
    { a - b } -> std::convertible_to<F>;
    { a * b } -> std::convertible_to<F>;
    { a / b } -> std::convertible_to<F>;
    { a * s } -> std::convertible_to<F>;
    { s * a } -> std::convertible_to<F>;
    { -a } -> std::convertible_to<F>;
    { partial(a, i) } -> std::convertible_to<F>;
    { constant_like(a, s) } -> std::convertible_to<F>;
};

enum class Slot : std::uint8_t { lower, upper };

template <class F>
class Tensor {
public:
    Tensor() = default;
    Tensor(int dim, std::vector<Slot> slots, const F& zero) : dim_(dim), slots_(std::move(slots)) {
        std::size_t count = 1;
        for (std::size_t k = 0; k < slots_.size(); ++k) count *= static_cast<std::size_t>(dim_);
        comps_.assign(count, zero);
    }

    static Tensor scalar(const F& value) {
        Tensor t;
        t.dim_ = 0;
        t.comps_.push_back(value);
        return t;
    }

    int dim() const { return dim_; }
    int rank() const { return static_cast<int>(slots_.size()); }
    const std::vector<Slot>& slots() const { return slots_; }
    std::size_t size() const { return comps_.size(); }

    std::vector<F>& components() { return comps_; }
    const std::vector<F>& components() const { return comps_; }

    template <class... I>
    F& operator()(I... idx) {
        return comps_[flat(idx...)];
    }
    template <class... I>
    const F& operator()(I... idx) const {
        return comps_[flat(idx...)];
    }

    /// Multi-index of flat component k (slot order).
    std::vector<int> unflatten(std::size_t k) const {
        std::vector<int> idx(slots_.size());
        for (int s = rank() - 1; s >= 0; --s) {
            idx[s] = static_cast<int>(k % dim_);
            k /= dim_;
        }
        return idx;
    }
    std::size_t flatten(const std::vector<int>& idx) const {
        std::size_t k = 0;
        for (int i : idx) k = k * dim_ + i;
        return k;
    }

    Tensor& operator+=(const Tensor& b) {
        check_shape(b);
        for (std::size_t k = 0; k < comps_.size(); ++k) comps_[k] = comps_[k] + b.comps_[k];
        return *this;
    }
    Tensor& operator-=(const Tensor& b) {
        check_shape(b);
        for (std::size_t k = 0; k < comps_.size(); ++k) comps_[k] = comps_[k] - b.comps_[k];
        return *this;
    }
    Tensor& operator*=(double s) {
        for (auto& c : comps_) c = c * s;
        return *this;
    }
    friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
    friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
    friend Tensor operator*(Tensor a, double s) { return a *= s; }
    friend Tensor operator*(double s, Tensor a) { return a *= s; }
    friend Tensor operator*(const Tensor& a, const F& s) {
        Tensor r = a;
        for (auto& c : r.comps_) c = c * s;
        return r;
    }
    friend Tensor operator*(const F& s, const Tensor& a) { return a * s; }

private:
    template <class... I>
    std::size_t flat(I... idx) const {
        if (sizeof...(I) != slots_.size())
            throw ConfigError("tensor accessed with " + std::to_string(sizeof...(I)) +
                              " indices but has rank " + std::to_string(slots_.size()));
        std::size_t k = 0;
        ((k = k * dim_ + static_cast<std::size_t>(idx)), ...);
        return k;
    }
    void check_shape(const Tensor& b) const {
        if (b.dim_ != dim_ || b.slots_ != slots_) throw ConfigError("tensor shape mismatch");
    }

    int dim_ = 0;
    std::vector<Slot> slots_;
    std::vector<F> comps_;
};

template <class F>
Tensor<F> make_tensor(int dim, std::vector<Slot> slots, const F& proto) {
    return Tensor<F>(dim, std::move(slots), constant_like(proto, 0.0));
}

/// Largest |T_ij - T_ji| relative to the largest |T_ij| for a rank-2 tensor of doubles.
template <class F, class ValueFn>
double symmetry_defect(const Tensor<F>& t, ValueFn value) {
    double diff = 0.0, scale = 0.0;
    for (int i = 0; i < t.dim(); ++i)
        for (int j = 0; j < t.dim(); ++j) {
            diff = std::max(diff, std::abs(value(t(i, j)) - value(t(j, i))));
            scale = std::max(scale, std::abs(value(t(i, j))));
        }
    return diff / (scale + 1e-300);
}

} // namespace hl
