// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace maplace::linalg
{

// Minimal complex pair. std::complex is only specified for the builtin
// floating types, and these kernels also run on multiprecision scalars.
template <typename Real>
struct Cplx
{
    Real re{0};
    Real im{0};
};

template <typename Real>
Cplx<Real> operator+(const Cplx<Real> &a, const Cplx<Real> &b) { return {a.re + b.re, a.im + b.im}; }
template <typename Real>
Cplx<Real> operator-(const Cplx<Real> &a, const Cplx<Real> &b) { return {a.re - b.re, a.im - b.im}; }
template <typename Real>
Cplx<Real> operator*(const Cplx<Real> &a, const Cplx<Real> &b)
{
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
template <typename Real>
Cplx<Real> operator/(const Cplx<Real> &a, const Cplx<Real> &b)
{
    using std::abs;
    // Smith's algorithm
    if (abs(b.re) >= abs(b.im))
    {
        Real r = b.im / b.re;
        Real den = b.re + b.im * r;
        return {(a.re + a.im * r) / den, (a.im - a.re * r) / den};
    }
    Real r = b.re / b.im;
    Real den = b.im + b.re * r;
    return {(a.re * r + a.im) / den, (a.im * r - a.re) / den};
}
template <typename Real>
Real cabs(const Cplx<Real> &a)
{
    using std::abs;
    using std::sqrt;
    Real x = abs(a.re), y = abs(a.im);
    if (x < y) std::swap(x, y);
    if (x == Real(0)) return Real(0);
    Real r = y / x;
    return x * sqrt(Real(1) + r * r);
}

// Row-major dense square matrix.
template <typename Real>
class Dense
{
public:
    Dense() = default;
    explicit Dense(std::size_t n) : n_(n), a_(n * n, Real(0)) {}

    std::size_t size() const noexcept { return n_; }
    Real &operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const Real &operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    // Max absolute row sum.
    Real norm_inf() const
    {
        using std::abs;
        Real best(0);
        for (std::size_t i = 0; i < n_; ++i)
        {
            Real s(0);
            for (std::size_t j = 0; j < n_; ++j) s += abs((*this)(i, j));
            if (s > best) best = s;
        }
        return best;
    }

private:
    std::size_t n_ = 0;
    std::vector<Real> a_;
};

template <typename Real>
Real epsilon_of() { return std::numeric_limits<Real>::epsilon(); }

} // namespace maplace::linalg
