// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "maplace/error.hpp"
#include "maplace/linalg/dense.hpp"
#include "maplace/linalg/hessenberg.hpp"

namespace maplace::linalg
{

// Real tridiagonal matrix: row i holds (sub[i-1], diag[i], sup[i]).
template <typename Real>
struct Tridiagonal
{
    std::vector<Real> sub;  // length K-1, entries (i+1, i)
    std::vector<Real> diag; // length K
    std::vector<Real> sup;  // length K-1, entries (i, i+1)

    std::size_t size() const noexcept { return diag.size(); }

    void validate() const
    {
        const std::size_t k = diag.size();
        if (k == 0 || sub.size() + 1 != k || sup.size() + 1 != k)
            throw Error(Errc::InvalidArgument, "tridiagonal band lengths are inconsistent");
    }

    Real norm_inf() const
    {
        using std::abs;
        Real best(0);
        for (std::size_t i = 0; i < diag.size(); ++i)
        {
            Real s = abs(diag[i]);
            if (i > 0) s += abs(sub[i - 1]);
            if (i + 1 < diag.size()) s += abs(sup[i]);
            if (s > best) best = s;
        }
        return best;
    }

    std::vector<Real> apply(const std::vector<Real> &v) const
    {
        const std::size_t k = diag.size();
        std::vector<Real> out(k);
        for (std::size_t i = 0; i < k; ++i)
        {
            Real s = diag[i] * v[i];
            if (i > 0) s += sub[i - 1] * v[i - 1];
            if (i + 1 < k) s += sup[i] * v[i + 1];
            out[i] = s;
        }
        return out;
    }

    Dense<Real> to_dense() const
    {
        const std::size_t k = diag.size();
        Dense<Real> a(k);
        for (std::size_t i = 0; i < k; ++i)
        {
            a(i, i) = diag[i];
            if (i > 0) a(i, i - 1) = sub[i - 1];
            if (i + 1 < k) a(i, i + 1) = sup[i];
        }
        return a;
    }
};

// Unit 2-norm eigenvector with positive leading nonzero entry.
template <typename Real>
struct EigenPair
{
    Real value{0};
    std::vector<Real> vector;
};

namespace detail
{

template <typename Real>
Real norm2(const std::vector<Real> &v)
{
    using std::abs;
    using std::sqrt;
    Real scale(0);
    for (const auto &x : v) scale = std::max<Real>(scale, abs(x));
    if (scale == Real(0)) return Real(0);
    Real s(0);
    for (const auto &x : v)
    {
        Real y = x / scale;
        s += y * y;
    }
    return scale * sqrt(s);
}

template <typename Real>
void normalize_sign(std::vector<Real> &v)
{
    using std::abs;
    const Real n = norm2(v);
    if (n == Real(0)) return;
    for (auto &x : v) x /= n;
    Real vmax(0);
    for (const auto &x : v) vmax = std::max<Real>(vmax, abs(x));
    const Real cut = epsilon_of<Real>() * vmax;
    for (const auto &x : v)
    {
        if (abs(x) > cut)
        {
            if (x < Real(0))
                for (auto &y : v) y = -y;
            break;
        }
    }
}

// Solves (T - mu I) x = b by Gaussian elimination with partial pivoting on the
// band. Zero pivots are replaced by eps*||T|| so that the shifted matrix of an
// exact eigenvalue still yields the (dominant) eigen-direction.
template <typename Real>
std::vector<Real> shifted_solve(const Tridiagonal<Real> &t, const Real &mu, std::vector<Real> b)
{
    using std::abs;
    const std::size_t k = t.size();
    const Real tiny = epsilon_of<Real>() * std::max<Real>(t.norm_inf(), Real(1));
    // Row i after pivoting: u0[i] x_i + u1[i] x_{i+1} + u2[i] x_{i+2}
    std::vector<Real> u0(k), u1(k, Real(0)), u2(k, Real(0));
    // Working copy of the current row (lower element pending elimination)
    Real d = t.diag[0] - mu;
    Real e = k > 1 ? t.sup[0] : Real(0);
    Real f(0);
    for (std::size_t i = 0; i + 1 < k; ++i)
    {
        const Real l = t.sub[i];
        Real nd = t.diag[i + 1] - mu;
        Real ne = i + 2 < k ? t.sup[i + 1] : Real(0);
        if (abs(d) >= abs(l))
        {
            if (d == Real(0)) d = tiny;
            const Real m = l / d;
            u0[i] = d;
            u1[i] = e;
            u2[i] = f;
            b[i + 1] -= m * b[i];
            d = nd - m * e;
            e = ne - m * f;
            f = Real(0);
        }
        else
        {
            // swap rows i and i+1
            const Real m = d / l;
            u0[i] = l;
            u1[i] = nd;
            u2[i] = ne;
            std::swap(b[i], b[i + 1]);
            b[i + 1] -= m * b[i];
            const Real d2 = e - m * nd;
            const Real e2 = f - m * ne;
            d = d2;
            e = e2;
            f = Real(0);
        }
    }
    if (d == Real(0)) d = tiny;
    u0[k - 1] = d;
    std::vector<Real> x(k);
    for (std::size_t ii = k; ii-- > 0;)
    {
        Real s = b[ii];
        if (ii + 1 < k) s -= u1[ii] * x[ii + 1];
        if (ii + 2 < k) s -= u2[ii] * x[ii + 2];
        Real piv = u0[ii];
        if (piv == Real(0)) piv = tiny;
        x[ii] = s / piv;
    }
    return x;
}

template <typename Real>
Real residual_norm(const Tridiagonal<Real> &t, const Real &lambda, const std::vector<Real> &v)
{
    auto av = t.apply(v);
    for (std::size_t i = 0; i < av.size(); ++i) av[i] -= lambda * v[i];
    return norm2(av);
}

// Inverse iteration seeded at a computed eigenvalue, at most three solves.
// `previous` vectors are projected out (symmetric path only).
template <typename Real>
std::vector<Real> inverse_iteration(const Tridiagonal<Real> &t, const Real &lambda,
                                    const std::vector<const std::vector<Real> *> &previous)
{
    const std::size_t k = t.size();
    std::vector<Real> v(k);
    // deterministic, generic start vector
    for (std::size_t i = 0; i < k; ++i) v[i] = Real(1) + Real(static_cast<long>(i % 7)) / Real(13);
    const Real target = Real(1e-12) * std::max<Real>(t.norm_inf(), Real(1));
    for (int it = 0; it < 3; ++it)
    {
        v = shifted_solve(t, lambda, v);
        for (const auto *p : previous)
        {
            Real dot(0);
            for (std::size_t i = 0; i < k; ++i) dot += (*p)[i] * v[i];
            for (std::size_t i = 0; i < k; ++i) v[i] -= dot * (*p)[i];
        }
        normalize_sign(v);
        if (residual_norm(t, lambda, v) <= target) break;
    }
    return v;
}

} // namespace detail

// Eigenvalues of a symmetric tridiagonal matrix (diagonal d, off-diagonal e)
// by the implicit QL iteration. Returned in ascending order.
template <typename Real>
std::vector<Real> symmetric_tridiag_eigenvalues(std::vector<Real> d, std::vector<Real> e)
{
    using std::abs;
    using std::sqrt;
    const std::size_t n = d.size();
    if (n == 0) return d;
    if (e.size() + 1 != n) throw Error(Errc::InvalidArgument, "off-diagonal length must be n-1");
    e.push_back(Real(0));
    const Real eps = epsilon_of<Real>();
    auto pythag = [](const Real &a, const Real &b) {
        Real x = abs(a), y = abs(b);
        if (x < y) std::swap(x, y);
        if (x == Real(0)) return Real(0);
        Real r = y / x;
        return x * sqrt(Real(1) + r * r);
    };
    for (std::size_t l = 0; l < n; ++l)
    {
        int iter = 0;
        std::size_t m = l;
        do
        {
            for (m = l; m + 1 < n; ++m)
            {
                Real dd = abs(d[m]) + abs(d[m + 1]);
                if (abs(e[m]) <= eps * dd) break;
            }
            if (m != l)
            {
                if (iter++ == 30 * static_cast<int>(n))
                    throw Error(Errc::ConvergenceFailure, "symmetric tridiagonal QL did not converge");
                Real g = (d[l + 1] - d[l]) / (Real(2) * e[l]);
                Real r = pythag(g, Real(1));
                g = d[m] - d[l] + e[l] / (g + (g >= Real(0) ? abs(r) : -abs(r)));
                Real s(1), c(1), p(0);
                bool underflow = false;
                for (std::size_t i = m; i-- > l;)
                {
                    Real f = s * e[i];
                    Real b = c * e[i];
                    r = pythag(f, g);
                    e[i + 1] = r;
                    if (r == Real(0))
                    {
                        d[i + 1] -= p;
                        e[m] = Real(0);
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + Real(2) * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = Real(0);
            }
        } while (m != l);
    }
    std::sort(d.begin(), d.end());
    return d;
}

// All eigenpairs of a real tridiagonal matrix whose spectrum is real, in
// ascending eigenvalue order.
//
// When every product sub[i]*sup[i] is positive the matrix is diagonally
// similar to a symmetric one; eigenvalues then come from the symmetric QL
// path and eigenvectors from inverse iteration on the symmetric form, mapped
// back through the scaling. Otherwise eigenvalues come from Hessenberg QR on
// the balanced dense matrix and eigenvectors from inverse iteration on T.
//
// Throws NonRealSpectrum when an eigenvalue keeps an imaginary part above
// 1e-8*||T||, ConvergenceFailure when an iteration cap is hit or a residual
// exceeds 1e-10*||T||.
template <typename Real>
std::vector<EigenPair<Real>> tridiag_eigen(const Tridiagonal<Real> &t)
{
    using std::abs;
    using std::sqrt;
    t.validate();
    const std::size_t k = t.size();
    const Real tnorm = std::max<Real>(t.norm_inf(), Real(1e-300));
    std::vector<EigenPair<Real>> out(k);

    bool symmetrizable = true;
    for (std::size_t i = 0; i + 1 < k; ++i)
        if (!(t.sub[i] * t.sup[i] > Real(0))) symmetrizable = false;

    if (symmetrizable)
    {
        // S = D^-1 T D with d_{i+1} = d_i sqrt(sub_i / sup_i)
        std::vector<Real> scale(k, Real(1));
        Tridiagonal<Real> s{std::vector<Real>(k - 1), t.diag, std::vector<Real>(k - 1)};
        for (std::size_t i = 0; i + 1 < k; ++i)
        {
            scale[i + 1] = scale[i] * sqrt(t.sub[i] / t.sup[i]);
            const Real off = sqrt(t.sub[i] * t.sup[i]);
            s.sub[i] = off;
            s.sup[i] = off;
        }
        auto values = symmetric_tridiag_eigenvalues(s.diag, s.sub);
        // Isolated eigenvalues get inverse iteration on T directly; the scaling
        // can span many orders of magnitude and would cost the small components
        // their relative accuracy. Clusters go through S so they can be
        // orthogonalized, then are mapped back.
        const Real gap_tol = Real(1e-8) * tnorm;
        std::vector<std::vector<Real>> sym(k);
        for (std::size_t j = 0; j < k; ++j)
        {
            std::vector<const std::vector<Real> *> close;
            for (std::size_t p = j; p-- > 0;)
            {
                if (abs(values[j] - values[p]) < gap_tol) close.push_back(&sym[p]);
                else break;
            }
            const bool isolated = close.empty() && (j + 1 == k || abs(values[j + 1] - values[j]) >= gap_tol);
            out[j].value = values[j];
            if (isolated)
            {
                out[j].vector = detail::inverse_iteration(t, values[j], {});
                continue;
            }
            sym[j] = detail::inverse_iteration(s, values[j], close);
            out[j].vector = sym[j];
            for (std::size_t i = 0; i < k; ++i) out[j].vector[i] *= scale[i];
            detail::normalize_sign(out[j].vector);
        }
    }
    else
    {
        auto dense = t.to_dense();
        balance(dense);
        auto values = hessenberg_qr(std::move(dense));
        for (const auto &z : values)
            if (abs(z.im) > Real(1e-8) * tnorm)
                throw Error(Errc::NonRealSpectrum, "tridiagonal matrix has a complex eigenvalue pair");
        std::vector<Real> re(k);
        for (std::size_t j = 0; j < k; ++j) re[j] = values[j].re;
        std::sort(re.begin(), re.end());
        for (std::size_t j = 0; j < k; ++j)
        {
            out[j].value = re[j];
            out[j].vector = detail::inverse_iteration(t, re[j], {});
        }
    }

    for (const auto &pair : out)
    {
        if (detail::residual_norm(t, pair.value, pair.vector) > Real(1e-10) * tnorm)
            throw Error(Errc::ConvergenceFailure, "tridiagonal eigenpair residual above tolerance");
    }
    return out;
}

} // namespace maplace::linalg
