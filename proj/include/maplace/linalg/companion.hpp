// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "maplace/error.hpp"
#include "maplace/linalg/dense.hpp"
#include "maplace/linalg/hessenberg.hpp"

namespace maplace::linalg
{

// Complex Horner evaluation of p and p' at z; coeffs[i] multiplies z^i.
template <typename Real>
void horner(const std::vector<Real> &coeffs, const Cplx<Real> &z, Cplx<Real> &p, Cplx<Real> &dp)
{
    p = {coeffs.back(), Real(0)};
    dp = {Real(0), Real(0)};
    for (std::size_t i = coeffs.size() - 1; i-- > 0;)
    {
        dp = dp * z + p;
        p = p * z + Cplx<Real>{coeffs[i], Real(0)};
    }
}

// Roots of the polynomial sum_i coeffs[i] t^i (degree K = coeffs.size()-1)
// as eigenvalues of the companion matrix: ones on the subdiagonal, last column
// holding the negated monic coefficients. The matrix is balanced before the
// Hessenberg QR, and each root gets one Newton step on the original
// polynomial. Throws ConvergenceFailure if a polished root leaves
// |p(root)| > 1e-8 * max|coeff|.
template <typename Real>
std::vector<Cplx<Real>> companion_roots(const std::vector<Real> &coeffs)
{
    using std::abs;
    if (coeffs.size() < 2) throw Error(Errc::InvalidArgument, "polynomial degree must be at least 1");
    const Real lead = coeffs.back();
    if (!(abs(lead) > Real(1e-300))) throw Error(Errc::InvalidArgument, "leading coefficient is zero");
    const std::size_t k = coeffs.size() - 1;
    std::vector<Real> monic(coeffs.size());
    for (std::size_t i = 0; i <= k; ++i) monic[i] = coeffs[i] / lead;
    monic[k] = Real(1);

    std::vector<Cplx<Real>> roots;
    if (k == 1)
    {
        roots.push_back({-monic[0], Real(0)});
    }
    else
    {
        Dense<Real> c(k);
        for (std::size_t i = 1; i < k; ++i) c(i, i - 1) = Real(1);
        for (std::size_t i = 0; i < k; ++i) c(i, k - 1) = -monic[i];
        balance(c);
        roots = hessenberg_qr(std::move(c));
    }

    Real cmax(0);
    for (const auto &x : monic) cmax = std::max<Real>(cmax, abs(x));
    for (auto &z : roots)
    {
        Cplx<Real> p, dp;
        horner(monic, z, p, dp);
        if (cabs(dp) > Real(0)) z = z - p / dp;
        horner(monic, z, p, dp);
        if (cabs(p) > Real(1e-8) * cmax)
            throw Error(Errc::ConvergenceFailure, "companion root failed the polynomial residual check");
    }
    return roots;
}

} // namespace maplace::linalg
