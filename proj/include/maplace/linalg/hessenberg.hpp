// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "maplace/error.hpp"
#include "maplace/linalg/dense.hpp"

namespace maplace::linalg
{

// Diagonal similarity scaling by powers of two so that row and column norms
// are comparable. Preserves the Hessenberg pattern and the spectrum exactly.
template <typename Real>
void balance(Dense<Real> &a)
{
    using std::abs;
    const std::size_t n = a.size();
    const Real radix(2), sqrdx = radix * radix;
    bool done = false;
    while (!done)
    {
        done = true;
        for (std::size_t i = 0; i < n; ++i)
        {
            Real r(0), c(0);
            for (std::size_t j = 0; j < n; ++j)
            {
                if (j == i) continue;
                c += abs(a(j, i));
                r += abs(a(i, j));
            }
            if (c == Real(0) || r == Real(0)) continue;
            Real g = r / radix, f(1), s = c + r;
            while (c < g)
            {
                f *= radix;
                c *= sqrdx;
            }
            g = r * radix;
            while (c > g)
            {
                f /= radix;
                c /= sqrdx;
            }
            if ((c + r) / f < Real(0.95) * s)
            {
                done = false;
                g = Real(1) / f;
                for (std::size_t j = 0; j < n; ++j) a(i, j) *= g;
                for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
            }
        }
    }
}

// Eigenvalues of a real upper-Hessenberg matrix by the Francis double-shift
// QR iteration with deflation (EISPACK hqr lineage). Entries below the first
// subdiagonal are ignored. Throws ConvergenceFailure after 30*K total sweeps.
template <typename Real>
std::vector<Cplx<Real>> hessenberg_qr(Dense<Real> h)
{
    using std::abs;
    using std::sqrt;
    const int n = static_cast<int>(h.size());
    std::vector<Cplx<Real>> w(static_cast<std::size_t>(n));
    if (n == 0) return w;

    // 1-based accessor keeps the classic index arithmetic readable.
    auto a = [&h](int i, int j) -> Real & { return h(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)); };
    auto sign = [](const Real &x, const Real &y) { return y >= Real(0) ? abs(x) : -abs(x); };
    const Real eps = epsilon_of<Real>();

    Real anorm(0);
    for (int i = 1; i <= n; ++i)
        for (int j = (i > 1 ? i - 1 : 1); j <= n; ++j) anorm += abs(a(i, j));

    const long max_total = 30L * n;
    long total = 0;
    int nn = n;
    Real t(0);
    Real p(0), q(0), r(0), s(0), x(0), y(0), z(0), u(0), v(0), ww(0);
    while (nn >= 1)
    {
        int its = 0;
        int l = 0;
        do
        {
            for (l = nn; l >= 2; --l)
            {
                s = abs(a(l - 1, l - 1)) + abs(a(l, l));
                if (s == Real(0)) s = anorm;
                if (abs(a(l, l - 1)) <= eps * s)
                {
                    a(l, l - 1) = Real(0);
                    break;
                }
            }
            x = a(nn, nn);
            if (l == nn)
            {
                w[static_cast<std::size_t>(nn - 1)] = {x + t, Real(0)};
                --nn;
            }
            else
            {
                y = a(nn - 1, nn - 1);
                ww = a(nn, nn - 1) * a(nn - 1, nn);
                if (l == nn - 1)
                {
                    p = Real(0.5) * (y - x);
                    q = p * p + ww;
                    z = sqrt(abs(q));
                    x += t;
                    if (q >= Real(0))
                    {
                        z = p + sign(z, p);
                        Real hi = x + z, lo = x + z;
                        if (z != Real(0)) lo = x - ww / z;
                        w[static_cast<std::size_t>(nn - 2)] = {hi, Real(0)};
                        w[static_cast<std::size_t>(nn - 1)] = {lo, Real(0)};
                    }
                    else
                    {
                        w[static_cast<std::size_t>(nn - 2)] = {x + p, -z};
                        w[static_cast<std::size_t>(nn - 1)] = {x + p, z};
                    }
                    nn -= 2;
                }
                else
                {
                    if (++total > max_total)
                        throw Error(Errc::ConvergenceFailure,
                                    "Hessenberg QR did not converge within " + std::to_string(max_total) + " sweeps");
                    if (its > 0 && its % 10 == 0)
                    {
                        // exceptional shift
                        t += x;
                        for (int i = 1; i <= nn; ++i) a(i, i) -= x;
                        s = abs(a(nn, nn - 1)) + abs(a(nn - 1, nn - 2));
                        y = x = Real(0.75) * s;
                        ww = Real(-0.4375) * s * s;
                    }
                    ++its;
                    int m = nn - 2;
                    for (; m >= l; --m)
                    {
                        z = a(m, m);
                        r = x - z;
                        s = y - z;
                        p = (r * s - ww) / a(m + 1, m) + a(m, m + 1);
                        q = a(m + 1, m + 1) - z - r - s;
                        r = a(m + 2, m + 1);
                        s = abs(p) + abs(q) + abs(r);
                        p /= s;
                        q /= s;
                        r /= s;
                        if (m == l) break;
                        u = abs(a(m, m - 1)) * (abs(q) + abs(r));
                        v = abs(p) * (abs(a(m - 1, m - 1)) + abs(z) + abs(a(m + 1, m + 1)));
                        if (u <= eps * v) break;
                    }
                    for (int i = m + 2; i <= nn; ++i)
                    {
                        a(i, i - 2) = Real(0);
                        if (i != m + 2) a(i, i - 3) = Real(0);
                    }
                    for (int k = m; k <= nn - 1; ++k)
                    {
                        if (k != m)
                        {
                            p = a(k, k - 1);
                            q = a(k + 1, k - 1);
                            r = Real(0);
                            if (k != nn - 1) r = a(k + 2, k - 1);
                            x = abs(p) + abs(q) + abs(r);
                            if (x != Real(0))
                            {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        s = sign(sqrt(p * p + q * q + r * r), p);
                        if (s != Real(0))
                        {
                            if (k == m)
                            {
                                if (l != m) a(k, k - 1) = -a(k, k - 1);
                            }
                            else
                            {
                                a(k, k - 1) = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for (int j = k; j <= nn; ++j)
                            {
                                p = a(k, j) + q * a(k + 1, j);
                                if (k != nn - 1)
                                {
                                    p += r * a(k + 2, j);
                                    a(k + 2, j) -= p * z;
                                }
                                a(k + 1, j) -= p * y;
                                a(k, j) -= p * x;
                            }
                            const int mmin = nn < k + 3 ? nn : k + 3;
                            for (int i = l; i <= mmin; ++i)
                            {
                                p = x * a(i, k) + y * a(i, k + 1);
                                if (k != nn - 1)
                                {
                                    p += z * a(i, k + 2);
                                    a(i, k + 2) -= p * r;
                                }
                                a(i, k + 1) -= p * q;
                                a(i, k) -= p;
                            }
                        }
                    }
                }
            }
        } while (l < nn - 1);
    }
    return w;
}

} // namespace maplace::linalg
