// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <vector>

#include "maplace/error.hpp"
#include "maplace/geometry.hpp"
#include "maplace/linalg/tridiagonal.hpp"
#include "maplace/placement.hpp"
#include "maplace/scenario.hpp"

namespace maplace
{

struct JacobiMatrix
{
    int dim = 0;
    std::vector<double> offdiag; // zero diagonal, symmetric
};

// Three-term recurrence matrix of P^(1,1)_n.
inline JacobiMatrix jacobi11_matrix(int dim)
{
    if (dim < 1) throw Error(Errc::InvalidArgument, "Jacobi matrix dimension must be positive");
    JacobiMatrix j{dim, {}};
    for (int n = 1; n < dim; ++n)
        j.offdiag.push_back(std::sqrt(double(n) * (n + 2) / ((2.0 * n + 3) * (2.0 * n + 1))));
    return j;
}

namespace detail
{
inline std::vector<double> make_chebyshev(int m)
{
    const int n = m - 2;
    std::vector<double> t;
    t.reserve(static_cast<std::size_t>(m));
    t.push_back(-1.0);
    // ascending: k = n-1 .. 0 gives cos from near -1 up to near +1
    for (int k = n - 1; k >= 0; --k) t.push_back(std::cos((2.0 * k + 1.0) * std::numbers::pi / (2.0 * n)));
    t.push_back(1.0);
    // exact zero for the middle node of odd n
    if (n % 2 == 1) t[static_cast<std::size_t>(1 + n / 2)] = 0.0;
    return t;
}
} // namespace detail

// Full node set in the symmetric chart: -1, the M-2 Chebyshev nodes, +1.
// Memoised per M; concurrent readers share the lock.
inline const NormalizedPositions &chebyshev_nodes(int m)
{
    if (m < 3) throw Error(Errc::InvalidArgument, "need M >= 3");
    static std::shared_mutex mu;
    static std::map<int, NormalizedPositions> cache;
    {
        std::shared_lock lock(mu);
        if (auto it = cache.find(m); it != cache.end()) return it->second;
    }
    NormalizedPositions fresh{detail::make_chebyshev(m), Chart::Symmetric};
    std::unique_lock lock(mu);
    return cache.try_emplace(m, std::move(fresh)).first->second;
}

// Interior roots of P^(1,1)_{M-2}, ascending.
inline NormalizedPositions jacobi11_roots(int m)
{
    if (m < 3) throw Error(Errc::InvalidArgument, "need M >= 3");
    const auto j = jacobi11_matrix(m - 2);
    auto t = linalg::symmetric_tridiag_eigenvalues(std::vector<double>(static_cast<std::size_t>(j.dim), 0.0), j.offdiag);
    if (j.dim % 2 == 1) t[static_cast<std::size_t>(j.dim / 2)] = 0.0;
    return {std::move(t), Chart::Symmetric};
}

// l-infinity distance between the finite-M roots and the Chebyshev nodes.
inline double convergence_gap(int m)
{
    const auto r = jacobi11_roots(m);
    const auto &c = chebyshev_nodes(m);
    double gap = 0.0;
    for (std::size_t i = 0; i < r.t.size(); ++i) gap = std::max(gap, std::abs(r.t[i] - c.t[i + 1]));
    return gap;
}

// l-infinity of sum_i 1/(t_m - t_i) + 1/(t_m + 1) + 1/(t_m - 1) over interior
// points in the symmetric chart.
inline double pure_equilibrium_residual(const std::vector<double> &interior)
{
    double worst = 0.0;
    for (std::size_t m = 0; m < interior.size(); ++m)
    {
        long double acc = 1.0L / (interior[m] + 1.0L) + 1.0L / (interior[m] - 1.0L);
        for (std::size_t i = 0; i < interior.size(); ++i)
            if (i != m) acc += 1.0L / (static_cast<long double>(interior[m]) - interior[i]);
        worst = std::max(worst, static_cast<double>(std::abs(acc)));
    }
    return worst;
}

// Closed-form placement: Chebyshev nodes mapped through the symmetric chart.
// The stored residual is the pure equilibrium residual scaled by 1/M^2; it
// measures distance from the finite-M optimum and is not expected to vanish.
inline PlacementResult solve_asymptotic(const ScenarioConfig &cfg)
{
    cfg.validate();
    PlacementResult r;
    r.strategy = "asymptotic";
    Stopwatch clock;
    const auto &nodes = chebyshev_nodes(cfg.num_bs);
    const auto [s_min, s_max] = s_bounds(cfg);
    r.x = to_positions(denormalize_sym(nodes.t, s_min, s_max), cfg);
    r.elapsed_s = clock.seconds();
    score_placement(r, cfg);
    const std::vector<double> interior(nodes.t.begin() + 1, nodes.t.end() - 1);
    r.equilibrium_residual = pure_equilibrium_residual(interior) / (double(cfg.num_bs) * cfg.num_bs);
    return r;
}

} // namespace maplace
