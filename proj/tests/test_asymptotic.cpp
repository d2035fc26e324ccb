// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <thread>

#include "maplace/asymptotic.hpp"
#include "maplace/heun_solver.hpp"
#include "oracles.hpp"

using namespace maplace;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("Chebyshev node sets", "[asymptotic]")
{
    const auto &four = chebyshev_nodes(4);
    CHECK(four.chart == Chart::Symmetric);
    REQUIRE(four.t.size() == 4u);
    CHECK(four.t[0] == -1.0);
    CHECK_THAT(four.t[1], WithinAbs(std::cos(3 * std::numbers::pi / 4), 1e-15));
    CHECK_THAT(four.t[2], WithinAbs(std::cos(std::numbers::pi / 4), 1e-15));
    CHECK(four.t[3] == 1.0);

    const auto &three = chebyshev_nodes(3);
    REQUIRE(three.t.size() == 3u);
    CHECK(three.t[1] == 0.0);

    for (int m : {5, 9, 16, 33})
    {
        const auto &t = chebyshev_nodes(m).t;
        for (std::size_t i = 0; i < t.size(); ++i) CHECK_THAT(t[i], WithinAbs(-t[t.size() - 1 - i], 1e-15));
        for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i] > t[i - 1]);
    }
    CHECK_THROWS_AS(chebyshev_nodes(2), Error);
}

TEST_CASE("node cache is shared and thread safe", "[asymptotic]")
{
    std::vector<std::thread> pool;
    std::vector<const NormalizedPositions *> seen(8);
    for (int i = 0; i < 8; ++i)
        pool.emplace_back([&seen, i] {
            for (int m = 3; m < 60; ++m) chebyshev_nodes(m);
            seen[static_cast<std::size_t>(i)] = &chebyshev_nodes(40);
        });
    for (auto &t : pool) t.join();
    for (const auto *p : seen) CHECK(p == &chebyshev_nodes(40));
}

TEST_CASE("Jacobi (1,1) roots", "[asymptotic]")
{
    const auto four = jacobi11_roots(4);
    REQUIRE(four.t.size() == 2u);
    CHECK_THAT(four.t[0], WithinAbs(-1.0 / std::sqrt(5.0), 1e-10));
    CHECK_THAT(four.t[1], WithinAbs(1.0 / std::sqrt(5.0), 1e-10));
    CHECK(jacobi11_roots(3).t == std::vector<double>{0.0});

    const auto j = jacobi11_matrix(3);
    CHECK_THAT(j.offdiag[0], WithinAbs(std::sqrt(1.0 / 5.0), 1e-15));

    // the roots are the equilibrium of the symmetric problem
    for (int m : {5, 10, 20, 40})
        CHECK(pure_equilibrium_residual(jacobi11_roots(m).t) <= 1e-8);
}

TEST_CASE("Jacobi roots equal the solver's equilibrium for a distant charge", "[asymptotic]")
{
    // as the external charge recedes its force vanishes
    const auto far = heun_candidates(10, 1e7, CandidateSet::Smallest).front().roots_t;
    const auto jac = jacobi11_roots(10).t;
    for (std::size_t i = 0; i < jac.size(); ++i) CHECK_THAT(2.0 * far[i] - 1.0, WithinAbs(jac[i], 1e-6));
}

TEST_CASE("convergence gap", "[asymptotic]")
{
    CHECK_THAT(convergence_gap(4), WithinAbs(std::cos(std::numbers::pi / 4) - 1.0 / std::sqrt(5.0), 1e-12));
    CHECK_THAT(convergence_gap(4), WithinAbs(0.2599, 1e-4));
    double prev = INFINITY;
    for (int m : {4, 8, 16, 32, 64, 128})
    {
        const double g = convergence_gap(m);
        CHECK(g < prev);
        prev = g;
    }
}

TEST_CASE("closed-form placement", "[asymptotic]")
{
    ScenarioConfig sym;
    sym.ue_x0 = 0.0;
    sym.ue_y0 = 10.0;
    const auto r = solve_asymptotic(sym);
    CHECK(r.strategy == "asymptotic");
    REQUIRE(r.x.size() == 16u);
    for (std::size_t i = 0; i < r.x.size(); ++i) CHECK_THAT(r.x[i], WithinAbs(-r.x[15 - i], 1e-12));
    CHECK(r.equilibrium_residual > 0.0);

    ScenarioConfig off;
    const auto q = solve_asymptotic(off);
    const auto [lo, hi] = s_bounds(off);
    const auto back = normalize_sym(q.s.s, lo, hi);
    const auto &nodes = chebyshev_nodes(16).t;
    for (std::size_t i = 0; i < nodes.size(); ++i) CHECK_THAT(back.t[i], WithinAbs(nodes[i], 1e-9));
}

TEST_CASE("closed form trails the exact solver close in", "[asymptotic]")
{
    ScenarioConfig c;
    double prev_gap = INFINITY;
    for (double r0 : {0.2, 0.5, 2.0})
    {
        c.set_pose(r0, std::numbers::pi / 6, 0.0);
        if (!pose_admissible(c)) continue;
        const double heun = solve_placement(c).J;
        const double asym = solve_asymptotic(c).J;
        CHECK(asym <= heun + 1e-9 * std::abs(heun));
        CHECK(heun - asym <= prev_gap);
        prev_gap = heun - asym;
    }
}
