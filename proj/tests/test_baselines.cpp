// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "maplace/baselines.hpp"
#include "oracles.hpp"

using namespace maplace;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
ScenarioConfig scenario(int m, double r0, double phi0, double theta)
{
    ScenarioConfig c;
    c.num_bs = m;
    c.set_pose(r0, phi0, theta);
    return c;
}
} // namespace

TEST_CASE("ULA baseline", "[baselines]")
{
    const ScenarioConfig c;
    const auto r = ula_placement(c);
    CHECK(r.x == ula_positions(c.num_bs, c.unit_spacing()));
    CHECK_THAT(r.se_bits, WithinRel(placement_se(r.x, c), 1e-14));
    CHECK(r.elapsed_s >= 0.0);
}

TEST_CASE("random baseline", "[baselines]")
{
    const ScenarioConfig c;
    const auto a = random_placements(c, 50);
    const auto b = random_placements(c, 50);
    CHECK(a.x == b.x);
    CHECK(a.se_bits == b.se_bits);
    REQUIRE(a.mean_se_bits);
    CHECK(*a.mean_se_bits <= a.se_bits);
    CHECK(a.x.front() == -0.5 * c.aperture());
    CHECK(a.x.back() == 0.5 * c.aperture());

    // more draws from the same stream never lower the best
    double prev = -INFINITY;
    for (int count : {1, 10, 100, 400})
    {
        auto g = trial_rng(c.rng_seed, 0);
        const double se = random_placements(c, count, g).se_bits;
        CHECK(se >= prev);
        prev = se;
    }
    CHECK_THROWS_AS(random_placements(c, 0), Error);
}

TEST_CASE("greedy picks the best interior point for M = 3", "[baselines]")
{
    for (double phi0 : {-0.7, 0.2, 0.9})
    {
        const auto c = scenario(3, 4.0, phi0, 0.1);
        const auto r = greedy_selection(c);
        REQUIRE(r.x.size() == 3u);
        const double half = 0.5 * c.aperture();
        double best = -INFINITY, best_x = 0.0;
        for (int i = 1; i < 5; ++i)
        {
            const double p = -half + c.aperture() * i / 5.0;
            const double se = placement_se({-half, p, half}, c);
            if (se > best)
            {
                best = se;
                best_x = p;
            }
        }
        CHECK_THAT(r.x[1], WithinAbs(best_x, 1e-12));
    }
}

TEST_CASE("greedy output is a sorted subset of the grid", "[baselines]")
{
    const auto c = scenario(8, 6.0, 0.4, 0.0);
    const auto r = greedy_selection(c);
    REQUIRE(r.x.size() == 8u);
    for (std::size_t i = 1; i < r.x.size(); ++i) CHECK(r.x[i] > r.x[i - 1]);
    const double step = c.aperture() / 15.0;
    for (double x : r.x)
    {
        const double k = (x + 0.5 * c.aperture()) / step;
        CHECK_THAT(k, WithinAbs(std::round(k), 1e-9));
    }
}

TEST_CASE("gradient descent converges and ascends", "[baselines]")
{
    ScenarioConfig base;
    base.num_bs = 8;
    for (std::uint64_t t = 0; t < 10; ++t)
    {
        auto g = trial_rng(77, t);
        const auto c = sample_near_field_pose(base, g);
        const auto r = gradient_descent(c);
        CHECK(r.converged);
        CHECK(r.equilibrium_residual <= 1e-9);
        CHECK(r.J > ula_placement(c).J);
    }
}

TEST_CASE("gradient descent iterates increase the objective", "[baselines]")
{
    const auto c = scenario(8, 8.0, 0.5, 0.1);
    GdConfig gd;
    double prev = -INFINITY;
    for (long iters : {1L, 2L, 5L, 20L, 100L})
    {
        gd.max_iters = iters;
        const auto r = gradient_descent(c, gd);
        CHECK(r.J > prev);
        prev = r.J;
        CHECK_FALSE(r.converged);
        CHECK(r.note == "MaxItersExceeded");
    }
    gd.step_init = -1.0;
    CHECK_THROWS_AS(gradient_descent(c, gd), Error);
}

TEST_CASE("gradient descent reaches the optimum from any start", "[baselines]")
{
    const auto c = scenario(10, 7.0, 0.6, -0.1);
    const auto ref = gradient_descent(c);
    const auto [lo, hi] = s_bounds(c);
    for (std::uint64_t t = 0; t < 5; ++t)
    {
        auto g = trial_rng(3, t);
        std::vector<double> s{lo};
        for (int i = 1; i + 1 < c.num_bs; ++i) s.push_back(uniform(g, lo, hi));
        std::sort(s.begin() + 1, s.end());
        s.push_back(hi);
        const auto r = gradient_descent(c, {}, s);
        REQUIRE(r.converged);
        CHECK(oracle::max_abs_diff(r.x, ref.x) <= 1e-6);
    }
}

TEST_CASE("strategy dispatch", "[baselines]")
{
    const auto c = scenario(8, 10.0, 0.5, 0.0);
    for (auto name : strategy_names)
    {
        CHECK(is_strategy(name));
        const auto r = evaluate_strategy(name, c);
        CHECK(r.strategy == name);
        CHECK(r.x.size() == 8u);
        CHECK(std::isfinite(r.se_bits));
        CHECK(r.elapsed_s >= 0.0);
    }
    CHECK_FALSE(is_strategy("annealing"));
    try
    {
        evaluate_strategy("annealing", c);
        FAIL("expected UnknownStrategy");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == Errc::UnknownStrategy);
    }
}

TEST_CASE("closed-form strategies are timed", "[baselines]")
{
    const auto c = scenario(16, 10.0, 0.5, 0.0);
    CHECK(solve_placement(c).elapsed_s > 0.0);
    CHECK(gradient_descent(c).elapsed_s > 0.0);
}
