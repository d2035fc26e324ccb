// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <string>

#include "maplace/baselines.hpp"
#include "maplace/heun_solver.hpp"
#include "maplace/rng.hpp"
#include "oracles.hpp"

using namespace maplace;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
int roots_inside(const HeunCandidate &c)
{
    int k = 0;
    for (double r : c.roots_t) k += (r > 0.0 && r < 1.0);
    return k;
}

// Coefficients of A p'' + B p' + (v1 t - q) p for monic p, ascending.
std::vector<long double> ode_residual(const std::vector<double> &c, double bt, long v1, double q)
{
    const std::size_t deg = c.size() - 1;
    std::vector<long double> out(deg + 2, 0.0L);
    const long double b = bt;
    for (std::size_t k = 0; k <= deg; ++k)
    {
        const long double ck = c[k];
        // t(t-1)(t-b) = t^3 - (1+b) t^2 + b t
        if (k >= 2)
        {
            const long double d2 = ck * k * (k - 1);
            out[k + 1] += d2;
            out[k] -= (1 + b) * d2;
            out[k - 1] += b * d2;
        }
        // 2(t-1)(t-b) + 2t(t-b) + t(t-1) = 5t^2 - (3+4b) t + 2b
        if (k >= 1)
        {
            const long double d1 = ck * k;
            out[k + 1] += 5 * d1;
            out[k] -= (3 + 4 * b) * d1;
            out[k - 1] += 2 * b * d1;
        }
        out[k + 1] += v1 * ck;
        out[k] -= q * ck;
    }
    return out;
}

ScenarioConfig scenario(int m, double r0, double phi0, double theta)
{
    ScenarioConfig c;
    c.num_bs = m;
    c.set_pose(r0, phi0, theta);
    return c;
}
} // namespace

TEST_CASE("recursion matrix entries", "[heun]")
{
    const auto r = heun_matrix<double>(4, 2.0);
    REQUIRE(r.size() == 3);
    CHECK(r.diag[0] == 0.0);
    CHECK(r.sup[0] == 4.0);
    CHECK(r.sub[0] == -12.0);
    CHECK(r.diag[1] == -11.0);
    CHECK(r.sup[1] == 12.0);
    CHECK(r.sub[1] == -7.0);
    CHECK(r.diag[2] == -28.0);

    for (int m = 3; m <= 64; ++m)
    {
        const auto h = build_heun_system(m, 1.7);
        CHECK(h.gamma + h.delta + h.epsilon == h.alpha + h.beta + 1);
        CHECK((m - 2 + h.alpha) * (m - 2 + h.beta) == 0);
        CHECK(h.v1 == -static_cast<long>(m - 2) * (m + 2));
        CHECK(h.R.size() == static_cast<std::size_t>(m - 1));
    }
    CHECK_THROWS_AS(heun_matrix<double>(2, 1.0), Error);
}

TEST_CASE("precision tiers", "[heun]")
{
    CHECK(precision_tier_for(16) == PrecisionTier::LongDouble);
    CHECK(precision_tier_for(32) == PrecisionTier::Mp50);
    CHECK(precision_tier_for(64) == PrecisionTier::Mp100);
    CHECK(precision_tier_for(200) == PrecisionTier::Mp200);
    CHECK_THROWS_AS(precision_tier_for(257), Error);
}

TEST_CASE("eigenpolynomials satisfy the Heun equation", "[heun]")
{
    for (double bt : {-0.5, 1.41, 3.0})
        for (int m : {5, 8, 12})
        {
            const auto sys = build_heun_system(m, bt);
            for (const auto &c : heun_candidates(m, bt, CandidateSet::All, PrecisionTier::Mp100))
            {
                const auto res = ode_residual(c.coeffs, bt, sys.v1, c.q);
                long double scale = 1.0L, worst = 0.0L;
                for (std::size_t k = 0; k < c.coeffs.size(); ++k)
                    scale = std::max(scale, std::abs(static_cast<long double>(c.coeffs[k])) * (k + 2) * (k + 2) * (2 + std::abs(bt)));
                for (auto v : res) worst = std::max(worst, std::abs(v));
                CHECK(static_cast<double>(worst / scale) < 1e-12);

                // q from the t^{M-2} balance
                const double cm3 = c.coeffs[static_cast<std::size_t>(m - 3)];
                const double v0 = m * (m - 2.0) + bt * (m - 2.0) * (m + 1.0) + (2.0 * m - 1.0) * cm3;
                CHECK_THAT(c.q, WithinAbs(-v0, 1e-9 * std::max(1.0, std::abs(v0))));
            }
        }
}

TEST_CASE("root counts follow the eigenvalue order", "[heun]")
{
    for (double bt : {-0.5, -0.05, -3.0})
        for (int m = 4; m <= 12; ++m)
        {
            const auto all = heun_candidates(m, bt, CandidateSet::All, PrecisionTier::Mp100);
            REQUIRE(all.size() == static_cast<std::size_t>(m - 1));
            for (std::size_t k = 0; k < all.size(); ++k)
            {
                CHECK(oracle::sign_changes(all[k].coeffs) == static_cast<int>(k));
                CHECK(all[k].in_unit_interval() == (k + 1 == all.size()));
            }
            const auto chosen = heun_candidates(m, bt, CandidateSet::Largest);
            CHECK(roots_inside(chosen.front()) == m - 2);
        }
}

TEST_CASE("external charge right of the interval", "[heun]")
{
    // N = 6 interior zeros, charge at 1.41
    const auto all = heun_candidates(8, 1.41, CandidateSet::All, PrecisionTier::Mp100);
    CHECK(roots_inside(all[0]) == 6);
    CHECK(all[0].in_unit_interval());
    CHECK(roots_inside(all[2]) == 4);
    CHECK_FALSE(all[2].in_unit_interval());
    const auto pick = heun_candidates(8, 1.41, CandidateSet::Smallest);
    CHECK(pick.front().q == all[0].q);
}

TEST_CASE("single interior charge matches a golden-section search", "[heun]")
{
    for (double bt : {-2.0, -0.3, 1.2, 4.0})
    {
        const auto c = heun_candidates(3, bt, bt < 0 ? CandidateSet::Largest : CandidateSet::Smallest);
        REQUIRE(c.front().roots_t.size() == 1);
        auto phi = [bt](double t) { return 2 * std::log(t) + 2 * std::log(1 - t) + std::log(std::abs(t - bt)); };
        // a flat maximum limits golden section to about sqrt(eps)
        const double ref = oracle::golden_max(phi, 1e-12, 1 - 1e-12);
        CHECK_THAT(c.front().roots_t[0], WithinAbs(ref, 5e-8));
        // cleared force balance: 5t^2 - (3 + 4b) t + 2b = 0, root inside (0, 1)
        const double p = 3 + 4 * bt, disc = std::sqrt(p * p - 40 * bt);
        double exact = (p - disc) / 10;
        if (!(exact > 0 && exact < 1)) exact = (p + disc) / 10;
        CHECK_THAT(c.front().roots_t[0], WithinAbs(exact, 1e-12));
    }
}

TEST_CASE("selected roots match the damped-Newton equilibrium", "[heun]")
{
    for (double bt : {-0.8, -0.02, 1.05, 2.0, 25.0})
        for (int m : {4, 8, 16, 24, 32, 48})
        {
            const auto c = heun_candidates(m, bt, bt < 0 ? CandidateSet::Largest : CandidateSet::Smallest);
            const auto ref = oracle::newton_equilibrium(m, bt);
            CHECK(oracle::max_abs_diff(c.front().roots_t, ref) <= 1e-8);
            CHECK(equilibrium_residual(c.front().roots_t, bt) / (double(m) * m) <= equilibrium_tol);
        }
}

TEST_CASE("roots at M = 64 in the wider tier", "[heun]")
{
    const auto c = heun_candidates(64, -0.4, CandidateSet::Largest);
    const auto ref = oracle::newton_equilibrium(64, -0.4);
    CHECK(oracle::max_abs_diff(c.front().roots_t, ref) <= 1e-8);
}

TEST_CASE("residual detects perturbed roots", "[heun]")
{
    const auto c = heun_candidates(10, -0.3, CandidateSet::Largest);
    auto t = c.front().roots_t;
    const double base = equilibrium_residual(t, -0.3);
    t[4] += 1e-6;
    CHECK(equilibrium_residual(t, -0.3) > 1e3 * base);
    CHECK(equilibrium_residual(t, -0.3) > 1e-5);
}

TEST_CASE("endpoint charges are nudged off the interval", "[heun]")
{
    const auto cfg = scenario(8, 10.0, 0.5, 0.0);
    auto coef = taylor_coefficients(cfg);
    coef.b_tilde = 0.0;
    const auto left = select_eigenpair(cfg, coef);
    CHECK(left.b_tilde < 0.0);
    CHECK_THAT(left.note, ContainsSubstring("left"));
    CHECK(left.chosen.in_unit_interval());

    coef.b_tilde = 1.0;
    const auto right = select_eigenpair(cfg, coef);
    CHECK(right.b_tilde > 1.0);
    CHECK_THAT(right.note, ContainsSubstring("right"));
    CHECK(right.chosen.in_unit_interval());
}

TEST_CASE("charge inside the interval picks the best feasible candidate", "[heun]")
{
    const auto cfg = scenario(7, 10.0, 0.5, 0.0);
    auto coef = taylor_coefficients(cfg);
    coef.b_tilde = 0.37;
    const auto sel = select_eigenpair(cfg, coef);
    CHECK(sel.chosen.in_unit_interval());
    CHECK(equilibrium_residual(sel.chosen.roots_t, 0.37) / 49.0 <= equilibrium_tol);
    auto j_of = [&](const HeunCandidate &c) {
        std::vector<double> s{coef.s_min};
        for (double v : denormalize_unit(c.roots_t, coef.s_min, coef.s_max)) s.push_back(v);
        s.push_back(coef.s_max);
        return fekete_objective(s, cfg.ue_azimuth);
    };
    int feasible = 0;
    for (const auto &c : heun_candidates(7, 0.37, CandidateSet::All))
    {
        if (!c.in_unit_interval()) continue;
        ++feasible;
        CHECK(j_of(sel.chosen) >= j_of(c));
    }
    CHECK(feasible >= 1);
}

TEST_CASE("solve_placement end to end", "[heun]")
{
    const auto cfg = scenario(16, 10.0, std::numbers::pi / 3, 0.0);
    const auto r = solve_placement(cfg);
    CHECK(r.strategy == "heun");
    REQUIRE(r.x.size() == 16u);
    CHECK(r.x.front() == -0.5 * cfg.aperture());
    CHECK(r.x.back() == 0.5 * cfg.aperture());
    for (std::size_t i = 1; i < r.x.size(); ++i) CHECK(r.x[i] > r.x[i - 1]);
    CHECK(r.equilibrium_residual <= equilibrium_tol);

    // the linearised first-order condition holds at the output
    const auto coef = taylor_coefficients(cfg);
    const auto g = taylor_gradient(r.s.s, coef);
    double worst = 0.0;
    for (double v : g) worst = std::max(worst, std::abs(v));
    CHECK(worst * (coef.s_max - coef.s_min) / (16.0 * 16.0) <= 1e-8);

    // denser placement towards the edges
    std::size_t arg = 0;
    for (std::size_t i = 1; i + 1 < r.x.size(); ++i)
        if (r.x[i + 1] - r.x[i] < r.x[arg + 1] - r.x[arg]) arg = i;
    CHECK((arg == 0 || arg + 2 == r.x.size()));

    const auto gd = gradient_descent(cfg);
    REQUIRE(gd.converged);
    CHECK(r.se_bits >= gd.se_bits * (1 - 1e-3));
}

TEST_CASE("broadside pose delegates to the closed form", "[heun]")
{
    ScenarioConfig cfg;
    cfg.ue_x0 = 0.0;
    cfg.ue_y0 = 10.0;
    const auto r = solve_placement(cfg);
    CHECK_THAT(r.note, ContainsSubstring("asymptotic"));
    for (std::size_t i = 0; i < r.x.size(); ++i) CHECK_THAT(r.x[i], WithinAbs(-r.x[r.x.size() - 1 - i], 1e-9));
}

TEST_CASE("output beats random layouts on the objective", "[heun]")
{
    ScenarioConfig base;
    for (std::uint64_t trial = 0; trial < 10; ++trial)
    {
        auto g = trial_rng(31, trial);
        auto cfg = sample_pose(base, 3.0, 20.0, g);
        if (std::abs(cfg.phi0()) < 0.05) continue;
        const auto r = solve_placement(cfg);
        const auto [lo, hi] = s_bounds(cfg);
        for (int p = 0; p < 100; ++p)
        {
            std::vector<double> s{lo};
            for (int i = 1; i + 1 < cfg.num_bs; ++i) s.push_back(uniform(g, lo, hi));
            std::sort(s.begin() + 1, s.end());
            s.push_back(hi);
            CHECK(r.J >= fekete_objective(s, cfg.ue_azimuth));
        }
    }
}
