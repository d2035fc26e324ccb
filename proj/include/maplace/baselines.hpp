// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "maplace/asymptotic.hpp"
#include "maplace/channel.hpp"
#include "maplace/error.hpp"
#include "maplace/geometry.hpp"
#include "maplace/heun_solver.hpp"
#include "maplace/objective.hpp"
#include "maplace/placement.hpp"
#include "maplace/rng.hpp"
#include "maplace/scenario.hpp"

namespace maplace
{

inline PlacementResult ula_placement(const ScenarioConfig &cfg)
{
    cfg.validate();
    PlacementResult r;
    r.strategy = "ula";
    Stopwatch clock;
    r.x = ula_positions(cfg.num_bs, cfg.unit_spacing());
    r.elapsed_s = clock.seconds();
    score_placement(r, cfg);
    return r;
}

// Best of `count` patterns with the endpoints fixed and the interior drawn
// uniformly over the aperture. mean_se_bits holds the mean over all patterns.
inline PlacementResult random_placements(const ScenarioConfig &cfg, int count, std::mt19937_64 &g)
{
    cfg.validate();
    if (count < 1) throw Error(Errc::InvalidArgument, "random baseline needs at least one pattern");
    PlacementResult r;
    r.strategy = "random";
    Stopwatch clock;
    const double half = 0.5 * cfg.aperture();
    BsPositions x(static_cast<std::size_t>(cfg.num_bs));
    double best = -std::numeric_limits<double>::infinity(), sum = 0.0;
    for (int p = 0; p < count; ++p)
    {
        x.front() = -half;
        x.back() = half;
        for (std::size_t i = 1; i + 1 < x.size(); ++i) x[i] = uniform(g, -half, half);
        std::sort(x.begin() + 1, x.end() - 1);
        const double se = placement_se(x, cfg);
        sum += se;
        if (se > best)
        {
            best = se;
            r.x = x;
        }
    }
    r.elapsed_s = clock.seconds();
    score_placement(r, cfg);
    r.mean_se_bits = sum / count;
    return r;
}

inline PlacementResult random_placements(const ScenarioConfig &cfg, int count = 1000)
{
    auto g = trial_rng(cfg.rng_seed, 0);
    return random_placements(cfg, count, g);
}

// Successive selection from 2M uniform grid points over the aperture. Both
// endpoints are taken first; each round adds the point with the largest SE
// of the partial channel (rho/M with the final M). Ties go to the lowest
// grid index.
inline PlacementResult greedy_selection(const ScenarioConfig &cfg)
{
    cfg.validate();
    PlacementResult r;
    r.strategy = "greedy";
    Stopwatch clock;
    const int m = cfg.num_bs;
    const int grid = 2 * m;
    const double half = 0.5 * cfg.aperture();
    BsPositions pts(static_cast<std::size_t>(grid));
    for (int i = 0; i < grid; ++i) pts[static_cast<std::size_t>(i)] = -half + cfg.aperture() * i / (grid - 1);
    pts.back() = half;

    const ComplexMatrix h = exact_channel(pts, cfg) * cfg.r0();
    const double rho = cfg.snr_linear() / m;
    const auto n = h.rows();
    std::vector<bool> taken(static_cast<std::size_t>(grid), false);
    taken.front() = taken.back() = true;
    Eigen::MatrixXcd gram = h.col(0) * h.col(0).adjoint() + h.col(grid - 1) * h.col(grid - 1).adjoint();
    for (int picked = 2; picked < m; ++picked)
    {
        int best_i = -1;
        double best_se = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < grid; ++i)
        {
            if (taken[static_cast<std::size_t>(i)]) continue;
            const Eigen::MatrixXcd trial = gram + h.col(i) * h.col(i).adjoint();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(trial, Eigen::EigenvaluesOnly);
            double se = 0.0;
            for (Eigen::Index k = 0; k < n; ++k) se += std::log2(1.0 + rho * std::max(0.0, es.eigenvalues()(k)));
            if (se > best_se)
            {
                best_se = se;
                best_i = i;
            }
        }
        taken[static_cast<std::size_t>(best_i)] = true;
        gram += h.col(best_i) * h.col(best_i).adjoint();
    }
    for (int i = 0; i < grid; ++i)
        if (taken[static_cast<std::size_t>(i)]) r.x.push_back(pts[static_cast<std::size_t>(i)]);
    r.elapsed_s = clock.seconds();
    score_placement(r, cfg);
    return r;
}

struct GdConfig
{
    double step_init = 0.1;
    double backtrack_factor = 0.5;
    double armijo_c = 1e-4;
    double tol_grad = 1e-9;
    long max_iters = 100000;

    void validate() const
    {
        if (!(step_init > 0.0) || !(backtrack_factor > 0.0 && backtrack_factor < 1.0) ||
            !(armijo_c > 0.0 && armijo_c < 1.0) || !(tol_grad > 0.0) || max_iters < 1)
            throw Error(Errc::InvalidArgument, "invalid gradient-descent settings");
    }
};

// Projected gradient ascent on the interior angular positions. Every
// iteration starts from step_init and backtracks until the Armijo condition
// holds; steps that break strict ordering are cut the same way. Stops at
// ||grad||_inf <= tol_grad. Exhausting max_iters returns the last iterate
// with converged = false.
inline PlacementResult gradient_descent(const ScenarioConfig &cfg, const GdConfig &gd = {},
                                        std::optional<std::vector<double>> start = {})
{
    cfg.validate();
    gd.validate();
    PlacementResult r;
    r.strategy = "gd";
    Stopwatch clock;
    const double theta = cfg.ue_azimuth;
    std::vector<double> s;
    if (start)
    {
        s = *start;
        if (s.size() != static_cast<std::size_t>(cfg.num_bs))
            throw Error(Errc::InvalidArgument, "start vector must hold M angular positions");
    }
    else
    {
        for (double x : ula_positions(cfg.num_bs, cfg.unit_spacing())) s.push_back(x_to_s(x, cfg));
    }
    const auto [s_min, s_max] = s_bounds(cfg);
    s.front() = s_min;
    s.back() = s_max;

    auto inf_norm = [](const std::vector<double> &v) {
        double n = 0.0;
        for (double x : v) n = std::max(n, std::abs(x));
        return n;
    };

    std::vector<double> g = fekete_gradient(s, theta);
    std::vector<double> trial(s.size());
    long it = 0;
    r.converged = false;
    for (; it < gd.max_iters; ++it)
    {
        if (inf_norm(g) <= gd.tol_grad)
        {
            r.converged = true;
            break;
        }
        double g2 = 0.0;
        for (double v : g) g2 += v * v;

        double alpha = gd.step_init;
        bool accepted = false;
        for (int bt = 0; bt < 200; ++bt, alpha *= gd.backtrack_factor)
        {
            trial = s;
            bool ordered = true;
            for (std::size_t k = 1; k + 1 < s.size(); ++k) trial[k] = s[k] + alpha * g[k - 1];
            for (std::size_t k = 1; k < s.size(); ++k)
                if (!(trial[k] > trial[k - 1])) ordered = false;
            if (!ordered) continue;
            double dj;
            try
            {
                dj = fekete_objective_delta(s, trial, theta);
            }
            catch (const Error &)
            {
                continue;
            }
            if (dj >= gd.armijo_c * alpha * g2)
            {
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
        s.swap(trial);
        g = fekete_gradient(s, theta);
    }
    r.iterations = static_cast<int>(it);
    if (!r.converged) r.note = it >= gd.max_iters ? "MaxItersExceeded" : "line search stalled";
    r.x = to_positions(s, cfg);
    r.elapsed_s = clock.seconds();
    score_placement(r, cfg);
    r.equilibrium_residual = inf_norm(g);
    return r;
}

inline constexpr std::string_view strategy_names[] = {"random", "greedy", "gd", "ula", "heun", "asymptotic"};

inline bool is_strategy(std::string_view name)
{
    return std::find(std::begin(strategy_names), std::end(strategy_names), name) != std::end(strategy_names);
}

// Uniform dispatch by strategy name. `g` feeds the random baseline.
inline PlacementResult evaluate_strategy(std::string_view name, const ScenarioConfig &cfg, std::mt19937_64 &g)
{
    if (name == "heun") return solve_placement(cfg);
    if (name == "asymptotic") return solve_asymptotic(cfg);
    if (name == "gd") return gradient_descent(cfg);
    if (name == "greedy") return greedy_selection(cfg);
    if (name == "ula") return ula_placement(cfg);
    if (name == "random") return random_placements(cfg, 1000, g);
    throw Error(Errc::UnknownStrategy, "unknown strategy '" + std::string(name) + "'");
}

inline PlacementResult evaluate_strategy(std::string_view name, const ScenarioConfig &cfg)
{
    auto g = trial_rng(cfg.rng_seed, 0);
    return evaluate_strategy(name, cfg, g);
}

} // namespace maplace
