// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "maplace/geometry.hpp"
#include "maplace/objective.hpp"
#include "maplace/scenario.hpp"

namespace maplace
{

// Outcome of any placement strategy. elapsed_s covers computing the
// positions only; J and SE are filled in afterwards.
struct PlacementResult
{
    std::string strategy;
    BsPositions x;
    AngularPositions s;
    NormalizedPositions t; // unit chart
    double J = 0.0;
    double se_bits = 0.0;
    double equilibrium_residual = 0.0; // scaled by 1/M^2; meaning depends on strategy
    double elapsed_s = 0.0;
    int iterations = 0;
    bool converged = true;
    std::optional<double> mean_se_bits; // random baseline: mean over all patterns
    std::string note;
};

class Stopwatch
{
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

// Fills s, t, J and SE from the positions already stored in r.x.
inline void score_placement(PlacementResult &r, const ScenarioConfig &cfg)
{
    r.s = to_angular(r.x, cfg);
    r.t = normalize_unit(r.s.s, r.s.s_min, r.s.s_max);
    r.J = fekete_objective(r.s.s, cfg.ue_azimuth);
    r.se_bits = placement_se(r.x, cfg);
}

} // namespace maplace
