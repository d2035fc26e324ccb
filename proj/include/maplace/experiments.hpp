// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "maplace/baselines.hpp"
#include "maplace/channel.hpp"
#include "maplace/error.hpp"
#include "maplace/objective.hpp"
#include "maplace/rng.hpp"
#include "maplace/scenario.hpp"

namespace maplace
{

struct SweepRow
{
    std::string variable;
    double value = 0.0;
    std::string strategy;
    int trial = 0;
    double se_bits = std::numeric_limits<double>::quiet_NaN();
    double elapsed_s = 0.0;
    std::uint64_t seed = 0;
    std::string error; // empty on success
};

// Comma-separated strategy names, validated against the dispatch table.
inline std::vector<std::string> parse_strategies(const std::string &list)
{
    std::vector<std::string> out;
    std::stringstream ss(list);
    std::string tok;
    while (std::getline(ss, tok, ','))
    {
        tok = detail::trim(tok);
        if (tok.empty()) continue;
        if (!is_strategy(tok)) throw Error(Errc::UnknownStrategy, "unknown strategy '" + tok + "'");
        out.push_back(tok);
    }
    if (out.empty()) throw Error(Errc::InvalidArgument, "strategy list is empty");
    return out;
}

// Pose for one trial at centroid distance r0: phi0 and theta uniform on
// [-pi/3, pi/3], redrawn until every element faces the UE.
inline ScenarioConfig trial_scenario(const ScenarioConfig &base, double r0, std::uint64_t seed, int trial)
{
    auto g = trial_rng(seed, static_cast<std::uint64_t>(trial));
    return sample_pose(base, r0, r0, g);
}

namespace detail
{

// Runs `name` on the design scenario and scores its positions on `truth`.
// The random baseline additionally yields its mean row.
inline void run_cell(std::vector<SweepRow> &rows, const SweepRow &proto, const std::string &name,
                     const ScenarioConfig &design, const ScenarioConfig &truth, bool matched, std::uint64_t seed,
                     int trial)
{
    SweepRow row = proto;
    row.strategy = name;
    try
    {
        auto g = trial_rng(seed ^ 0x5851f42d4c957f2dULL, static_cast<std::uint64_t>(trial));
        const auto r = evaluate_strategy(name, design, g);
        row.elapsed_s = r.elapsed_s;
        row.se_bits = placement_se(r.x, truth);
        rows.push_back(row);
        if (name == "random" && r.mean_se_bits)
        {
            SweepRow mean = row;
            mean.strategy = "random_mean";
            // the mean over patterns was scored on the design pose
            mean.se_bits = matched ? *r.mean_se_bits : std::numeric_limits<double>::quiet_NaN();
            rows.push_back(mean);
        }
    }
    catch (const Error &e)
    {
        row.error = e.what();
        rows.push_back(row);
    }
}

} // namespace detail

// Distance (variable "r0") or array-size (variable "M") sweep. Each trial
// draws its own pose; a failing strategy leaves an error row and the sweep
// continues.
inline std::vector<SweepRow> run_sweep(const ScenarioConfig &base, const std::string &variable,
                                       const std::vector<double> &values, const std::vector<std::string> &strategies,
                                       int trials, std::uint64_t seed, double fixed_r0 = 10.0)
{
    if (trials < 1) throw Error(Errc::InvalidArgument, "trials must be positive");
    if (values.empty()) throw Error(Errc::InvalidArgument, "sweep needs at least one value");
    if (variable != "r0" && variable != "M") throw Error(Errc::InvalidArgument, "sweep variable must be r0 or M");
    std::vector<SweepRow> rows;
    for (double v : values)
    {
        ScenarioConfig cell = base;
        double r0 = fixed_r0;
        if (variable == "M") cell.num_bs = static_cast<int>(std::lround(v));
        else r0 = v;
        cell.validate();
        for (int t = 0; t < trials; ++t)
        {
            const auto cfg = trial_scenario(cell, r0, seed, t);
            SweepRow proto{variable, v, "", t, std::numeric_limits<double>::quiet_NaN(), 0.0, seed, ""};
            for (const auto &name : strategies) detail::run_cell(rows, proto, name, cfg, cfg, true, seed, t);
        }
    }
    return rows;
}

// Pose-mismatch study. Variable "angle_error_deg": true pose at r0 with
// random phi0/theta, positions designed for phi0 + error. Variable
// "distance_error_m": true pose at phi0 = pi/6, r0 + error with random theta,
// positions designed for r0.
inline std::vector<SweepRow> run_robustness(const ScenarioConfig &base, const std::string &variable,
                                            const std::vector<double> &values,
                                            const std::vector<std::string> &strategies, int trials,
                                            std::uint64_t seed, double r0 = 10.0)
{
    if (trials < 1) throw Error(Errc::InvalidArgument, "trials must be positive");
    if (variable != "angle_error_deg" && variable != "distance_error_m")
        throw Error(Errc::InvalidArgument, "robustness variable must be angle_error_deg or distance_error_m");
    std::vector<SweepRow> rows;
    for (double v : values)
    {
        for (int t = 0; t < trials; ++t)
        {
            ScenarioConfig truth, design;
            if (variable == "angle_error_deg")
            {
                truth = trial_scenario(base, r0, seed, t);
                design = truth;
                design.set_pose(r0, truth.phi0() + v * std::numbers::pi / 180.0, truth.ue_azimuth);
            }
            else
            {
                auto g = trial_rng(seed, static_cast<std::uint64_t>(t));
                constexpr double lim = std::numbers::pi / 3.0;
                design = base;
                for (int attempt = 0;; ++attempt)
                {
                    if (attempt == 10000) throw Error(Errc::InvalidArgument, "no admissible pose found");
                    design.set_pose(r0, std::numbers::pi / 6.0, uniform(g, -lim, lim));
                    truth = design;
                    truth.set_pose(r0 + v, std::numbers::pi / 6.0, design.ue_azimuth);
                    if (pose_admissible(design) && pose_admissible(truth)) break;
                }
            }
            SweepRow proto{variable, v, "", t, std::numeric_limits<double>::quiet_NaN(), 0.0, seed, ""};
            if (!pose_admissible(design) || !pose_admissible(truth))
            {
                for (const auto &name : strategies)
                {
                    SweepRow row = proto;
                    row.strategy = name;
                    row.error = "AngleOutOfRange: mismatched pose leaves the UE half-plane";
                    rows.push_back(row);
                }
                continue;
            }
            for (const auto &name : strategies) detail::run_cell(rows, proto, name, design, truth, v == 0.0, seed, t);
        }
    }
    return rows;
}

struct NmseRow
{
    int M = 0;
    double f_c_hz = 0.0;
    NmseStats stats;
    std::uint64_t seed = 0;
};

inline std::vector<NmseRow> run_nmse(const ScenarioConfig &base, const std::vector<int> &ms,
                                     const std::vector<double> &fcs, int trials, std::uint64_t seed)
{
    std::vector<NmseRow> rows;
    for (int m : ms)
        for (double fc : fcs)
        {
            ScenarioConfig cfg = base;
            cfg.num_bs = m;
            cfg.carrier_frequency_hz = fc;
            cfg.validate();
            rows.push_back({m, fc, truncation_nmse(cfg, m, trials, seed), seed});
        }
    return rows;
}

struct TimingRow
{
    int M = 0;
    std::string strategy;
    double mean_s = 0.0;
    double p50_s = 0.0;
    double p95_s = 0.0;
    int repeats = 0;
};

inline double percentile(std::vector<double> v, double p)
{
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const double pos = p * (v.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - lo) * (v[hi] - v[lo]);
}

// Wall-clock of each strategy's position computation, `repeats` runs each
// on the base pose.
inline std::vector<TimingRow> run_timing(const ScenarioConfig &base, const std::vector<int> &ms,
                                         const std::vector<std::string> &strategies, int repeats)
{
    if (repeats < 1) throw Error(Errc::InvalidArgument, "repeats must be positive");
    std::vector<TimingRow> rows;
    for (int m : ms)
    {
        ScenarioConfig cfg = base;
        cfg.num_bs = m;
        cfg.validate();
        for (const auto &name : strategies)
        {
            std::vector<double> t;
            t.reserve(static_cast<std::size_t>(repeats));
            auto g = trial_rng(cfg.rng_seed, 0);
            for (int i = 0; i < repeats; ++i) t.push_back(evaluate_strategy(name, cfg, g).elapsed_s);
            double sum = 0.0;
            for (double x : t) sum += x;
            rows.push_back({m, name, sum / repeats, percentile(t, 0.5), percentile(t, 0.95), repeats});
        }
    }
    return rows;
}

inline void write_csv_header_comment(std::ostream &os, const ScenarioConfig &cfg, std::uint64_t seed)
{
    os << "# config_hash=" << std::hex << std::setw(16) << std::setfill('0') << config_hash(cfg) << std::dec
       << std::setfill(' ') << " seed=" << seed << '\n';
}

inline void write_sweep_csv(std::ostream &os, const ScenarioConfig &cfg, const std::vector<SweepRow> &rows)
{
    write_csv_header_comment(os, cfg, rows.empty() ? cfg.rng_seed : rows.front().seed);
    os << "variable,value,strategy,trial,se_bits,elapsed_s,seed\n";
    os << std::setprecision(10);
    for (const auto &r : rows)
    {
        os << r.variable << ',' << r.value << ',' << r.strategy << ',' << r.trial << ',';
        if (r.error.empty() && std::isfinite(r.se_bits)) os << r.se_bits;
        else os << "nan";
        os << ',' << r.elapsed_s << ',' << r.seed << '\n';
    }
}

inline void write_nmse_csv(std::ostream &os, const ScenarioConfig &cfg, const std::vector<NmseRow> &rows)
{
    write_csv_header_comment(os, cfg, rows.empty() ? cfg.rng_seed : rows.front().seed);
    os << "M,f_c_hz,nmse_db,trials,seed\n" << std::setprecision(10);
    for (const auto &r : rows)
        os << r.M << ',' << r.f_c_hz << ',' << r.stats.mean_db << ',' << r.stats.trials << ',' << r.seed << '\n';
}

inline void write_timing_csv(std::ostream &os, const ScenarioConfig &cfg, const std::vector<TimingRow> &rows)
{
    write_csv_header_comment(os, cfg, cfg.rng_seed);
    os << "M,strategy,mean_s,p50_s,p95_s\n" << std::setprecision(6);
    for (const auto &r : rows) os << r.M << ',' << r.strategy << ',' << r.mean_s << ',' << r.p50_s << ',' << r.p95_s << '\n';
}

inline void write_positions_csv(std::ostream &os, const ScenarioConfig &cfg, const std::vector<PlacementResult> &rs)
{
    write_csv_header_comment(os, cfg, cfg.rng_seed);
    os << "strategy,index,x_m,s_m,t_m\n" << std::setprecision(15);
    for (const auto &r : rs)
        for (std::size_t i = 0; i < r.x.size(); ++i)
            os << r.strategy << ',' << i + 1 << ',' << r.x[i] << ',' << r.s.s[i] << ',' << r.t.t[i] << '\n';
}

// Mean SE per (value, strategy) over successful rows, in first-seen order.
struct SweepSummary
{
    double value = 0.0;
    std::string strategy;
    double mean_se = 0.0;
    int ok = 0;
    int failed = 0;
};

inline std::vector<SweepSummary> summarize(const std::vector<SweepRow> &rows)
{
    std::vector<SweepSummary> out;
    for (const auto &r : rows)
    {
        auto it = std::find_if(out.begin(), out.end(),
                               [&](const SweepSummary &s) { return s.value == r.value && s.strategy == r.strategy; });
        if (it == out.end())
        {
            out.push_back({r.value, r.strategy, 0.0, 0, 0});
            it = out.end() - 1;
        }
        if (r.error.empty() && std::isfinite(r.se_bits))
        {
            it->mean_se += r.se_bits;
            ++it->ok;
        }
        else
        {
            ++it->failed;
        }
    }
    for (auto &s : out)
        if (s.ok) s.mean_se /= s.ok;
    return out;
}

} // namespace maplace
