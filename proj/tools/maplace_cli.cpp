// SPDX-License-Identifier: Apache-2.0
// Experiment driver: one-shot placement plus the sweep/robustness/NMSE/timing
// studies, all written as CSV.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "maplace/maplace.hpp"

namespace
{

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_solver = 3;

struct Globals
{
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_path;
    std::string strategies;
    int trials = 200;
};

maplace::ScenarioConfig load_base(const Globals &g)
{
    maplace::ScenarioConfig cfg = g.config_path.empty() ? maplace::ScenarioConfig{} : maplace::load_config(g.config_path);
    if (g.seed) cfg.rng_seed = *g.seed;
    cfg.validate();
    return cfg;
}

// stdout unless --out was given
class Output
{
public:
    explicit Output(const std::string &path)
    {
        if (path.empty()) return;
        file_ = std::make_unique<std::ofstream>(path);
        if (!*file_) throw maplace::Error(maplace::Errc::InvalidArgument, "cannot open output file '" + path + "'");
    }
    std::ostream &stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::vector<std::string> strategies_or(const Globals &g, const std::string &fallback)
{
    return maplace::parse_strategies(g.strategies.empty() ? fallback : g.strategies);
}

void print_summary(const std::vector<maplace::SweepRow> &rows)
{
    std::cerr << std::fixed << std::setprecision(4);
    for (const auto &s : maplace::summarize(rows))
    {
        std::cerr << "  value=" << s.value << "  " << std::setw(12) << std::left << s.strategy << std::right
                  << " mean_se=" << s.mean_se << " bits/s/Hz";
        if (s.failed) std::cerr << "  (" << s.failed << " failed)";
        std::cerr << '\n';
    }
}

int cmd_solve(const Globals &g, const std::string &strategy)
{
    const auto cfg = load_base(g);
    const auto r = maplace::evaluate_strategy(strategy, cfg);
    std::cout << "strategy " << r.strategy << "  M=" << cfg.num_bs << "  N=" << cfg.num_ue << "  r0=" << cfg.r0()
              << " m  phi0=" << cfg.phi0() << " rad  theta=" << cfg.ue_azimuth << " rad\n";
    std::cout << std::setw(6) << "index" << std::setw(16) << "x_m" << std::setw(16) << "s_m" << std::setw(16) << "t_m"
              << '\n';
    std::cout << std::setprecision(9);
    for (std::size_t i = 0; i < r.x.size(); ++i)
        std::cout << std::setw(6) << i + 1 << std::setw(16) << r.x[i] << std::setw(16) << r.s.s[i] << std::setw(16)
                  << r.t.t[i] << '\n';
    std::cout << "J = " << r.J << " bits\n"
              << "SE = " << r.se_bits << " bits/s/Hz\n"
              << "equilibrium residual (scaled) = " << r.equilibrium_residual << '\n'
              << "elapsed = " << r.elapsed_s << " s\n";
    if (!r.note.empty()) std::cout << "note: " << r.note << '\n';
    if (!g.out_path.empty())
    {
        Output out(g.out_path);
        maplace::write_positions_csv(out.stream(), cfg, {r});
    }
    return exit_ok;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Movable-antenna placement solver and experiment driver"};
    app.require_subcommand(1);
    // global flags may also follow the subcommand
    app.fallthrough();
    Globals g;
    app.add_option("--config", g.config_path, "Scenario file (key=value lines)");
    app.add_option("--seed", g.seed, "RNG seed; overrides rng_seed from the config");
    app.add_option("--out", g.out_path, "CSV output path (default stdout)");
    app.add_option("--strategies", g.strategies, "Comma-separated: random,greedy,gd,ula,heun,asymptotic");
    app.add_option("--trials", g.trials, "Monte-Carlo trials per point")->check(CLI::PositiveNumber);

    std::string solve_strategy = "heun";
    auto *solve = app.add_subcommand("solve", "Place the antennas for the configured scenario");
    solve->add_option("--strategy", solve_strategy, "Strategy to run");

    std::vector<double> dist_values{5, 7.5, 10, 12.5, 15, 17.5, 20};
    auto *sd = app.add_subcommand("sweep-distance", "SE versus centroid distance r0");
    sd->add_option("--values", dist_values, "r0 grid in metres")->delimiter(',');

    std::vector<double> ant_values{4, 8, 16, 32, 64};
    double ant_r0 = 10.0;
    auto *sa = app.add_subcommand("sweep-antennas", "SE versus number of BS antennas");
    sa->add_option("--values", ant_values, "M grid")->delimiter(',');
    sa->add_option("--r0", ant_r0, "Centroid distance in metres");

    std::string rob_kind = "angle";
    std::vector<double> rob_values;
    double rob_r0 = 10.0;
    auto *rb = app.add_subcommand("robustness", "SE under pose mismatch");
    rb->add_option("--kind", rob_kind, "angle or distance")->check(CLI::IsMember({"angle", "distance"}));
    rb->add_option("--values", rob_values, "Error grid (degrees or metres)")->delimiter(',');
    rb->add_option("--r0", rob_r0, "Centroid distance of the design pose");

    std::vector<int> nmse_m{4, 8, 16, 32, 64};
    std::vector<double> nmse_fc{5e9, 10e9, 20e9, 30e9};
    auto *nm = app.add_subcommand("nmse", "Truncation NMSE over an (M, f_c) grid");
    nm->add_option("--M", nmse_m, "Array sizes")->delimiter(',');
    nm->add_option("--fc", nmse_fc, "Carrier frequencies in Hz")->delimiter(',');

    std::vector<int> timing_m{16, 32, 64};
    int repeats = 1000;
    auto *tm = app.add_subcommand("timing", "Execution time per strategy");
    tm->add_option("--M", timing_m, "Array sizes")->delimiter(',');
    tm->add_option("--repeats", repeats, "Runs per (M, strategy)")->check(CLI::PositiveNumber);

    auto *ps = app.add_subcommand("positions", "Dump positions of every strategy");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    try
    {
        if (*solve) return cmd_solve(g, solve_strategy);

        const auto base = load_base(g);
        const std::uint64_t seed = base.rng_seed;
        Output out(g.out_path);
        if (*sd || *sa)
        {
            const auto strategies = strategies_or(g, "heun,asymptotic,gd,greedy,ula,random");
            const auto rows = *sd ? maplace::run_sweep(base, "r0", dist_values, strategies, g.trials, seed)
                                  : maplace::run_sweep(base, "M", ant_values, strategies, g.trials, seed, ant_r0);
            maplace::write_sweep_csv(out.stream(), base, rows);
            print_summary(rows);
        }
        else if (*rb)
        {
            if (rob_values.empty())
            {
                if (rob_kind == "angle") rob_values = {-10, -7.5, -5, -2.5, 0, 2.5, 5, 7.5, 10};
                else rob_values = {0, 1, 2, 3, 4, 5};
            }
            const auto strategies = strategies_or(g, "heun,asymptotic,greedy,ula,random");
            const auto rows = maplace::run_robustness(
                base, rob_kind == "angle" ? "angle_error_deg" : "distance_error_m", rob_values, strategies, g.trials,
                seed, rob_r0);
            maplace::write_sweep_csv(out.stream(), base, rows);
            print_summary(rows);
        }
        else if (*nm)
        {
            const auto rows = maplace::run_nmse(base, nmse_m, nmse_fc, g.trials, seed);
            maplace::write_nmse_csv(out.stream(), base, rows);
            for (const auto &r : rows)
                std::cerr << "  M=" << r.M << " f_c=" << r.f_c_hz << " mean=" << r.stats.mean_db
                          << " dB  median=" << r.stats.median_db << " dB  mean_of_dB=" << r.stats.mean_of_db << '\n';
        }
        else if (*tm)
        {
            const auto strategies = strategies_or(g, "heun,asymptotic,gd,greedy");
            maplace::write_timing_csv(out.stream(), base, maplace::run_timing(base, timing_m, strategies, repeats));
        }
        else if (*ps)
        {
            std::vector<maplace::PlacementResult> rs;
            for (const auto &name : strategies_or(g, "heun,asymptotic,gd,greedy,ula,random"))
                rs.push_back(maplace::evaluate_strategy(name, base));
            maplace::write_positions_csv(out.stream(), base, rs);
        }
        return exit_ok;
    }
    catch (const maplace::Error &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        switch (e.code())
        {
        case maplace::Errc::ConfigParse:
        case maplace::Errc::InvalidArgument:
        case maplace::Errc::UnknownStrategy: return exit_config;
        default: return exit_solver;
        }
    }
}
