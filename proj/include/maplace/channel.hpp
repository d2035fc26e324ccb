// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "maplace/error.hpp"
#include "maplace/geometry.hpp"
#include "maplace/rng.hpp"
#include "maplace/scenario.hpp"

namespace maplace
{

// Channel gains carry units of 1/m (free-space amplitude 1/r).
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double nmse_floor_db = -300.0;

// H[n, m] = exp(j kappa r) / r over all BS/UE element pairs.
inline ComplexMatrix exact_channel(const BsPositions &x, const UePositions &ue, double wavelength)
{
    const double kappa = 2.0 * std::numbers::pi / wavelength;
    ComplexMatrix h(static_cast<Eigen::Index>(ue.coords.size()), static_cast<Eigen::Index>(x.size()));
    for (std::size_t n = 0; n < ue.coords.size(); ++n)
        for (std::size_t m = 0; m < x.size(); ++m)
        {
            const double r = std::hypot(x[m] - ue.coords[n][0], ue.coords[n][1]);
            h(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) = std::polar(1.0 / r, kappa * r);
        }
    return h;
}

inline ComplexMatrix exact_channel(const BsPositions &x, const ScenarioConfig &cfg)
{
    return exact_channel(x, ue_element_coords(cfg), cfg.wavelength());
}

// Far-field-in-the-UE-aperture form: distances and angles from the centroid,
// first-order phase correction d_n sin(theta - phi_m).
inline ComplexMatrix approx_channel(const BsPositions &x, const ScenarioConfig &cfg)
{
    const auto ue = ue_element_coords(cfg);
    const double kappa = cfg.wavenumber();
    ComplexMatrix h(static_cast<Eigen::Index>(ue.rel_offsets.size()), static_cast<Eigen::Index>(x.size()));
    for (std::size_t m = 0; m < x.size(); ++m)
    {
        const double rm = element_distance(x[m], cfg);
        const double phim = element_angle(x[m], cfg);
        for (std::size_t n = 0; n < ue.rel_offsets.size(); ++n)
        {
            const double phase = kappa * (rm + ue.rel_offsets[n] * std::sin(cfg.ue_azimuth - phim));
            h(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) = std::polar(1.0 / rm, phase);
        }
    }
    return h;
}

// P ~= V_R diag(Sigma) V_T^T with K Taylor columns, and D_T the per-element
// centroid gain. The approximated channel is P diag(D_T).
struct ChannelDecomposition
{
    ComplexMatrix P;
    Eigen::VectorXcd D_T;
    Eigen::MatrixXd V_R;
    Eigen::VectorXcd Sigma;
    Eigen::MatrixXd V_T;

    ComplexMatrix reconstruct_phase() const
    {
        return V_R.cast<std::complex<double>>() * Sigma.asDiagonal() * V_T.cast<std::complex<double>>().transpose();
    }
    ComplexMatrix reconstruct() const { return reconstruct_phase() * D_T.asDiagonal(); }
};

// Phase matrix exp(-j kappa d_n s_m) that the Taylor factorisation expands.
inline ComplexMatrix phase_matrix(const BsPositions &x, const ScenarioConfig &cfg)
{
    const auto ue = ue_element_coords(cfg);
    const double kappa = cfg.wavenumber();
    ComplexMatrix p(static_cast<Eigen::Index>(ue.rel_offsets.size()), static_cast<Eigen::Index>(x.size()));
    for (std::size_t m = 0; m < x.size(); ++m)
    {
        const double sm = x_to_s(x[m], cfg);
        for (std::size_t n = 0; n < ue.rel_offsets.size(); ++n)
            p(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) =
                std::polar(1.0, -kappa * ue.rel_offsets[n] * sm);
    }
    return p;
}

inline ChannelDecomposition truncated_decomposition(const BsPositions &x, const ScenarioConfig &cfg, int k)
{
    if (k < 1) throw Error(Errc::InvalidArgument, "need at least one Taylor column");
    // beyond ~170 columns k! leaves the double range even in log space
    if (k > 170) throw Error(Errc::InvalidArgument, "Taylor column count above 170 overflows");
    const auto ue = ue_element_coords(cfg);
    const double kappa = cfg.wavenumber();
    const auto nn = static_cast<Eigen::Index>(ue.rel_offsets.size());
    const auto mm = static_cast<Eigen::Index>(x.size());
    ChannelDecomposition dec;
    dec.P = phase_matrix(x, cfg);
    dec.D_T.resize(mm);
    dec.V_T.resize(mm, k);
    dec.V_R.resize(nn, k);
    dec.Sigma.resize(k);
    for (Eigen::Index m = 0; m < mm; ++m)
    {
        const double xm = x[static_cast<std::size_t>(m)];
        const double rm = element_distance(xm, cfg);
        dec.D_T(m) = std::polar(1.0 / rm, kappa * rm);
        const double sm = x_to_s(xm, cfg);
        double pw = 1.0;
        for (int c = 0; c < k; ++c, pw *= sm) dec.V_T(m, c) = pw;
    }
    for (Eigen::Index n = 0; n < nn; ++n)
    {
        const double u = kappa * ue.rel_offsets[static_cast<std::size_t>(n)];
        double pw = 1.0;
        for (int c = 0; c < k; ++c, pw *= u) dec.V_R(n, c) = pw;
    }
    // (-j)^k / k!, factorial through lgamma
    static const std::complex<double> cycle[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
    for (int c = 0; c < k; ++c) dec.Sigma(c) = cycle[c % 4] * std::exp(-std::lgamma(c + 1.0));
    return dec;
}

// ||A - B||_F^2 / ||A||_F^2 in dB with a floor for identical inputs.
inline double nmse_db(const ComplexMatrix &ref, const ComplexMatrix &approx)
{
    const double num = (ref - approx).squaredNorm();
    const double den = ref.squaredNorm();
    if (!(den > 0.0)) throw Error(Errc::InvalidArgument, "reference matrix is zero");
    if (num <= 0.0) return nmse_floor_db;
    return std::max(nmse_floor_db, 10.0 * std::log10(num / den));
}

inline double nmse_linear(const ComplexMatrix &ref, const ComplexMatrix &approx)
{
    return (ref - approx).squaredNorm() / ref.squaredNorm();
}

inline double fresnel_distance(const ScenarioConfig &cfg)
{
    const double a = cfg.aperture();
    return 0.5 * std::sqrt(a * a * a / cfg.wavelength());
}

inline double rayleigh_distance(const ScenarioConfig &cfg)
{
    const double a = cfg.aperture();
    return 2.0 * a * a / cfg.wavelength();
}

// Rejection-samples an admissible pose: r0 in [r_lo, r_hi], phi0 and theta
// uniform on [-pi/3, pi/3].
inline ScenarioConfig sample_pose(const ScenarioConfig &base, double r_lo, double r_hi, std::mt19937_64 &g)
{
    constexpr double lim = std::numbers::pi / 3.0;
    ScenarioConfig cfg = base;
    for (int attempt = 0; attempt < 10000; ++attempt)
    {
        const double r0 = uniform(g, r_lo, r_hi);
        const double phi0 = uniform(g, -lim, lim);
        const double theta = uniform(g, -lim, lim);
        cfg.set_pose(r0, phi0, theta);
        if (pose_admissible(cfg)) return cfg;
    }
    throw Error(Errc::InvalidArgument, "no admissible pose found after 10000 draws");
}

inline ScenarioConfig sample_near_field_pose(const ScenarioConfig &base, std::mt19937_64 &g)
{
    return sample_pose(base, fresnel_distance(base), rayleigh_distance(base), g);
}

struct NmseStats
{
    double mean_db = 0.0;    // 10 log10 of the mean linear NMSE
    double median_db = 0.0;
    double mean_of_db = 0.0; // arithmetic mean of per-pose dB values
    int trials = 0;
};

// NMSE of the K-column factorisation against the exact channel on the ULA,
// averaged over near-field poses. The headline figure is the mean of the
// linear ratios; the median and dB-mean are diagnostics.
inline NmseStats truncation_nmse(const ScenarioConfig &base, int k, int trials, std::uint64_t seed)
{
    if (trials < 1) throw Error(Errc::InvalidArgument, "trials must be positive");
    std::vector<double> lin, db;
    const auto x = ula_positions(base.num_bs, base.unit_spacing());
    for (int t = 0; t < trials; ++t)
    {
        auto g = trial_rng(seed, static_cast<std::uint64_t>(t));
        const auto cfg = sample_near_field_pose(base, g);
        const auto h = exact_channel(x, cfg);
        const auto hb = truncated_decomposition(x, cfg, k).reconstruct();
        const double v = nmse_linear(h, hb);
        lin.push_back(v);
        db.push_back(nmse_db(h, hb));
    }
    NmseStats st;
    st.trials = trials;
    double sum = 0.0, sum_db = 0.0;
    for (std::size_t i = 0; i < lin.size(); ++i)
    {
        sum += lin[i];
        sum_db += db[i];
    }
    st.mean_db = sum > 0.0 ? std::max(nmse_floor_db, 10.0 * std::log10(sum / trials)) : nmse_floor_db;
    st.mean_of_db = sum_db / trials;
    std::sort(db.begin(), db.end());
    const std::size_t h = db.size() / 2;
    st.median_db = db.size() % 2 ? db[h] : 0.5 * (db[h - 1] + db[h]);
    return st;
}

} // namespace maplace
