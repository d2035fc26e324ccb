// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <tuple>
#include <utility>
#include <vector>

#include "maplace/error.hpp"
#include "maplace/scenario.hpp"

namespace maplace
{

// x coordinates of the BS elements in metres, strictly increasing.
using BsPositions = std::vector<double>;

struct UePositions
{
    std::vector<std::array<double, 2>> coords;
    std::vector<double> rel_offsets; // centred, sums to zero
};

struct AngularPositions
{
    std::vector<double> s;
    double s_min = 0.0;
    double s_max = 0.0;
};

enum class Chart
{
    Unit,      // (0, 1)
    Symmetric, // (-1, 1)
};

struct NormalizedPositions
{
    std::vector<double> t;
    Chart chart = Chart::Unit;
};

inline constexpr double angle_guard = 1e-9;

inline BsPositions ula_positions(int m, double d)
{
    if (m < 2) throw Error(Errc::InvalidArgument, "ULA needs at least 2 elements");
    if (!(d > 0.0)) throw Error(Errc::InvalidArgument, "ULA spacing must be positive");
    BsPositions x(static_cast<std::size_t>(m));
    const double half = 0.5 * (m - 1) * d;
    for (int i = 0; i < m; ++i) x[static_cast<std::size_t>(i)] = -half + i * d;
    x.back() = half;
    return x;
}

inline UePositions ue_element_coords(const ScenarioConfig &cfg)
{
    if (cfg.num_ue < 1) throw Error(Errc::InvalidArgument, "need at least 1 UE element");
    UePositions ue;
    const double c = std::cos(cfg.ue_azimuth), s = std::sin(cfg.ue_azimuth);
    const double mid = 0.5 * (cfg.num_ue - 1);
    for (int n = 0; n < cfg.num_ue; ++n)
    {
        const double dn = (n - mid) * cfg.ue_spacing();
        ue.rel_offsets.push_back(dn);
        ue.coords.push_back({cfg.ue_x0 + dn * c, cfg.ue_y0 + dn * s});
    }
    return ue;
}

// Angle of BS element x seen from the UE centroid; phi0 at x = 0.
inline double element_angle(double x, const ScenarioConfig &cfg)
{
    return std::atan((x - cfg.ue_x0) / cfg.ue_y0);
}

inline double element_distance(double x, const ScenarioConfig &cfg)
{
    return std::hypot(x - cfg.ue_x0, cfg.ue_y0);
}

inline double x_to_s(double x, const ScenarioConfig &cfg)
{
    const double u = element_angle(x, cfg) - cfg.ue_azimuth;
    if (!(std::abs(u) < 0.5 * std::numbers::pi - angle_guard))
        throw Error(Errc::AngleOutOfRange, "BS element outside the UE half-plane");
    return std::sin(u);
}

// Exact inverse of x_to_s.
inline double s_to_x(double s, const ScenarioConfig &cfg)
{
    if (!(std::abs(s) <= 1.0)) throw Error(Errc::AngleOutOfRange, "|s| must not exceed 1");
    const double u = std::asin(s) + cfg.ue_azimuth;
    if (!(std::abs(u) < 0.5 * std::numbers::pi - angle_guard))
        throw Error(Errc::AngleOutOfRange, "angle too close to the tangent singularity");
    return cfg.ue_x0 + cfg.ue_y0 * std::tan(u);
}

inline std::pair<double, double> s_bounds(const ScenarioConfig &cfg)
{
    const double half = 0.5 * cfg.aperture();
    return {x_to_s(-half, cfg), x_to_s(half, cfg)};
}

inline AngularPositions to_angular(const BsPositions &x, const ScenarioConfig &cfg)
{
    AngularPositions a;
    a.s.reserve(x.size());
    for (double xi : x) a.s.push_back(x_to_s(xi, cfg));
    std::tie(a.s_min, a.s_max) = s_bounds(cfg);
    return a;
}

// s -> x with the array endpoints assigned rather than computed.
inline BsPositions to_positions(const std::vector<double> &s, const ScenarioConfig &cfg)
{
    BsPositions x;
    x.reserve(s.size());
    for (double si : s) x.push_back(s_to_x(si, cfg));
    if (!x.empty())
    {
        x.front() = -0.5 * cfg.aperture();
        x.back() = 0.5 * cfg.aperture();
    }
    return x;
}

namespace detail
{
inline double checked_width(double s_min, double s_max)
{
    const double w = s_max - s_min;
    if (!(w >= 1e-14)) throw Error(Errc::DegenerateRange, "angular range is degenerate");
    return w;
}
} // namespace detail

inline NormalizedPositions normalize_unit(const std::vector<double> &s, double s_min, double s_max)
{
    const double w = detail::checked_width(s_min, s_max);
    NormalizedPositions n{{}, Chart::Unit};
    for (double si : s) n.t.push_back((si - s_min) / w);
    return n;
}

inline std::vector<double> denormalize_unit(const std::vector<double> &t, double s_min, double s_max)
{
    const double w = detail::checked_width(s_min, s_max);
    std::vector<double> s;
    for (double ti : t) s.push_back(s_min + ti * w);
    return s;
}

inline NormalizedPositions normalize_sym(const std::vector<double> &s, double s_min, double s_max)
{
    const double w = detail::checked_width(s_min, s_max);
    NormalizedPositions n{{}, Chart::Symmetric};
    for (double si : s) n.t.push_back((2.0 * si - (s_min + s_max)) / w);
    return n;
}

inline std::vector<double> denormalize_sym(const std::vector<double> &t, double s_min, double s_max)
{
    const double w = detail::checked_width(s_min, s_max);
    std::vector<double> s;
    for (double ti : t) s.push_back(0.5 * w * ti + 0.5 * (s_min + s_max));
    return s;
}

// True when every BS element sits inside the UE half-plane |phi_m - theta| < pi/2.
inline bool pose_admissible(const ScenarioConfig &cfg)
{
    const double half = 0.5 * cfg.aperture();
    for (double x : {-half, half})
    {
        if (!(std::abs(element_angle(x, cfg) - cfg.ue_azimuth) < 0.5 * std::numbers::pi - angle_guard)) return false;
    }
    return true;
}

} // namespace maplace
