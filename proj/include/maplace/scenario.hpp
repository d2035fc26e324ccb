// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numbers>
#include <sstream>
#include <string>

#include "maplace/error.hpp"

namespace maplace
{

inline constexpr double speed_of_light = 299792458.0;

// Full description of one link: carrier, BS array, UE array and its pose,
// SNR. Lengths given in wavelengths are converted on access.
struct ScenarioConfig
{
    double carrier_frequency_hz = 10e9;
    double unit_spacing_wl = 2.0;
    int num_bs = 16;
    int num_ue = 8;
    double ue_spacing_wl = 0.5;
    // default pose: r0 = 10 m at phi0 = pi/6
    double ue_x0 = -5.0;
    double ue_y0 = 8.660254037844386;
    double ue_azimuth = 0.0;
    double snr_db = 20.0;
    std::uint64_t rng_seed = 1;

    double wavelength() const { return speed_of_light / carrier_frequency_hz; }
    double wavenumber() const { return 2.0 * std::numbers::pi / wavelength(); }
    double unit_spacing() const { return unit_spacing_wl * wavelength(); }
    double ue_spacing() const { return ue_spacing_wl * wavelength(); }
    double aperture() const { return (num_bs - 1) * unit_spacing(); }
    double snr_linear() const { return std::pow(10.0, snr_db / 10.0); }

    double r0() const { return std::hypot(ue_x0, ue_y0); }
    // tan(phi0) = -x0 / y0
    double phi0() const { return std::atan2(-ue_x0, ue_y0); }

    // Places the UE centroid at distance r0 and angle phi0 from the BS centre.
    void set_pose(double r0, double phi0, double azimuth)
    {
        ue_x0 = -r0 * std::sin(phi0);
        ue_y0 = r0 * std::cos(phi0);
        ue_azimuth = azimuth;
    }

    void validate() const
    {
        if (!(carrier_frequency_hz > 0.0) || !std::isfinite(carrier_frequency_hz))
            throw Error(Errc::InvalidArgument, "carrier frequency must be positive");
        if (!(unit_spacing_wl > 0.0)) throw Error(Errc::InvalidArgument, "unit spacing must be positive");
        if (num_bs < 3) throw Error(Errc::InvalidArgument, "need at least 3 BS elements");
        if (num_ue < 1) throw Error(Errc::InvalidArgument, "need at least 1 UE element");
        if (!(ue_spacing_wl >= 0.0)) throw Error(Errc::InvalidArgument, "UE spacing must be non-negative");
        if (!(ue_y0 > 0.0)) throw Error(Errc::InvalidArgument, "UE centroid must satisfy y0 > 0");
        if (!std::isfinite(ue_x0) || !std::isfinite(ue_azimuth) || !std::isfinite(snr_db))
            throw Error(Errc::InvalidArgument, "non-finite scenario field");
    }
};

namespace detail
{

inline std::string trim(const std::string &s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_value(const std::string &key, const std::string &text, int line)
{
    std::istringstream in(text);
    T v{};
    in >> v;
    if (in.fail() || !(in >> std::ws).eof())
        throw Error(Errc::ConfigParse, "line " + std::to_string(line) + ": bad value '" + text + "' for key '" + key + "'");
    return v;
}

} // namespace detail

// Flat key=value format. '#' starts a comment; unknown keys are errors.
// Missing keys keep their defaults.
inline ScenarioConfig parse_config(std::istream &in)
{
    using detail::parse_value;
    ScenarioConfig cfg;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw))
    {
        ++line;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const std::string s = detail::trim(raw);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw Error(Errc::ConfigParse, "line " + std::to_string(line) + ": expected key=value, got '" + s + "'");
        const std::string key = detail::trim(s.substr(0, eq));
        const std::string val = detail::trim(s.substr(eq + 1));
        if (key == "carrier_frequency_hz") cfg.carrier_frequency_hz = parse_value<double>(key, val, line);
        else if (key == "unit_spacing_in_wavelengths") cfg.unit_spacing_wl = parse_value<double>(key, val, line);
        else if (key == "num_bs") cfg.num_bs = parse_value<int>(key, val, line);
        else if (key == "num_ue") cfg.num_ue = parse_value<int>(key, val, line);
        else if (key == "ue_spacing_in_wavelengths") cfg.ue_spacing_wl = parse_value<double>(key, val, line);
        else if (key == "ue_x0_m") cfg.ue_x0 = parse_value<double>(key, val, line);
        else if (key == "ue_y0_m") cfg.ue_y0 = parse_value<double>(key, val, line);
        else if (key == "ue_azimuth_rad") cfg.ue_azimuth = parse_value<double>(key, val, line);
        else if (key == "snr_db") cfg.snr_db = parse_value<double>(key, val, line);
        else if (key == "rng_seed") cfg.rng_seed = parse_value<std::uint64_t>(key, val, line);
        else throw Error(Errc::ConfigParse, "line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
    try
    {
        cfg.validate();
    }
    catch (const Error &e)
    {
        throw Error(Errc::ConfigParse, e.what());
    }
    return cfg;
}

inline ScenarioConfig load_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in) throw Error(Errc::ConfigParse, "cannot open config file '" + path + "'");
    return parse_config(in);
}

// Canonical text form; round-trips through parse_config.
inline std::string to_text(const ScenarioConfig &cfg)
{
    std::ostringstream os;
    os << std::setprecision(17);
    os << "carrier_frequency_hz=" << cfg.carrier_frequency_hz << '\n'
       << "unit_spacing_in_wavelengths=" << cfg.unit_spacing_wl << '\n'
       << "num_bs=" << cfg.num_bs << '\n'
       << "num_ue=" << cfg.num_ue << '\n'
       << "ue_spacing_in_wavelengths=" << cfg.ue_spacing_wl << '\n'
       << "ue_x0_m=" << cfg.ue_x0 << '\n'
       << "ue_y0_m=" << cfg.ue_y0 << '\n'
       << "ue_azimuth_rad=" << cfg.ue_azimuth << '\n'
       << "snr_db=" << cfg.snr_db << '\n'
       << "rng_seed=" << cfg.rng_seed << '\n';
    return os.str();
}

// FNV-1a over the canonical text.
inline std::uint64_t config_hash(const ScenarioConfig &cfg)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : to_text(cfg))
    {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace maplace
