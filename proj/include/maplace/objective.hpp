// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <tuple>
#include <vector>

#include "maplace/channel.hpp"
#include "maplace/error.hpp"
#include "maplace/geometry.hpp"
#include "maplace/scenario.hpp"

namespace maplace
{

// log2 det(I + (rho/M) H H^H) from the eigenvalues of the N x N Gram matrix.
inline double spectral_efficiency(const ComplexMatrix &h, double rho, int m)
{
    if (!(rho > 0.0)) throw Error(Errc::InvalidArgument, "SNR must be positive");
    if (h.size() == 0) return 0.0;
    const Eigen::MatrixXcd gram = h * h.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
    double se = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        se += std::log2(1.0 + rho / m * std::max(0.0, es.eigenvalues()(i)));
    return se;
}

// log2 det(rho H H^H)
inline double high_snr_se(const ComplexMatrix &h, double rho)
{
    const Eigen::MatrixXcd gram = h * h.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
    if (!(es.eigenvalues().minCoeff() >= 1e-300)) throw Error(Errc::SingularGram, "Gram matrix is singular");
    double se = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) se += std::log2(rho * es.eigenvalues()(i));
    return se;
}

// SE of a placement on the exact channel. H is scaled by r0 so the centroid
// free-space gain is normalised away and rho is the per-link SNR.
inline double placement_se(const BsPositions &x, const ScenarioConfig &cfg)
{
    const ComplexMatrix h = exact_channel(x, cfg) * cfg.r0();
    return spectral_efficiency(h, cfg.snr_linear(), static_cast<int>(x.size()));
}

inline double weighting(double s, double theta)
{
    const double c = std::cos(std::asin(s) + theta);
    return c * c;
}

namespace detail
{
// Throws unless s is non-decreasing; returns false on a repeated value.
inline bool check_order(const std::vector<double> &s)
{
    if (s.size() < 2) throw Error(Errc::InvalidArgument, "need at least two positions");
    bool distinct = true;
    for (std::size_t i = 1; i < s.size(); ++i)
    {
        if (s[i] < s[i - 1]) throw Error(Errc::InvalidArgument, "angular positions must be sorted ascending");
        if (s[i] == s[i - 1]) distinct = false;
    }
    return distinct;
}
} // namespace detail

// J(s) = 2 sum_{i<j} log2(s_j - s_i) + sum_m log2 w(s_m). Coincident points
// give -inf so line searches can back off; a vanishing weight throws.
inline double fekete_objective(const std::vector<double> &s, double theta)
{
    if (!detail::check_order(s)) return -std::numeric_limits<double>::infinity();
    double j = 0.0;
    for (std::size_t a = 0; a < s.size(); ++a)
    {
        for (std::size_t b = a + 1; b < s.size(); ++b) j += 2.0 * std::log2(s[b] - s[a]);
        const double w = weighting(s[a], theta);
        if (!(w > 0.0)) throw Error(Errc::ZeroWeight, "weight vanishes at an antenna position");
        j += std::log2(w);
    }
    return j;
}

// J(s_new) - J(s) without forming either value. Each term is a log1p of a
// relative change, so increments far below the rounding level of J itself
// stay resolvable; line searches near the optimum depend on that.
inline double fekete_objective_delta(const std::vector<double> &s, const std::vector<double> &s_new, double theta)
{
    if (s.size() != s_new.size()) throw Error(Errc::InvalidArgument, "position vectors differ in length");
    if (!detail::check_order(s_new)) return -std::numeric_limits<double>::infinity();
    const std::size_t m = s.size();
    double acc = 0.0;
    for (std::size_t a = 0; a < m; ++a)
    {
        const double da = s_new[a] - s[a];
        for (std::size_t b = a + 1; b < m; ++b) acc += 2.0 * std::log1p((s_new[b] - s[b] - da) / (s[b] - s[a]));
        if (da == 0.0) continue;
        // dphi = asin(s') - asin(s) via sin(dphi) = s' c - s c', rewritten
        // so the subtraction never cancels
        const double c = std::sqrt(1.0 - s[a] * s[a]), cn = std::sqrt(1.0 - s_new[a] * s_new[a]);
        const double sin_d = da * (c + s[a] * (s_new[a] + s[a]) / (c + cn));
        const double dphi = std::atan2(sin_d, c * cn + s[a] * s_new[a]);
        const double phi = std::asin(s[a]) + theta;
        const double half = std::sin(0.5 * dphi);
        // cos(phi + dphi) / cos(phi) - 1
        const double rel = -2.0 * half * half - std::tan(phi) * std::sin(dphi);
        if (!(rel > -1.0)) throw Error(Errc::ZeroWeight, "weight vanishes at an antenna position");
        acc += 2.0 * std::log1p(rel);
    }
    return acc / std::numbers::ln2;
}

// dJ/ds_m over the interior indices 1..M-2.
inline std::vector<double> fekete_gradient(const std::vector<double> &s, double theta)
{
    if (!detail::check_order(s)) throw Error(Errc::CoincidentPoints, "coincident angular positions");
    const std::size_t m = s.size();
    std::vector<double> g;
    g.reserve(m - 2);
    for (std::size_t k = 1; k + 1 < m; ++k)
    {
        double acc = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            if (i != k) acc += 2.0 / (s[k] - s[i]);
        const double phi = std::asin(s[k]) + theta;
        acc -= 2.0 * std::tan(phi) / std::sqrt(1.0 - s[k] * s[k]);
        g.push_back(acc / std::numbers::ln2);
    }
    return g;
}

// Interior Hessian of J, (M-2) x (M-2).
inline Eigen::MatrixXd fekete_hessian(const std::vector<double> &s, double theta)
{
    if (!detail::check_order(s)) throw Error(Errc::CoincidentPoints, "coincident angular positions");
    const std::size_t m = s.size();
    const auto k = static_cast<Eigen::Index>(m - 2);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(k, k);
    for (std::size_t a = 1; a + 1 < m; ++a)
    {
        double diag = 0.0;
        for (std::size_t i = 0; i < m; ++i)
        {
            if (i == a) continue;
            const double inv2 = 1.0 / ((s[a] - s[i]) * (s[a] - s[i]));
            diag -= 2.0 * inv2;
            if (i >= 1 && i + 1 < m)
                h(static_cast<Eigen::Index>(a - 1), static_cast<Eigen::Index>(i - 1)) = 2.0 * inv2;
        }
        const double phi = std::asin(s[a]) + theta;
        const double c = std::cos(phi);
        diag -= (2.0 + std::sin(2.0 * phi) * std::tan(phi - theta)) / ((1.0 - s[a] * s[a]) * c * c);
        h(static_cast<Eigen::Index>(a - 1), static_cast<Eigen::Index>(a - 1)) = diag;
    }
    return h / std::numbers::ln2;
}

inline double fekete_hessian_qform(const std::vector<double> &s, const std::vector<double> &v, double theta)
{
    if (v.size() + 2 != s.size()) throw Error(Errc::InvalidArgument, "direction must cover the interior indices");
    const Eigen::Map<const Eigen::VectorXd> vv(v.data(), static_cast<Eigen::Index>(v.size()));
    return vv.dot(fekete_hessian(s, theta) * vv);
}

struct ObjectiveReport
{
    double J = 0.0;
    std::vector<double> gradient;
    double hessian_quadratic_min = 0.0; // largest Hessian eigenvalue, negative when concave
};

inline ObjectiveReport objective_report(const std::vector<double> &s, double theta)
{
    ObjectiveReport r;
    r.J = fekete_objective(s, theta);
    r.gradient = fekete_gradient(s, theta);
    if (s.size() > 2)
    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fekete_hessian(s, theta), Eigen::EigenvaluesOnly);
        r.hessian_quadratic_min = es.eigenvalues().maxCoeff();
    }
    return r;
}

struct FeketeCoefficients
{
    double s0 = 0.0;
    double a = 0.0;
    double b = 0.0;
    double b_hat = 0.0;
    double b_tilde = 0.0;
    double s_min = 0.0;
    double s_max = 0.0;
};

// First-order expansion of the weight about s0: w(s) ~ -b (s - b_hat), so the
// external charge sits at b_hat (b_tilde in the unit chart).
inline FeketeCoefficients taylor_coefficients(const ScenarioConfig &cfg)
{
    FeketeCoefficients c;
    const double phi0 = cfg.phi0();
    const double theta = cfg.ue_azimuth;
    c.s0 = std::sin(phi0 - theta);
    c.a = std::cos(phi0) * std::cos(phi0);
    c.b = std::sin(2.0 * phi0) / std::cos(phi0 - theta);
    std::tie(c.s_min, c.s_max) = s_bounds(cfg);
    if (!(std::abs(c.b) >= 1e-12))
        throw Error(Errc::DegenerateExternalCharge, "external charge at infinity (phi0 at 0 or +-pi/2)");
    c.b_hat = c.s0 + c.a / c.b;
    c.b_tilde = (c.b_hat - c.s_min) / (c.s_max - c.s_min);
    return c;
}

// Gradient of J with the weight replaced by its expansion; zero at the
// solver's roots.
inline std::vector<double> taylor_gradient(const std::vector<double> &s, const FeketeCoefficients &c)
{
    if (!detail::check_order(s)) throw Error(Errc::CoincidentPoints, "coincident angular positions");
    std::vector<double> g;
    for (std::size_t k = 1; k + 1 < s.size(); ++k)
    {
        double acc = 1.0 / (s[k] - c.b_hat);
        for (std::size_t i = 0; i < s.size(); ++i)
            if (i != k) acc += 2.0 / (s[k] - s[i]);
        g.push_back(acc / std::numbers::ln2);
    }
    return g;
}

} // namespace maplace
