// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "maplace/asymptotic.hpp"
#include "maplace/error.hpp"
#include "maplace/geometry.hpp"
#include "maplace/linalg/companion.hpp"
#include "maplace/linalg/tridiagonal.hpp"
#include "maplace/objective.hpp"
#include "maplace/placement.hpp"
#include "maplace/precision.hpp"
#include "maplace/scenario.hpp"

namespace maplace
{

// Heun parameters for the equilibrium problem with M charges, and the
// (M-1) x (M-1) recursion matrix whose eigenvectors hold the coefficients of
// the degree M-2 polynomial solutions.
struct HeunSystem
{
    double gamma = 2.0;
    double delta = 2.0;
    double epsilon = 1.0;
    double a_h = 0.0;
    int alpha = 0;
    int beta = 0;
    long v1 = 0;
    linalg::Tridiagonal<double> R;
};

// Row n = 0..M-2: A_n on the subdiagonal, B_n on the diagonal, C_n on the
// superdiagonal, with R c = q c.
template <typename Real>
linalg::Tridiagonal<Real> heun_matrix(int m, const Real &a)
{
    if (m < 3) throw Error(Errc::InvalidArgument, "need M >= 3");
    const int n_max = m - 2;
    const Real gamma(2), delta(2), eps(1);
    const Real alpha(-(m - 2)), beta(m + 2);
    linalg::Tridiagonal<Real> r;
    r.diag.resize(static_cast<std::size_t>(n_max + 1));
    r.sub.resize(static_cast<std::size_t>(n_max));
    r.sup.resize(static_cast<std::size_t>(n_max));
    for (int n = 0; n <= n_max; ++n)
    {
        const Real rn(n);
        r.diag[static_cast<std::size_t>(n)] = -rn * ((rn - 1 + gamma) * (1 + a) + a * delta + eps);
        if (n >= 1) r.sub[static_cast<std::size_t>(n - 1)] = (rn - 1 + alpha) * (rn - 1 + beta);
        if (n < n_max) r.sup[static_cast<std::size_t>(n)] = (rn + 1) * (rn + gamma) * a;
    }
    return r;
}

inline HeunSystem build_heun_system(int m, double b_tilde)
{
    HeunSystem h;
    h.a_h = b_tilde;
    h.alpha = -(m - 2);
    h.beta = m + 2;
    h.v1 = static_cast<long>(h.alpha) * h.beta;
    h.R = heun_matrix<double>(m, b_tilde);
    return h;
}

inline HeunSystem build_heun_system(const ScenarioConfig &cfg)
{
    return build_heun_system(cfg.num_bs, taylor_coefficients(cfg).b_tilde);
}

// Working precision for the eigenvector -> coefficients -> roots pipeline.
// The monomial coefficients lose roughly 2.3 bits per degree, so the
// mantissa has to grow with M to keep roots accurate to ~1e-12.
inline PrecisionTier precision_tier_for(int m)
{
    if (m <= 18) return PrecisionTier::LongDouble;
    if (m <= 48) return PrecisionTier::Mp50;
    if (m <= 110) return PrecisionTier::Mp100;
    if (m <= 256) return PrecisionTier::Mp200;
    throw Error(Errc::InvalidArgument, "M = " + std::to_string(m) + " exceeds the exact solver's range; use the asymptotic strategy");
}

inline constexpr double root_imag_tol = 1e-8;

struct HeunCandidate
{
    std::size_t index = 0;      // position in the ascending spectrum
    double q = 0.0;
    std::vector<double> coeffs; // c_0..c_{M-2}, monic
    std::vector<double> roots_t; // real parts, ascending
    double max_imag = 0.0;
    bool failed = false;        // root extraction threw

    bool all_real() const { return !failed && max_imag <= root_imag_tol; }
    bool in_unit_interval() const
    {
        if (!all_real()) return false;
        for (std::size_t i = 0; i < roots_t.size(); ++i)
        {
            if (!(roots_t[i] > 0.0 && roots_t[i] < 1.0)) return false;
            if (i > 0 && !(roots_t[i] > roots_t[i - 1])) return false;
        }
        return true;
    }
};

enum class CandidateSet
{
    Smallest,
    Largest,
    All,
};

namespace detail
{

template <typename Real>
void fill_roots(HeunCandidate &c, const std::vector<Real> &coeffs)
{
    using std::abs;
    const auto roots = linalg::companion_roots(coeffs);
    Real imag(0);
    for (const auto &z : roots)
    {
        imag = std::max<Real>(imag, abs(z.im));
        c.roots_t.push_back(static_cast<double>(z.re));
    }
    c.max_imag = static_cast<double>(imag);
    std::sort(c.roots_t.begin(), c.roots_t.end());
}

template <typename Real>
std::vector<HeunCandidate> heun_candidates_in(int m, double b_tilde, CandidateSet which)
{
    using std::abs;
    const auto r = heun_matrix<Real>(m, Real(b_tilde));
    const auto pairs = linalg::tridiag_eigen(r);
    const Real scale = std::max<Real>(r.norm_inf(), Real(1));
    for (std::size_t i = 1; i < pairs.size(); ++i)
        if (!(pairs[i].value - pairs[i - 1].value > Real(1e-12) * scale))
            throw Error(Errc::ConvergenceFailure, "recursion matrix has a repeated eigenvalue");

    std::vector<std::size_t> idx;
    if (which == CandidateSet::Smallest) idx.push_back(0);
    else if (which == CandidateSet::Largest) idx.push_back(pairs.size() - 1);
    else
        for (std::size_t i = 0; i < pairs.size(); ++i) idx.push_back(i);

    std::vector<HeunCandidate> out;
    for (std::size_t i : idx)
    {
        HeunCandidate c;
        c.index = i;
        c.q = static_cast<double>(pairs[i].value);
        std::vector<Real> coeffs = pairs[i].vector;
        const Real lead = coeffs.back();
        if (!(abs(lead) > Real(1e-300)))
        {
            c.failed = true;
            out.push_back(std::move(c));
            continue;
        }
        for (auto &v : coeffs) v /= lead;
        coeffs.back() = Real(1);
        for (const auto &v : coeffs) c.coeffs.push_back(static_cast<double>(v));
        if (which == CandidateSet::All)
        {
            try
            {
                fill_roots(c, coeffs);
            }
            catch (const Error &)
            {
                c.failed = true;
                c.roots_t.clear();
            }
        }
        else
        {
            fill_roots(c, coeffs);
        }
        out.push_back(std::move(c));
    }
    return out;
}

} // namespace detail

inline std::vector<HeunCandidate> heun_candidates(int m, double b_tilde, CandidateSet which, PrecisionTier tier)
{
    switch (tier)
    {
    case PrecisionTier::LongDouble: return detail::heun_candidates_in<long double>(m, b_tilde, which);
    case PrecisionTier::Mp50: return detail::heun_candidates_in<mp50>(m, b_tilde, which);
    case PrecisionTier::Mp100: return detail::heun_candidates_in<mp100>(m, b_tilde, which);
    case PrecisionTier::Mp200: return detail::heun_candidates_in<mp200>(m, b_tilde, which);
    }
    throw Error(Errc::InvalidArgument, "unknown precision tier");
}

// Expanding every eigenpair includes the extreme ones, whose roots bunch up
// at the charge and need one extra precision step.
inline std::vector<HeunCandidate> heun_candidates(int m, double b_tilde, CandidateSet which)
{
    auto tier = precision_tier_for(m);
    if (which == CandidateSet::All && tier != PrecisionTier::Mp200)
        tier = static_cast<PrecisionTier>(static_cast<int>(tier) + 1);
    return heun_candidates(m, b_tilde, which, tier);
}

// Sorted real roots of sum_i coeffs[i] t^i. Throws ComplexRoots when an
// imaginary part exceeds 1e-8.
inline std::vector<double> roots_from_coeffs(const std::vector<double> &coeffs)
{
    HeunCandidate c;
    detail::fill_roots(c, coeffs);
    if (c.max_imag > root_imag_tol) throw Error(Errc::ComplexRoots, "polynomial has non-real roots");
    return c.roots_t;
}

// l-infinity over interior t_m of
// |sum_{i != m} 2/(t_m - t_i) + 2/t_m + 2/(t_m - 1) + 1/(t_m - b_tilde)|.
inline double equilibrium_residual(const std::vector<double> &t, double b_tilde)
{
    double worst = 0.0;
    for (std::size_t m = 0; m < t.size(); ++m)
    {
        const long double tm = t[m];
        long double acc = 2.0L / tm + 2.0L / (tm - 1.0L) + 1.0L / (tm - b_tilde);
        for (std::size_t i = 0; i < t.size(); ++i)
            if (i != m) acc += 2.0L / (tm - t[i]);
        worst = std::max(worst, static_cast<double>(std::abs(acc)));
    }
    return worst;
}

inline constexpr double equilibrium_tol = 1e-7;

struct HeunSelection
{
    HeunCandidate chosen;
    double b_tilde = 0.0; // after any endpoint perturbation
    PrecisionTier tier = PrecisionTier::LongDouble;
    std::string note;
};

// Picks the eigenpair whose polynomial roots are the equilibrium: largest q
// when the external charge is left of the interval, smallest when right of
// it, and the best feasible J when it sits inside.
inline HeunSelection select_eigenpair(const ScenarioConfig &cfg, const FeketeCoefficients &coef,
                                      std::optional<PrecisionTier> tier = {})
{
    HeunSelection sel;
    const int m = cfg.num_bs;
    sel.tier = tier ? *tier : precision_tier_for(m);
    sel.b_tilde = coef.b_tilde;
    if (sel.b_tilde == 0.0)
    {
        sel.b_tilde = -1e-9;
        sel.note = "external charge on the left endpoint; shifted by -1e-9";
    }
    else if (sel.b_tilde == 1.0)
    {
        sel.b_tilde = 1.0 + 1e-9;
        sel.note = "external charge on the right endpoint; shifted by +1e-9";
    }

    if (sel.b_tilde < 0.0 || sel.b_tilde > 1.0)
    {
        const auto which = sel.b_tilde < 0.0 ? CandidateSet::Largest : CandidateSet::Smallest;
        auto c = heun_candidates(m, sel.b_tilde, which, sel.tier);
        if (c.front().max_imag > root_imag_tol)
            throw Error(Errc::ComplexRoots, "selected polynomial has non-real roots");
        if (!c.front().in_unit_interval())
            throw Error(Errc::NoValidRootSet, "selected polynomial has roots outside (0, 1)");
        sel.chosen = std::move(c.front());
        return sel;
    }

    auto all = heun_candidates(m, sel.b_tilde, CandidateSet::All, sel.tier);
    double best = -std::numeric_limits<double>::infinity();
    bool found = false;
    for (auto &c : all)
    {
        if (!c.in_unit_interval()) continue;
        std::vector<double> s{coef.s_min};
        for (double v : denormalize_unit(c.roots_t, coef.s_min, coef.s_max)) s.push_back(v);
        s.push_back(coef.s_max);
        double j = -std::numeric_limits<double>::infinity();
        try
        {
            j = fekete_objective(s, cfg.ue_azimuth);
        }
        catch (const Error &)
        {
            continue;
        }
        if (!found || j > best)
        {
            best = j;
            sel.chosen = c;
            found = true;
        }
    }
    if (!found) throw Error(Errc::NoValidRootSet, "no candidate polynomial has all roots inside (0, 1)");
    return sel;
}

// End-to-end closed-form placement. Falls back to the asymptotic form when
// the external charge is at infinity.
inline PlacementResult solve_placement(const ScenarioConfig &cfg, std::optional<PrecisionTier> tier = {})
{
    cfg.validate();
    Stopwatch clock;
    FeketeCoefficients coef;
    try
    {
        coef = taylor_coefficients(cfg);
    }
    catch (const Error &e)
    {
        if (e.code() != Errc::DegenerateExternalCharge) throw;
        auto r = solve_asymptotic(cfg);
        r.strategy = "heun";
        r.note = "external charge at infinity; asymptotic closed form used";
        return r;
    }
    const auto sel = select_eigenpair(cfg, coef, tier);

    PlacementResult r;
    r.strategy = "heun";
    r.note = sel.note;
    std::vector<double> s{coef.s_min};
    for (double v : denormalize_unit(sel.chosen.roots_t, coef.s_min, coef.s_max)) s.push_back(v);
    s.push_back(coef.s_max);
    r.x = to_positions(s, cfg);
    r.elapsed_s = clock.seconds();

    score_placement(r, cfg);
    const double mm = double(cfg.num_bs) * cfg.num_bs;
    r.equilibrium_residual = equilibrium_residual(sel.chosen.roots_t, sel.b_tilde) / mm;
    if (!(r.equilibrium_residual <= equilibrium_tol))
        throw Error(Errc::ConvergenceFailure, "equilibrium residual " + std::to_string(r.equilibrium_residual) +
                                                  " above tolerance");
    return r;
}

} // namespace maplace
