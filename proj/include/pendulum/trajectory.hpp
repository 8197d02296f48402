#pragma once

// Solution of the pendulum for all t >= 0 from one convergent series on
// [0, T*].
//
// Internally a single orientation is solved: libration released at rest
// from +theta0 (falling to theta = 0 at T*) and clockwise rotation started
// at the top (theta: pi -> 0 over [0, T*]). Libration direction -1 is the
// mirror image theta -> -theta, counterclockwise rotation is
// theta -> 2 pi - theta. The separatrix closed form runs counterclockwise.

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include <pendulum/elliptic.hpp>
#include <pendulum/energy.hpp>
#include <pendulum/error.hpp>
#include <pendulum/resummation.hpp>
#include <pendulum/series.hpp>

namespace pendulum
{

enum class method { raw_series, resummed, efficient_resummed, separatrix_closed_form };

[[nodiscard]] inline const char *to_string(method m) noexcept
{
    switch (m) {
        case method::raw_series:
            return "raw";
        case method::resummed:
            return "resummed";
        case method::efficient_resummed:
            return "efficient";
        case method::separatrix_closed_form:
            return "separatrix";
    }
    return "unknown";
}

// Relative tolerance used to snap times onto branch seams.
inline constexpr double seam_snap = 1e-12;

// Tolerance on the energy of initial conditions passed to align_to_ics.
inline constexpr double alignment_energy_tolerance = 1e-10;

struct trajectory_solution {
    energy_state energy;
    period_info period;
    method kind = method::raw_series;
    std::size_t order = 0;
    series_coefficients raw; // canonical top expansion, time_scale = T*
    std::variant<std::monostate, resummed_series, efficient_truncation> resummed;
    double origin_shift = 0.0; // canonical time at user t = 0
    int winding = 0;           // whole turns added to the angle
    std::string notice;
};

namespace detail
{

[[nodiscard]] inline energy_state canonical_energy(const energy_state &e)
{
    energy_state c = e;
    c.direction = e.kind == regime::rotation ? -1 : 1;
    return c;
}

inline void attach_resummation(trajectory_solution &sol)
{
    const double w = omega_star(canonical_energy(sol.energy));
    if (sol.kind == method::resummed) {
        sol.resummed = resum(sol.raw, w, sol.period.t_star, sol.order);
    } else if (sol.kind == method::efficient_resummed) {
        sol.resummed = make_efficient_truncation(sol.raw, w, sol.period.t_star, sol.order);
    } else {
        sol.resummed = std::monostate{};
    }
}

} // namespace detail

// Coefficients, period and (for the resummed methods) the resummed form for
// energy e. The period comes from the resummed K series with a K error below
// 1e-13. Requesting a series method on the separatrix falls back to the
// closed form and records a notice.
// period_override replaces that period, e.g. with a truncated K series, to
// see what an inexact T* does to the periodic extension.
[[nodiscard]] inline trajectory_solution build_trajectory(const energy_state &e, std::size_t N, method m,
                                                          std::optional<period_info> period_override = {})
{
    trajectory_solution sol;
    sol.energy = e;
    if (e.kind == regime::separatrix) {
        const double inf = std::numeric_limits<double>::infinity();
        sol.period = {inf, inf, regime::separatrix, 0};
        sol.kind = method::separatrix_closed_form;
        if (m != method::separatrix_closed_form) {
            sol.notice = std::string("separatrix energy: using the closed form instead of method '") + to_string(m)
                         + "'";
        }
        return sol;
    }
    if (m == method::separatrix_closed_form) {
        throw regime_error("build_trajectory: the closed form exists only on the separatrix");
    }
    if (N < 2) {
        throw std::invalid_argument("build_trajectory: series methods need N >= 2");
    }
    if (period_override && (period_override->kind != e.kind || !(period_override->t_star > 0.0)
                            || !std::isfinite(period_override->period))) {
        throw std::invalid_argument("build_trajectory: period override does not fit the energy");
    }
    sol.kind = m;
    sol.order = N;
    sol.period = period_override ? *period_override : resummed_period(e);
    const auto ics = canonical_top_ics(detail::canonical_energy(e));
    sol.raw = pendulum_series(ics.theta, ics.omega, N, sol.period.t_star);
    detail::attach_resummation(sol);
    return sol;
}

// Same solution cut back to order upto <= order.
[[nodiscard]] inline trajectory_solution truncated(const trajectory_solution &sol, std::size_t upto)
{
    if (sol.kind == method::separatrix_closed_form || upto == sol.order) {
        return sol;
    }
    if (upto > sol.order || upto < 2) {
        throw std::out_of_range("truncated: order must lie in [2, N]");
    }
    trajectory_solution out = sol;
    const auto c = sol.raw.coeffs();
    out.raw = series_coefficients(std::vector<double>(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(upto) + 1),
                                  sol.raw.time_scale());
    out.order = upto;
    detail::attach_resummation(out);
    return out;
}

// Canonical solution on [0, T*] (times within seam_snap * T* of the ends
// are clamped). On the separatrix: the closed form through theta = 0.
[[nodiscard]] inline double theta_tilde(const trajectory_solution &sol, double t)
{
    if (sol.kind == method::separatrix_closed_form) {
        if (!(t >= 0.0)) {
            throw std::range_error("theta_tilde: time must be nonnegative");
        }
        return separatrix_theta(0.0, t);
    }
    const double ts = sol.period.t_star;
    const double slack = seam_snap * ts;
    if (!(t >= -slack && t <= ts + slack)) {
        throw std::range_error("theta_tilde: time outside [0, T*]; use theta_at");
    }
    t = std::clamp(t, 0.0, ts);
    switch (sol.kind) {
        case method::raw_series:
            return eval_poly(sol.raw, t);
        case method::resummed:
            return eval_resummed(std::get<resummed_series>(sol.resummed), t);
        case method::efficient_resummed:
            return eval_efficient(std::get<efficient_truncation>(sol.resummed), t);
        case method::separatrix_closed_form:
            break;
    }
    throw std::logic_error("theta_tilde: unreachable");
}

namespace detail
{

// Canonical-orientation solution at canonical time u.
[[nodiscard]] inline double canonical_theta(const trajectory_solution &sol, double u)
{
    if (sol.kind == method::separatrix_closed_form) {
        return separatrix_theta(0.0, u);
    }
    const double T = sol.period.period;
    const double ts = sol.period.t_star;
    double turns = std::floor(u / T);
    double th = u - turns * T;
    if (th < 0.0) {
        th = 0.0;
    }
    if (T - th <= seam_snap * T) {
        th = 0.0;
        turns += 1.0;
    }
    if (sol.energy.kind == regime::libration) {
        if (th <= ts) {
            return theta_tilde(sol, th);
        }
        if (th <= 2.0 * ts) {
            return -theta_tilde(sol, std::max(0.0, 2.0 * ts - th));
        }
        if (th <= 3.0 * ts) {
            return -theta_tilde(sol, std::min(ts, th - 2.0 * ts));
        }
        return theta_tilde(sol, std::max(0.0, 4.0 * ts - th));
    }
    // Clockwise rotation: one turn of -2 pi per period.
    const double base = -2.0 * std::numbers::pi * turns;
    if (th <= ts) {
        return base + theta_tilde(sol, th);
    }
    return base - theta_tilde(sol, std::max(0.0, 2.0 * ts - th));
}

struct orientation {
    double sign;
    double offset;
};

// User angle = offset + sign * canonical angle.
[[nodiscard]] inline orientation user_orientation(const trajectory_solution &sol)
{
    const double turn = 2.0 * std::numbers::pi;
    const int d = sol.energy.direction;
    if (sol.energy.kind == regime::rotation && d == 1) {
        return {-1.0, turn * static_cast<double>(1 + sol.winding)};
    }
    if (sol.energy.kind == regime::rotation) {
        return {1.0, turn * static_cast<double>(sol.winding)};
    }
    return {static_cast<double>(d), turn * static_cast<double>(sol.winding)};
}

} // namespace detail

// theta(t) for t >= 0, including the origin shift set by alignment.
[[nodiscard]] inline double theta_at(const trajectory_solution &sol, double t)
{
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw std::range_error("theta_at: time must be finite and nonnegative");
    }
    const auto o = detail::user_orientation(sol);
    return o.offset + o.sign * detail::canonical_theta(sol, t + sol.origin_shift);
}

// (theta, omega) at t = 0 for an unshifted solution: the canonical top
// point mapped to the solution's orientation.
[[nodiscard]] inline phase_point start_state(const trajectory_solution &sol)
{
    if (sol.origin_shift != 0.0) {
        throw std::logic_error("start_state: solution has been aligned; use the aligned initial conditions");
    }
    const int d = sol.energy.direction;
    const double turn = 2.0 * std::numbers::pi * sol.winding;
    switch (sol.energy.kind) {
        case regime::libration:
            return {turn + d * std::acos(1.0 - sol.energy.energy), 0.0};
        case regime::rotation:
            return {turn + std::numbers::pi, d * std::sqrt(2.0 * sol.energy.energy - 4.0)};
        case regime::separatrix:
            break;
    }
    return {turn, 2.0 * d};
}

namespace detail
{

// Canonical time in [lo, hi] where the monotone canonical solution equals
// target, by bisection to ~1e-13 relative time.
[[nodiscard]] inline double bisect_branch(const trajectory_solution &sol, double lo, double hi, double target,
                                          bool increasing)
{
    const double tol = 1e-13 * std::max(1.0, hi);
    for (int i = 0; i < 200 && hi - lo > tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double v = canonical_theta(sol, mid);
        if ((v < target) == increasing) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

[[nodiscard]] inline double wrap_to_pi(double x)
{
    const double turn = 2.0 * std::numbers::pi;
    double m = x - turn * std::floor((x + std::numbers::pi) / turn);
    if (m <= -std::numbers::pi) {
        m += turn;
    }
    return m;
}

} // namespace detail

// Canonical time offset t0 such that the solution shifted by t0 passes
// through (theta_u, omega_u) at t = 0. t0 lies in [0, T) for periodic
// motion; on the separatrix it may be any real number.
[[nodiscard]] inline double align_to_ics(const trajectory_solution &sol, double theta_u, double omega_u)
{
    const auto eu = energy_of(theta_u, omega_u);
    if (std::abs(eu.energy - sol.energy.energy) > alignment_energy_tolerance) {
        throw consistency_error("align_to_ics: initial conditions have a different energy");
    }
    if (omega_u == 0.0 && std::abs(std::sin(theta_u)) < 1e-12) {
        throw degenerate_error("align_to_ics: initial conditions are an equilibrium");
    }
    const int d = sol.energy.direction;
    if (sol.energy.kind != regime::libration && omega_u * d < 0.0) {
        throw consistency_error("align_to_ics: rotation direction does not match the solution");
    }

    if (sol.kind == method::separatrix_closed_form) {
        const double thc = detail::wrap_to_pi(d * theta_u);
        return std::log(std::tan((thc + std::numbers::pi) / 4.0));
    }

    const double T = sol.period.period;
    const double ts = sol.period.t_star;
    double t0 = 0.0;
    if (sol.energy.kind == regime::rotation) {
        const double thc = detail::wrap_to_pi(d == 1 ? 2.0 * std::numbers::pi - theta_u : theta_u);
        t0 = detail::bisect_branch(sol, 0.0, T, thc, false);
    } else {
        const double amplitude = std::acos(1.0 - sol.energy.energy);
        const double thc = std::clamp(detail::wrap_to_pi(d * theta_u), -amplitude, amplitude);
        const double vc = d * omega_u;
        if (vc < 0.0) {
            t0 = detail::bisect_branch(sol, 0.0, 2.0 * ts, thc, false);
        } else if (vc > 0.0) {
            t0 = detail::bisect_branch(sol, 2.0 * ts, 4.0 * ts, thc, true);
        } else {
            t0 = thc > 0.0 ? 0.0 : 2.0 * ts;
        }
    }
    if (T - t0 <= seam_snap * T) {
        t0 = 0.0;
    }
    return t0;
}

// Copy of sol whose t = 0 is at (theta_u, omega_u), including the whole
// turns needed to reproduce theta_u exactly for unwound angles.
[[nodiscard]] inline trajectory_solution aligned(const trajectory_solution &sol, double theta_u, double omega_u)
{
    trajectory_solution out = sol;
    out.origin_shift = align_to_ics(sol, theta_u, omega_u);
    out.winding = 0;
    const double here = theta_at(out, 0.0);
    out.winding = static_cast<int>(std::lround((theta_u - here) / (2.0 * std::numbers::pi)));
    return out;
}

} // namespace pendulum
