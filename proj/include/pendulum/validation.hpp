#pragma once

// Reference integrator and error norms.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <pendulum/energy.hpp>
#include <pendulum/trajectory.hpp>

namespace pendulum
{

// Oracle step for the acceptance-grade checks, and a coarser one for quick runs.
inline constexpr double reference_oracle_dt = 1e-5;
inline constexpr double quick_oracle_dt = 1e-4;

// Span used for the separatrix, which has no period.
inline constexpr double separatrix_span = 10.0;

struct sampled_trajectory {
    std::vector<double> t;
    std::vector<double> theta;
    std::vector<double> omega;

    [[nodiscard]] std::size_t size() const noexcept { return t.size(); }
};

namespace detail
{

// State with compensated accumulation of the step increments, so a million
// steps do not pile up a million roundings.
struct rk4_state {
    double theta;
    double omega;
    double theta_carry = 0.0;
    double omega_carry = 0.0;
};

inline void compensated_add(double &sum, double &carry, double x) noexcept
{
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
}

inline void rk4_step(rk4_state &s, double h) noexcept
{
    const double theta = s.theta;
    const double omega = s.omega;
    const double k1t = omega;
    const double k1w = -std::sin(theta);
    const double k2t = omega + 0.5 * h * k1w;
    const double k2w = -std::sin(theta + 0.5 * h * k1t);
    const double k3t = omega + 0.5 * h * k2w;
    const double k3w = -std::sin(theta + 0.5 * h * k2t);
    const double k4t = omega + h * k3w;
    const double k4w = -std::sin(theta + h * k3t);
    compensated_add(s.theta, s.theta_carry, h / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t));
    compensated_add(s.omega, s.omega_carry, h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w));
}

[[nodiscard]] inline std::size_t steps_for(double span, double dt)
{
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span / dt - 1e-9)));
}

} // namespace detail

// Classic fixed-step RK4 for theta' = omega, omega' = -sin(theta). The step
// is dt shrunk just enough to land on t_end. Samples are kept every stride
// steps; the initial and final states are always kept.
[[nodiscard]] inline sampled_trajectory rk4_pendulum(double theta0, double omega0, double t_end, double dt,
                                                     std::size_t stride = 1)
{
    if (!(dt > 0.0) || !(t_end > 0.0) || stride == 0) {
        throw std::invalid_argument("rk4_pendulum: need dt > 0, t_end > 0 and stride >= 1");
    }
    const std::size_t n = detail::steps_for(t_end, dt);
    const double h = t_end / static_cast<double>(n);
    sampled_trajectory out;
    out.t.push_back(0.0);
    out.theta.push_back(theta0);
    out.omega.push_back(omega0);
    detail::rk4_state st{theta0, omega0};
    for (std::size_t i = 1; i <= n; ++i) {
        detail::rk4_step(st, h);
        if (i % stride == 0 || i == n) {
            out.t.push_back(i == n ? t_end : static_cast<double>(i) * h);
            out.theta.push_back(st.theta);
            out.omega.push_back(st.omega);
        }
    }
    return out;
}

// RK4 sampled exactly at the given nondecreasing times (the first must be
// >= 0). Each interval between samples is split into steps of at most dt.
[[nodiscard]] inline sampled_trajectory rk4_on_grid(double theta0, double omega0, const std::vector<double> &times,
                                                    double dt)
{
    if (!(dt > 0.0)) {
        throw std::invalid_argument("rk4_on_grid: dt must be positive");
    }
    if (!std::is_sorted(times.begin(), times.end()) || (!times.empty() && times.front() < 0.0)) {
        throw std::invalid_argument("rk4_on_grid: times must be nondecreasing and nonnegative");
    }
    sampled_trajectory out;
    detail::rk4_state st{theta0, omega0};
    double now = 0.0;
    for (double target : times) {
        const double span = target - now;
        if (span > 0.0) {
            const std::size_t n = detail::steps_for(span, dt);
            const double h = span / static_cast<double>(n);
            for (std::size_t i = 0; i < n; ++i) {
                detail::rk4_step(st, h);
            }
            now = target;
        }
        out.t.push_back(target);
        out.theta.push_back(st.theta);
        out.omega.push_back(st.omega);
    }
    return out;
}

[[nodiscard]] inline std::vector<double> uniform_grid(double t_end, std::size_t points)
{
    if (points < 2) {
        throw std::invalid_argument("uniform_grid: need at least two points");
    }
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i) {
        g[i] = t_end * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    g.back() = t_end;
    return g;
}

struct error_report {
    double energy = 0.0;
    method kind = method::raw_series;
    std::size_t order = 0;
    std::size_t grid_points = 0;
    double sup_error = 0.0;
    double span_begin = 0.0;
    double span_end = 0.0;
};

// Default span of an error sweep: [0, T*], or [0, 10] on the separatrix.
[[nodiscard]] inline double default_span(const trajectory_solution &sol)
{
    return sol.kind == method::separatrix_closed_form ? separatrix_span : sol.period.t_star;
}

// max |theta_at - oracle| over the oracle's sample times.
[[nodiscard]] inline error_report sup_error(const trajectory_solution &sol, std::size_t upto,
                                           const sampled_trajectory &oracle)
{
    if (oracle.size() < 2) {
        throw std::invalid_argument("sup_error: oracle needs at least two samples");
    }
    const auto cut = truncated(sol, sol.kind == method::separatrix_closed_form ? 0 : upto);
    double worst = 0.0;
    for (std::size_t i = 0; i < oracle.size(); ++i) {
        worst = std::max(worst, std::abs(theta_at(cut, oracle.t[i]) - oracle.theta[i]));
    }
    if (!std::isfinite(worst)) {
        throw non_finite_error("sup_error: non-finite error");
    }
    return {sol.energy.energy, sol.kind, cut.order, oracle.size(), worst, oracle.t.front(), oracle.t.back()};
}

// Oracle started from the solution's own t = 0 state.
[[nodiscard]] inline sampled_trajectory oracle_for(const trajectory_solution &sol, double span,
                                                   std::size_t grid_points, double oracle_dt)
{
    const auto ics = start_state(sol);
    return rk4_on_grid(ics.theta, ics.omega, uniform_grid(span, grid_points), oracle_dt);
}

[[nodiscard]] inline error_report sup_error(const trajectory_solution &sol, std::size_t upto,
                                           std::size_t grid_points = 1001, double oracle_dt = quick_oracle_dt,
                                           double span = 0.0)
{
    if (span <= 0.0) {
        span = default_span(sol);
    }
    return sup_error(sol, upto, oracle_for(sol, span, grid_points, oracle_dt));
}

} // namespace pendulum
