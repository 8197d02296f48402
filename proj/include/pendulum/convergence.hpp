#pragma once

// Complex-time singularities of the pendulum solution and radii of
// convergence of its Taylor series.
//
// Lattice frames follow the elliptic-function solutions they come from:
// libration poles are measured from a turning point (omega = 0), rotation
// poles from a crossing of the bottom (theta = 0). With k = sqrt(E/2)
//     libration: n K(k) + i m K'(k),                    n, m odd
// and with k = sqrt(2/E), s = sqrt(2/E)
//     rotation:  n s K(k) + i m s K'(k),                n even, m odd.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include <pendulum/elliptic.hpp>
#include <pendulum/energy.hpp>
#include <pendulum/error.hpp>
#include <pendulum/series.hpp>

namespace pendulum
{

// Nearest singularities of the separatrix orbit through theta = 0 are
// logarithmic branch points at t = +-i pi/2.
inline constexpr double separatrix_branch_point_radius = std::numbers::pi / 2.0;

enum class expansion_point { top, bottom };

struct pole_lattice {
    regime kind = regime::libration;
    double energy = 0.0;
    double real_step = 0.0; // K (libration) or K~ (rotation)
    double imag_step = 0.0; // K' (libration) or K~' (rotation)
    std::vector<std::complex<double>> poles;
};

namespace detail
{

struct lattice_steps {
    double real_step;
    double imag_step;
};

[[nodiscard]] inline lattice_steps quarter_periods(const energy_state &e)
{
    if (e.kind == regime::separatrix) {
        throw regime_error("pole lattice: separatrix singularities are branch points at +-i pi/2, not a lattice");
    }
    const double K = ellint_k_agm(period_modulus(e));
    const double Kp = ellint_k_agm(period_comodulus(e));
    if (e.kind == regime::libration) {
        return {K, Kp};
    }
    const double s = std::sqrt(2.0 / e.energy);
    return {s * K, s * Kp};
}

// Expansion point in the lattice frame.
[[nodiscard]] inline double expansion_offset(const energy_state &e, expansion_point p, double real_step)
{
    if (e.kind == regime::libration) {
        return p == expansion_point::top ? 0.0 : real_step;
    }
    return p == expansion_point::top ? real_step : 0.0;
}

} // namespace detail

// All poles whose lattice indices are bounded by max_index: odd indices
// +-1..+-(2 max_index - 1) and, for the rotation real part, even indices
// 0..+-2 max_index.
[[nodiscard]] inline pole_lattice make_pole_lattice(const energy_state &e, int max_index)
{
    if (max_index < 1) {
        throw std::invalid_argument("make_pole_lattice: max_index must be at least 1");
    }
    const auto steps = detail::quarter_periods(e);
    pole_lattice out{e.kind, e.energy, steps.real_step, steps.imag_step, {}};

    std::vector<int> odd;
    for (int j = 1; j <= max_index; ++j) {
        odd.push_back(-(2 * j - 1));
        odd.push_back(2 * j - 1);
    }
    std::vector<int> real_idx = odd;
    if (e.kind == regime::rotation) {
        real_idx.assign({0});
        for (int j = 1; j <= max_index; ++j) {
            real_idx.push_back(-2 * j);
            real_idx.push_back(2 * j);
        }
    }
    std::sort(real_idx.begin(), real_idx.end());
    std::sort(odd.begin(), odd.end());
    for (int n : real_idx) {
        for (int m : odd) {
            out.poles.emplace_back(n * steps.real_step, m * steps.imag_step);
        }
    }
    return out;
}

struct roc_report {
    double exact_roc = 0.0;
    std::optional<double> estimated_roc;
    double t_star = 0.0;
    double margin = 0.0; // exact_roc - t_star
};

// Poles closest to the expansion point, in coordinates relative to it.
[[nodiscard]] inline std::vector<std::complex<double>> nearest_poles(const energy_state &e, expansion_point p)
{
    const auto lattice = make_pole_lattice(e, 3);
    const std::complex<double> origin(detail::expansion_offset(e, p, lattice.real_step), 0.0);
    double best = std::numeric_limits<double>::infinity();
    for (const auto &z : lattice.poles) {
        best = std::min(best, std::abs(z - origin));
    }
    std::vector<std::complex<double>> out;
    for (const auto &z : lattice.poles) {
        if (std::abs(z - origin) <= best * (1.0 + 1e-12)) {
            out.push_back(z - origin);
        }
    }
    return out;
}

// Exact radius of convergence for top or bottom initial conditions.
// Top: sqrt(T*^2 + K'^2) (libration) or sqrt(T*^2 + K~'^2) (rotation).
// Bottom: K~' for rotation; for libration the distance from the bottom
// crossing to the nearest lattice pole.
[[nodiscard]] inline roc_report roc_exact(const energy_state &e, expansion_point p)
{
    const auto steps = detail::quarter_periods(e);
    const double t_star = steps.real_step;
    double radius = 0.0;
    if (p == expansion_point::top) {
        radius = std::hypot(t_star, steps.imag_step);
    } else if (e.kind == regime::rotation) {
        radius = steps.imag_step;
    } else {
        radius = std::abs(nearest_poles(e, p).front());
    }
    return {radius, std::nullopt, t_star, radius - t_star};
}

// Cauchy root-test estimate: least-squares slope of log|a_n| against n over
// the upper half of the available orders, radius = scale * exp(-slope).
// Zero (and subnormal) coefficients are skipped, which accommodates series
// with vanishing odd or even terms.
[[nodiscard]] inline double roc_estimate(const series_coefficients &a)
{
    const auto c = a.coeffs();
    const auto usable = [](double x) { return std::abs(x) >= std::numeric_limits<double>::min(); };
    const auto nonzero = std::count_if(c.begin(), c.end(), usable);
    if (nonzero == 0) {
        throw std::domain_error("roc_estimate: all coefficients vanish; the radius is undefined");
    }
    if (nonzero < 50) {
        throw std::invalid_argument("roc_estimate: at least 50 nonzero coefficients are required");
    }
    const std::size_t N = a.order();
    double sn = 0.0, sy = 0.0, snn = 0.0, sny = 0.0;
    std::size_t m = 0;
    for (std::size_t n = (N + 1) / 2; n <= N; ++n) {
        if (!usable(c[n])) {
            continue;
        }
        const double x = static_cast<double>(n);
        const double y = std::log(std::abs(c[n]));
        sn += x;
        sy += y;
        snn += x * x;
        sny += x * y;
        ++m;
    }
    if (m < 2) {
        throw std::domain_error("roc_estimate: too few nonzero coefficients in the fitted range");
    }
    const double md = static_cast<double>(m);
    const double slope = (md * sny - sn * sy) / (md * snn - sn * sn);
    return a.time_scale() * std::exp(-slope);
}

// Root-test estimate for the pendulum series from the given initial
// conditions using n_coeffs coefficients. A short unscaled pilot series sets
// the time scale of the long one so its coefficients stay representable.
[[nodiscard]] inline double roc_estimate_pendulum(double theta0, double omega0, std::size_t n_coeffs)
{
    const std::size_t pilot_order = std::min<std::size_t>(n_coeffs, 200);
    const double pilot = roc_estimate(pendulum_series(theta0, omega0, pilot_order));
    if (n_coeffs <= pilot_order) {
        return pilot;
    }
    return roc_estimate(pendulum_series(theta0, omega0, n_coeffs, pilot));
}

// roc_exact with the root-test estimate filled in from the pendulum series
// at the matching initial conditions.
[[nodiscard]] inline roc_report roc_with_estimate(const energy_state &e, expansion_point p, std::size_t n_coeffs)
{
    auto report = roc_exact(e, p);
    phase_point ics;
    if (p == expansion_point::top) {
        ics = canonical_top_ics(e);
    } else {
        ics = {0.0, e.direction * std::sqrt(2.0 * e.energy)};
    }
    report.estimated_roc = roc_estimate_pendulum(ics.theta, ics.omega, n_coeffs);
    return report;
}

} // namespace pendulum
