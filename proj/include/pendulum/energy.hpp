#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <pendulum/error.hpp>

namespace pendulum
{

enum class regime { libration, separatrix, rotation };

// |E - 2| at or below this is treated as the separatrix.
inline constexpr double separatrix_tolerance = 1e-12;

// Dimensionless energy E = omega^2/2 + 1 - cos(theta) with its regime.
// direction is +1 (counterclockwise) or -1 (clockwise). For libration it
// selects between a trajectory and its mirror image theta -> -theta.
struct energy_state {
    double energy = 0.0;
    regime kind = regime::libration;
    int direction = 1;
};

[[nodiscard]] inline regime classify_energy(double energy) noexcept
{
    if (std::abs(energy - 2.0) <= separatrix_tolerance) {
        return regime::separatrix;
    }
    return energy < 2.0 ? regime::libration : regime::rotation;
}

[[nodiscard]] inline energy_state make_energy_state(double energy, int direction = 1)
{
    if (!std::isfinite(energy) || energy < 0.0) {
        throw std::invalid_argument("energy must be finite and nonnegative");
    }
    if (direction != 1 && direction != -1) {
        throw std::invalid_argument("direction must be +1 or -1");
    }
    return {energy, classify_energy(energy), direction};
}

[[nodiscard]] inline energy_state energy_of(double theta0, double omega0)
{
    if (!std::isfinite(theta0) || !std::isfinite(omega0)) {
        throw std::invalid_argument("energy_of: inputs must be finite");
    }
    // 1 - cos can round to a tiny negative value; energy is nonnegative.
    const double e = std::max(0.0, 0.5 * omega0 * omega0 + (1.0 - std::cos(theta0)));
    return make_energy_state(e, omega0 < 0.0 ? -1 : 1);
}

struct phase_point {
    double theta = 0.0;
    double omega = 0.0;
};

// Initial conditions at the top of the trajectory, the expansion point with
// the largest radius of convergence: (arccos(1 - E), 0) for libration and
// (pi, direction * sqrt(2E - 4)) for rotation.
[[nodiscard]] inline phase_point canonical_top_ics(const energy_state &e)
{
    switch (e.kind) {
        case regime::libration:
            return {std::acos(1.0 - e.energy), 0.0};
        case regime::rotation:
            return {std::numbers::pi, e.direction * std::sqrt(2.0 * e.energy - 4.0)};
        case regime::separatrix:
            break;
    }
    throw regime_error("canonical_top_ics: the separatrix has no top-of-trajectory point; use separatrix_theta");
}

// Closed-form separatrix orbit through theta0 at t = 0, moving counterclockwise:
//   theta(t) = -pi + 4 atan(e^t tan((theta0 + pi) / 4)).
[[nodiscard]] inline double separatrix_theta(double theta0, double t)
{
    const double arg = (theta0 + std::numbers::pi) / 4.0;
    if (std::abs(std::cos(arg)) < 1e-15) {
        throw std::domain_error("separatrix_theta: theta0 = pi is the unstable equilibrium");
    }
    return -std::numbers::pi + 4.0 * std::atan(std::exp(t) * std::tan(arg));
}

} // namespace pendulum
