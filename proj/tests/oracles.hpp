#pragma once

// Reference computations for the tests, kept independent of the library's
// own recursions.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

namespace oracle
{

using cplx = std::complex<double>;

// theta'' = -sin(theta) integrated by complex RK4 along the ray 0 -> z.
inline cplx complex_theta(double theta0, double omega0, cplx z, std::size_t steps)
{
    const cplx h = z / static_cast<double>(steps);
    cplx th = theta0;
    cplx w = omega0;
    for (std::size_t i = 0; i < steps; ++i) {
        const cplx k1t = w, k1w = -std::sin(th);
        const cplx k2t = w + 0.5 * h * k1w, k2w = -std::sin(th + 0.5 * h * k1t);
        const cplx k3t = w + 0.5 * h * k2w, k3w = -std::sin(th + 0.5 * h * k2t);
        const cplx k4t = w + h * k3w, k4w = -std::sin(th + h * k3t);
        th += h / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t);
        w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
    }
    return th;
}

// Taylor coefficients 0..n_max of the solution from Cauchy's formula on the
// circle |t| = r (r inside the radius of convergence), trapezoid rule with
// m nodes.
inline std::vector<double> cauchy_taylor(double theta0, double omega0, double r, std::size_t n_max,
                                         std::size_t m = 128, std::size_t steps = 4000)
{
    std::vector<cplx> values(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double phi = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
        values[j] = complex_theta(theta0, omega0, std::polar(r, phi), steps);
    }
    std::vector<double> a(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) {
        cplx acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double phi = 2.0 * std::numbers::pi * static_cast<double>(j * n % m) / static_cast<double>(m);
            acc += values[j] * std::polar(1.0, -phi);
        }
        a[n] = acc.real() / static_cast<double>(m) / std::pow(r, static_cast<double>(n));
    }
    return a;
}

// Energy along a trajectory with theta' from central differences.
template <class F>
double energy_by_differences(F theta, double t, double h = 1e-5)
{
    const double w = (theta(t + h) - theta(t - h)) / (2.0 * h);
    return 0.5 * w * w + 1.0 - std::cos(theta(t));
}

} // namespace oracle
