#pragma once

// Complete elliptic integral of the first kind
//
//     K(k) = int_0^{pi/2} dphi / sqrt(1 - k^2 sin^2 phi)
//
// by three independent routes (AGM, the classical binomial series and a
// resummed series whose logarithmic singularity at k = 1 is summed in closed
// form), plus the pendulum period built from it.

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <pendulum/energy.hpp>
#include <pendulum/error.hpp>
#include <pendulum/series.hpp>

namespace pendulum
{

enum class k_method { agm, series, resummed };

namespace detail
{

inline void require_modulus(double k, const char *what)
{
    if (!std::isfinite(k) || std::abs(k) >= 1.0) {
        throw std::domain_error(std::string(what) + ": modulus must satisfy |k| < 1");
    }
}

// ((2n)! / (n!)^2)^2 16^{-n} for n = 0..N via r_{n+1} = r_n ((2n+1)/(2n+2))^2.
[[nodiscard]] inline std::vector<double> central_binomial_squares(std::size_t N)
{
    std::vector<double> r(N + 1);
    r[0] = 1.0;
    for (std::size_t n = 0; n < N; ++n) {
        const double q = static_cast<double>(2 * n + 1) / static_cast<double>(2 * n + 2);
        r[n + 1] = r[n] * q * q;
    }
    return r;
}

// atanh(k) / k = (1/2k) ln((1+k)/(1-k)), with its Taylor series near 0.
[[nodiscard]] inline double atanh_over_k(double k) noexcept
{
    if (std::abs(k) < 1e-4) {
        const double k2 = k * k;
        return 1.0 + k2 / 3.0 + k2 * k2 / 5.0;
    }
    return std::atanh(k) / k;
}

} // namespace detail

// Arithmetic-geometric mean route: K = pi / (2 agm(1, sqrt(1 - k^2))),
// iterated to the floating point fixed point.
[[nodiscard]] inline double ellint_k_agm(double k)
{
    detail::require_modulus(k, "ellint_k_agm");
    double a = 1.0;
    double b = std::sqrt((1.0 - k) * (1.0 + k));
    for (int i = 0; i < 64; ++i) {
        const double an = 0.5 * (a + b);
        const double bn = std::sqrt(a * b);
        if (an == a && bn == b) {
            break;
        }
        a = an;
        b = bn;
        if (std::abs(a - b) <= std::numeric_limits<double>::epsilon() * a) {
            break;
        }
    }
    return std::numbers::pi / (a + b);
}

namespace detail
{

// sum_{n=0}^{N} term(n, r_n) k^{2n}, summed forward with compensation; r_n
// follows the ratio recurrence so no coefficient table is built.
template <class Term>
[[nodiscard]] double k_power_sum(double k, std::size_t N, Term term)
{
    const double k2 = k * k;
    accumulator<summation::compensated> acc;
    double r = 1.0;
    double power = 1.0;
    for (std::size_t n = 0; n <= N; ++n) {
        acc.add(term(n, r) * power);
        const double q = static_cast<double>(2 * n + 1) / static_cast<double>(2 * n + 2);
        r *= q * q;
        power *= k2;
        if (power == 0.0) {
            break;
        }
    }
    return acc.value();
}

[[nodiscard]] inline double resummed_bracket(std::size_t n, double r) noexcept
{
    return 0.5 * std::numbers::pi * r - 1.0 / static_cast<double>(2 * n + 1);
}

} // namespace detail

// (pi/2) sum_{n=0}^{N} ((2n)!/(n!)^2)^2 16^{-n} k^{2n}.
[[nodiscard]] inline double ellint_k_series(double k, std::size_t N)
{
    detail::require_modulus(k, "ellint_k_series");
    return 0.5 * std::numbers::pi * detail::k_power_sum(k, N, [](std::size_t, double r) { return r; });
}

// Coefficient of k^{2n} in the resummed series:
// (pi/2) ((2n)!/(n!)^2)^2 16^{-n} - 1/(2n+1).
[[nodiscard]] inline std::vector<double> resummed_k_brackets(std::size_t N)
{
    auto r = detail::central_binomial_squares(N);
    for (std::size_t n = 0; n <= N; ++n) {
        r[n] = detail::resummed_bracket(n, r[n]);
    }
    return r;
}

// sum_{n=0}^{N} [ (pi/2) ((2n)!/(n!)^2)^2 16^{-n} - 1/(2n+1) ] k^{2n} + atanh(k)/k.
[[nodiscard]] inline double ellint_k_resummed(double k, std::size_t N)
{
    detail::require_modulus(k, "ellint_k_resummed");
    return detail::k_power_sum(k, N, detail::resummed_bracket) + detail::atanh_over_k(k);
}

struct elliptic_eval {
    double modulus = 0.0;
    double value = 0.0;
    k_method method = k_method::agm;
    std::size_t terms = 0; // truncation order N; 0 for agm
};

// Resummed K truncated at the smallest N for which the remaining tail is
// provably below tol. The brackets are positive and decreasing, so the tail
// after term n is bounded by bracket_n k^{2n} k^2 / (1 - k^2).
[[nodiscard]] inline elliptic_eval ellint_k_resummed_to_tolerance(double k, double tol = 1e-13)
{
    detail::require_modulus(k, "ellint_k_resummed_to_tolerance");
    const double k2 = k * k;
    const double tail_factor = k2 / ((1.0 - k) * (1.0 + k));
    double r = 1.0;
    double power = 1.0;
    std::size_t n = 0;
    constexpr std::size_t max_terms = 50'000'000;
    for (; n < max_terms; ++n) {
        const double bracket = detail::resummed_bracket(n, r);
        if (bracket * power * tail_factor < tol) {
            break;
        }
        const double q = static_cast<double>(2 * n + 1) / static_cast<double>(2 * n + 2);
        r *= q * q;
        power *= k2;
    }
    return {k, ellint_k_resummed(k, n), k_method::resummed, n};
}

[[nodiscard]] inline double ellint_k(double k, k_method method, std::size_t N)
{
    switch (method) {
        case k_method::agm:
            return ellint_k_agm(k);
        case k_method::series:
            return ellint_k_series(k, N);
        case k_method::resummed:
            return ellint_k_resummed(k, N);
    }
    throw std::invalid_argument("ellint_k: unknown method");
}

[[nodiscard]] inline elliptic_eval evaluate_k(double k, k_method method, std::size_t N)
{
    return {k, ellint_k(k, method, N), method, method == k_method::agm ? 0 : N};
}

// K'(k) = K(sqrt(1 - k^2)), the imaginary quarter-period.
[[nodiscard]] inline double ellint_k_prime(double k, k_method method = k_method::agm, std::size_t N = 0)
{
    if (!std::isfinite(k) || k == 0.0 || std::abs(k) > 1.0) {
        throw std::domain_error("ellint_k_prime: modulus must satisfy 0 < |k| <= 1");
    }
    return ellint_k(std::sqrt((1.0 - k) * (1.0 + k)), method, N);
}

struct period_info {
    double period = 0.0; // T
    double t_star = 0.0; // T/4 (libration) or T/2 (rotation)
    regime kind = regime::libration;
    std::size_t k_terms = 0;
};

namespace detail
{

[[nodiscard]] inline period_info period_from_k(const energy_state &e, double k_value, std::size_t terms)
{
    if (e.kind == regime::libration) {
        const double T = 4.0 * k_value;
        return {T, 0.25 * T, e.kind, terms};
    }
    const double T = 2.0 * std::sqrt(2.0 / e.energy) * k_value;
    return {T, 0.5 * T, e.kind, terms};
}

inline void require_periodic(const energy_state &e, const char *what)
{
    if (e.kind == regime::separatrix) {
        throw regime_error(std::string(what) + ": the separatrix orbit has infinite period");
    }
}

} // namespace detail

// Modulus entering the period: sqrt(E/2) below the separatrix, sqrt(2/E) above.
[[nodiscard]] inline double period_modulus(const energy_state &e)
{
    detail::require_periodic(e, "period_modulus");
    return e.kind == regime::libration ? std::sqrt(0.5 * e.energy) : std::sqrt(2.0 / e.energy);
}

// Complementary modulus sqrt(1 - k^2), formed without cancellation.
[[nodiscard]] inline double period_comodulus(const energy_state &e)
{
    detail::require_periodic(e, "period_comodulus");
    return e.kind == regime::libration ? std::sqrt(0.5 * (2.0 - e.energy))
                                       : std::sqrt((e.energy - 2.0) / e.energy);
}

// T = 4 K(sqrt(E/2)) for E < 2 and T = 2 sqrt(2/E) K(sqrt(2/E)) for E > 2.
[[nodiscard]] inline period_info period(const energy_state &e, k_method method = k_method::agm, std::size_t N = 0)
{
    detail::require_periodic(e, "period");
    return detail::period_from_k(e, ellint_k(period_modulus(e), method, N), method == k_method::agm ? 0 : N);
}

// Period from the resummed K series, truncated adaptively so that the K
// error is below k_tolerance.
[[nodiscard]] inline period_info resummed_period(const energy_state &e, double k_tolerance = 1e-13)
{
    detail::require_periodic(e, "resummed_period");
    const auto K = ellint_k_resummed_to_tolerance(period_modulus(e), k_tolerance);
    return detail::period_from_k(e, K.value, K.terms);
}

} // namespace pendulum
