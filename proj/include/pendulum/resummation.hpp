#pragma once

// Exact resummation of the top-of-trajectory pendulum series,
//
//     theta(t) = w* (t - T*) + (t - T*)^2 sum_n ahat_n t^n,
//
// which builds in theta(T*) = 0 and theta'(T*) = w* at the bottom of the
// swing, plus the equivalent degree N+2 polynomial form
//
//     theta_N(t) = sum_{n<=N} a_n t^n + alpha t^{N+1} + beta t^{N+2}
//
// that needs only O(N) work on top of the a_n.
//
// Internally everything is expressed in u = t / T*, so ahat and the a_n are
// stored as coefficients of u^n (time_scale = T*). This keeps long
// truncations free of under/overflow in T*^{-n}.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <pendulum/energy.hpp>
#include <pendulum/error.hpp>
#include <pendulum/series.hpp>

namespace pendulum
{

// Floating point operation tally for the coefficient stage.
struct flop_counter {
    std::size_t adds = 0;
    std::size_t muls = 0;
    std::size_t divs = 0;

    [[nodiscard]] std::size_t total() const noexcept { return adds + muls + divs; }
};

// Bottom-of-swing angular velocity for the canonical orientation: a
// libration released from +theta0 and a clockwise rotation both cross
// theta = 0 with velocity -sqrt(2E). A counterclockwise rotation gives
// +sqrt(2E).
[[nodiscard]] inline double omega_star(const energy_state &e)
{
    switch (e.kind) {
        case regime::libration:
            return -std::sqrt(2.0 * e.energy);
        case regime::rotation:
            return e.direction * std::sqrt(2.0 * e.energy);
        case regime::separatrix:
            break;
    }
    throw regime_error("omega_star: the separatrix never reaches the bottom again");
}

struct resummed_series {
    double omega_star = 0.0;
    double t_star = 1.0;
    series_coefficients a_hat; // coefficient n is ahat_n T*^n (time_scale T*)
    double b0 = 0.0;           // a_0 + T* w*
    double b1 = 0.0;           // a_1 - w*

    // ahat_n as the coefficient of t^n.
    [[nodiscard]] double a_hat_unscaled(std::size_t n) const { return a_hat.unscaled(n); }
};

namespace detail
{

[[nodiscard]] inline series_coefficients in_scale(const series_coefficients &a, double t_star, std::size_t N)
{
    if (N > a.order()) {
        throw std::out_of_range("resummation: truncation order exceeds the available coefficients");
    }
    if (!(t_star > 0.0) || !std::isfinite(t_star)) {
        throw std::invalid_argument("resummation: T* must be positive and finite");
    }
    return a.time_scale() == t_star ? a : rescaled(a, t_star);
}

} // namespace detail

// ahat_n = sum_{k=0}^{n} b_{n-k} (k+1) T*^{-(k+2)} with b_0 = a_0 + T* w*,
// b_1 = a_1 - w*, b_n = a_n otherwise. The Cauchy product is O(N^2).
// The reconstruction is exact for any w*; w* only affects convergence.
[[nodiscard]] inline resummed_series resum(const series_coefficients &a, double w_star, double t_star, std::size_t N,
                                           flop_counter *ops = nullptr)
{
    const auto scaled = detail::in_scale(a, t_star, N);
    std::vector<double> b(N + 1);
    for (std::size_t n = 0; n <= N; ++n) {
        b[n] = scaled[n];
    }
    // In u = t/T*: b~_0 = b_0, b~_1 = T* b_1, b~_n = T*^n a_n.
    const double wt = w_star * t_star;
    b[0] += wt;
    if (N >= 1) {
        b[1] -= wt;
    }
    const double inv_t2 = 1.0 / (t_star * t_star);

    std::vector<double> c(N + 1);
    for (std::size_t n = 0; n <= N; ++n) {
        double acc = 0.0;
        for (std::size_t k = 0; k <= n; ++k) {
            acc += static_cast<double>(k + 1) * b[n - k];
        }
        c[n] = acc * inv_t2;
    }
    if (ops != nullptr) {
        ops->muls += 2;       // w* T*, T*^2
        ops->adds += N >= 1 ? 2 : 1;
        ops->divs += 1;
        ops->muls += (N + 1) * (N + 2) / 2 + (N + 1);
        ops->adds += N * (N + 1) / 2;
    }
    const double a1 = N >= 1 ? scaled[1] / t_star : 0.0;
    return {w_star, t_star, series_coefficients(std::move(c), t_star), a[0] + wt, a1 - w_star};
}

[[nodiscard]] inline resummed_series resum(const series_coefficients &a, const energy_state &e, double t_star,
                                           std::size_t N, flop_counter *ops = nullptr)
{
    return resum(a, omega_star(e), t_star, N, ops);
}

// w* (t - T*) + (t - T*)^2 sum_{n<=upto} ahat_n t^n. Meaningful for |t| <= T*.
[[nodiscard]] inline double eval_resummed(const resummed_series &r, double t, std::size_t upto)
{
    const double d = t - r.t_star;
    return r.omega_star * d + d * d * eval_poly(r.a_hat, t, upto);
}

[[nodiscard]] inline double eval_resummed(const resummed_series &r, double t)
{
    return eval_resummed(r, t, r.a_hat.order());
}

struct efficient_truncation {
    series_coefficients base; // a_n T*^n (time_scale T*)
    double alpha_scaled = 0.0; // alpha T*^{N+1}
    double beta_scaled = 0.0;  // beta  T*^{N+2}
    double t_star = 1.0;
    double omega_star = 0.0;

    [[nodiscard]] std::size_t order() const noexcept { return base.order(); }
    [[nodiscard]] double alpha() const
    {
        return alpha_scaled * std::pow(t_star, -static_cast<double>(order() + 1));
    }
    [[nodiscard]] double beta() const
    {
        return beta_scaled * std::pow(t_star, -static_cast<double>(order() + 2));
    }
};

// alpha = -(N+2) sigma(T*) T*^{-N-1} - (w* - sigma'(T*)) T*^{-N}
// beta  =  (N+1) sigma(T*) T*^{-N-2} + (w* - sigma'(T*)) T*^{-N-1}
// with sigma the degree N partial sum. Matches the resummed truncation's
// value and slope at T*, making the two degree N+2 polynomials identical.
[[nodiscard]] inline efficient_truncation make_efficient_truncation(const series_coefficients &a, double w_star,
                                                                    double t_star, std::size_t N,
                                                                    flop_counter *ops = nullptr)
{
    const auto scaled = detail::in_scale(a, t_star, N);
    std::vector<double> base(N + 1);
    double sigma = scaled[0];
    double dsigma = 0.0; // d sigma / du at u = 1
    base[0] = scaled[0];
    for (std::size_t n = 1; n <= N; ++n) {
        base[n] = scaled[n];
        sigma += scaled[n];
        dsigma += static_cast<double>(n) * scaled[n];
    }
    const double slope_gap = w_star * t_star - dsigma;
    const double weighted = static_cast<double>(N + 2) * sigma;
    const double alpha = -(weighted + slope_gap);
    const double beta = (weighted - sigma) + slope_gap;
    if (ops != nullptr) {
        ops->adds += 2 * N + 4;
        ops->muls += N + 2;
    }
    return {series_coefficients(std::move(base), t_star), alpha, beta, t_star, w_star};
}

[[nodiscard]] inline efficient_truncation make_efficient_truncation(const series_coefficients &a,
                                                                    const energy_state &e, double t_star,
                                                                    std::size_t N, flop_counter *ops = nullptr)
{
    return make_efficient_truncation(a, omega_star(e), t_star, N, ops);
}

// The efficient form as a degree N+2 polynomial in t / T*.
[[nodiscard]] inline series_coefficients as_polynomial(const efficient_truncation &e)
{
    std::vector<double> c(e.base.coeffs().begin(), e.base.coeffs().end());
    c.push_back(e.alpha_scaled);
    c.push_back(e.beta_scaled);
    return series_coefficients(std::move(c), e.t_star);
}

[[nodiscard]] inline double eval_efficient(const efficient_truncation &e, double t)
{
    const double u = t / e.t_star;
    double acc = e.beta_scaled * u + e.alpha_scaled;
    const auto c = e.base.coeffs();
    for (std::size_t n = c.size(); n-- > 0;) {
        acc = acc * u + c[n];
    }
    return acc;
}

} // namespace pendulum
