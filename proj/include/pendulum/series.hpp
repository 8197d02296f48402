#pragma once

// Truncated power series arithmetic and the pendulum coefficient recurrence.
//
// A series_coefficients value holds a_0..a_N of
//
//     f(t) = sum_n a_n (t / s)^n
//
// where s is a time scale carried with the coefficients (s = 1 for a plain
// power series in t). Working in a scaled variable keeps the coefficients of
// long expansions (N in the thousands) inside the double exponent range; the
// composition rules below do not depend on s.

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <pendulum/error.hpp>

namespace pendulum
{

enum class summation { plain, compensated };

namespace detail
{

// Running sum, optionally Kahan-compensated.
template <summation Mode>
class accumulator
{
public:
    void add(double x) noexcept
    {
        if constexpr (Mode == summation::plain) {
            sum_ += x;
        } else {
            const double y = x - carry_;
            const double t = sum_ + y;
            carry_ = (t - sum_) - y;
            sum_ = t;
        }
    }

    [[nodiscard]] double value() const noexcept { return sum_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

// sum_{k=0}^{n} x[k] * y[n-k], ascending k.
template <summation Mode>
[[nodiscard]] inline double convolve_at(std::span<const double> x, std::span<const double> y, std::size_t n) noexcept
{
    accumulator<Mode> acc;
    for (std::size_t k = 0; k <= n; ++k) {
        acc.add(x[k] * y[n - k]);
    }
    return acc.value();
}

inline void require_finite(double x, const char *what)
{
    if (!std::isfinite(x)) {
        throw non_finite_error(std::string(what) + ": non-finite coefficient");
    }
}

} // namespace detail

class series_coefficients
{
public:
    series_coefficients() : coeffs_(1, 0.0) {}

    explicit series_coefficients(std::vector<double> coeffs, double time_scale = 1.0)
        : coeffs_(std::move(coeffs)), scale_(time_scale)
    {
        if (coeffs_.empty()) {
            throw std::invalid_argument("series_coefficients: at least one coefficient is required");
        }
        if (!(scale_ > 0.0) || !std::isfinite(scale_)) {
            throw std::invalid_argument("series_coefficients: time scale must be positive and finite");
        }
        for (double c : coeffs_) {
            detail::require_finite(c, "series_coefficients");
        }
    }

    // Highest retained power N.
    [[nodiscard]] std::size_t order() const noexcept { return coeffs_.size() - 1; }
    [[nodiscard]] std::size_t size() const noexcept { return coeffs_.size(); }
    [[nodiscard]] double time_scale() const noexcept { return scale_; }
    [[nodiscard]] std::span<const double> coeffs() const noexcept { return coeffs_; }

    // Coefficient of (t / time_scale)^n; zero past the truncation order.
    [[nodiscard]] double operator[](std::size_t n) const noexcept { return n < coeffs_.size() ? coeffs_[n] : 0.0; }

    // Coefficient of t^n. May underflow for large n when time_scale > 1.
    [[nodiscard]] double unscaled(std::size_t n) const noexcept
    {
        return (*this)[n] * std::pow(scale_, -static_cast<double>(n));
    }

private:
    std::vector<double> coeffs_;
    double scale_ = 1.0;
};

// Cauchy product truncated at order N. Both factors must share a time scale.
template <summation Mode = summation::plain>
[[nodiscard]] series_coefficients cauchy_product(const series_coefficients &x, const series_coefficients &y,
                                                 std::size_t N)
{
    if (x.time_scale() != y.time_scale()) {
        throw std::invalid_argument("cauchy_product: operands use different time scales");
    }
    std::vector<double> xs(N + 1), ys(N + 1), out(N + 1);
    for (std::size_t n = 0; n <= N; ++n) {
        xs[n] = x[n];
        ys[n] = y[n];
    }
    for (std::size_t n = 0; n <= N; ++n) {
        out[n] = detail::convolve_at<Mode>(xs, ys, n);
    }
    return series_coefficients(std::move(out), x.time_scale());
}

// exp of a series: b_0 = e^{a_0}, b_{n+1} = 1/(n+1) sum_k (k+1) a_{k+1} b_{n-k}.
// Coefficients of a beyond its order are taken as zero.
template <summation Mode = summation::plain>
[[nodiscard]] series_coefficients exp_of_series(const series_coefficients &a, std::size_t N)
{
    std::vector<double> da(N + 1), b(N + 1);
    for (std::size_t k = 0; k <= N; ++k) {
        da[k] = static_cast<double>(k + 1) * a[k + 1];
    }
    b[0] = std::exp(a[0]);
    detail::require_finite(b[0], "exp_of_series");
    for (std::size_t n = 0; n < N; ++n) {
        b[n + 1] = detail::convolve_at<Mode>(da, b, n) / static_cast<double>(n + 1);
        detail::require_finite(b[n + 1], "exp_of_series");
    }
    return series_coefficients(std::move(b), a.time_scale());
}

struct sincos_series {
    series_coefficients sin;
    series_coefficients cos;
};

// Real and imaginary parts of exp(i * a), via the coupled recursions
//   s_{n+1} =  1/(n+1) sum_k (k+1) a_{k+1} c_{n-k}
//   c_{n+1} = -1/(n+1) sum_k (k+1) a_{k+1} s_{n-k}
template <summation Mode = summation::plain>
[[nodiscard]] sincos_series sincos_of_series(const series_coefficients &a, std::size_t N)
{
    std::vector<double> da(N + 1), s(N + 1), c(N + 1);
    for (std::size_t k = 0; k <= N; ++k) {
        da[k] = static_cast<double>(k + 1) * a[k + 1];
    }
    s[0] = std::sin(a[0]);
    c[0] = std::cos(a[0]);
    for (std::size_t n = 0; n < N; ++n) {
        const double inv = 1.0 / static_cast<double>(n + 1);
        s[n + 1] = detail::convolve_at<Mode>(da, c, n) * inv;
        c[n + 1] = -detail::convolve_at<Mode>(da, s, n) * inv;
    }
    return {series_coefficients(std::move(s), a.time_scale()), series_coefficients(std::move(c), a.time_scale())};
}

// Taylor coefficients of the solution of theta'' + sin(theta) = 0 with
// theta(0) = theta0, theta'(0) = omega0, returned in the scaled variable
// t / time_scale:
//   a_0 = theta0, a_1 = s omega0, a_{n+2} = -s^2 sin_n / ((n+1)(n+2)),
// where sin_n, cos_n follow the sincos recursions and s = time_scale.
// Cost is O(N^2).
template <summation Mode = summation::plain>
[[nodiscard]] series_coefficients pendulum_series(double theta0, double omega0, std::size_t N,
                                                  double time_scale = 1.0)
{
    if (N < 2) {
        throw std::invalid_argument("pendulum_series: truncation order must be at least 2");
    }
    if (!std::isfinite(theta0) || !std::isfinite(omega0)) {
        throw std::invalid_argument("pendulum_series: initial conditions must be finite");
    }
    if (!(time_scale > 0.0) || !std::isfinite(time_scale)) {
        throw std::invalid_argument("pendulum_series: time scale must be positive and finite");
    }
    const double s2 = time_scale * time_scale;

    std::vector<double> a(N + 1, 0.0), da(N, 0.0), s(N - 1, 0.0), c(N - 1, 0.0);
    a[0] = theta0;
    a[1] = omega0 * time_scale;
    da[0] = a[1];
    s[0] = std::sin(theta0);
    c[0] = std::cos(theta0);

    for (std::size_t n = 0; n + 2 <= N; ++n) {
        a[n + 2] = -s2 * s[n] / static_cast<double>((n + 1) * (n + 2));
        da[n + 1] = static_cast<double>(n + 2) * a[n + 2];
        if (n + 3 <= N) {
            const double inv = 1.0 / static_cast<double>(n + 1);
            s[n + 1] = detail::convolve_at<Mode>(da, c, n) * inv;
            c[n + 1] = -detail::convolve_at<Mode>(da, s, n) * inv;
        }
    }
    return series_coefficients(std::move(a), time_scale);
}

// sum_{n=0}^{upto} a_n (t / scale)^n by Horner's scheme.
[[nodiscard]] inline double eval_poly(const series_coefficients &a, double t, std::size_t upto)
{
    if (upto > a.order()) {
        throw std::out_of_range("eval_poly: requested order exceeds the truncation order");
    }
    const double u = t / a.time_scale();
    const auto c = a.coeffs();
    double acc = c[upto];
    for (std::size_t n = upto; n-- > 0;) {
        acc = acc * u + c[n];
    }
    return acc;
}

[[nodiscard]] inline double eval_poly(const series_coefficients &a, double t)
{
    return eval_poly(a, t, a.order());
}

// Same series expressed in another time scale: coefficient n is multiplied
// by (new_scale / old_scale)^n.
[[nodiscard]] inline series_coefficients rescaled(const series_coefficients &a, double new_scale)
{
    const double ratio = new_scale / a.time_scale();
    std::vector<double> out(a.size());
    double factor = 1.0;
    for (std::size_t n = 0; n < a.size(); ++n) {
        out[n] = a[n] * factor;
        factor *= ratio;
    }
    return series_coefficients(std::move(out), new_scale);
}

} // namespace pendulum
