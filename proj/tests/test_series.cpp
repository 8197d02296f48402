#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include <pendulum/series.hpp>

#include "oracles.hpp"

using namespace pendulum;
using Catch::Approx;

namespace
{

series_coefficients geometric(std::size_t N, double q)
{
    std::vector<double> c(N + 1);
    for (std::size_t n = 0; n <= N; ++n) {
        c[n] = std::pow(q, static_cast<double>(n));
    }
    return series_coefficients(std::move(c));
}

double factorial(std::size_t n)
{
    return std::tgamma(static_cast<double>(n) + 1.0);
}

} // namespace

TEST_CASE("coefficient container validates its input")
{
    CHECK_THROWS_AS(series_coefficients(std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(series_coefficients({1.0, NAN}), non_finite_error);
    CHECK_THROWS_AS(series_coefficients({1.0}, 0.0), std::invalid_argument);
    const series_coefficients a({1.0, 2.0, 3.0}, 2.0);
    CHECK(a.order() == 2);
    CHECK(a[7] == 0.0);
    CHECK(a.unscaled(2) == Approx(0.75));
}

TEST_CASE("cauchy product of simple series")
{
    const series_coefficients p({1.0, 1.0});
    const series_coefficients m({1.0, -1.0});
    const auto r = cauchy_product(p, m, 4);
    CHECK(r[0] == 1.0);
    CHECK(r[1] == 0.0);
    CHECK(r[2] == -1.0);
    CHECK(r[3] == 0.0);

    // 1/(1-t)^2 = sum (n+1) t^n
    const auto g = geometric(30, 1.0);
    const auto sq = cauchy_product<summation::compensated>(g, g, 30);
    for (std::size_t n = 0; n <= 30; ++n) {
        CHECK(sq[n] == static_cast<double>(n + 1));
    }
    CHECK_THROWS_AS(cauchy_product(series_coefficients({1.0}, 1.0), series_coefficients({1.0}, 2.0), 3),
                    std::invalid_argument);
}

TEST_CASE("cauchy product is commutative and compensated agrees with plain")
{
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> x(25), y(25);
        for (auto &v : x) v = u(rng);
        for (auto &v : y) v = u(rng);
        const series_coefficients a(x), b(y);
        const auto ab = cauchy_product(a, b, 24);
        const auto ba = cauchy_product(b, a, 24);
        const auto abk = cauchy_product<summation::compensated>(a, b, 24);
        for (std::size_t n = 0; n <= 24; ++n) {
            CHECK(ab[n] == Approx(ba[n]).margin(1e-14));
            CHECK(ab[n] == Approx(abk[n]).margin(1e-13));
        }
    }
}

TEST_CASE("exp of a series")
{
    const auto e = exp_of_series(series_coefficients({0.0, 1.0}), 20);
    for (std::size_t n = 0; n <= 20; ++n) {
        CHECK(e[n] == Approx(1.0 / factorial(n)).epsilon(1e-14));
    }
    // exp(log 2 + t^2) = 2 sum t^{2k}/k!
    const auto g = exp_of_series(series_coefficients({std::log(2.0), 0.0, 1.0}), 12);
    for (std::size_t n = 0; n <= 12; ++n) {
        const double expect = n % 2 ? 0.0 : 2.0 / factorial(n / 2);
        CHECK(g[n] == Approx(expect).margin(1e-14));
    }
    CHECK_THROWS_AS(exp_of_series(series_coefficients({800.0}), 3), non_finite_error);
}

TEST_CASE("sin and cos of a series")
{
    const auto sc = sincos_of_series(series_coefficients({0.0, 1.0}), 15);
    for (std::size_t n = 0; n <= 15; ++n) {
        const double f = 1.0 / factorial(n);
        const double s = n % 2 ? (n % 4 == 1 ? f : -f) : 0.0;
        const double c = n % 2 ? 0.0 : (n % 4 == 0 ? f : -f);
        CHECK(sc.sin[n] == Approx(s).margin(1e-15));
        CHECK(sc.cos[n] == Approx(c).margin(1e-15));
    }
}

TEST_CASE("sin^2 + cos^2 = 1 for random series")
{
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<double> x(16);
        for (auto &v : x) v = u(rng);
        const series_coefficients a(x);
        const auto sc = sincos_of_series<summation::compensated>(a, 15);
        const auto ss = cauchy_product(sc.sin, sc.sin, 15);
        const auto cc = cauchy_product(sc.cos, sc.cos, 15);
        CHECK(ss[0] + cc[0] == Approx(1.0));
        for (std::size_t n = 1; n <= 15; ++n) {
            const double scale = std::max(1.0, std::abs(ss[n]));
            CHECK(std::abs(ss[n] + cc[n]) < 1e-11 * scale);
        }
    }
}

TEST_CASE("pendulum series leading coefficients")
{
    const auto a = pendulum_series(1.2, 0.3, 6);
    CHECK(a[0] == 1.2);
    CHECK(a[1] == 0.3);
    CHECK(a[2] == Approx(-std::sin(1.2) / 2.0));
    CHECK(a[3] == Approx(-0.3 * std::cos(1.2) / 6.0));

    const auto rest = pendulum_series(0.0, 0.0, 40);
    for (double c : rest.coeffs()) {
        CHECK(c == 0.0);
    }
}

TEST_CASE("pendulum series matches the Cauchy integral of the complex solution")
{
    struct ic {
        double theta0, omega0, r;
    };
    for (const auto &c : {ic{1.0, 0.3, 0.8}, ic{2.5, 0.0, 1.2}, ic{3.14159, -1.0, 0.6}, ic{0.0, 2.2, 0.5}}) {
        const std::size_t N = 14;
        const auto a = pendulum_series<summation::compensated>(c.theta0, c.omega0, N);
        const auto ref = oracle::cauchy_taylor(c.theta0, c.omega0, c.r, N);
        for (std::size_t n = 0; n <= N; ++n) {
            const double tol = 1e-9 * std::pow(c.r, -static_cast<double>(n));
            CHECK(std::abs(a[n] - ref[n]) < tol);
        }
    }
}

TEST_CASE("small amplitude series approaches the harmonic oscillator")
{
    const double eps = 1e-6;
    const auto a = pendulum_series(eps, 0.0, 20);
    for (std::size_t n = 0; n <= 20; ++n) {
        const double cosine = n % 2 ? 0.0 : (n / 2 % 2 ? -1.0 : 1.0) / factorial(n);
        CHECK(a[n] / eps == Approx(cosine).margin(1e-11));
    }
}

TEST_CASE("time scale changes coefficients but not the function")
{
    const auto a = pendulum_series(2.0, 0.5, 30);
    const auto b = pendulum_series(2.0, 0.5, 30, 1.7);
    for (std::size_t n = 0; n <= 30; ++n) {
        CHECK(b.unscaled(n) == Approx(a[n]).epsilon(1e-12).margin(1e-300));
    }
    for (double t : {0.0, 0.3, 0.9, 1.4}) {
        CHECK(eval_poly(b, t) == Approx(eval_poly(a, t)).epsilon(1e-13));
        CHECK(eval_poly(rescaled(a, 0.5), t) == Approx(eval_poly(a, t)).epsilon(1e-13));
    }
}

TEST_CASE("series input validation")
{
    CHECK_THROWS_AS(pendulum_series(0.1, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(pendulum_series(INFINITY, 0.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(pendulum_series(0.1, NAN, 5), std::invalid_argument);
    CHECK_THROWS_AS(pendulum_series(0.1, 0.0, 5, -1.0), std::invalid_argument);
    const auto a = pendulum_series(0.1, 0.0, 5);
    CHECK_THROWS_AS(eval_poly(a, 0.1, 6), std::out_of_range);
    CHECK(eval_poly(a, 0.0, 0) == 0.1);
}
