#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <pendulum/convergence.hpp>

using namespace pendulum;
using Catch::Approx;

namespace
{

bool contains(const std::vector<std::complex<double>> &v, std::complex<double> z, double tol = 1e-12)
{
    return std::any_of(v.begin(), v.end(), [&](auto w) { return std::abs(w - z) < tol * std::max(1.0, std::abs(z)); });
}

std::vector<double> log_grid(double lo, double hi, int n)
{
    std::vector<double> g;
    for (int i = 0; i < n; ++i) {
        g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    }
    return g;
}

} // namespace

TEST_CASE("libration lattice with one index")
{
    const auto e = make_energy_state(1.71);
    const auto lat = make_pole_lattice(e, 1);
    REQUIRE(lat.poles.size() == 4);
    const double K = ellint_k_agm(std::sqrt(0.855));
    const double Kp = ellint_k_agm(std::sqrt(0.145));
    for (double sr : {-1.0, 1.0}) {
        for (double si : {-1.0, 1.0}) {
            CHECK(contains(lat.poles, {sr * K, si * Kp}));
        }
    }
    CHECK(contains(nearest_poles(e, expansion_point::top), {K, Kp}));
}

TEST_CASE("rotation lattice with one index")
{
    const double E = 5.0;
    const auto lat = make_pole_lattice(make_energy_state(E), 1);
    REQUIRE(lat.poles.size() == 6);
    const double s = std::sqrt(2.0 / E);
    const double Kt = s * ellint_k_agm(s);
    const double Ktp = s * ellint_k_agm(std::sqrt(1.0 - s * s));
    for (double n : {0.0, -2.0, 2.0}) {
        for (double m : {-1.0, 1.0}) {
            CHECK(contains(lat.poles, {n * Kt, m * Ktp}));
        }
    }
}

TEST_CASE("lattice symmetry and no real poles")
{
    for (double E : {0.3, 1.71, 1.9998, 2.02, 7.0}) {
        const auto lat = make_pole_lattice(make_energy_state(E), 3);
        for (const auto &z : lat.poles) {
            CHECK(z.imag() != 0.0);
            CHECK(contains(lat.poles, std::conj(z)));
            CHECK(contains(lat.poles, -z));
        }
    }
    CHECK_THROWS_AS(make_pole_lattice(make_energy_state(2.0), 2), regime_error);
    CHECK_THROWS_AS(make_pole_lattice(make_energy_state(1.0), 0), std::invalid_argument);
    CHECK(separatrix_branch_point_radius == Approx(std::numbers::pi / 2));
}

TEST_CASE("top initial conditions always converge past T*")
{
    for (double E : log_grid(0.01, 1.999, 60)) {
        const auto r = roc_exact(make_energy_state(E), expansion_point::top);
        CHECK(r.exact_roc > r.t_star);
        CHECK(r.margin > 0.0);
    }
    for (double E : log_grid(2.001, 100.0, 60)) {
        const auto r = roc_exact(make_energy_state(E), expansion_point::top);
        CHECK(r.exact_roc > r.t_star);
    }
    CHECK_THROWS_AS(roc_exact(make_energy_state(2.0), expansion_point::top), regime_error);
}

TEST_CASE("rotation bottom radius exceeds T* only above E = 4")
{
    for (double E : {2.02, 2.5, 3.0, 3.9, 3.99}) {
        const auto r = roc_exact(make_energy_state(E), expansion_point::bottom);
        CHECK(r.exact_roc < r.t_star);
    }
    for (double E : {4.01, 4.1, 5.0, 8.0, 50.0}) {
        const auto r = roc_exact(make_energy_state(E), expansion_point::bottom);
        CHECK(r.exact_roc > r.t_star);
    }
    const double s = std::sqrt(2.0 / 3.0);
    CHECK(roc_exact(make_energy_state(3.0), expansion_point::bottom).exact_roc
          == Approx(s * ellint_k_agm(std::sqrt(1.0 - s * s))));
}

TEST_CASE("libration bottom radius is the imaginary quarter period")
{
    for (double E : {0.5, 1.71, 1.9998}) {
        const auto e = make_energy_state(E);
        const double k = std::sqrt(E / 2.0);
        CHECK(roc_exact(e, expansion_point::bottom).exact_roc == Approx(ellint_k_prime(k)).epsilon(1e-14));
    }
    CHECK(roc_exact(make_energy_state(1.71), expansion_point::bottom).exact_roc
          < roc_exact(make_energy_state(1.71), expansion_point::top).t_star);
}

TEST_CASE("small energy radius grows without bound")
{
    const auto r = roc_exact(make_energy_state(1e-6), expansion_point::top);
    CHECK(r.t_star == Approx(std::numbers::pi / 2).epsilon(1e-6));
    CHECK(r.exact_roc > 8.0);
    CHECK(roc_exact(make_energy_state(1e-10), expansion_point::top).exact_roc > r.exact_roc);
}

TEST_CASE("root test on known series")
{
    {
        std::vector<double> c(400);
        for (std::size_t n = 0; n < c.size(); ++n) {
            c[n] = std::pow(1.7, -static_cast<double>(n));
        }
        CHECK(roc_estimate(series_coefficients(c)) == Approx(1.7).epsilon(0.01));
    }
    {
        std::vector<double> c(2001, 0.0);
        for (std::size_t n = 0; n < c.size(); n += 2) {
            c[n] = n / 2 % 2 ? -1.0 : 1.0;
        }
        CHECK(roc_estimate(series_coefficients(c)) == Approx(1.0).epsilon(0.02));
    }
    CHECK_THROWS_AS(roc_estimate(series_coefficients(std::vector<double>(100, 0.0))), std::domain_error);
    CHECK_THROWS_AS(roc_estimate(series_coefficients(std::vector<double>(30, 1.0))), std::invalid_argument);
}

TEST_CASE("root test on the pendulum series approaches the exact radius")
{
    for (double E : {1.71, 2.02, 0.5, 5.0}) {
        const auto e = make_energy_state(E);
        const double exact = roc_exact(e, expansion_point::top).exact_roc;
        double prev = INFINITY;
        for (std::size_t N : {250u, 500u, 1000u, 2000u}) {
            const auto ics = canonical_top_ics(e);
            const double rel = std::abs(roc_estimate_pendulum(ics.theta, ics.omega, N) / exact - 1.0);
            CHECK(rel <= prev + 0.05);
            prev = rel;
        }
        CHECK(prev < 0.02);
    }
}

TEST_CASE("root test for bottom initial conditions")
{
    for (double E : {2.5, 5.0}) {
        const auto r = roc_with_estimate(make_energy_state(E), expansion_point::bottom, 2000);
        REQUIRE(r.estimated_roc.has_value());
        CHECK(*r.estimated_roc == Approx(r.exact_roc).epsilon(0.02));
    }
}
