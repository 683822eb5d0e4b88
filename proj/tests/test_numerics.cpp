#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "spinbath/constants.hpp"
#include "spinbath/fft.hpp"
#include "spinbath/levmar.hpp"
#include "spinbath/quadrature.hpp"
#include "spinbath/rng.hpp"
#include "spinbath/roots.hpp"

using namespace spinbath;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("adaptive quadrature on known integrals", "[numerics]") {
    auto r1 = quad::integrate([](double x) { return std::sin(x); }, 0.0, constants::pi);
    CHECK_THAT(r1.value, WithinRel(2.0, 1e-12));

    auto r2 = quad::integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0);
    CHECK_THAT(r2.value, WithinRel(std::sqrt(constants::pi), 1e-12));

    // oscillatory integrand with many sign changes
    auto r3 = quad::integrate([](double x) { return std::sin(51.0 * x); }, 0.0, constants::pi);
    CHECK_THAT(r3.value, WithinAbs(2.0 / 51.0, 1e-10));
}

TEST_CASE("semi-infinite quadrature", "[numerics]") {
    auto r1 = quad::integrate_zero_to_inf([](double x) { return std::exp(-x); }, 1.0);
    CHECK_THAT(r1.value, WithinRel(1.0, 1e-10));

    // Lorentzian with a scale mismatch between width and substitution scale
    const double a = 1e-6;
    auto r2 = quad::integrate_zero_to_inf(
        [a](double x) { return a / (a * a + x * x); }, a);
    CHECK_THAT(r2.value, WithinRel(constants::pi / 2.0, 1e-9));
}

TEST_CASE("panel quadrature matches single interval", "[numerics]") {
    auto f = [](double x) { return 1.0 / (1.0 + x * x); };
    auto whole = quad::integrate(f, 0.0, 10.0);
    auto split = quad::integrate_panels(f, {0.0, 0.5, 2.0, 10.0});
    CHECK_THAT(split.value, WithinRel(whole.value, 1e-11));
    CHECK_THAT(whole.value, WithinRel(std::atan(10.0), 1e-11));
}

TEST_CASE("brent root finding", "[numerics]") {
    auto x = roots::brent([](double v) { return v * v - 2.0; }, 0.0, 2.0);
    CHECK_THAT(x, WithinRel(std::sqrt(2.0), 1e-12));

    auto y = roots::brent([](double v) { return std::cos(v) - v; }, 0.0, 1.0);
    CHECK_THAT(y, WithinRel(0.7390851332151607, 1e-12));

    CHECK_THROWS_AS(roots::brent([](double v) { return v * v + 1.0; }, -1.0, 1.0),
                    numerical_error);
}

TEST_CASE("log grid root scan finds all sign changes", "[numerics]") {
    // f has roots at 1e-6, 1e-3 and 1 on a log axis
    auto f = [](double x) {
        const double u = std::log10(x);
        return (u + 6.0) * (u + 3.0) * u;
    };
    auto found = roots::find_roots_log_grid(f, 1e-8, 1e2, 400);
    REQUIRE(found.size() == 3);
    CHECK_THAT(found[0], WithinRel(1e-6, 1e-9));
    CHECK_THAT(found[1], WithinRel(1e-3, 1e-9));
    CHECK_THAT(found[2], WithinRel(1.0, 1e-9));
}

TEST_CASE("keyed rng streams are deterministic and independent", "[numerics]") {
    rng::Stream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
    std::vector<double> va, vb;
    for (int i = 0; i < 100; ++i) {
        va.push_back(a.normal());
        vb.push_back(b.normal());
    }
    CHECK(va == vb);  // same key, bit-identical
    CHECK(c.next_u64() != d.next_u64());
    CHECK(va[0] != c.normal());
}

TEST_CASE("rng normals have the right moments", "[numerics]") {
    rng::Stream s(1, 0);
    const int n = 200000;
    rng::KahanSum sum, sum2;
    for (int i = 0; i < n; ++i) {
        const double x = s.normal();
        sum.add(x);
        sum2.add(x * x);
    }
    const double mean = sum.value() / n;
    const double var = sum2.value() / n - mean * mean;
    // 5 sigma bands on the sample moments
    CHECK(std::abs(mean) < 5.0 / std::sqrt(double(n)));
    CHECK(std::abs(var - 1.0) < 5.0 * std::sqrt(2.0 / double(n)));
}

TEST_CASE("kahan sum keeps cancellation error small", "[numerics]") {
    rng::KahanSum s;
    s.add(1.0);
    for (int i = 0; i < 10000000; ++i) s.add(1e-16);
    CHECK_THAT(s.value(), WithinRel(1.0 + 1e-9, 1e-12));
}

TEST_CASE("fft matches the direct transform", "[numerics]") {
    const std::size_t n = 64;
    std::vector<double> x(n);
    rng::Stream s(9, 0);
    for (auto& v : x) v = s.normal();

    const auto p = fft::power_spectrum(x);
    REQUIRE(p.size() == n / 2 + 1);
    for (std::size_t k = 0; k <= n / 2; ++k) {
        std::complex<double> direct(0.0, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = -2.0 * constants::pi * double(k) * double(j) / double(n);
            direct += x[j] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        CHECK_THAT(p[k], WithinAbs(std::norm(direct), 1e-9 * double(n)));
    }
    std::vector<std::complex<double>> bad(10);
    CHECK_THROWS_AS(fft::transform(bad), numerical_error);
}

TEST_CASE("levenberg-marquardt recovers linear model", "[numerics]") {
    // residuals for y = 2x + 1 sampled exactly
    auto fn = [](const std::vector<double>& p) {
        std::vector<double> r;
        for (int i = 0; i < 10; ++i) {
            const double x = 0.1 * i;
            r.push_back(p[0] * x + p[1] - (2.0 * x + 1.0));
        }
        return r;
    };
    auto res = lm::minimize(fn, {0.0, 0.0}, {-10.0, -10.0}, {10.0, 10.0});
    REQUIRE(res.converged);
    CHECK_THAT(res.params[0], WithinAbs(2.0, 1e-8));
    CHECK_THAT(res.params[1], WithinAbs(1.0, 1e-8));
    CHECK(res.chi2 < 1e-15);
    CHECK(res.deficient_directions.empty());
}

TEST_CASE("levenberg-marquardt on a curved model with bounds", "[numerics]") {
    // y = exp(-x/3), fit the decay constant from a bad start, bounded
    auto fn = [](const std::vector<double>& p) {
        std::vector<double> r;
        for (int i = 1; i <= 20; ++i) {
            const double x = 0.25 * i;
            r.push_back(std::exp(-x / p[0]) - std::exp(-x / 3.0));
        }
        return r;
    };
    auto res = lm::minimize(fn, {0.5}, {0.1}, {50.0});
    REQUIRE(res.converged);
    CHECK_THAT(res.params[0], WithinRel(3.0, 1e-6));
}

TEST_CASE("levenberg-marquardt flags an unidentifiable direction", "[numerics]") {
    // p0 and p1 only appear as a sum: the difference direction is deficient
    auto fn = [](const std::vector<double>& p) {
        std::vector<double> r;
        for (int i = 0; i < 8; ++i) r.push_back(p[0] + p[1] - 1.0);
        return r;
    };
    auto res = lm::minimize(fn, {0.2, 0.3}, {-10.0, -10.0}, {10.0, 10.0});
    CHECK(!res.deficient_directions.empty());
}

TEST_CASE("jacobi eigensolver on a known symmetric matrix", "[numerics]") {
    lm::Matrix a{{2.0, 1.0}, {1.0, 2.0}};
    std::vector<double> w;
    lm::Matrix v;
    lm::detail::sym_eigen(a, w, v);
    REQUIRE(w.size() == 2);
    std::sort(w.begin(), w.end());
    CHECK_THAT(w[0], WithinRel(1.0, 1e-12));
    CHECK_THAT(w[1], WithinRel(3.0, 1e-12));
}
