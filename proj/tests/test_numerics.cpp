#include <doctest.h>

#include <cmath>
#include <random>

#include "diffract/numerics.hpp"

using namespace diffract;

namespace {

// Independent series oracle, long double accumulation:
// J1(x) = sum_k (-1)^k (x/2)^{2k+1} / (k! (k+1)!).
long double j1_series_oracle(long double x, int terms = 30) {
    long double sum = 0.0L;
    long double term = x / 2.0L;
    for (int k = 0;; ++k) {
        sum += term;
        if (k + 1 >= terms) break;
        term *= -(x / 2.0L) * (x / 2.0L) / ((k + 1.0L) * (k + 2.0L));
    }
    return sum;
}

// Independent erf oracle via the Taylor series
// erf(z) = 2/sqrt(pi) sum_n (-1)^n z^{2n+1} / (n! (2n+1)).
long double erf_series_oracle(long double z) {
    long double sum = 0.0L;
    long double term = z;
    for (int n = 0; n < 200; ++n) {
        sum += term / (2 * n + 1);
        term *= -z * z / (n + 1.0L);
        if (std::fabs((double)term) < 1e-24) break;
    }
    return sum * 2.0L / std::sqrt((long double)M_PI);
}

}  // namespace

TEST_CASE("bessel_j1 matches the series oracle at small arguments") {
    CHECK(bessel_j1(0.0) == 0.0);
    CHECK(bessel_j1(1.0) == doctest::Approx(0.4400505857).epsilon(1e-9));
    for (double x : {0.1, 0.5, 1.0, 2.0, 3.3, 5.0, 7.7, 8.999}) {
        const double oracle = static_cast<double>(j1_series_oracle(x, 60));
        CHECK(std::fabs(bessel_j1(x) - oracle) <= 1e-13);
    }
}

TEST_CASE("bessel_j1 vanishes at the first root located by the series oracle") {
    double lo = 3.0, hi = 4.5;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if ((j1_series_oracle(lo) < 0) == (j1_series_oracle(mid) < 0))
            lo = mid;
        else
            hi = mid;
    }
    const double root = 0.5 * (lo + hi);
    CHECK(root == doctest::Approx(3.8317059702).epsilon(1e-10));
    CHECK(std::fabs(bessel_j1(root)) < 1e-9);
    CHECK(std::fabs(bessel_j1(3.8317059702)) < 1e-9);
}

TEST_CASE("bessel_j1 stays within 1e-12 up to x = 50") {
    // Reference values computed independently at 25 significant digits.
    const struct {
        double x, j1;
    } table[] = {
        {9.5, 0.1612644307575298509506407},   {10.0, 0.04347274616886143666975},
        {12.0, -0.2234471044906276123676977}, {25.0, -0.1253502495802899046518093},
        {37.7, -0.09089835168259654547333607}, {45.3, 0.06101397820384093720613858},
        {50.0, -0.09751182812517513766145895},
    };
    for (const auto& row : table) CHECK(std::fabs(bessel_j1(row.x) - row.j1) <= 1e-12);
}

TEST_CASE("bessel_j1 is odd") {
    for (double x : {0.3, 1.7, 9.2, 24.8, 49.9}) CHECK(bessel_j1(-x) == -bessel_j1(x));
}

TEST_CASE("sinc handles the removable singularity") {
    CHECK(sinc(0.0) == 1.0);
    CHECK(std::fabs(sinc(M_PI)) < 1e-15);
    CHECK(sinc(M_PI_2) == doctest::Approx(2.0 / M_PI).epsilon(1e-14));
    CHECK(sinc(1e-9) == 1.0 - 1e-18 / 6.0);
}

TEST_CASE("adaptive integration meets the stated tolerances") {
    const QuadResult s = integrate_1d([](double x) { return std::sin(x); }, 0.0, M_PI, {});
    CHECK(s.converged);
    CHECK(std::fabs(s.value - 2.0) <= 1e-12);

    const QuadResult one = integrate_1d([](double) { return 1.0; }, 0.0, 1.0, {});
    CHECK(one.value == doctest::Approx(1.0).epsilon(1e-15));

    const QuadResult g = integrate_1d(
        [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }, -5.0, 5.0,
        {64, 1e-12, 14});
    const double oracle = static_cast<double>(erf_series_oracle(5.0L / std::sqrt(2.0L)));
    CHECK(oracle == doctest::Approx(0.9999994267).epsilon(1e-9));
    CHECK(std::fabs(g.value - oracle) <= 1e-9);
}

TEST_CASE("adaptive integration reports an exhausted budget honestly") {
    QuadratureSpec tight{64, 1e-14, 2};
    const QuadResult r =
        integrate_adaptive([](double x) { return std::sin(1000.0 * x); }, 0.0, 1.0, tight);
    CHECK_FALSE(r.converged);
    CHECK(r.error_bound > 0.0);
    CHECK(std::isfinite(r.value));
}

TEST_CASE("adaptive integration is linear") {
    std::mt19937 gen(12345);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    auto f = [](double x) { return std::sin(3.0 * x); };
    auto g = [](double x) { return std::exp(-x); };
    const double i_f = integrate_adaptive(f, 0.0, 1.0, {}).value;
    const double i_g = integrate_adaptive(g, 0.0, 1.0, {}).value;
    for (int trial = 0; trial < 20; ++trial) {
        const double a = coef(gen), b = coef(gen);
        const double i_ab =
            integrate_adaptive([&](double x) { return a * f(x) + b * g(x); }, 0.0, 1.0, {}).value;
        CHECK(std::fabs(i_ab - a * i_f - b * i_g) <= 1e-12 * (std::fabs(a) + std::fabs(b)));
    }
}

TEST_CASE("fixed Gauss-Legendre is exact for polynomials below the rule degree") {
    std::mt19937 gen(777);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    for (int n : {8, 16, 32}) {
        const GaussLegendreRule rule = gauss_legendre(n);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> c(2 * n);  // degree 2n-1
            for (double& v : c) v = coef(gen);
            auto poly = [&](double x) {
                double acc = 0.0;
                for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
                return acc;
            };
            // Analytic integral over [-1, 1]: odd powers cancel.
            double exact = 0.0;
            for (std::size_t k = 0; k < c.size(); k += 2) exact += 2.0 * c[k] / (k + 1.0);
            const double got = integrate_fixed_gl(poly, -1.0, 1.0, rule);
            CHECK(std::fabs(got - exact) <= 1e-13 * std::max(1.0, std::fabs(exact)));
        }
    }
}

TEST_CASE("counter RNG is the documented stream") {
    const CounterRng rng0(0);
    CHECK(rng0.uniform(0) == 0.8833108082136426);
    CHECK(rng0.uniform(1) == 0.43152799704850997);
    CHECK(rng0.uniform(2) == 0.026433771592597743);
    const CounterRng rng42(42);
    CHECK(rng42.uniform(0) == 0.7415648787718233);
    CHECK(rng42.uniform(1) == 0.1599103928769201);
    CHECK(rng42.uniform(2) == 0.27860113025513866);
}

TEST_CASE("Monte Carlo integrator: constants, disc area, symmetry, determinism") {
    const BoxRegion unit{0, 1, 0, 1};
    const McEstimate constant = integrate_2d_mc([](double, double) { return 1.0; }, unit,
                                                {100000, 7});
    CHECK(constant.value == 1.0);
    CHECK(constant.std_error == 0.0);

    const BoxRegion square{-1, 1, -1, 1};
    auto disc = [](double x, double y) { return x * x + y * y <= 1.0 ? 1.0 : 0.0; };
    const McEstimate area = integrate_2d_mc(disc, square, {1000000, 2024});
    CHECK(area.std_error > 0.0);
    CHECK(std::fabs(area.value - M_PI) <= 3.0 * area.std_error);

    const McEstimate mean_x =
        integrate_2d_mc([](double x, double) { return x; }, unit, {1000000, 5});
    CHECK(std::fabs(mean_x.value - 0.5) <= 3.0 * mean_x.std_error);

    const McEstimate again = integrate_2d_mc(disc, square, {1000000, 2024});
    CHECK(again.value == area.value);
    CHECK(again.std_error == area.std_error);
}

TEST_CASE("normal quantile inverts the CDF") {
    CHECK(normal_quantile(0.995) == doctest::Approx(2.5758293035489007).epsilon(1e-12));
    for (double p : {0.01, 0.16, 0.5, 0.84, 0.999})
        CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
}
