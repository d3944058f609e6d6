#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "diffract/momentum_pdf.hpp"
#include "diffract/theories.hpp"

using namespace diffract;

namespace {

const double kHeNe = 2.0 * M_PI / 0.6328;

// Small square aperture keeps the 2D angle quadratures fast in unit tests.
ApertureShape small_square() { return ApertureShape::rectangle(2, 2); }

}  // namespace

TEST_CASE("modulus peak: normalization over its window") {
    const MomentumPeak peak(kHeNe, 1e-3 * kHeNe);
    CHECK(peak.is_narrow());
    const double total = integrate_adaptive([&](double p) { return peak.density(p); },
                                            peak.window_low(), peak.window_high(),
                                            {64, 1e-12, 16})
                             .value;
    // Truncation at five widths leaves erf(5/sqrt(2)) of the mass.
    CHECK(total == doctest::Approx(0.9999994267).epsilon(1e-9));
    CHECK(peak.density(peak.window_high() + 1e-9) == 0.0);
    CHECK_THROWS_AS(MomentumPeak(kHeNe, 0.0), std::invalid_argument);
}

TEST_CASE("transitional transverse density: separable slit form and maximum") {
    const double a = 5, b = 50;
    const ApertureShape rect = ApertureShape::rectangle(a, b);
    for (auto [px, py] : {std::pair{0.1, 0.02}, {0.5, -0.03}, {-1.2, 0.01}}) {
        const double got = transitional_transverse_pdf(rect, px, py);
        const double want = (a / M_PI) * std::pow(sinc(a * px), 2) * (b / M_PI) *
                            std::pow(sinc(b * py), 2);
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
    }
    const double at_zero = transitional_transverse_pdf(rect, 0, 0);
    std::mt19937 gen(8);
    std::uniform_real_distribution<double> freq(-3.0, 3.0);
    for (int i = 0; i < 300; ++i)
        CHECK(transitional_transverse_pdf(rect, freq(gen), freq(gen)) <= at_zero);
}

TEST_CASE("transitional transverse density integrates to one") {
    // Separable slit: each axis integral is (1/pi) int sinc^2(u) du with an
    // analytic oscillatory tail beyond the quadrature window.
    auto axis_mass = [](double half_size) {
        const double cap = 2000.0;
        const double head = integrate_adaptive(
                                [](double u) {
                                    const double s = sinc(u);
                                    return s * s;
                                },
                                0.0, cap, {64, 1e-11, 24})
                                .value;
        const double tail = 0.5 / cap + std::sin(2 * cap) / (4 * cap * cap) -
                            std::cos(2 * cap) / (4 * cap * cap * cap);
        (void)half_size;  // scale-invariant after the substitution u = a px
        return 2.0 * (head + tail) / M_PI;
    };
    CHECK(std::fabs(axis_mass(5.0) - 1.0) <= 1e-6);
}

TEST_CASE("transitional longitudinal density: Gaussian width and tails") {
    const LongitudinalFilter gauss = LongitudinalFilter::gaussian(0.5);
    const double sigma_pz = 1.0;  // 1 / (2 sigma_z)

    // Value matches the normal density in pz centered at p0.
    for (double dq : {0.0, 0.5, -1.3}) {
        const double want = std::exp(-0.5 * dq * dq / (sigma_pz * sigma_pz)) /
                            (sigma_pz * std::sqrt(2.0 * M_PI));
        CHECK(transitional_longitudinal_pdf(gauss, kHeNe + dq, kHeNe) ==
              doctest::Approx(want).epsilon(1e-12));
    }

    // Standard deviation by quadrature moments.
    const double var =
        integrate_adaptive(
            [&](double pz) {
                return (pz - kHeNe) * (pz - kHeNe) *
                       transitional_longitudinal_pdf(gauss, pz, kHeNe);
            },
            kHeNe - 12.0, kHeNe + 12.0, {64, 1e-12, 18})
            .value;
    CHECK(std::sqrt(var) == doctest::Approx(1.0).epsilon(1e-8));

    // Maximum at pz = p0.
    CHECK(transitional_longitudinal_pdf(gauss, kHeNe, kHeNe) >
          transitional_longitudinal_pdf(gauss, kHeNe + 0.3, kHeNe));

    CHECK_THROWS_AS(transitional_longitudinal_pdf(LongitudinalFilter::dirac(), 1.0, kHeNe),
                    std::domain_error);
}

TEST_CASE("backward-momentum probability of the transitional state") {
    // sigma_z = 0.05 um and p0 for 632.8 nm give 2 sigma_z p0 = 0.9929.
    const LongitudinalFilter narrow = LongitudinalFilter::gaussian(0.05);
    const double mass = pz_positive_mass(small_square(), narrow, kHeNe);
    CHECK(1.0 - mass == doctest::Approx(normal_cdf(-2.0 * 0.05 * kHeNe)).epsilon(1e-9));
    CHECK(1.0 - mass == doctest::Approx(0.16).epsilon(0.01));

    // Wide filter: hardly any backward mass.
    CHECK(pz_positive_mass(small_square(), LongitudinalFilter::gaussian(2.0), kHeNe) >
          1.0 - 1e-12);

    // Uniform window, frozen against an independent sine-integral route.
    CHECK(pz_positive_mass(small_square(), LongitudinalFilter::uniform(2.0), kHeNe) ==
          doctest::Approx(0.9833399695204422).epsilon(1e-8));

    CHECK_THROWS_AS(pz_positive_mass(small_square(), LongitudinalFilter::dirac(), kHeNe),
                    std::domain_error);
}

TEST_CASE("transitional factorization: windowed covariance vanishes") {
    // Joint density of (Px, Pz) after marginalizing Py: transverse marginal
    // times the longitudinal factor. Moments over a symmetric window
    // (the |px| tail decays like 1/px^2, so the mean exists only as a
    // principal value; the window keeps it well defined).
    const double a = 2.0;
    const LongitudinalFilter gauss = LongitudinalFilter::gaussian(0.5);
    const double window = 40.0 / a;
    const QuadratureSpec spec{64, 1e-10, 16};
    auto joint = [&](double px, double pz) {
        return (a / M_PI) * std::pow(sinc(a * px), 2) *
               transitional_longitudinal_pdf(gauss, pz, kHeNe);
    };
    auto expect = [&](auto&& weight) {
        auto inner = [&](double pz) {
            return integrate_adaptive(
                       [&](double px) { return weight(px, pz) * joint(px, pz); }, -window,
                       window, spec)
                .value;
        };
        return integrate_adaptive(inner, kHeNe - 10.0, kHeNe + 10.0, spec).value;
    };
    const double mass = expect([](double, double) { return 1.0; });
    const double mean_px = expect([](double px, double) { return px; }) / mass;
    const double mean_pz = expect([](double, double pz) { return pz; }) / mass;
    const double mean_pxpz = expect([](double px, double pz) { return px * pz; }) / mass;
    CHECK(std::fabs(mean_pxpz - mean_px * mean_pz) <= 1e-8);
}

TEST_CASE("outgoing density: support, change of variables, normalization") {
    PdfQuadratureOptions opts;
    opts.p_nodes = 12;
    opts.angle_spec = QuadratureSpec{64, 1e-7, 13};
    FinalStatePdf fs(small_square(), LongitudinalFilter::gaussian(0.5), kHeNe, 1e-3, opts);

    SUBCASE("zero on and behind the screen plane") {
        std::mt19937 gen(61);
        std::uniform_real_distribution<double> comp(-2.0, 2.0);
        for (int i = 0; i < 100; ++i) {
            const double pz = -5.0 * std::uniform_real_distribution<double>(0.0, 1.0)(gen);
            CHECK(fs.density_cartesian({comp(gen), comp(gen), pz}) == 0.0);
        }
        CHECK(fs.density_cartesian({0.05, 0.02, kHeNe}) > 0.0);
        // Outside the modulus window the peak factor kills the density.
        CHECK(fs.density_cartesian({0, 0, 0.9 * kHeNe}) == 0.0);
    }

    SUBCASE("angle density equals Cartesian density times the Jacobian") {
        std::mt19937 gen(4711);
        std::uniform_real_distribution<double> ang(-1.2, 1.2);
        std::uniform_real_distribution<double> mod(fs.peak().window_low(),
                                                   fs.peak().window_high());
        int checked = 0;
        for (int i = 0; i < 50; ++i) {
            const double p = mod(gen), tx = ang(gen), ty = ang(gen);
            const double angle_density = fs.density_angles(p, tx, ty);
            const double cart = fs.density_cartesian(from_angles({p, tx, ty}));
            const double via_oracle = cart * p * p * jacobian_oracle({p, tx, ty}, 1e-5);
            if (angle_density < 1e-12) continue;
            CHECK(std::fabs(via_oracle - angle_density) / angle_density <= 1e-7);
            ++checked;
        }
        CHECK(checked >= 20);
    }

    SUBCASE("independent budgets agree on the normalization") {
        PdfQuadratureOptions finer;
        finer.p_nodes = 18;
        finer.angle_spec = QuadratureSpec{64, 1e-8, 14};
        const double ratio = fs.normalization_with(finer) / fs.normalization();
        CHECK(std::fabs(ratio - 1.0) <= 1e-5);
    }

    SUBCASE("modulus marginal concentrates at the peak") {
        const FinalStatePdf::ModulusMoments m = fs.modulus_moments();
        const double dp = 1e-3 * kHeNe;
        CHECK(std::fabs(m.mass - 1.0) <= 1e-6);
        CHECK(std::fabs(m.mean - kHeNe) <= 0.1 * dp);
        CHECK(m.stddev / dp >= 0.9);
        CHECK(m.stddev / dp <= 1.1);

        const double grid[] = {kHeNe - 2e-3 * kHeNe, kHeNe, kHeNe + 2e-3 * kHeNe};
        const std::vector<double> marginal = fs.marginal_modulus(grid);
        CHECK(marginal[1] > marginal[0]);
        CHECK(marginal[1] > marginal[2]);
    }
}

TEST_CASE("direction marginal matches the closed intensity formula") {
    const ApertureShape shape = small_square();
    const LongitudinalFilter filter = LongitudinalFilter::gaussian(0.5);
    FinalStatePdf fs(shape, filter, kHeNe, 1e-5);
    for (int i = 0; i < 9; ++i) {
        const double theta = i * (80.0 * M_PI / 180.0) / 8.0;
        const double ratio = fs.directional_ratio(theta, 0.0);
        const double closed = quantum_relative_intensity(filter, shape, kHeNe, theta, 0.0);
        CHECK(std::fabs(ratio - closed) <= 1e-6 * std::max(1.0, closed));
    }
    // Off-plane spot check.
    const double ratio = fs.directional_ratio(0.4, 0.3);
    const double closed = quantum_relative_intensity(filter, shape, kHeNe, 0.4, 0.3);
    CHECK(std::fabs(ratio - closed) <= 1e-6 * std::max(1.0, closed));
}

TEST_CASE("directional density is a normalized direction marginal") {
    PdfQuadratureOptions opts;
    opts.p_nodes = 12;
    opts.angle_spec = QuadratureSpec{64, 1e-7, 13};
    FinalStatePdf fs(small_square(), LongitudinalFilter::gaussian(0.5), kHeNe, 1e-3, opts);
    // Integrating the direction marginal over angles returns unity: reuse
    // the cached normalization nodes through modulus_moments' mass.
    CHECK(std::fabs(fs.modulus_moments().mass - 1.0) <= 1e-6);
    // Forward direction dominates for a centered convex aperture.
    const double fwd = fs.directional_density(0, 0);
    for (auto [tx, ty] : {std::pair{0.3, 0.0}, {0.0, 0.4}, {0.5, 0.5}})
        CHECK(fs.directional_density(tx, ty) < fwd);
}

TEST_CASE("final density rejects invalid setups") {
    CHECK_THROWS_AS(FinalStatePdf(small_square(), LongitudinalFilter::dirac(), kHeNe, -1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(FinalStatePdf(small_square(), LongitudinalFilter::dirac(), kHeNe, 0.5),
                    std::invalid_argument);  // window would cross p = 0
}
