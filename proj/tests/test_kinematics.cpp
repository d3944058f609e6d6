#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "diffract/kinematics.hpp"

using namespace diffract;

TEST_CASE("to_angles on axis, in plane and generic") {
    const MomentumDirection fwd = to_angles({0, 0, 1});
    CHECK(fwd.p == doctest::Approx(1.0));
    CHECK(fwd.theta_x == 0.0);
    CHECK(fwd.theta_y == 0.0);

    const MomentumDirection diag = to_angles({1, 0, 1});
    CHECK(diag.p == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(diag.theta_x == doctest::Approx(M_PI_4).epsilon(1e-15));
    CHECK(diag.theta_y == 0.0);

    const MomentumDirection gen = to_angles({0.3, 0.4, 1.2});
    CHECK(gen.p == doctest::Approx(1.3).epsilon(1e-15));
    CHECK(gen.theta_x == doctest::Approx(std::atan(0.25)).epsilon(1e-15));
    CHECK(gen.theta_y == doctest::Approx(std::atan(1.0 / 3.0)).epsilon(1e-15));
    const MomentumVec back = from_angles(gen);
    CHECK(back.px == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(back.py == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(back.pz == doctest::Approx(1.2).epsilon(1e-14));
}

TEST_CASE("to_angles rejects the backward half-space") {
    CHECK_THROWS_AS(to_angles({1, 1, 0}), std::domain_error);
    CHECK_THROWS_AS(to_angles({0, 0, -1}), std::domain_error);
}

TEST_CASE("from_angles closed values") {
    const MomentumVec fwd = from_angles({1, 0, 0});
    CHECK(fwd.px == 0.0);
    CHECK(fwd.py == 0.0);
    CHECK(fwd.pz == doctest::Approx(1.0).epsilon(1e-15));

    const MomentumVec diag = from_angles({1, M_PI_4, 0});
    CHECK(diag.px == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(diag.py == 0.0);
    CHECK(diag.pz == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));

    // p = 2, both angles 30 deg: pz = 2 sqrt(3/5), px = py = pz / sqrt(3).
    const MomentumVec two = from_angles({2, M_PI / 6, M_PI / 6});
    CHECK(two.pz == doctest::Approx(1.5491933384829668).epsilon(1e-12));
    CHECK(two.px == doctest::Approx(0.8944271909999159).epsilon(1e-12));
    CHECK(two.py == doctest::Approx(0.8944271909999159).epsilon(1e-12));
}

TEST_CASE("angle-vector round trips are identities") {
    std::mt19937 gen(99);
    std::uniform_real_distribution<double> comp(-3.0, 3.0);
    std::uniform_real_distribution<double> fwd(0.05, 4.0);
    for (int i = 0; i < 10000; ++i) {
        const MomentumVec v{comp(gen), comp(gen), fwd(gen)};
        const MomentumVec w = from_angles(to_angles(v));
        CHECK(std::fabs(w.px - v.px) <= 1e-12 * v.modulus());
        CHECK(std::fabs(w.py - v.py) <= 1e-12 * v.modulus());
        CHECK(std::fabs(w.pz - v.pz) <= 1e-12 * v.modulus());
    }
    std::uniform_real_distribution<double> ang(-1.5, 1.5);
    for (int i = 0; i < 10000; ++i) {
        const MomentumDirection d{fwd(gen), ang(gen), ang(gen)};
        const MomentumDirection e = to_angles(from_angles(d));
        CHECK(std::fabs(e.p - d.p) <= 1e-12 * d.p);
        CHECK(std::fabs(e.theta_x - d.theta_x) <= 1e-12);
        CHECK(std::fabs(e.theta_y - d.theta_y) <= 1e-12);
    }
}

TEST_CASE("deflection angle values and in-plane identity") {
    CHECK(deflection_angle(0, 0) == 0.0);
    CHECK(deflection_angle(M_PI_4, 0) == doctest::Approx(M_PI_4).epsilon(1e-14));
    CHECK(deflection_angle(M_PI_4, M_PI_4) ==
          doctest::Approx(0.9553166181245093).epsilon(1e-13));
    for (double t = -1.5; t <= 1.5; t += 0.05)
        CHECK(deflection_angle(t, 0) == doctest::Approx(std::fabs(t)).epsilon(1e-12));
}

TEST_CASE("angular factor: values, symmetries, bounds") {
    CHECK(angular_factor(0, 0) == 1.0);
    CHECK(angular_factor(M_PI / 3, 0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(angular_factor(M_PI_4, M_PI_4) ==
          doctest::Approx(0.7698003589195010).epsilon(1e-13));

    std::mt19937 gen(3);
    std::uniform_real_distribution<double> ang(-1.5, 1.5);
    for (int i = 0; i < 200; ++i) {
        const double tx = ang(gen), ty = ang(gen);
        const double g = angular_factor(tx, ty);
        CHECK(g == doctest::Approx(angular_factor(ty, tx)).epsilon(1e-14));
        CHECK(g == doctest::Approx(angular_factor(-tx, ty)).epsilon(1e-14));
        CHECK(g > 0.0);
        CHECK(g <= 1.0);
        if (tx != 0.0 || ty != 0.0) CHECK(g < 1.0);
    }
}

TEST_CASE("finite-difference Jacobian agrees with the angular factor") {
    CHECK(jacobian_oracle({1, 0, 0}, 1e-5) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(jacobian_oracle({1, M_PI / 3, 0}, 1e-5) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(jacobian_oracle({1, M_PI_4, M_PI_4}, 1e-5) ==
          doctest::Approx(0.7698003589195010).epsilon(1e-7));

    double worst = 0.0;
    for (int i = 0; i < 21; ++i)
        for (int j = 0; j < 21; ++j) {
            const double tx = -1.4 + 2.8 * i / 20.0;
            const double ty = -1.4 + 2.8 * j / 20.0;
            worst = std::max(worst,
                             std::fabs(angular_factor(tx, ty) - jacobian_oracle({1, tx, ty})));
        }
    CHECK(worst <= 1e-7);

    // Richardson refinement should not be worse at a benign point.
    const double plain = std::fabs(jacobian_oracle({1, 0.6, -0.4}, 1e-4) -
                                   angular_factor(0.6, -0.4));
    const double refined = std::fabs(jacobian_oracle({1, 0.6, -0.4}, 1e-4, true) -
                                     angular_factor(0.6, -0.4));
    CHECK(refined <= plain + 1e-12);

    CHECK_THROWS_AS(jacobian_oracle({1, 1.5707, 0}, 1e-3), std::domain_error);
}

TEST_CASE("energy from wavelength and mass") {
    const ParticleKinematics photon = ParticleKinematics::from_wavelength_nm(632.8);
    CHECK(photon.wavelength_um() == doctest::Approx(0.6328).epsilon(1e-12));
    // Photon case must equal h c / lambda evaluated from the same constants.
    const double h = 6.62607015e-34, c = 299792458.0;
    const double expected = h * c / 0.6328e-6;
    CHECK(energy_joules(photon, photon.p0) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(3.139137e-19).epsilon(1e-6));

    // Tiny momentum: massless energy goes to zero, massive to rest energy.
    CHECK(energy_joules(photon, 1e-12) < 1e-30);
    const ParticleKinematics electron{9.1093837015e-31, 1.0};
    CHECK(energy_joules(electron, 1e-12) ==
          doctest::Approx(9.1093837015e-31 * c * c).epsilon(1e-9));
}

TEST_CASE("momentum direction domain is enforced at construction") {
    CHECK_THROWS_AS(MomentumDirection(0.0, 0.1, 0.1), std::domain_error);
    CHECK_THROWS_AS(MomentumDirection(1.0, M_PI_2, 0.0), std::domain_error);
    CHECK_THROWS_AS(MomentumDirection(1.0, 0.0, -M_PI_2), std::domain_error);
}
