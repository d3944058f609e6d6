#include <doctest.h>

#include "diffract/selfcheck.hpp"

using namespace diffract;

TEST_CASE("jacobian criterion passes clean and fails when the factor is perturbed") {
    CheckOptions clean;
    clean.only_id = 6;
    const std::vector<CriterionResult> ok = run_self_check(clean);
    REQUIRE(ok.size() == 1);
    CHECK(ok[0].pass);

    CheckOptions perturbed;
    perturbed.only_id = 6;
    perturbed.gamma_perturbation = 1e-5;  // well above the 1e-7 gate
    const std::vector<CriterionResult> bad = run_self_check(perturbed);
    REQUIRE(bad.size() == 1);
    CHECK_FALSE(bad[0].pass);
    CHECK_FALSE(all_passed(bad));
}

TEST_CASE("fast criteria report measured errors") {
    CheckOptions opts;
    opts.only_id = 2;
    const std::vector<CriterionResult> r = run_self_check(opts);
    REQUIRE(r.size() == 1);
    CHECK(r[0].pass);
    CHECK(r[0].detail.find("tol") != std::string::npos);
    CHECK(r[0].seconds < 1.0);
}
