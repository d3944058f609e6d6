#pragma once

#include <string>
#include <vector>

namespace diffract {

struct CheckOptions {
    /// Reduced quadrature budget for the expensive density criterion.
    bool quick = false;
    /// Run a single criterion by id (0 = all).
    int only_id = 0;
    /// Test hook: additive offset applied to the angular factor inside the
    /// Jacobian cross-check, to prove the check actually bites.
    double gamma_perturbation = 0.0;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

/// Runs the numerical cross-validation suite: closed forms against
/// independent quadrature and Monte Carlo, the Jacobian identity, theory
/// ratio identities and ordering, density normalization and moments, and
/// output determinism. Every criterion reports its measured error.
std::vector<CriterionResult> run_self_check(const CheckOptions& options = {});

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace diffract
