// Acceptance gate: runs every numerical criterion at full budget and prints
// one PASS/FAIL line each. Exits nonzero if any criterion fails.

#include <cstdio>
#include <cstring>

#include "diffract/selfcheck.hpp"

int main(int argc, char** argv) {
    diffract::CheckOptions options;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0) options.quick = true;
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc)
            options.only_id = std::atoi(argv[++i]);
    }

    const std::vector<diffract::CriterionResult> results = diffract::run_self_check(options);
    int failed = 0;
    double total_seconds = 0.0;
    for (const diffract::CriterionResult& r : results) {
        std::printf("[%2d] %-52s %s  %7.2f s\n     %s\n", r.id, r.name.c_str(),
                    r.pass ? "PASS" : "FAIL", r.seconds, r.detail.c_str());
        total_seconds += r.seconds;
        if (!r.pass) ++failed;
    }
    std::printf("ACCEPTANCE: %d/%zu criteria passed in %.1f s\n",
                static_cast<int>(results.size()) - failed, results.size(), total_seconds);
    return failed == 0 ? 0 : 1;
}
