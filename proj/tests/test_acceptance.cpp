// Acceptance harness: runs the full evaluation matrix on the canonical
// scenario and prints one PASS/FAIL line per criterion.  Thresholds live in
// evaluate_criteria and are part of the library, not of this binary.
//
// Set VDSA_ACCEPT_QUICK=1 for a reduced matrix during development; the
// shipped test runs the full set.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <cstdlib>
#include <thread>

#include "doctest.h"
#include "vdsa/experiment.hpp"

using namespace vdsa;

TEST_CASE("acceptance criteria") {
    const char* quick_env = std::getenv("VDSA_ACCEPT_QUICK");
    const bool quick = quick_env != nullptr && quick_env[0] != '\0' &&
                       quick_env[0] != '0';
    int jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1) jobs = 1;

    const SimConfig base = default_config();
    MatrixOptions opt;
    opt.strategies = acceptance_strategies();
    opt.seeds = acceptance_seeds(quick);
    opt.jobs = jobs;
    const auto results = run_matrix(base, opt);
    const auto criteria = evaluate_criteria(base, results, quick, jobs);

    std::fputs(criteria_report(criteria).c_str(), stdout);
    std::fflush(stdout);

    REQUIRE(criteria.size() == 12);
    for (const auto& c : criteria) {
        CAPTURE(c.id);
        CAPTURE(c.name);
        CHECK_MESSAGE(c.pass, c.name, ": ", c.details);
    }
}
