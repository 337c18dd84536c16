#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace herglotz {

struct SuiteResult {
    std::string name;
    bool pass;
    std::string detail;   // worst residual or first failing check
};

/// Fast self-check suites behind the `verify` CLI verb. Each runs the
/// module's core identities on small fixed/seeded instances and reports
/// one line. Suites: measures, herglotz, perturbation, extensions,
/// schrodinger, livsic.
std::vector<SuiteResult> run_suite(const std::string& name, std::uint64_t seed,
                                   double tol);
std::vector<std::string> suite_names();

} // namespace herglotz
