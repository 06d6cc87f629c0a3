// Invariant suites run over generated formulas and enumerated models.

#ifndef EPSK_SELFTEST_HPP
#define EPSK_SELFTEST_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "epsk/syntax.hpp"

namespace epsk {

struct SelftestOptions {
    std::uint64_t seed = 1;
    /// Formulas generated per suite.
    std::size_t cases = 60;
    std::size_t maxModelSize = 3;
    unsigned jobs = 1;
    /// Empty runs every suite.
    std::vector<std::string> suites;
};

struct SelftestCase {
    std::size_t index = 0;
    Formula formula = Formula::truth(true);
    std::uint64_t models = 0;
    bool ok = true;
    std::string detail;  // first disagreement when !ok
};

struct SuiteResult {
    std::string name;
    std::vector<SelftestCase> cases;  // ordered by index

    std::size_t failures() const;
    std::uint64_t models() const;
};

std::vector<std::string> selftestSuiteNames();

/// Throws std::invalid_argument for an unknown suite name.
std::vector<SuiteResult> runSelftest(const SelftestOptions& opts);

}  // namespace epsk

#endif  // EPSK_SELFTEST_HPP
