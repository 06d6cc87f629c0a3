#include <gtest/gtest.h>

#include <cstdlib>

#include "epsk/generate.hpp"
#include "epsk/selftest.hpp"
#include "helpers.hpp"

using namespace epsk;

namespace {

Signature sig() { return testing_support::signature("sort S\nsort T\npred P : S\npred R : S, T\nconst c : S\nconst d : T\n"); }

}  // namespace

TEST(Generate, SameSeedSameFormulas) {
    GeneratorConfig cfg;
    cfg.generalized = true;
    cfg.choiceTerms = true;
    FormulaGenerator a(sig(), cfg, 99), b(sig(), cfg, 99), c(sig(), cfg, 100);
    bool anyDifferent = false;
    for (int i = 0; i < 50; ++i) {
        Formula fa = a.closed();
        EXPECT_EQ(printFormula(fa), printFormula(b.closed()));
        anyDifferent = anyDifferent || printFormula(fa) != printFormula(c.closed());
    }
    EXPECT_TRUE(anyDifferent);
}

TEST(Generate, FormulasAreClosedWellSortedAndBounded) {
    GeneratorConfig cfg;
    cfg.restricted = true;
    cfg.generalized = true;
    cfg.choiceTerms = true;
    cfg.maxQuantifierDepth = 2;
    Signature s = sig();
    FormulaGenerator gen(s, cfg, 5);
    for (int i = 0; i < 300; ++i) {
        Formula f = gen.closed();
        EXPECT_TRUE(freeVars(f).empty()) << printFormula(f);
        EXPECT_TRUE(wellSorted(f, s).empty()) << printFormula(f);
        EXPECT_LE(quantifierDepth(f), 2) << printFormula(f);
    }
}

TEST(Generate, OpenFormulasStayInScope) {
    Signature s = sig();
    FormulaGenerator gen(s, {}, 8);
    std::vector<Variable> scope{{"x", "S"}, {"y", "T"}};
    VariableSet allowed(scope.begin(), scope.end());
    for (int i = 0; i < 200; ++i) {
        for (const auto& v : freeVars(gen.open(scope))) EXPECT_TRUE(allowed.count(v)) << v.name;
    }
}

TEST(Generate, SeedFromEnvironment) {
    ::unsetenv("EPSKERNEL_SEED");
    EXPECT_EQ(seedFromEnvironment(7), 7u);
    ::setenv("EPSKERNEL_SEED", "12345", 1);
    EXPECT_EQ(seedFromEnvironment(7), 12345u);
    ::setenv("EPSKERNEL_SEED", "twelve", 1);
    EXPECT_THROW(seedFromEnvironment(7), std::invalid_argument);
    ::unsetenv("EPSKERNEL_SEED");
}

TEST(Selftest, EverySuitePasses) {
    SelftestOptions opts;
    opts.cases = 15;
    opts.maxModelSize = 2;
    auto results = runSelftest(opts);
    EXPECT_EQ(results.size(), selftestSuiteNames().size());
    for (const auto& r : results) {
        EXPECT_EQ(r.cases.size(), 15u) << r.name;
        EXPECT_EQ(r.failures(), 0u) << r.name;
        if (r.name != "print-parse") EXPECT_GT(r.models(), 0u) << r.name;  // the only syntactic suite
        for (std::size_t i = 0; i < r.cases.size(); ++i) EXPECT_EQ(r.cases[i].index, i);
    }
}

TEST(Selftest, ParallelRunsMatchSerialRuns) {
    SelftestOptions opts;
    opts.cases = 12;
    opts.maxModelSize = 2;
    opts.suites = {"epsilon-embedding", "negation-normal-form"};
    auto serial = runSelftest(opts);
    opts.jobs = 3;
    auto parallel = runSelftest(opts);
    ASSERT_EQ(serial.size(), parallel.size());
    for (std::size_t s = 0; s < serial.size(); ++s) {
        ASSERT_EQ(serial[s].cases.size(), parallel[s].cases.size());
        for (std::size_t i = 0; i < serial[s].cases.size(); ++i) {
            EXPECT_TRUE(alphaEq(serial[s].cases[i].formula, parallel[s].cases[i].formula));
            EXPECT_EQ(serial[s].cases[i].models, parallel[s].cases[i].models);
        }
    }
}

TEST(Selftest, UnknownSuiteIsRejected) {
    SelftestOptions opts;
    opts.suites = {"nonsense"};
    EXPECT_THROW(runSelftest(opts), std::invalid_argument);
}
