// Proof checking cost for chains of rule applications.

#include <benchmark/benchmark.h>

#include <string>

#include "epsk/kernel.hpp"
#include "epsk/parser.hpp"

namespace {

// n rounds of and-introduction then and-elimination over one hypothesis.
std::string conjunctionChain(int n) {
    std::string h = "P(c) and exists x:S. Q(x)";
    std::string script = "1. " + h + " |- " + h + " ; hyp\n";
    int line = 1;
    for (int i = 0; i < n; ++i) {
        script += std::to_string(line + 1) + ". " + h + " |- (" + h + ") and (" + h + ") ; and-i(" +
                  std::to_string(line) + ", " + std::to_string(line) + ")\n";
        script += std::to_string(line + 2) + ". " + h + " |- " + h + " ; and-e1(" + std::to_string(line + 1) + ")\n";
        line += 2;
    }
    return script;
}

void BM_CheckConjunctionChain(benchmark::State& state) {
    auto sig = *epsk::parseSignature("sort S\npred P : S\npred Q : S\nconst c : S\n");
    auto script = *epsk::parseProofScript(conjunctionChain(static_cast<int>(state.range(0))), sig);
    for (auto _ : state) {
        auto verdict = epsk::checkProof(*script.root, sig);
        if (!verdict.accepted) state.SkipWithError("chain rejected");
        benchmark::DoNotOptimize(verdict);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CheckConjunctionChain)->RangeMultiplier(4)->Range(4, 1024)->Complexity();

void BM_ParseProofScript(benchmark::State& state) {
    auto sig = *epsk::parseSignature("sort S\npred P : S\npred Q : S\nconst c : S\n");
    std::string text = conjunctionChain(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(epsk::parseProofScript(text, sig));
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParseProofScript)->RangeMultiplier(4)->Range(4, 1024);

void BM_DerivedEquivalences(benchmark::State& state) {
    auto sig = *epsk::parseSignature("sort S\npred P : S\npred Q : S\npred R : S\n");
    for (auto _ : state) {
        for (const auto& o : epsk::derivedEquivalences(sig)) {
            benchmark::DoNotOptimize(epsk::checkProof(*o.forward, sig).accepted);
            benchmark::DoNotOptimize(epsk::checkProof(*o.backward, sig).accepted);
        }
    }
}
BENCHMARK(BM_DerivedEquivalences);

}  // namespace
