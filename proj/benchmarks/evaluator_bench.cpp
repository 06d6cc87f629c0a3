// Model checking throughput: enumeration, choice terms, density measures.

#include <benchmark/benchmark.h>

#include "epsk/enumerate.hpp"
#include "epsk/evaluator.hpp"
#include "epsk/parser.hpp"
#include "epsk/transform.hpp"

namespace {

epsk::Signature signatureOf(const char* text) { return *epsk::parseSignature(text); }

void BM_EnumerateUnaryModels(benchmark::State& state) {
    epsk::Signature sig = signatureOf("sort S\npred P : S\npred Q : S\npred R : S\n");
    std::size_t size = static_cast<std::size_t>(state.range(0));
    std::uint64_t visited = 0;
    for (auto _ : state) {
        epsk::enumerateModels(sig, size).forEach([&](const epsk::Model& m, std::uint64_t) {
            benchmark::DoNotOptimize(&m);
            ++visited;
            return true;
        });
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(visited));
}
BENCHMARK(BM_EnumerateUnaryModels)->DenseRange(2, 5);

void BM_MostOverAllModels(benchmark::State& state) {
    epsk::Signature sig = signatureOf("sort S\npred P : S\npred Q : S\n");
    epsk::Formula f = *epsk::parseFormula("most x:S (P(x)). Q(x)", sig);
    auto space = epsk::enumerateModels(sig, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        std::uint64_t trueIn = 0;
        space.forEach([&](const epsk::Model& m, std::uint64_t) {
            trueIn += epsk::holds(m, f);
            return true;
        });
        benchmark::DoNotOptimize(trueIn);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * space.count()));
}
BENCHMARK(BM_MostOverAllModels)->DenseRange(3, 6);

// Nested choice terms from a three-quantifier prefix.
void BM_EpsilonEmbeddedFormula(benchmark::State& state) {
    epsk::Signature sig = signatureOf("sort S\npred P : S\npred R : S, S\n");
    epsk::Formula f = *epsk::parseFormula(
        "forall x:S. exists y:S. forall z:S. R(x, y) implies (P(z) or R(z, x))", sig);
    epsk::Formula e = epsk::epsilonEmbed(f);
    auto space = epsk::enumerateModels(sig, 3);
    for (auto _ : state) {
        std::uint64_t trueIn = 0;
        space.forEach([&](const epsk::Model& m, std::uint64_t) {
            trueIn += epsk::holds(m, e);
            return true;
        });
        benchmark::DoNotOptimize(trueIn);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * space.count()));
}
BENCHMARK(BM_EpsilonEmbeddedFormula)->Unit(benchmark::kMillisecond);

void BM_DensityMeasure(benchmark::State& state) {
    auto model = *epsk::parseModel("integer N\nmeasure N = density(10)\npred prime : N = builtin(prime)\n");
    model.setDensityBound("N", static_cast<std::size_t>(state.range(0)));
    epsk::Formula f = *epsk::parseFormula("most n:N. not prime(n)", model.signature());
    for (auto _ : state) benchmark::DoNotOptimize(epsk::holds(model, f));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DensityMeasure)->RangeMultiplier(10)->Range(100, 100000)->Complexity(benchmark::oN);

}  // namespace
