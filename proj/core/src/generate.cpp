#include "epsk/generate.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace epsk {

FormulaGenerator::FormulaGenerator(Signature sig, GeneratorConfig cfg, std::uint64_t seed)
    : sig_(std::move(sig)), cfg_(std::move(cfg)), rng_(seed) {
    if (sig_.sorts().empty()) throw std::invalid_argument("generator needs at least one sort");
    if (cfg_.variableNames.empty()) throw std::invalid_argument("generator needs variable names");
}

int FormulaGenerator::below(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

bool FormulaGenerator::chance(double p) { return std::bernoulli_distribution(p)(rng_); }

Formula FormulaGenerator::closed() {
    std::vector<Variable> scope;
    return formula(scope, cfg_.maxQuantifierDepth, cfg_.maxConnectives);
}

Formula FormulaGenerator::open(const std::vector<Variable>& scope) {
    std::vector<Variable> s = scope;
    return formula(s, cfg_.maxQuantifierDepth, cfg_.maxConnectives);
}

std::optional<Term> FormulaGenerator::termOf(const SortName& sort, const std::vector<Variable>& scope, int depth) {
    std::vector<Term> pool;
    // innermost binding of each name wins, as in the formula being built
    for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
        bool shadowed = false;
        for (auto jt = scope.rbegin(); jt != it; ++jt) shadowed = shadowed || jt->name == it->name;
        if (!shadowed && it->sort == sort) pool.push_back(Term::variable(*it));
    }
    for (const auto& [name, s] : sig_.constants()) {
        if (s == sort) pool.push_back(Term::constant(name, s));
    }
    if (cfg_.choiceTerms && depth > 0 && chance(0.25)) {
        Variable v{cfg_.variableNames[below(static_cast<int>(cfg_.variableNames.size()))], sort};
        std::vector<Variable> inner = scope;
        inner.push_back(v);
        if (auto body = atom(inner, depth - 1)) {
            return Term::binder(chance(0.5) ? BinderKind::Epsilon : BinderKind::Tau, v, *body);
        }
    }
    if (pool.empty()) return std::nullopt;
    return pool[below(static_cast<int>(pool.size()))];
}

std::optional<Formula> FormulaGenerator::atom(const std::vector<Variable>& scope, int depth) {
    std::vector<std::pair<std::string, std::vector<SortName>>> preds(sig_.predicates().begin(),
                                                                     sig_.predicates().end());
    for (int attempt = 0; attempt < 4 && !preds.empty(); ++attempt) {
        const auto& [name, sorts] = preds[below(static_cast<int>(preds.size()))];
        std::vector<Term> args;
        for (const auto& s : sorts) {
            auto t = termOf(s, scope, depth);
            if (!t) break;
            args.push_back(*t);
        }
        if (args.size() == sorts.size()) return Formula::atom(name, std::move(args));
    }
    return std::nullopt;
}

Formula FormulaGenerator::quantified(std::vector<Variable>& scope, int depth, int budget) {
    std::vector<SortName> sorts(sig_.sorts().begin(), sig_.sorts().end());
    if (sig_.integerSort()) std::erase(sorts, *sig_.integerSort());
    if (sorts.empty()) return Formula::truth(chance(0.5));
    Variable v{cfg_.variableNames[below(static_cast<int>(cfg_.variableNames.size()))],
               sorts[below(static_cast<int>(sorts.size()))]};

    QuantifierKind kind = chance(0.5) ? QuantifierKind::Forall : QuantifierKind::Exists;
    std::optional<MajorityMode> mode;
    if (cfg_.generalized && chance(0.4)) {
        static const QuantifierKind others[] = {QuantifierKind::ForallStar, QuantifierKind::ExistsStar,
                                                QuantifierKind::Most, QuantifierKind::Many};
        kind = others[below(4)];
        if ((kind == QuantifierKind::Most || kind == QuantifierKind::Many) && chance(0.5)) {
            mode = chance(0.5) ? MajorityMode::Strict : MajorityMode::Weak;
        }
    }

    scope.push_back(v);
    std::optional<Formula> restriction;
    if (cfg_.restricted && chance(0.5)) restriction = atom(scope, 0);
    Formula body = formula(scope, depth - 1, budget);
    scope.pop_back();
    return Formula::quantifier(kind, v, restriction, body, mode);
}

Formula FormulaGenerator::formula(std::vector<Variable>& scope, int depth, int budget) {
    bool canQuantify = depth > 0;
    bool canConnect = budget > 0;
    int choice = below(10);
    if (scope.empty() && canQuantify && choice < 7) return quantified(scope, depth, budget);
    if (canQuantify && choice < 4) return quantified(scope, depth, budget);
    if (canConnect && choice < 8) {
        int op = below(4);
        if (op == 0) return Formula::negation(formula(scope, depth, budget - 1));
        int left = below(budget);
        Formula a = formula(scope, depth, left);
        Formula b = formula(scope, depth, budget - 1 - left);
        if (op == 1) return Formula::conjunction(a, b);
        if (op == 2) return Formula::disjunction(a, b);
        return Formula::implication(a, b);
    }
    if (auto a = atom(scope, 1)) return *a;
    if (canQuantify) return quantified(scope, depth, budget);
    return Formula::truth(chance(0.5));
}

std::uint64_t seedFromEnvironment(std::uint64_t fallback) {
    const char* raw = std::getenv("EPSKERNEL_SEED");
    if (!raw || !*raw) return fallback;
    std::string s(raw);
    if (s.find_first_not_of("0123456789") != std::string::npos) {
        throw std::invalid_argument("EPSKERNEL_SEED must be an unsigned integer, got '" + s + "'");
    }
    try {
        return std::stoull(s);
    } catch (const std::out_of_range&) {
        throw std::invalid_argument("EPSKERNEL_SEED out of range: " + s);
    }
}

}  // namespace epsk
