#include "epsk/selftest.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <stdexcept>
#include <thread>

#include "epsk/enumerate.hpp"
#include "epsk/evaluator.hpp"
#include "epsk/generate.hpp"
#include "epsk/parser.hpp"
#include "epsk/print.hpp"
#include "epsk/transform.hpp"

namespace epsk {

std::size_t SuiteResult::failures() const {
    return static_cast<std::size_t>(std::count_if(cases.begin(), cases.end(), [](const auto& c) { return !c.ok; }));
}

std::uint64_t SuiteResult::models() const {
    std::uint64_t n = 0;
    for (const auto& c : cases) n += c.models;
    return n;
}

namespace {

Signature unaryBinary() {
    Signature sig;
    sig.addSort("S");
    sig.addPredicate("P", {"S"});
    sig.addPredicate("R", {"S", "S"});
    return sig;
}

Signature twoUnary() {
    Signature sig;
    sig.addSort("S");
    sig.addPredicate("P", {"S"});
    sig.addPredicate("Q", {"S"});
    return sig;
}

// The formula under test plus the derived formulas that must agree with it.
struct Obligation {
    Formula subject;
    std::vector<std::pair<std::string, Formula>> equivalents;
    std::string structural;  // non-empty: failed before any model was checked
};

using Check = std::function<Obligation(const Formula&)>;

struct Suite {
    const char* name;
    Signature sig;
    GeneratorConfig gen;
    bool openInX;  // generate with x:S free; the check closes it
    Check check;
};

std::vector<Suite> suites() {
    std::vector<Suite> out;
    GeneratorConfig classical;
    classical.maxQuantifierDepth = 3;

    out.push_back({"epsilon-embedding", unaryBinary(), classical, false, [](const Formula& f) {
                       Obligation o{f, {}, {}};
                       Formula e = epsilonEmbed(f);
                       Formula t = epsilonEmbed(f, true);
                       if (!quantifierFree(e) || !quantifierFree(t)) o.structural = "embedding is not quantifier-free";
                       o.equivalents = {{"epsilon form", e}, {"tau form", t}};
                       return o;
                   }});

    GeneratorConfig shallow = classical;
    shallow.maxQuantifierDepth = 2;
    out.push_back({"epsilon-tau", unaryBinary(), shallow, true, [](const Formula& f) {
                       Variable x{"x", "S"};
                       Obligation o{Formula::truth(true), {}, {}};
                       Formula ex = Formula::quantifier(QuantifierKind::Exists, x, std::nullopt, f);
                       Formula all = Formula::quantifier(QuantifierKind::Forall, x, std::nullopt, f);
                       Formula viaEps = substitute(f, x, Term::binder(BinderKind::Epsilon, x, f));
                       Formula viaTau = substitute(f, x, Term::binder(BinderKind::Tau, x, f));
                       // compare both pairs through a conjunction of biconditionals
                       auto iff = [](const Formula& a, const Formula& b) {
                           return Formula::conjunction(Formula::implication(a, b), Formula::implication(b, a));
                       };
                       o.equivalents = {{"F(eps) iff exists", iff(viaEps, ex)}, {"F(tau) iff forall", iff(viaTau, all)}};
                       return o;
                   }});

    GeneratorConfig restricted = classical;
    restricted.restricted = true;
    out.push_back({"frege", twoUnary(), restricted, false, [](const Formula& f) {
                       Obligation o{f, {}, {}};
                       FregeResult r = fregeEmbed(f);
                       if (!r.reducible) o.structural = "first-order formula tagged not reducible";
                       o.equivalents = {{"restriction embedding", r.formula},
                                        {"embed after unembed", fregeEmbed(fregeUnembed(r.formula)).formula}};
                       return o;
                   }});

    GeneratorConfig general = restricted;
    general.generalized = true;
    out.push_back({"negation-normal-form", twoUnary(), general, false, [](const Formula& f) {
                       Obligation o{f, {}, {}};
                       Formula n = pushNegation(f);
                       if (!alphaEq(pushNegation(n), n)) o.structural = "normal form is not idempotent";
                       o.equivalents = {{"normal form", n}, {"negated twice", pushNegation(Formula::negation(
                                                                                  Formula::negation(f)))}};
                       return o;
                   }});

    GeneratorConfig conceptGen = classical;
    conceptGen.maxQuantifierDepth = 2;
    conceptGen.maxConnectives = 2;
    Signature unary;
    unary.addSort("S");
    unary.addPredicate("P", {"S"});
    out.push_back({"individual-concepts", unary, conceptGen, false, [](const Formula& f) {
                       Obligation o{f, {}, {}};
                       Formula lifted = liftToConcepts(f);
                       if (!alphaEq(liftToConcepts(lifted), lifted)) o.structural = "lifting is not idempotent";
                       o.equivalents = {{"lifted", lifted}};
                       if (f.is(Formula::Kind::Quantifier)) o.equivalents.push_back({"lowered", lowerFromConcepts(lifted)});
                       return o;
                   }});

    GeneratorConfig printable = general;
    printable.choiceTerms = true;
    out.push_back({"print-parse", twoUnary(), printable, false, [](const Formula& f) {
                       Obligation o{f, {}, {}};
                       std::string text = printFormula(f);
                       auto parsed = parseFormula(text, twoUnary());
                       if (!parsed) {
                           o.structural = "printed form does not parse: " + text;
                       } else if (!alphaEq(*parsed, f)) {
                           o.structural = "printed form parses differently: " + text;
                       }
                       return o;
                   }});
    return out;
}

SelftestCase runCase(const Suite& suite, std::size_t index, const Formula& f, std::size_t maxSize) {
    SelftestCase c;
    c.index = index;
    c.formula = f;
    try {
        Obligation o = suite.check(f);
        if (!o.structural.empty()) {
            c.ok = false;
            c.detail = o.structural;
            return c;
        }
        if (o.equivalents.empty()) return c;
        ModelSpace space = enumerateModels(suite.sig, maxSize);
        Environment env;
        space.forEach([&](const Model& m, std::uint64_t) {
            ++c.models;
            bool expected = evalFormula(m, env, o.subject);
            for (const auto& [label, g] : o.equivalents) {
                if (evalFormula(m, env, g) != expected) {
                    c.ok = false;
                    c.detail = label + " disagrees on\n" + printModel(m);
                    return false;
                }
            }
            return true;
        });
    } catch (const std::exception& e) {
        c.ok = false;
        c.detail = e.what();
    }
    return c;
}

}  // namespace

std::vector<std::string> selftestSuiteNames() {
    std::vector<std::string> names;
    for (const auto& s : suites()) names.push_back(s.name);
    return names;
}

std::vector<SuiteResult> runSelftest(const SelftestOptions& opts) {
    std::vector<Suite> all = suites();
    for (const auto& name : opts.suites) {
        if (std::none_of(all.begin(), all.end(), [&](const Suite& s) { return name == s.name; })) {
            throw std::invalid_argument("unknown selftest suite '" + name + "'");
        }
    }
    std::vector<SuiteResult> results;
    for (std::size_t si = 0; si < all.size(); ++si) {
        const Suite& suite = all[si];
        if (!opts.suites.empty() && std::find(opts.suites.begin(), opts.suites.end(), suite.name) == opts.suites.end()) {
            continue;
        }
        FormulaGenerator gen(suite.sig, suite.gen, opts.seed + 0x9E3779B97F4A7C15ULL * (si + 1));
        std::vector<Formula> formulas;
        for (std::size_t i = 0; i < opts.cases; ++i) {
            formulas.push_back(suite.openInX ? gen.open({Variable{"x", "S"}}) : gen.closed());
        }

        SuiteResult result{suite.name, std::vector<SelftestCase>(formulas.size())};
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (std::size_t i = next++; i < formulas.size(); i = next++) {
                result.cases[i] = runCase(suite, i, formulas[i], opts.maxModelSize);
            }
        };
        unsigned jobs = std::max(1u, std::min<unsigned>(opts.jobs, static_cast<unsigned>(formulas.size())));
        std::vector<std::thread> pool;
        for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
        worker();
        for (auto& t : pool) t.join();
        results.push_back(std::move(result));
    }
    return results;
}

}  // namespace epsk
