#include <gtest/gtest.h>

#include "epsk/enumerate.hpp"
#include "epsk/evaluator.hpp"
#include "epsk/generate.hpp"
#include "helpers.hpp"
#include "sieve.hpp"

using namespace epsk;
using testing_support::formula;

namespace {

Model small() {
    return testing_support::model(
        "sort S = {a, b, c}\npred P : S = {b, c}\npred Q : S = {c}\npred E : S = {}\nconst k : S = a\n");
}

std::string chosen(const Model& m, const std::string& termText) {
    Term t = testing_support::term(termText, m.signature());
    return m.elementName(t.sort(), evalTerm(m, {}, t));
}

bool truth(const Model& m, const std::string& text) { return holds(m, formula(text, m.signature())); }

}  // namespace

TEST(Evaluator, EpsilonPicksLeastSatisfier) {
    Model m = small();
    EXPECT_EQ(chosen(m, "eps x:S. P(x)"), "b");
    EXPECT_EQ(chosen(m, "eps x:S. E(x)"), "a");  // no satisfier: least element
}

TEST(Evaluator, TauPicksLeastFalsifier) {
    Model m = small();
    EXPECT_EQ(chosen(m, "tau x:S. P(x)"), "a");
    EXPECT_EQ(chosen(m, "tau x:S. not E(x)"), "a");  // no falsifier: least element
    EXPECT_EQ(chosen(m, "tau x:S. not Q(x)"), "c");
}

TEST(Evaluator, IotaFlagsMissingUniqueness) {
    Model m = small();
    Term unique = testing_support::term("iota x:S. Q(x)", m.signature());
    EvalFlags flags;
    EXPECT_EQ(m.elementName("S", evalTerm(m, {}, unique, &flags)), "c");
    EXPECT_FALSE(flags.undetermined);

    Term ambiguous = testing_support::term("iota x:S. P(x)", m.signature());
    EvalFlags more;
    EXPECT_EQ(m.elementName("S", evalTerm(m, {}, ambiguous, &more)), "a");
    EXPECT_TRUE(more.undetermined);
}

TEST(Evaluator, EtaSkipsExcludedReferents) {
    Model m = small();
    Term t = testing_support::term("eta x:S. P(x)", m.signature());
    Environment env;
    EXPECT_EQ(m.elementName("S", evalTerm(m, env, t)), "b");
    env.etaExcluded["S"] = {1};
    EXPECT_EQ(m.elementName("S", evalTerm(m, env, t)), "c");
    env.etaExcluded["S"] = {1, 2};
    EXPECT_EQ(m.elementName("S", evalTerm(m, env, t)), "b");  // every satisfier used: first satisfier
}

TEST(Evaluator, ConnectivesAndQuantifiers) {
    Model m = small();
    EXPECT_TRUE(truth(m, "exists x:S. P(x) and not Q(x)"));
    EXPECT_FALSE(truth(m, "forall x:S. P(x)"));
    EXPECT_TRUE(truth(m, "forall x:S (Q(x)). P(x)"));
    EXPECT_TRUE(truth(m, "exists x:S (P(x)). Q(x)"));
    EXPECT_TRUE(truth(m, "P(k) implies false"));
    EXPECT_TRUE(truth(m, "k = eps x:S. E(x)"));
}

TEST(Evaluator, RecordsWitnesses) {
    Model m = small();
    EvalRecord r = evaluate(m, {}, formula("P(eps x:S. P(x))", m.signature()));
    EXPECT_TRUE(r.value);
    ASSERT_EQ(r.witnesses.size(), 1u);
    EXPECT_EQ(r.witnesses[0].elementName, "b");
}

TEST(Evaluator, MostUsesThresholdAndMode) {
    Model m = small();  // P covers 2 of 3
    EXPECT_TRUE(truth(m, "most x:S. P(x)"));
    EXPECT_FALSE(truth(m, "most x:S. Q(x)"));
    m.config().mostThreshold = Rational(2, 3);
    EXPECT_FALSE(truth(m, "most x:S. P(x)"));
    EXPECT_TRUE(truth(m, "most>= x:S. P(x)"));
    m.config().majorityMode = MajorityMode::Weak;
    EXPECT_TRUE(truth(m, "most x:S. P(x)"));
}

TEST(Evaluator, ManyHasItsOwnThreshold) {
    Model m = small();  // Q covers 1 of 3, below 2/5
    EXPECT_FALSE(truth(m, "many x:S. Q(x)"));
    m.config().manyThreshold = Rational(1, 4);
    EXPECT_TRUE(truth(m, "many x:S. Q(x)"));
}

TEST(Evaluator, EmptyRestrictionIsFalseAndFlagged) {
    Model m = small();
    EvalRecord r = evaluate(m, {}, formula("most x:S (E(x)). P(x)", m.signature()));
    EXPECT_FALSE(r.value);
    EXPECT_TRUE(r.flags.emptyRestriction);
}

TEST(Evaluator, StarQuantifiersUnderRegimeB) {
    Model m = small();
    EXPECT_TRUE(truth(m, "forall* x:S (E(x)). P(x)"));   // empty restriction
    EXPECT_FALSE(truth(m, "exists* x:S (E(x)). P(x)"));
    EXPECT_TRUE(truth(m, "forall* x:S. P(x)"));          // 2/3 above 1/2
    EXPECT_FALSE(truth(m, "forall x:S. P(x)"));
    EXPECT_FALSE(truth(m, "exists* x:S. Q(x)"));         // 2/3 are not Q
    EXPECT_TRUE(truth(m, "exists* x:S. P(x)"));          // only 1/3 are not P
    EXPECT_TRUE(truth(m, "exists x:S. P(x)"));
}

TEST(Evaluator, StarQuantifiersUnderRegimeAAreClassical) {
    Model m = small();
    m.config().starRegime = StarRegime::A;
    EXPECT_FALSE(truth(m, "forall* x:S. P(x)"));
    EXPECT_TRUE(truth(m, "exists* x:S. P(x)"));
}

TEST(Evaluator, StarDualityHoldsOnAllSmallModels) {
    Signature s = testing_support::signature("sort S\npred A : S\npred B : S\n");
    Formula lhs = formula("exists* x:S (A(x)). B(x)", s);
    Formula rhs = formula("not forall* x:S (A(x)). not B(x)", s);
    for (StarRegime regime : {StarRegime::A, StarRegime::B}) {
        MeasureConfig cfg;
        cfg.starRegime = regime;
        enumerateModels(s, 4, cfg).forEach([&](const Model& m, std::uint64_t) {
            EXPECT_EQ(holds(m, lhs), holds(m, rhs)) << printModel(m);
            return true;
        });
    }
}

TEST(Evaluator, GenericAtomsReadAsMost) {
    Model m = small();
    EXPECT_EQ(truth(m, "P(most[S])"), truth(m, "most x:S. P(x)"));
    EXPECT_EQ(truth(m, "Q(most[x:S | P(x)])"), truth(m, "most x:S (P(x)). Q(x)"));
    EvalRecord r = evaluate(m, {}, formula("P(most[x:S | E(x)])", m.signature()));
    EXPECT_FALSE(r.value);
}

TEST(Evaluator, SecondOrderQuantifiers) {
    Model m = small();
    EXPECT_TRUE(truth(m, "forall2 X:S. X(k) or not X(k)"));
    EXPECT_TRUE(truth(m, "exists2 X:S. forall x:S. X(x) implies P(x)"));
    EXPECT_FALSE(truth(m, "forall2 X:S. exists x:S. X(x)"));  // the empty set
}

TEST(Evaluator, FreeVariablesNeedBindings) {
    Model m = small();
    Formula f = formula("P(x:S)", m.signature());
    EXPECT_THROW(holds(m, f), EvalError);
    Environment env;
    env.individuals[Variable{"x", "S"}] = 2;
    EXPECT_TRUE(evalFormula(m, env, f));
}

TEST(Evaluator, MostCounterexampleFixture) {
    Model m = testing_support::model(testing_support::readData("models/most_counterexample.model"));
    EXPECT_FALSE(truth(m, "most x:ALL (student(x)). goesOut(x)"));
    EXPECT_TRUE(truth(m, "most x:ALL. student(x) implies goesOut(x)"));
}

// The density measure agrees with a sieve on every bound tried.
TEST(Evaluator, DensityMatchesSieve) {
    Model m = testing_support::model(testing_support::readData("models/density.model"));
    Formula f = formula("most n:N. not prime(n)", m.signature());
    for (std::size_t n : {1u, 2u, 10u, 97u, 100u, 1000u, 4096u, 10000u}) {
        m.setDensityBound("N", n);
        EvalRecord r = evaluate(m, {}, f);
        ASSERT_EQ(r.measures.size(), 1u);
        EXPECT_EQ(r.measures[0].whole, n);
        EXPECT_EQ(r.measures[0].part, n - oracle::primeCount(n)) << "N = " << n;
    }
}

TEST(Evaluator, BuiltinsOnTheIntegerSort) {
    Model m = testing_support::model(testing_support::readData("models/density.model"));
    m.setDensityBound("N", 10);
    EvalRecord r = evaluate(m, {}, formula("most>= n:N. even(n)", m.signature()));
    EXPECT_TRUE(r.value);  // exactly 5 of 10
    EXPECT_FALSE(truth(m, "most n:N. even(n)"));
}

// Reused choice values give the same answers as fresh evaluation (the recording path never reuses).
TEST(EvaluatorProperty, ChoiceReuseIsTransparent) {
    Signature s = testing_support::signature("sort S\npred P : S\npred R : S, S\nconst c : S\n");
    GeneratorConfig cfg;
    cfg.choiceTerms = true;
    cfg.generalized = true;
    cfg.restricted = true;
    FormulaGenerator gen(s, cfg, 17);
    std::vector<Formula> formulas;
    for (int i = 0; i < 40; ++i) formulas.push_back(gen.closed());
    enumerateModels(s, 2).forEach([&](const Model& m, std::uint64_t) {
        for (const auto& f : formulas) {
            EvalRecord r = evaluate(m, {}, f);
            EvalFlags flags;
            EXPECT_EQ(evalFormula(m, {}, f, &flags), r.value) << printFormula(f) << "\n" << printModel(m);
            EXPECT_EQ(flags.names(), r.flags.names()) << printFormula(f);
        }
        return true;
    });
}

namespace {

Variable vx{"x", "S"};

std::vector<Formula> openInX(const Signature& s, std::uint64_t seed, int count, bool choiceTerms = false) {
    GeneratorConfig cfg;
    cfg.maxQuantifierDepth = 1;
    cfg.maxConnectives = 2;
    cfg.restricted = true;
    cfg.choiceTerms = choiceTerms;
    FormulaGenerator gen(s, cfg, seed);
    std::vector<Formula> out;
    for (int i = 0; i < count; ++i) out.push_back(gen.open({vx}));
    return out;
}

}  // namespace

TEST(EvaluatorProperty, TauIsEpsilonOfTheNegation) {
    Signature s = testing_support::signature("sort S\npred P : S\npred R : S, S\nconst c : S\n");
    auto formulas = openInX(s, 41, 40, true);
    enumerateModels(s, 3).forEach([&](const Model& m, std::uint64_t) {
        for (const auto& f : formulas) {
            Element tau = evalTerm(m, {}, Term::binder(BinderKind::Tau, vx, f));
            Element eps = evalTerm(m, {}, Term::binder(BinderKind::Epsilon, vx, Formula::negation(f)));
            EXPECT_EQ(tau, eps) << printFormula(f) << "\n" << printModel(m);
        }
        return true;
    });
}

TEST(EvaluatorProperty, MostIsConservative) {
    Signature s = testing_support::signature("sort S\npred P : S\npred Q : S\npred R : S\n");
    auto restrictions = openInX(s, 43, 6);
    auto bodies = openInX(s, 44, 6);
    for (MajorityMode mode : {MajorityMode::Strict, MajorityMode::Weak}) {
        MeasureConfig cfg;
        cfg.majorityMode = mode;
        enumerateModels(s, 4, cfg).forEach([&](const Model& m, std::uint64_t) {
            for (const auto& r : restrictions) {
                for (const auto& f : bodies) {
                    Formula plain = Formula::quantifier(QuantifierKind::Most, vx, r, f);
                    Formula guarded = Formula::quantifier(QuantifierKind::Most, vx, r, Formula::conjunction(r, f));
                    if (holds(m, plain) != holds(m, guarded)) {
                        ADD_FAILURE() << printFormula(plain) << "\n" << printModel(m);
                        return false;
                    }
                }
            }
            return true;
        });
    }
}

TEST(EvaluatorProperty, NegatedUniversalsAreExistentialsOfNegations) {
    Signature s = testing_support::signature("sort S\npred P : S\npred Q : S\n");
    auto formulas = openInX(s, 45, 20);
    using QK = QuantifierKind;
    for (StarRegime regime : {StarRegime::A, StarRegime::B}) {
        MeasureConfig cfg;
        cfg.starRegime = regime;
        enumerateModels(s, 4, cfg).forEach([&](const Model& m, std::uint64_t) {
            for (const auto& f : formulas) {
                for (auto [all, some] : {std::pair{QK::Forall, QK::Exists}, std::pair{QK::ForallStar, QK::ExistsStar}}) {
                    Formula lhs = Formula::negation(Formula::quantifier(all, vx, std::nullopt, f));
                    Formula rhs = Formula::quantifier(some, vx, std::nullopt, Formula::negation(f));
                    if (holds(m, lhs) != holds(m, rhs)) {
                        ADD_FAILURE() << printFormula(lhs) << "\n" << printModel(m);
                        return false;
                    }
                }
            }
            return true;
        });
    }
}

// Substituting a choice-free term agrees with binding the variable to its value.
TEST(EvaluatorProperty, SubstitutionLemma) {
    Signature s = testing_support::signature("sort S\npred P : S\npred Q : S\nconst c : S\nfunc f : S -> S\n");
    Variable vy{"y", "S"};
    GeneratorConfig cfg;
    cfg.maxQuantifierDepth = 2;
    cfg.restricted = true;
    FormulaGenerator gen(s, cfg, 47);
    std::vector<Formula> formulas;
    for (int i = 0; i < 40; ++i) formulas.push_back(gen.open({vx, vy}));
    std::vector<Term> terms{Term::variable(vy), Term::constant("c", "S"), testing_support::term("f(y:S)", s),
                            testing_support::term("f(f(c))", s)};
    enumerateModels(s, 3).forEach([&](const Model& m, std::uint64_t) {
        for (Element y = 0; y < m.domainSize("S"); ++y) {
            Environment env;  // x is replaced on one side and rebound on the other
            env.individuals[vy] = y;
            env.individuals[vx] = 0;
            for (const auto& t : terms) {
                Environment bound = env;
                bound.individuals[vx] = evalTerm(m, env, t);
                for (const auto& f : formulas) {
                    if (evalFormula(m, env, substitute(f, vx, t)) != evalFormula(m, bound, f)) {
                        ADD_FAILURE() << printFormula(f) << " [x := " << printTerm(t) << "]\n" << printModel(m);
                        return false;
                    }
                }
            }
        }
        return true;
    });
}

TEST(EvaluatorProperty, IotaAgreesWithEpsilonWhenUnique) {
    Signature s = testing_support::signature("sort S\npred P : S\npred R : S, S\nconst c : S\n");
    auto formulas = openInX(s, 49, 40);
    std::size_t unique = 0;
    enumerateModels(s, 3).forEach([&](const Model& m, std::uint64_t) {
        for (const auto& f : formulas) {
            std::size_t satisfiers = 0;
            for (Element e = 0; e < m.domainSize("S"); ++e) {
                Environment env;
                env.individuals[vx] = e;
                satisfiers += evalFormula(m, env, f);
            }
            if (satisfiers != 1) continue;
            ++unique;
            EvalFlags flags;
            Element iota = evalTerm(m, {}, Term::binder(BinderKind::Iota, vx, f), &flags);
            EXPECT_EQ(iota, evalTerm(m, {}, Term::binder(BinderKind::Epsilon, vx, f))) << printFormula(f);
            EXPECT_FALSE(flags.undetermined);
        }
        return true;
    });
    EXPECT_GT(unique, 0u);
}
