#include <gtest/gtest.h>

#include "epsk/enumerate.hpp"
#include "epsk/evaluator.hpp"
#include "epsk/generate.hpp"
#include "epsk/kernel.hpp"
#include "helpers.hpp"

using namespace epsk;

namespace {

Signature sig() {
    return testing_support::signature("sort S\nsort T\npred P : S\npred Q : S\npred R : S\npred U : T\nconst c : S\n");
}

Verdict check(const std::string& script, const KernelConfig& cfg = {}) {
    ProofScript s = testing_support::proof(script, sig());
    return checkProof(*s.root, sig(), cfg);
}

std::string reasons(const Verdict& v) {
    std::string out;
    for (const auto& f : v.failures) out += "line " + std::to_string(f.line) + " " + f.rule + ": " + f.message + "\n";
    return out;
}

std::string firstReason(const Verdict& v) { return v.failures.empty() ? "" : v.failures.front().message; }

// hypotheses entail the conclusion on every model up to `size`
bool validUpTo(const Sequent& s, const Signature& sg, std::size_t size, MeasureConfig cfg = {}) {
    bool ok = true;
    enumerateModels(sg, size, cfg).forEach([&](const Model& m, std::uint64_t) {
        for (const auto& h : s.hypotheses) {
            if (!holds(m, h)) return true;
        }
        ok = holds(m, s.conclusion);
        return ok;
    });
    return ok;
}

}  // namespace

TEST(Kernel, PropositionalRules) {
    EXPECT_TRUE(check("1. P(c), Q(c) |- P(c) ; hyp\n"
                      "2. P(c), Q(c) |- Q(c) ; hyp\n"
                      "3. P(c), Q(c) |- P(c) and Q(c) ; and-i(1, 2)\n"
                      "4. P(c), Q(c) |- Q(c) ; and-e2(3)\n"
                      "5. P(c), Q(c) |- Q(c) or R(c) ; or-i1(4)\n")
                    .accepted);
    EXPECT_TRUE(check("1. P(c) |- P(c) ; hyp\n"
                      "2. |- P(c) implies P(c) ; imp-i(1)\n")
                    .accepted);
    EXPECT_TRUE(check("1. P(c) implies Q(c), P(c) |- P(c) implies Q(c) ; hyp\n"
                      "2. P(c) implies Q(c), P(c) |- P(c) ; hyp\n"
                      "3. P(c) implies Q(c), P(c) |- Q(c) ; imp-e(1, 2)\n")
                    .accepted);
}

TEST(Kernel, OrEliminationDischargesCases) {
    Verdict v = check(
        "1. P(c) or Q(c) |- P(c) or Q(c) ; hyp\n"
        "2. P(c) or Q(c), P(c) |- P(c) ; hyp\n"
        "3. P(c) or Q(c), P(c) |- Q(c) or P(c) ; or-i2(2)\n"
        "4. P(c) or Q(c), Q(c) |- Q(c) ; hyp\n"
        "5. P(c) or Q(c), Q(c) |- Q(c) or P(c) ; or-i1(4)\n"
        "6. P(c) or Q(c) |- Q(c) or P(c) ; or-e(1, 3, 5)\n");
    EXPECT_TRUE(v.accepted) << reasons(v);
}

TEST(Kernel, NegationAndClassicalRules) {
    Verdict v = check(
        "1. not not P(c), not P(c) |- not P(c) ; hyp\n"
        "2. not not P(c), not P(c) |- not not P(c) ; hyp\n"
        "3. not not P(c), not P(c) |- false ; not-e(1, 2)\n"
        "4. not not P(c) |- P(c) ; raa(3)\n");
    EXPECT_TRUE(v.accepted) << reasons(v);
    EXPECT_TRUE(check("1. P(c), not P(c) |- P(c) ; hyp\n"
                      "2. P(c), not P(c) |- not P(c) ; hyp\n"
                      "3. P(c), not P(c) |- false ; not-e(1, 2)\n"
                      "4. P(c), not P(c) |- Q(c) ; false-e(3)\n"
                      "5. P(c) |- not not P(c) ; not-i(3)\n")
                    .accepted);
}

TEST(Kernel, HypothesesMustBeAvailable) {
    Verdict v = check(
        "1. P(c) |- P(c) ; hyp\n"
        "2. |- P(c) or Q(c) ; or-i1(1)\n");
    EXPECT_FALSE(v.accepted);
    EXPECT_NE(firstReason(v).find("not available"), std::string::npos) << reasons(v);
    EXPECT_FALSE(check("1. Q(c) |- P(c) ; hyp\n").accepted);
}

TEST(Kernel, QuantifierRules) {
    Verdict v = check(
        "1. forall x:S. P(x) |- forall x:S. P(x) ; hyp\n"
        "2. forall x:S. P(x) |- P(y:S) ; forall-e(1)\n"
        "3. forall x:S. P(x) |- forall z:S. P(z) ; forall-i(2) [eigen y]\n"
        "4. forall x:S. P(x) |- P(c) ; forall-e(1) [x := c]\n"
        "5. forall x:S. P(x) |- exists x:S. P(x) ; exists-i(4)\n");
    EXPECT_TRUE(v.accepted) << reasons(v);
}

TEST(Kernel, RestrictedQuantifierMatrices) {
    Verdict v = check(
        "1. forall x:S (P(x)). Q(x) |- forall x:S (P(x)). Q(x) ; hyp\n"
        "2. forall x:S (P(x)). Q(x) |- P(c) implies Q(c) ; forall-e(1)\n");
    EXPECT_TRUE(v.accepted) << reasons(v);
    EXPECT_TRUE(check("1. P(c) and Q(c) |- P(c) and Q(c) ; hyp\n"
                      "2. P(c) and Q(c) |- exists x:S (P(x)). Q(x) ; exists-i(1)\n")
                    .accepted);
}

TEST(Kernel, EigenvariableConditions) {
    Verdict inHyp = check(
        "1. P(y:S) |- P(y:S) ; hyp\n"
        "2. P(y:S) |- forall x:S. P(x) ; forall-i(1) [eigen y]\n");
    ASSERT_FALSE(inHyp.accepted);
    EXPECT_EQ(inHyp.failures[0].condition, "eigenvariable");
    EXPECT_NE(firstReason(inHyp).find("eigenvariable y must not occur free"), std::string::npos);

    Verdict inConclusion = check(
        "1. exists x:S. P(x) |- exists x:S. P(x) ; hyp\n"
        "2. exists x:S. P(x), P(y:S) |- P(y:S) ; hyp\n"
        "3. exists x:S. P(x) |- P(y:S) ; exists-e(1, 2) [eigen y]\n");
    EXPECT_FALSE(inConclusion.accepted);

    Verdict notVariable = check(
        "1. P(c) |- P(c) ; hyp\n"
        "2. P(c) |- forall x:S. P(x) ; forall-i(1)\n");
    EXPECT_FALSE(notVariable.accepted);
}

TEST(Kernel, ChoiceRules) {
    EXPECT_TRUE(check("1. P(c) |- P(c) ; hyp\n"
                      "2. P(c) |- P(eps x:S. P(x)) ; eps-intro(1)\n")
                    .accepted);
    // A(x) = not P(x): the tau body is not A(x)
    EXPECT_TRUE(check("1. not P(c) |- not P(c) ; hyp\n"
                      "2. not P(c) |- not P(tau x:S. not not P(x)) ; tau-dual(1)\n")
                    .accepted);
    Verdict dual = check(
        "1. P(c) |- P(c) ; hyp\n"
        "2. P(c) |- P(tau x:S. not P(x)) ; tau-dual(1)\n");
    EXPECT_TRUE(dual.accepted) << reasons(dual);
    EXPECT_FALSE(check("1. |- P(y:S) or not P(y:S) ; hyp\n").accepted);
    Verdict tauIntro = check(
        "1. forall x:S. P(x) |- forall x:S. P(x) ; hyp\n"
        "2. forall x:S. P(x) |- P(y:S) ; forall-e(1)\n"
        "3. forall x:S. P(x) |- P(tau z:S. P(z)) ; tau-intro(2) [eigen y]\n");
    EXPECT_TRUE(tauIntro.accepted) << reasons(tauIntro);
    Verdict epsDual = check(
        "1. forall x:S. P(x) |- forall x:S. P(x) ; hyp\n"
        "2. forall x:S. P(x) |- P(y:S) ; forall-e(1)\n"
        "3. forall x:S. P(x) |- P(eps z:S. not P(z)) ; eps-dual(2) [eigen y]\n");
    EXPECT_TRUE(epsDual.accepted) << reasons(epsDual);
}

TEST(Kernel, EpsIntroNeedsAnInstance) {
    Verdict v = check(
        "1. Q(c) |- Q(c) ; hyp\n"
        "2. Q(c) |- P(eps x:S. P(x)) ; eps-intro(1)\n");
    ASSERT_FALSE(v.accepted);
    EXPECT_EQ(v.failures[0].line, 2);
}

TEST(Kernel, StarRulesFollowTheRegime) {
    std::string weakenB =
        "1. forall x:S. P(x) |- forall x:S. P(x) ; hyp\n"
        "2. forall x:S. P(x) |- forall* x:S. P(x) ; star-weaken(1)\n";
    std::string strengthenB =
        "1. exists* x:S. P(x) |- exists* x:S. P(x) ; hyp\n"
        "2. exists* x:S. P(x) |- exists x:S. P(x) ; star-strengthen(1)\n";
    std::string weakenA =
        "1. exists x:S. P(x) |- exists x:S. P(x) ; hyp\n"
        "2. exists x:S. P(x) |- exists* x:S. P(x) ; star-weaken(1)\n";
    std::string strengthenA =
        "1. forall* x:S. P(x) |- forall* x:S. P(x) ; hyp\n"
        "2. forall* x:S. P(x) |- forall x:S. P(x) ; star-strengthen(1)\n";
    KernelConfig a;
    a.starRegime = StarRegime::A;
    EXPECT_TRUE(check(weakenB).accepted);
    EXPECT_TRUE(check(strengthenB).accepted);
    EXPECT_FALSE(check(weakenA).accepted);
    EXPECT_FALSE(check(strengthenA).accepted);
    EXPECT_TRUE(check(weakenA, a).accepted);
    EXPECT_TRUE(check(strengthenA, a).accepted);
    Verdict wrong = check(weakenB, a);
    ASSERT_FALSE(wrong.accepted);
    EXPECT_EQ(wrong.failures[0].condition, "regime");
}

// Every star step accepted under a regime is valid in that regime.
TEST(Kernel, StarRulesAreSoundForTheirRegime) {
    Signature s = testing_support::signature("sort S\npred P : S\npred Q : S\n");
    for (StarRegime regime : {StarRegime::A, StarRegime::B}) {
        KernelConfig kc;
        kc.starRegime = regime;
        MeasureConfig mc;
        mc.starRegime = regime;
        for (const char* restriction : {"", " (Q(x))"}) {
            for (const auto& [from, to, rule] : std::vector<std::tuple<std::string, std::string, std::string>>{
                     {"forall", "forall*", "star-weaken"},   {"exists*", "exists", "star-strengthen"},
                     {"exists", "exists*", "star-weaken"},   {"forall*", "forall", "star-strengthen"}}) {
                std::string p = from + " x:S" + restriction + ". P(x)";
                std::string q = to + " x:S" + restriction + ". P(x)";
                std::string script = "1. " + p + " |- " + p + " ; hyp\n2. " + p + " |- " + q + " ; " + rule + "(1)\n";
                ProofScript ps = testing_support::proof(script, s);
                if (checkProof(*ps.root, s, kc).accepted) {
                    EXPECT_TRUE(validUpTo(ps.root->sequent, s, 4, mc)) << script;
                }
            }
        }
    }
}

TEST(Kernel, MajorityRules) {
    Verdict minority = check(testing_support::readData("proofs/majority-minority.proof"));
    EXPECT_TRUE(minority.accepted) << reasons(minority);
    Verdict disjoint = check(testing_support::readData("proofs/majority-disjoint.proof"));
    EXPECT_TRUE(disjoint.accepted) << reasons(disjoint);

    std::string weakPremise =
        "1. most>= x:S (P(x)). not Q(x) |- most>= x:S (P(x)). not Q(x) ; hyp\n"
        "2. most>= x:S (P(x)). not Q(x) |- not most x:S (P(x)). Q(x) ; maj-refute-minority(1)\n";
    Verdict weak = check(weakPremise);
    ASSERT_FALSE(weak.accepted);
    EXPECT_EQ(weak.failures[0].condition, "majority");

    KernelConfig weakDefault;
    weakDefault.majorityMode = MajorityMode::Weak;
    EXPECT_FALSE(check(testing_support::readData("proofs/majority-minority.proof"), weakDefault).accepted);

    KernelConfig low;
    low.threshold = Rational(2, 5);
    Verdict lowThreshold = check(testing_support::readData("proofs/majority-minority.proof"), low);
    ASSERT_FALSE(lowThreshold.accepted);
    EXPECT_EQ(lowThreshold.failures[0].condition, "threshold");
}

TEST(Kernel, MostInstIsExperimental) {
    std::string script =
        "1. most x:S. P(x) |- most x:S. P(x) ; hyp\n"
        "2. most x:S. P(x) |- P(most[S]) ; most-inst(1)\n";
    Verdict off = check(script);
    ASSERT_FALSE(off.accepted);
    EXPECT_EQ(off.failures[0].condition, "experimental");
    KernelConfig on;
    on.experimentalMostInst = true;
    EXPECT_TRUE(check(script, on).accepted);
    EXPECT_TRUE(check("1. most x:S (Q(x)). P(x) |- most x:S (Q(x)). P(x) ; hyp\n"
                      "2. most x:S (Q(x)). P(x) |- P(most[x:S | Q(x)]) ; most-inst(1)\n",
                      on)
                    .accepted);
}

TEST(Kernel, PremiseCountIsChecked) {
    ProofScript s = testing_support::proof("1. P(c) |- P(c) ; hyp\n", sig());
    auto bad = makeProof(Sequent{{}, testing_support::formula("P(c) and P(c)", sig())}, Rule::AndI, {s.root});
    Verdict v = checkProof(*bad, sig());
    ASSERT_FALSE(v.accepted);
    EXPECT_EQ(v.failures[0].condition, "premise-count");
}

TEST(Kernel, IllSortedSequentsAreRejected) {
    Formula bad = Formula::atom("P", {Term::constant("d", "T")});
    auto proof = makeProof(Sequent{{bad}, bad}, Rule::Hyp);
    Verdict v = checkProof(*proof, sig());
    ASSERT_FALSE(v.accepted);
    EXPECT_EQ(v.failures[0].condition, "sort");
}

TEST(Kernel, FindInstance) {
    Signature s = sig();
    Variable x{"x", "S"};
    auto t = findInstance(testing_support::formula("P(x:S) and Q(x:S)", s), x,
                          testing_support::formula("P(eps y:S. Q(y)) and Q(eps z:S. Q(z))", s));
    ASSERT_TRUE(t.has_value());
    EXPECT_EQ(printTerm(*t), "eps y:S. Q(y)");
    EXPECT_FALSE(findInstance(testing_support::formula("P(x:S) and Q(x:S)", s), x,
                              testing_support::formula("P(c) and Q(y:S)", s))
                     .has_value());
}

TEST(Kernel, DerivedEquivalencesAreAcceptedAndValid) {
    Signature s = testing_support::signature("sort S\npred P : S\npred Q : S\nsort T\npred U : T\n");
    auto obligations = derivedEquivalences(s);
    ASSERT_EQ(obligations.size(), 6u);
    for (const auto& o : obligations) {
        for (const ProofRef& p : {o.forward, o.backward}) {
            Verdict v = checkProof(*p, s);
            EXPECT_TRUE(v.accepted) << o.predicate << "\n" << printProofScript(*p) << reasons(v);
        }
        EXPECT_TRUE(validUpTo(o.forward->sequent, s, 3));
        EXPECT_TRUE(validUpTo(o.backward->sequent, s, 3));
    }
}

TEST(Kernel, VerdictListsEveryNode) {
    Verdict v = check(testing_support::readData("proofs/exists-elim.proof"));
    EXPECT_TRUE(v.accepted) << reasons(v);
    ASSERT_EQ(v.nodes.size(), 4u);
    EXPECT_EQ(v.nodes.back().line, 4);
    EXPECT_EQ(v.nodes.back().rule, "exists-e");
}

// Renaming the eigenvariable of an accepted proof to a variable free in a
// hypothesis must be caught by the side condition.
TEST(KernelProperty, EigenvariableRenamedToHypothesisVariableIsRejected) {
    const std::string decls = "var w : S\nvar u : S\n";
    const std::vector<std::string> templates{
        "1. forall x:S. P(x) and Q(x), R(u) |- forall x:S. P(x) and Q(x) ; hyp\n"
        "2. forall x:S. P(x) and Q(x), R(u) |- P(@) and Q(@) ; forall-e(1) [x := @]\n"
        "3. forall x:S. P(x) and Q(x), R(u) |- P(@) ; and-e1(2)\n"
        "4. forall x:S. P(x) and Q(x), R(u) |- forall x:S. P(x) ; forall-i(3) [eigen @]\n",
        "1. exists x:S. P(x), R(u) |- exists x:S. P(x) ; hyp\n"
        "2. exists x:S. P(x), R(u), P(@) |- P(@) ; hyp\n"
        "3. exists x:S. P(x), R(u), P(@) |- P(@) or Q(@) ; or-i1(2)\n"
        "4. exists x:S. P(x), R(u), P(@) |- exists x:S. P(x) or Q(x) ; exists-i(3) [x := @]\n"
        "5. exists x:S. P(x), R(u) |- exists x:S. P(x) or Q(x) ; exists-e(1, 4) [eigen @]\n",
        "1. forall x:S. P(x), R(u) |- forall x:S. P(x) ; hyp\n"
        "2. forall x:S. P(x), R(u) |- P(@) ; forall-e(1) [x := @]\n"
        "3. forall x:S. P(x), R(u) |- P(tau x:S. P(x)) ; tau-intro(2) [eigen @]\n",
        "1. forall x:S. P(x), R(u) |- forall x:S. P(x) ; hyp\n"
        "2. forall x:S. P(x), R(u) |- P(@) ; forall-e(1) [x := @]\n"
        "3. forall x:S. P(x), R(u) |- P(eps x:S. not P(x)) ; eps-dual(2) [eigen @]\n",
        "1. P(tau x:S. P(x)), R(u) |- P(tau x:S. P(x)) ; hyp\n"
        "2. P(tau x:S. P(x)), R(u) |- P(@) ; tau-elim(1) [x := @]\n"
        "3. P(tau x:S. P(x)), R(u) |- forall x:S. P(x) ; forall-i(2) [eigen @]\n",
    };
    auto instantiate = [&](std::string text, const std::string& name) {
        for (auto at = text.find('@'); at != std::string::npos; at = text.find('@')) text.replace(at, 1, name);
        return decls + text;
    };
    for (const auto& t : templates) {
        Verdict fresh = check(instantiate(t, "w"));
        EXPECT_TRUE(fresh.accepted) << t << reasons(fresh);
        Verdict clash = check(instantiate(t, "u"));
        ASSERT_FALSE(clash.accepted) << t;
        EXPECT_EQ(clash.failures.back().condition, "eigenvariable") << reasons(clash);
    }
}

namespace {

// De Morgan dual of a quantified formula: Q x. A becomes Q' x. not A.
Formula dualize(const Formula& f) {
    using QK = QuantifierKind;
    QK dual = QK::Forall;
    switch (f.quantifierKind()) {
        case QK::Forall: dual = QK::Exists; break;
        case QK::ForallStar: dual = QK::ExistsStar; break;
        case QK::ExistsStar: dual = QK::ForallStar; break;
        default: break;
    }
    return Formula::quantifier(dual, f.bound(), f.restriction(), Formula::negation(f.body()));
}

ProofRef dualize(const ProofTree& p) {
    Sequent s;
    for (const auto& h : p.sequent.hypotheses) s.hypotheses.push_back(dualize(h));
    s.conclusion = dualize(p.sequent.conclusion);
    std::vector<ProofRef> premises;
    for (const auto& q : p.premises) premises.push_back(dualize(*q));
    return makeProof(s, p.rule, premises, p.annotation);
}

}  // namespace

// Each regime B star step, dualized, is an accepted and valid regime A step.
TEST(KernelProperty, RegimeBStarStepsMirrorIntoRegimeA) {
    Signature s = testing_support::signature("sort S\npred P : S\npred Q : S\n");
    GeneratorConfig gc;
    gc.maxQuantifierDepth = 1;
    gc.maxConnectives = 2;
    FormulaGenerator gen(s, gc, 53);
    KernelConfig regimeA;
    regimeA.starRegime = StarRegime::A;
    MeasureConfig measureA;
    measureA.starRegime = StarRegime::A;
    Variable x{"x", "S"};
    using QK = QuantifierKind;
    for (int i = 0; i < 24; ++i) {
        Formula body = gen.open({x});
        std::optional<Formula> restriction;
        if (i % 2) restriction = gen.open({x});
        auto q = [&](QK k) { return Formula::quantifier(k, x, restriction, body); };
        auto step = [](const Formula& from, const Formula& to, Rule rule) {
            ProofRef h = makeProof(Sequent{{from}, from}, Rule::Hyp);
            return makeProof(Sequent{{from}, to}, rule, {h});
        };
        for (const ProofRef& proof : {step(q(QK::Forall), q(QK::ForallStar), Rule::StarWeaken),
                                      step(q(QK::ExistsStar), q(QK::Exists), Rule::StarStrengthen)}) {
            ASSERT_TRUE(checkProof(*proof, s).accepted) << printProofScript(*proof);
            ProofRef mirror = dualize(*proof);
            Verdict va = checkProof(*mirror, s, regimeA);
            EXPECT_TRUE(va.accepted) << printProofScript(*mirror) << reasons(va);
            EXPECT_FALSE(checkProof(*mirror, s).accepted) << printProofScript(*mirror);
            EXPECT_TRUE(validUpTo(mirror->sequent, s, 4, measureA)) << printProofScript(*mirror);
        }
    }
}
