#include <gtest/gtest.h>

#include <random>

#include "epsk/generate.hpp"
#include "epsk/parser.hpp"
#include "epsk/print.hpp"
#include "epsk/semantics.hpp"
#include "helpers.hpp"

using namespace epsk;
using testing_support::formula;

namespace {

Signature sig() {
    return testing_support::signature(
        "sort S\nsort T\npred P : S\npred Q : S\npred R : S, T\npred U : T\nconst c : S\nconst d : T\n"
        "func f : S -> T\n");
}

bool hasMessage(const std::vector<Diagnostic>& ds, const std::string& needle) {
    for (const auto& d : ds) {
        if (d.message.find(needle) != std::string::npos) return true;
    }
    return false;
}

}  // namespace

TEST(Parser, PrecedenceAndAssociativity) {
    Formula f = formula("P(c) and Q(c) or not P(c) implies Q(c) implies P(c)", sig());
    ASSERT_TRUE(f.is(Formula::Kind::Implies));
    EXPECT_TRUE(f.lhs().is(Formula::Kind::Or));
    EXPECT_TRUE(f.lhs().lhs().is(Formula::Kind::And));
    EXPECT_TRUE(f.rhs().is(Formula::Kind::Implies));  // right associative
}

TEST(Parser, QuantifierBodyExtendsRight) {
    Formula f = formula("forall x:S. P(x) and Q(x)", sig());
    ASSERT_TRUE(f.is(Formula::Kind::Quantifier));
    EXPECT_TRUE(f.body().is(Formula::Kind::And));
}

TEST(Parser, GeneralizedQuantifiersAndModes) {
    Formula strict = formula("most> x:S (P(x)). Q(x)", sig());
    ASSERT_TRUE(strict.majority().has_value());
    EXPECT_EQ(*strict.majority(), MajorityMode::Strict);
    EXPECT_EQ(*formula("most>= x:S. Q(x)", sig()).majority(), MajorityMode::Weak);
    EXPECT_FALSE(formula("most x:S. Q(x)", sig()).majority().has_value());
    EXPECT_EQ(formula("forall* x:S. Q(x)", sig()).quantifierKind(), QuantifierKind::ForallStar);
    EXPECT_EQ(formula("exists* x:S. Q(x)", sig()).quantifierKind(), QuantifierKind::ExistsStar);
    EXPECT_EQ(formula("many x:S. Q(x)", sig()).quantifierKind(), QuantifierKind::Many);
}

TEST(Parser, TermsAndBinders) {
    Formula f = formula("U(f(eps x:S. P(x))) and P(iota y:S. Q(y)) and P(eta z:S. P(z)) and P(tau w:S. Q(w))", sig());
    EXPECT_TRUE(freeVars(f).empty());
    Formula g = formula("P(most[S]) and U(many[x:T | U(x)])", sig());
    EXPECT_EQ(g.lhs().terms()[0].kind(), Term::Kind::Generic);
}

TEST(Parser, SecondOrderQuantifiers) {
    Formula f = formula("forall2 X:S. exists x:S. X(x) or not X(c)", sig());
    EXPECT_TRUE(f.is(Formula::Kind::SecondOrder));
    EXPECT_TRUE(freePredicateVars(f).empty());
}

TEST(Parser, EqualityBetweenTerms) {
    Formula f = formula("f(c) = d and (c = c)", sig());
    EXPECT_TRUE(f.lhs().is(Formula::Kind::Equal));
    EXPECT_TRUE(f.rhs().is(Formula::Kind::Equal));
}

TEST(Parser, DiagnosticsCarryPositions) {
    auto r = parseFormula("P(c) and\n  Q(", sig());
    ASSERT_FALSE(r.ok());
    ASSERT_FALSE(r.diagnostics.empty());
    EXPECT_EQ(r.diagnostics[0].span.line, 2u);
    EXPECT_NE(formatDiagnostic(r.diagnostics[0], "f.txt").find("f.txt:2:"), std::string::npos);
}

TEST(Parser, SortErrorsAreDiagnostics) {
    auto r = parseFormula("P(d)", sig());
    EXPECT_FALSE(r.ok());
    auto u = parseFormula("Nope(c)", sig());
    EXPECT_FALSE(u.ok());
    auto v = parseFormula("forall x:Missing. P(x)", sig());
    EXPECT_FALSE(v.ok());
}

TEST(Parser, UnsortedVariableNeedsAnnotation) {
    Signature two = sig();
    auto r = parseFormula("x = x", two);
    EXPECT_FALSE(r.ok());
    EXPECT_TRUE(hasMessage(r.diagnostics, "write x:S"));
}

TEST(Parser, InferredSignature) {
    ParseOptions opts;
    opts.inferSignature = true;
    Signature extended;
    auto r = parseFormula("forall x:S. Dog(x) implies Barks(x)", Signature{}, opts, &extended);
    ASSERT_TRUE(r.ok()) << testing_support::joinDiagnostics(r.diagnostics);
    ASSERT_NE(extended.predicate("Dog"), nullptr);
    EXPECT_EQ(*extended.predicate("Dog"), std::vector<SortName>{"S"});
}

TEST(Parser, SignatureFiles) {
    auto r = parseSignature("sort S; sort T\npred R : S, T\nfunc g : S, S -> T\nvar x : S\n# comment\n");
    ASSERT_TRUE(r.ok()) << testing_support::joinDiagnostics(r.diagnostics);
    EXPECT_EQ(r->sorts().size(), 2u);
    EXPECT_NE(r->function("g"), nullptr);
    EXPECT_EQ(*r->variableSort("x"), "S");
    auto bad = parseSignature("pred R : Missing\n");
    EXPECT_FALSE(bad.ok());
}

TEST(Parser, ModelFilesRoundTrip) {
    std::string text =
        "sort S = {a, b, c}\nsort T = {t}\npred P : S = {a, c}\npred R : S, T = {(b, t)}\nconst k : S = b\n"
        "func f : S -> T = {a -> t, b -> t, c -> t}\nthreshold most = 3/5\nmode majority = weak\nregime star = A\n";
    Model m = testing_support::model(text);
    EXPECT_EQ(m.domainSize("S"), 3u);
    EXPECT_EQ(m.config().mostThreshold, Rational(3, 5));
    EXPECT_EQ(m.config().majorityMode, MajorityMode::Weak);
    EXPECT_EQ(m.config().starRegime, StarRegime::A);
    Model again = testing_support::model(printModel(m));
    EXPECT_EQ(printModel(again), printModel(m));
}

TEST(Parser, ModelFileErrors) {
    EXPECT_FALSE(parseModel("sort S = {a}\npred P : S = {b}\n").ok());
    EXPECT_FALSE(parseModel("sort S = {a, b}\nfunc f : S -> S = {a -> b}\n").ok());  // partial
    EXPECT_FALSE(parseModel("integer N\n").ok());                                   // no density
    EXPECT_FALSE(parseModel("sort S = {a}\nthreshold most = 1\n").ok());
    EXPECT_FALSE(parseModel("integer N\nmeasure N = density(10)\npred P : N = {1}\n").ok());
}

TEST(Parser, ProofScripts) {
    std::string text =
        "1. P(c) |- P(c) ; hyp\n"
        "2. P(c) |- exists x:S. P(x) ; exists-i(1) [x := c]\n";
    ProofScript s = testing_support::proof(text, sig());
    EXPECT_EQ(s.root->rule, Rule::ExistsI);
    ASSERT_EQ(s.root->premises.size(), 1u);
    EXPECT_TRUE(s.root->annotation.witness.has_value());
    // printing and reparsing preserves the tree
    ProofScript again = testing_support::proof(printProofScript(*s.root), sig());
    EXPECT_EQ(printProofScript(*again.root), printProofScript(*s.root));
}

TEST(Parser, ProofScriptErrors) {
    auto undefinedLine = parseProofScript("1. P(c) |- P(c) ; and-e1(7)\n", sig());
    EXPECT_FALSE(undefinedLine.ok());
    EXPECT_TRUE(hasMessage(undefinedLine.diagnostics, "undefined line"));

    auto duplicate = parseProofScript("1. P(c) |- P(c) ; hyp\n1. P(c) |- P(c) ; hyp\n", sig());
    EXPECT_FALSE(duplicate.ok());

    auto unknownRule = parseProofScript("1. P(c) |- P(c) ; magic\n", sig());
    EXPECT_FALSE(unknownRule.ok());

    auto unused = parseProofScript("1. Q(c) |- Q(c) ; hyp\n2. P(c) |- P(c) ; hyp\n", sig());
    ASSERT_TRUE(unused.ok());
    EXPECT_TRUE(hasMessage(unused.diagnostics, "not used"));
}

TEST(Parser, CorpusScriptsParse) {
    Signature base = testing_support::signature(testing_support::readData("signatures/unary.sig"));
    for (const char* name : {"exists-intro", "bad-eigenvariable", "eps-intro", "forall-to-star", "star-to-forall",
                             "majority-minority", "majority-disjoint", "tau-forall", "exists-elim"}) {
        auto r = parseProofScript(testing_support::readData(std::string("proofs/") + name + ".proof"), base);
        EXPECT_TRUE(r.ok()) << name << "\n" << testing_support::joinDiagnostics(r.diagnostics);
    }
}

// Printing then parsing yields an alpha-equivalent formula.
TEST(ParserProperty, PrintParseRoundTrip) {
    Signature s = sig();
    GeneratorConfig cfg;
    cfg.restricted = true;
    cfg.generalized = true;
    cfg.choiceTerms = true;
    cfg.maxConnectives = 4;
    FormulaGenerator gen(s, cfg, 2024);
    for (int i = 0; i < 400; ++i) {
        Formula f = gen.closed();
        std::string text = printFormula(f);
        auto r = parseFormula(text, s);
        ASSERT_TRUE(r.ok()) << text << "\n" << testing_support::joinDiagnostics(r.diagnostics);
        ASSERT_TRUE(alphaEq(*r, f)) << text << "\nreparsed as " << printFormula(*r);
    }
}

TEST(ParserProperty, DeepNestingIsRejectedNotCrashing) {
    std::string deep;
    for (int i = 0; i < 5000; ++i) deep += "not ";
    deep += "P(c)";
    auto r = parseFormula(deep, sig());
    EXPECT_FALSE(r.ok());
}

namespace {

template <typename Result>
void expectLocatedRejection(const Result& r, const std::string& text, const char* what) {
    if (r.ok()) return;
    ASSERT_FALSE(r.diagnostics.empty()) << what << ": " << text;
    for (const auto& d : r.diagnostics) {
        EXPECT_LE(d.span.start, d.span.end) << what << ": " << text;
        EXPECT_LE(d.span.end, text.size()) << what << ": " << text;
        EXPECT_GE(d.span.line, 1u);
        EXPECT_GE(d.span.column, 1u);
    }
}

}  // namespace

// Random bytes and damaged corpus inputs never escape as exceptions, and every
// rejection points somewhere inside the input.
TEST(ParserProperty, ArbitraryInputIsDiagnosedNotThrown) {
    Signature s = sig();
    std::vector<std::string> seeds{
        "forall x:S (P(x)). exists y:T. R(x, y) and not U(f(eps z:S. Q(z)))",
        "most> x:S (P(x)). Q(x) implies forall* y:T. U(y)",
        testing_support::readData("models/most_counterexample.model"),
        testing_support::readData("proofs/exists-elim.proof"),
        testing_support::readData("signatures/unary.sig"),
        testing_support::readData("lexicon/fragment.lex"),
    };
    const std::string alphabet = "()[]{}.,:;|=<>*#-+ \n\tabcdefxyzPQRSTU0123456789";
    std::mt19937_64 rng(31);
    auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
    for (int i = 0; i < 3000; ++i) {
        std::string text;
        if (i % 3 == 0) {
            std::size_t n = pick(60);
            for (std::size_t k = 0; k < n; ++k) text += static_cast<char>(pick(256));
        } else {
            text = seeds[pick(seeds.size())];
            for (std::size_t edits = 1 + pick(4); edits > 0 && !text.empty(); --edits) {
                std::size_t at = pick(text.size());
                switch (pick(3)) {
                    case 0: text.erase(at, 1 + pick(5)); break;
                    case 1: text.insert(at, 1, alphabet[pick(alphabet.size())]); break;
                    default: text[at] = alphabet[pick(alphabet.size())]; break;
                }
            }
        }
        ASSERT_NO_THROW({
            expectLocatedRejection(parseFormula(text, s), text, "formula");
            expectLocatedRejection(parseTerm(text, s), text, "term");
            expectLocatedRejection(parseSignature(text), text, "signature");
            expectLocatedRejection(parseModel(text), text, "model");
            expectLocatedRejection(parseProofScript(text, s), text, "proof");
            expectLocatedRejection(parseLexicon(text), text, "lexicon");
        }) << text;
    }
}
