// Sequents and natural-deduction proof trees.

#ifndef EPSK_PROOF_HPP
#define EPSK_PROOF_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "epsk/syntax.hpp"

namespace epsk {

struct Sequent {
    std::vector<Formula> hypotheses;
    Formula conclusion = Formula::truth(true);
};

enum class Rule {
    Hyp,
    AndI,
    AndE1,
    AndE2,
    OrI1,
    OrI2,
    OrE,
    ImpI,
    ImpE,
    NotI,
    NotE,
    Raa,
    FalseE,
    ForallI,
    ForallE,
    ExistsI,
    ExistsE,
    EpsIntro,
    TauIntro,
    EpsDual,
    TauDual,
    TauElim,
    StarWeaken,
    StarStrengthen,
    MajRefuteMinority,
    MajRefuteDisjoint,
    MostInst,
};

std::string ruleName(Rule r);
std::optional<Rule> parseRule(const std::string& name);
std::vector<Rule> allRules();
/// Number of premises the rule schema expects.
std::size_t ruleArity(Rule r);

/// Optional guidance attached to a proof line: `[x := t]` or `[eigen y]`.
struct Annotation {
    std::optional<std::string> instanceOf;  // x in `x := t`
    std::optional<Term> witness;            // t in `x := t`
    std::optional<std::string> eigenName;
    std::optional<SortName> eigenSort;

    bool empty() const { return !witness && !eigenName; }
};

struct ProofTree;
using ProofRef = std::shared_ptr<const ProofTree>;

struct ProofTree {
    int line = 0;  // script line label, 0 for generated trees
    Sequent sequent;
    Rule rule = Rule::Hyp;
    std::vector<ProofRef> premises;
    Annotation annotation;
};

ProofRef makeProof(Sequent s, Rule rule, std::vector<ProofRef> premises = {}, Annotation a = {});

/// Renders a tree in the numbered proof-script format, premises first.
/// Shared subtrees are emitted once.
std::string printProofScript(const ProofTree& root);

}  // namespace epsk

#endif  // EPSK_PROOF_HPP
