// Natural-deduction proof checking.
//
// Hypotheses are compared as sets up to alpha-equivalence. A premise may
// use any hypothesis of the conclusion (implicit weakening) plus the
// formula its rule discharges, if any.

#ifndef EPSK_KERNEL_HPP
#define EPSK_KERNEL_HPP

#include <optional>
#include <string>
#include <vector>

#include "epsk/measure.hpp"
#include "epsk/proof.hpp"
#include "epsk/syntax.hpp"

namespace epsk {

struct KernelConfig {
    StarRegime starRegime = StarRegime::B;
    /// Reading of a MOST written without > or >=.
    MajorityMode majorityMode = MajorityMode::Strict;
    /// Indefinites also assert their restriction of the chosen referent.
    bool epsilonPresupposition = false;
    /// MOST threshold the majority rules are justified for; they need >= 1/2.
    Rational threshold{1, 2};
    bool experimentalMostInst = false;
};

struct Failure {
    int line = 0;
    std::string rule;
    std::string condition;
    std::string message;
};

struct NodeRecord {
    int line = 0;
    std::string rule;
    bool ok = true;
    std::string reason;
};

struct Verdict {
    bool accepted = true;
    std::vector<Failure> failures;
    std::vector<NodeRecord> nodes;  // premises before conclusions
};

/// Checks every node of the tree. Generated trees (line 0) are numbered
/// in the order their records appear.
Verdict checkProof(const ProofTree& proof, const Signature& sig, const KernelConfig& cfg = {});

/// A term t with target alphaEq to pattern[hole := t], if one exists.
/// Returns nullopt also when hole does not occur free in pattern.
std::optional<Term> findInstance(const Formula& pattern, const Variable& hole, const Formula& target);

/// Matrix of a first-order quantifier: R -> A for forall, R and A for exists,
/// the bare body when unrestricted.
Formula quantifierMatrix(const Formula& quantified);

struct EquivalenceObligation {
    std::string predicate;
    Formula lhs;  // P(tau x. P(x)) or P(eps x. P(x))
    Formula rhs;  // forall x. P(x) or exists x. P(x)
    ProofRef forward;   // lhs |- rhs
    ProofRef backward;  // rhs |- lhs
};

/// Two obligations per unary predicate of `sig`.
std::vector<EquivalenceObligation> derivedEquivalences(const Signature& sig);

}  // namespace epsk

#endif  // EPSK_KERNEL_HPP
