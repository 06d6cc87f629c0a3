#include "epsk/kernel.hpp"

#include <functional>
#include <map>
#include <set>

#include "epsk/print.hpp"

namespace epsk {

// ---------------------------------------------------------------------------
// Instance matching

namespace {

class Matcher {
  public:
    explicit Matcher(const Variable& hole) : hole_(hole) {}

    bool formula(const Formula& p, const Formula& t) {
        using K = Formula::Kind;
        if (p.kind() != t.kind()) return false;
        switch (p.kind()) {
            case K::True:
            case K::False: return true;
            case K::Atom:
                if (p.predicate() != t.predicate()) return false;
                return terms(p.terms(), t.terms());
            case K::Equal: return terms(p.terms(), t.terms());
            case K::PredicateVariableAtom:
                return p.predicateVariable() == t.predicateVariable() && terms(p.terms(), t.terms());
            case K::Not: return formula(p.operand(), t.operand());
            case K::And:
            case K::Or:
            case K::Implies: return formula(p.lhs(), t.lhs()) && formula(p.rhs(), t.rhs());
            case K::Quantifier: {
                if (p.quantifierKind() != t.quantifierKind() || p.majority() != t.majority()) return false;
                if (p.bound().sort != t.bound().sort) return false;
                if (p.restriction().has_value() != t.restriction().has_value()) return false;
                scope_.emplace_back(p.bound(), t.bound());
                bool ok = (!p.restriction() || formula(*p.restriction(), *t.restriction())) &&
                          formula(p.body(), t.body());
                scope_.pop_back();
                return ok;
            }
            case K::SecondOrder:
                return p.secondOrderKind() == t.secondOrderKind() &&
                       p.predicateVariable() == t.predicateVariable() && formula(p.body(), t.body());
        }
        return false;
    }

    bool term(const Term& p, const Term& t) {
        using K = Term::Kind;
        if (p.kind() == K::Variable) {
            const Variable& v = p.var();
            for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
                if (it->first == v) return t.kind() == K::Variable && t.var() == it->second;
            }
            if (v == hole_) {
                // the candidate must not mention variables bound in the target
                for (const auto& fv : freeVars(t)) {
                    for (const auto& [pv, tv] : scope_) {
                        if (tv == fv) return false;
                    }
                }
                if (!candidate_) {
                    candidate_ = t;
                    return true;
                }
                return alphaEq(*candidate_, t);
            }
            if (t.kind() != K::Variable || t.var() != v) return false;
            for (const auto& [pv, tv] : scope_) {
                if (tv == v) return false;
            }
            return true;
        }
        if (p.kind() != t.kind() || p.sort() != t.sort()) return false;
        switch (p.kind()) {
            case K::Constant: return p.name() == t.name();
            case K::Application: return p.name() == t.name() && terms(p.arguments(), t.arguments());
            case K::Binder: {
                if (p.binderKind() != t.binderKind() || p.bound().sort != t.bound().sort) return false;
                scope_.emplace_back(p.bound(), t.bound());
                bool ok = formula(p.body(), t.body());
                scope_.pop_back();
                return ok;
            }
            case K::Generic: {
                if (p.genericKind() != t.genericKind()) return false;
                if (p.restriction().has_value() != t.restriction().has_value()) return false;
                if (!p.restriction()) return true;
                scope_.emplace_back(p.bound(), t.bound());
                bool ok = formula(*p.restriction(), *t.restriction());
                scope_.pop_back();
                return ok;
            }
            case K::Variable: break;
        }
        return false;
    }

    const std::optional<Term>& candidate() const { return candidate_; }

  private:
    bool terms(const std::vector<Term>& p, const std::vector<Term>& t) {
        if (p.size() != t.size()) return false;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (!term(p[i], t[i])) return false;
        }
        return true;
    }

    Variable hole_;
    std::vector<std::pair<Variable, Variable>> scope_;
    std::optional<Term> candidate_;
};

}  // namespace

std::optional<Term> findInstance(const Formula& pattern, const Variable& hole, const Formula& target) {
    Matcher m(hole);
    if (!m.formula(pattern, target)) return std::nullopt;
    return m.candidate();
}

Formula quantifierMatrix(const Formula& q) {
    if (!q.restriction()) return q.body();
    if (q.quantifierKind() == QuantifierKind::Exists) return Formula::conjunction(*q.restriction(), q.body());
    return Formula::implication(*q.restriction(), q.body());
}

// ---------------------------------------------------------------------------
// Rule checking

namespace {

struct RuleFailure {
    std::string condition;
    std::string message;
};

bool member(const std::vector<Formula>& set, const Formula& f) {
    for (const auto& g : set) {
        if (alphaEq(g, f)) return true;
    }
    return false;
}

std::string show(const Formula& f) { return printFormula(f); }

bool isQuantifier(const Formula& f, QuantifierKind k) {
    return f.is(Formula::Kind::Quantifier) && f.quantifierKind() == k;
}

// Every subterm of f of the given binder kind.
void collectBinders(const Formula& f, BinderKind kind, std::vector<Term>& out);

void collectBinders(const Term& t, BinderKind kind, std::vector<Term>& out) {
    switch (t.kind()) {
        case Term::Kind::Application:
            for (const auto& a : t.arguments()) collectBinders(a, kind, out);
            break;
        case Term::Kind::Binder:
            if (t.binderKind() == kind) out.push_back(t);
            collectBinders(t.body(), kind, out);
            break;
        case Term::Kind::Generic:
            if (t.restriction()) collectBinders(*t.restriction(), kind, out);
            break;
        default: break;
    }
}

void collectBinders(const Formula& f, BinderKind kind, std::vector<Term>& out) {
    using K = Formula::Kind;
    switch (f.kind()) {
        case K::Atom:
        case K::Equal:
        case K::PredicateVariableAtom:
            for (const auto& t : f.terms()) collectBinders(t, kind, out);
            break;
        case K::Not: collectBinders(f.operand(), kind, out); break;
        case K::And:
        case K::Or:
        case K::Implies:
            collectBinders(f.lhs(), kind, out);
            collectBinders(f.rhs(), kind, out);
            break;
        case K::Quantifier:
            if (f.restriction()) collectBinders(*f.restriction(), kind, out);
            collectBinders(f.body(), kind, out);
            break;
        case K::SecondOrder: collectBinders(f.body(), kind, out); break;
        default: break;
    }
}

// Binder terms b of `kind` for which f is alphaEq to A[x := b], where A is
// the body of b (or, for negated bodies with `negated`, the operand).
struct ChoiceMatch {
    Term term;
    Formula body;  // A
    Variable var;  // x
};

std::vector<ChoiceMatch> choiceMatches(const Formula& f, BinderKind kind, bool negated) {
    std::vector<Term> candidates;
    collectBinders(f, kind, candidates);
    std::vector<ChoiceMatch> out;
    for (const auto& b : candidates) {
        Formula a = b.body();
        if (negated) {
            if (!a.is(Formula::Kind::Not)) continue;
            a = a.operand();
        }
        if (alphaEq(substitute(a, b.bound(), b), f)) out.push_back({b, a, b.bound()});
    }
    return out;
}

class NodeChecker {
  public:
    NodeChecker(const ProofTree& node, const Signature& sig, const KernelConfig& cfg)
        : node_(node), sig_(sig), cfg_(cfg), H_(node.sequent.hypotheses), C_(node.sequent.conclusion) {}

    std::optional<RuleFailure> run() {
        std::size_t arity = ruleArity(node_.rule);
        if (node_.premises.size() != arity) {
            return RuleFailure{"premise-count", ruleName(node_.rule) + " expects " + std::to_string(arity) +
                                                    " premise(s), got " + std::to_string(node_.premises.size())};
        }
        if (auto f = sorts()) return f;
        try {
            return dispatch();
        } catch (const SortError& e) {
            return RuleFailure{"sort", e.what()};
        }
    }

  private:
    const Sequent& prem(std::size_t i) const { return node_.premises[i]->sequent; }
    const Formula& C(std::size_t i) const { return prem(i).conclusion; }

    std::optional<RuleFailure> sorts() {
        auto check = [&](const Formula& f) -> std::optional<RuleFailure> {
            auto ds = wellSorted(f, sig_);
            if (ds.empty()) return std::nullopt;
            return RuleFailure{"sort", show(f) + " is ill-sorted at " + ds.front().location + ": " + ds.front().message};
        };
        for (const auto& h : H_) {
            if (auto r = check(h)) return r;
        }
        return check(C_);
    }

    // Premise i may only use the conclusion's hypotheses plus `discharged`.
    std::optional<RuleFailure> within(std::size_t i, const std::vector<Formula>& discharged = {}) {
        for (const auto& h : prem(i).hypotheses) {
            if (member(H_, h) || member(discharged, h)) continue;
            std::string why = "hypothesis " + show(h) + " of premise " + std::to_string(i + 1) +
                              " is not available in the conclusion";
            if (!discharged.empty()) why += " and is not discharged by this rule";
            return RuleFailure{"hypotheses", why};
        }
        return std::nullopt;
    }

    std::optional<RuleFailure> allWithin() {
        for (std::size_t i = 0; i < node_.premises.size(); ++i) {
            if (auto r = within(i)) return r;
        }
        return std::nullopt;
    }

    static RuleFailure shape(const std::string& message) { return RuleFailure{"shape", message}; }

    // Eigenvariable side condition for the variable y.
    std::optional<RuleFailure> fresh(const Variable& y, const std::vector<const Formula*>& extra) {
        auto occurs = [&](const Formula& f) { return occursFree(y, f); };
        std::string cond = "eigenvariable " + y.name + " must not occur free in a hypothesis or in the conclusion";
        for (const auto& h : H_) {
            if (occurs(h)) return RuleFailure{"eigenvariable", cond + " (" + y.name + " is free in hypothesis " + show(h) + ")"};
        }
        for (const auto& p : node_.premises) {
            for (const auto& h : p->sequent.hypotheses) {
                bool isDischarged = false;
                for (const Formula* e : extra) isDischarged = isDischarged || (e != nullptr && alphaEq(*e, h));
                if (!isDischarged && occurs(h)) {
                    return RuleFailure{"eigenvariable",
                                       cond + " (" + y.name + " is free in hypothesis " + show(h) + ")"};
                }
            }
        }
        if (occurs(C_)) return RuleFailure{"eigenvariable", cond + " (" + y.name + " is free in " + show(C_) + ")"};
        return std::nullopt;
    }

    // Resolves the instance term of `pattern[x := ?]` against `target`,
    // honouring an explicit [x := t] annotation.
    std::optional<Term> instance(const Formula& pattern, const Variable& x, const Formula& target) {
        if (node_.annotation.witness) {
            const Term& t = *node_.annotation.witness;
            if (t.sort() != x.sort) return std::nullopt;
            if (alphaEq(substitute(pattern, x, t), target)) return t;
            return std::nullopt;
        }
        if (auto t = findInstance(pattern, x, target)) {
            if (alphaEq(substitute(pattern, x, *t), target)) return t;
            return std::nullopt;
        }
        // x does not occur: any term of the sort will do
        if (alphaEq(pattern, target)) return Term::variable(x);
        return std::nullopt;
    }

    // Resolves an eigenvariable y with premise alphaEq pattern[x := y].
    std::optional<Variable> eigen(const Formula& pattern, const Variable& x, const Formula& premise,
                                  std::string& why) {
        if (node_.annotation.eigenName) {
            Variable y{*node_.annotation.eigenName, node_.annotation.eigenSort.value_or(x.sort)};
            if (y.sort != x.sort) {
                why = "eigenvariable " + y.name + " has sort " + y.sort + ", expected " + x.sort;
                return std::nullopt;
            }
            if (!alphaEq(substitute(pattern, x, Term::variable(y)), premise)) {
                why = show(premise) + " is not the instance of " + show(pattern) + " at " + y.name;
                return std::nullopt;
            }
            return y;
        }
        auto t = instance(pattern, x, premise);
        if (!t) {
            why = show(premise) + " is not an instance of " + show(pattern);
            return std::nullopt;
        }
        if (t->kind() != Term::Kind::Variable) {
            why = "the generic instance " + printTerm(*t) + " is not a variable";
            return std::nullopt;
        }
        return t->var();
    }

    MajorityMode effective(const Formula& most) const { return most.majority().value_or(cfg_.majorityMode); }

    std::optional<RuleFailure> dispatch() {
        switch (node_.rule) {
            case Rule::Hyp:
                if (!member(H_, C_)) return RuleFailure{"hypothesis", show(C_) + " is not among the hypotheses"};
                return std::nullopt;
            case Rule::AndI:
                if (!C_.is(Formula::Kind::And)) return shape("conclusion must be a conjunction");
                if (!alphaEq(C(0), C_.lhs()) || !alphaEq(C(1), C_.rhs())) {
                    return shape("premises must prove the two conjuncts in order");
                }
                return allWithin();
            case Rule::AndE1:
            case Rule::AndE2: {
                if (!C(0).is(Formula::Kind::And)) return shape("premise must be a conjunction");
                const Formula& part = node_.rule == Rule::AndE1 ? C(0).lhs() : C(0).rhs();
                if (!alphaEq(part, C_)) return shape("conclusion must be the selected conjunct of the premise");
                return allWithin();
            }
            case Rule::OrI1:
            case Rule::OrI2: {
                if (!C_.is(Formula::Kind::Or)) return shape("conclusion must be a disjunction");
                const Formula& part = node_.rule == Rule::OrI1 ? C_.lhs() : C_.rhs();
                if (!alphaEq(part, C(0))) return shape("premise must prove the selected disjunct");
                return allWithin();
            }
            case Rule::OrE: {
                if (!C(0).is(Formula::Kind::Or)) return shape("first premise must be a disjunction");
                if (!alphaEq(C(1), C_) || !alphaEq(C(2), C_)) return shape("case premises must prove the conclusion");
                if (auto r = within(0)) return r;
                if (auto r = within(1, {C(0).lhs()})) return r;
                return within(2, {C(0).rhs()});
            }
            case Rule::ImpI:
                if (!C_.is(Formula::Kind::Implies)) return shape("conclusion must be an implication");
                if (!alphaEq(C(0), C_.rhs())) return shape("premise must prove the consequent");
                return within(0, {C_.lhs()});
            case Rule::ImpE: {
                for (int order = 0; order < 2; ++order) {
                    const Formula& imp = C(order == 0 ? 0 : 1);
                    const Formula& arg = C(order == 0 ? 1 : 0);
                    if (imp.is(Formula::Kind::Implies) && alphaEq(imp.lhs(), arg) && alphaEq(imp.rhs(), C_)) {
                        return allWithin();
                    }
                }
                return shape("premises must be A implies B and A with conclusion B");
            }
            case Rule::NotI:
                if (!C_.is(Formula::Kind::Not)) return shape("conclusion must be a negation");
                if (!C(0).is(Formula::Kind::False)) return shape("premise must prove false");
                return within(0, {C_.operand()});
            case Rule::NotE: {
                if (!C_.is(Formula::Kind::False)) return shape("conclusion must be false");
                bool ok = (C(1).is(Formula::Kind::Not) && alphaEq(C(1).operand(), C(0))) ||
                          (C(0).is(Formula::Kind::Not) && alphaEq(C(0).operand(), C(1)));
                if (!ok) return shape("premises must be A and not A");
                return allWithin();
            }
            case Rule::Raa:
                if (!C(0).is(Formula::Kind::False)) return shape("premise must prove false");
                return within(0, {Formula::negation(C_)});
            case Rule::FalseE:
                if (!C(0).is(Formula::Kind::False)) return shape("premise must prove false");
                return allWithin();
            case Rule::ForallI: return forallIntro();
            case Rule::ForallE: {
                if (!isQuantifier(C(0), QuantifierKind::Forall)) return shape("premise must be a universal formula");
                Formula m = quantifierMatrix(C(0));
                auto t = instance(m, C(0).bound(), C_);
                if (!t) return RuleFailure{"witness", show(C_) + " is not an instance of " + show(m)};
                return allWithin();
            }
            case Rule::ExistsI: {
                if (!isQuantifier(C_, QuantifierKind::Exists)) return shape("conclusion must be an existential formula");
                Formula m = quantifierMatrix(C_);
                auto t = instance(m, C_.bound(), C(0));
                if (!t) return RuleFailure{"witness", show(C(0)) + " is not an instance of " + show(m)};
                return allWithin();
            }
            case Rule::ExistsE: return existsElim();
            case Rule::EpsIntro: return fromInstance(BinderKind::Epsilon, false);
            case Rule::TauDual: return fromInstance(BinderKind::Tau, true);
            case Rule::TauIntro: return fromGeneric(BinderKind::Tau, false);
            case Rule::EpsDual: return fromGeneric(BinderKind::Epsilon, true);
            case Rule::TauElim: {
                auto matches = choiceMatches(C(0), BinderKind::Tau, false);
                if (matches.empty()) return shape("premise must have the form A(tau x. A(x))");
                for (const auto& m : matches) {
                    if (instance(m.body, m.var, C_)) return allWithin();
                }
                return RuleFailure{"witness", show(C_) + " is not an instance of the tau-term body"};
            }
            case Rule::StarWeaken:
            case Rule::StarStrengthen: return star();
            case Rule::MajRefuteMinority: return refuteMinority();
            case Rule::MajRefuteDisjoint: return refuteDisjoint();
            case Rule::MostInst: return mostInst();
        }
        return shape("unknown rule");
    }

    std::optional<RuleFailure> forallIntro() {
        if (!isQuantifier(C_, QuantifierKind::Forall)) return shape("conclusion must be a universal formula");
        Formula m = quantifierMatrix(C_);
        std::string why;
        auto y = eigen(m, C_.bound(), C(0), why);
        if (!y) return shape(why);
        if (auto r = allWithin()) return r;
        return fresh(*y, {});
    }

    std::optional<RuleFailure> existsElim() {
        if (!isQuantifier(C(0), QuantifierKind::Exists)) return shape("first premise must be an existential formula");
        if (!alphaEq(C(1), C_)) return shape("second premise must prove the conclusion");
        Formula m = quantifierMatrix(C(0));
        const Variable& x = C(0).bound();
        std::optional<Variable> y;
        std::optional<Formula> assumption;
        if (node_.annotation.eigenName) {
            y = Variable{*node_.annotation.eigenName, node_.annotation.eigenSort.value_or(x.sort)};
            if (y->sort != x.sort) return shape("eigenvariable " + y->name + " has sort " + y->sort + ", expected " + x.sort);
            assumption = substitute(m, x, Term::variable(*y));
        } else {
            // the discharged assumption is a premise hypothesis that instantiates the matrix at a variable
            for (const auto& h : prem(1).hypotheses) {
                if (member(H_, h)) continue;
                auto t = findInstance(m, x, h);
                if (!t && alphaEq(m, h)) t = Term::variable(x);
                if (t && t->kind() == Term::Kind::Variable && alphaEq(substitute(m, x, *t), h)) {
                    y = t->var();
                    assumption = h;
                    break;
                }
            }
            if (!y) {
                // nothing discharged: the second premise stands on the shared hypotheses alone
                if (auto r = allWithin()) return r;
                return std::nullopt;
            }
        }
        if (auto r = within(0)) return r;
        if (auto r = within(1, {*assumption})) return r;
        if (occursFree(*y, C(0))) {
            return RuleFailure{"eigenvariable", "eigenvariable " + y->name +
                                                    " must not occur free in a hypothesis or in the conclusion (" + y->name +
                                                    " is free in " + show(C(0)) + ")"};
        }
        return fresh(*y, {&*assumption});
    }

    // eps-intro: from A(t) infer A(eps x. A);  tau-dual: from A(t) infer A(tau x. not A)
    std::optional<RuleFailure> fromInstance(BinderKind kind, bool negated) {
        auto matches = choiceMatches(C_, kind, negated);
        if (matches.empty()) {
            return shape(std::string("conclusion must have the form ") +
                         (kind == BinderKind::Epsilon ? "A(eps x. A(x))" : "A(tau x. not A(x))"));
        }
        for (const auto& m : matches) {
            if (instance(m.body, m.var, C(0))) return allWithin();
        }
        return RuleFailure{"witness", show(C(0)) + " is not an instance of the body of the choice term"};
    }

    // tau-intro: from A(y), y generic, infer A(tau x. A);  eps-dual: infer A(eps x. not A)
    std::optional<RuleFailure> fromGeneric(BinderKind kind, bool negated) {
        auto matches = choiceMatches(C_, kind, negated);
        if (matches.empty()) {
            return shape(std::string("conclusion must have the form ") +
                         (kind == BinderKind::Tau ? "A(tau x. A(x))" : "A(eps x. not A(x))"));
        }
        std::string why;
        for (const auto& m : matches) {
            auto y = eigen(m.body, m.var, C(0), why);
            if (!y) continue;
            if (auto r = allWithin()) return r;
            return fresh(*y, {});
        }
        return shape(why);
    }

    std::optional<RuleFailure> star() {
        bool weaken = node_.rule == Rule::StarWeaken;
        bool regimeB = cfg_.starRegime == StarRegime::B;
        QuantifierKind from, to;
        if (weaken) {
            from = regimeB ? QuantifierKind::Forall : QuantifierKind::Exists;
            to = regimeB ? QuantifierKind::ForallStar : QuantifierKind::ExistsStar;
        } else {
            from = regimeB ? QuantifierKind::ExistsStar : QuantifierKind::ForallStar;
            to = regimeB ? QuantifierKind::Exists : QuantifierKind::Forall;
        }
        std::string regime = regimeName(cfg_.starRegime);
        if (!isQuantifier(C(0), from) || !isQuantifier(C_, to)) {
            return RuleFailure{"regime", "under regime " + regime + " " + ruleName(node_.rule) + " derives " +
                                             keyword(to) + " from " + keyword(from)};
        }
        const Formula& p = C(0);
        Formula expected = Formula::quantifier(to, p.bound(), p.restriction(), p.body(), C_.majority());
        if (!alphaEq(expected, C_)) return shape("premise and conclusion must share restriction and body");
        return allWithin();
    }

    std::optional<RuleFailure> thresholdOk() {
        if (cfg_.threshold < Rational(1, 2)) {
            return RuleFailure{"threshold", "majority rules need a threshold of at least 1/2, configured " +
                                                cfg_.threshold.str()};
        }
        return std::nullopt;
    }

    std::optional<RuleFailure> strictPremise(const Formula& most) {
        if (effective(most) != MajorityMode::Strict) {
            return RuleFailure{"majority", "premise " + show(most) + " must be a strict majority (most>)"};
        }
        return std::nullopt;
    }

    std::optional<Formula> refutedMost() {
        if (!C_.is(Formula::Kind::Not) || !isQuantifier(C_.operand(), QuantifierKind::Most)) return std::nullopt;
        return C_.operand();
    }

    std::optional<RuleFailure> refuteMinority() {
        if (auto r = thresholdOk()) return r;
        auto concl = refutedMost();
        if (!concl) return shape("conclusion must be a negated most formula");
        const Formula& p = C(0);
        if (!isQuantifier(p, QuantifierKind::Most) || !p.body().is(Formula::Kind::Not)) {
            return shape("premise must be most x (R). not P");
        }
        if (auto r = strictPremise(p)) return r;
        Formula expected =
            Formula::quantifier(QuantifierKind::Most, p.bound(), p.restriction(), p.body().operand(), concl->majority());
        if (!alphaEq(expected, *concl)) return shape("conclusion must refute most x (R). P for the same R and P");
        return allWithin();
    }

    std::optional<RuleFailure> refuteDisjoint() {
        if (auto r = thresholdOk()) return r;
        auto concl = refutedMost();
        if (!concl) return shape("conclusion must be a negated most formula");
        for (int order = 0; order < 2; ++order) {
            const Formula& most = C(order == 0 ? 0 : 1);
            const Formula& disj = C(order == 0 ? 1 : 0);
            if (!isQuantifier(most, QuantifierKind::Most) || !isQuantifier(disj, QuantifierKind::Forall)) continue;
            const Variable& x = most.bound();
            Formula pBody = substitute(concl->body(), concl->bound(), Term::variable(x));
            Formula sameClass = Formula::quantifier(QuantifierKind::Most, x, most.restriction(), pBody, concl->majority());
            if (!alphaEq(sameClass, *concl)) return shape("the refuted most formula must range over the premise's class");
            Formula disjoint = Formula::negation(Formula::conjunction(pBody, most.body()));
            Formula restricted = Formula::quantifier(QuantifierKind::Forall, x, most.restriction(), disjoint);
            Formula plain = Formula::quantifier(QuantifierKind::Forall, x, std::nullopt, disjoint);
            if (!alphaEq(disj, restricted) && !alphaEq(disj, plain)) {
                return shape("second premise must be forall x (R). not (P and Q)");
            }
            if (auto r = strictPremise(most)) return r;
            return allWithin();
        }
        return shape("premises must be most x (R). Q and forall x (R). not (P and Q)");
    }

    std::optional<RuleFailure> mostInst() {
        if (!cfg_.experimentalMostInst) {
            return RuleFailure{"experimental", "most-inst is experimental and disabled"};
        }
        const Formula& p = C(0);
        if (!isQuantifier(p, QuantifierKind::Most) || p.majority()) {
            return shape("premise must be a most formula without explicit comparison");
        }
        const Formula& body = p.body();
        const Variable& x = p.bound();
        std::size_t occurrences = 0;
        if (body.is(Formula::Kind::Atom)) {
            for (const auto& t : body.terms()) {
                if (t.kind() == Term::Kind::Variable && t.var() == x) ++occurrences;
                else if (occursFree(x, t) || t.kind() == Term::Kind::Generic) occurrences += 2;
            }
        }
        if (occurrences != 1) return shape("body must be an atom with one occurrence of the bound variable and no other generic argument");
        Term generic = p.restriction() ? Term::generic(GenericKind::Most, x, *p.restriction())
                                       : Term::generic(GenericKind::Most, x.sort);
        if (!alphaEq(substitute(body, x, generic), C_)) return shape("conclusion must apply the body to most[...]");
        return allWithin();
    }

    const ProofTree& node_;
    const Signature& sig_;
    const KernelConfig& cfg_;
    const std::vector<Formula>& H_;
    const Formula& C_;
};

}  // namespace

Verdict checkProof(const ProofTree& proof, const Signature& sig, const KernelConfig& cfg) {
    Verdict v;
    std::set<const ProofTree*> seen;
    int counter = 0;
    std::function<void(const ProofTree&)> visit = [&](const ProofTree& n) {
        if (!seen.insert(&n).second) return;
        for (const auto& p : n.premises) {
            if (p) visit(*p);
        }
        ++counter;
        int line = n.line != 0 ? n.line : counter;
        NodeRecord rec{line, ruleName(n.rule), true, ""};
        bool nullPremise = false;
        for (const auto& p : n.premises) nullPremise = nullPremise || !p;
        std::optional<RuleFailure> f;
        if (nullPremise) f = RuleFailure{"premise-count", "missing premise"};
        else f = NodeChecker(n, sig, cfg).run();
        if (f) {
            rec.ok = false;
            rec.reason = f->message;
            v.failures.push_back({line, rec.rule, f->condition, f->message});
        }
        v.nodes.push_back(rec);
    };
    visit(proof);
    v.accepted = v.failures.empty();
    return v;
}

// ---------------------------------------------------------------------------

std::vector<EquivalenceObligation> derivedEquivalences(const Signature& sig) {
    std::vector<EquivalenceObligation> out;
    for (const auto& [name, args] : sig.predicates()) {
        if (args.size() != 1) continue;
        Variable x{"x", args[0]};
        Formula px = Formula::atom(name, {Term::variable(x)});
        Term tau = Term::binder(BinderKind::Tau, x, px);
        Term eps = Term::binder(BinderKind::Epsilon, x, px);
        Formula pTau = Formula::atom(name, {tau});
        Formula pEps = Formula::atom(name, {eps});
        Formula all = Formula::quantifier(QuantifierKind::Forall, x, std::nullopt, px);
        Formula some = Formula::quantifier(QuantifierKind::Exists, x, std::nullopt, px);

        Annotation atX;
        atX.instanceOf = "x";
        atX.witness = Term::variable(x);
        Annotation eigenX;
        eigenX.eigenName = "x";

        // P(tau) |- forall x. P(x)
        auto h1 = makeProof({{pTau}, pTau}, Rule::Hyp);
        auto e1 = makeProof({{pTau}, px}, Rule::TauElim, {h1}, atX);
        auto tauToAll = makeProof({{pTau}, all}, Rule::ForallI, {e1}, eigenX);

        // forall x. P(x) |- P(tau)
        Annotation atTau;
        atTau.instanceOf = "x";
        atTau.witness = tau;
        auto h2 = makeProof({{all}, all}, Rule::Hyp);
        auto allToTau = makeProof({{all}, pTau}, Rule::ForallE, {h2}, atTau);

        // P(eps) |- exists x. P(x)
        Annotation atEps;
        atEps.instanceOf = "x";
        atEps.witness = eps;
        auto h3 = makeProof({{pEps}, pEps}, Rule::Hyp);
        auto epsToSome = makeProof({{pEps}, some}, Rule::ExistsI, {h3}, atEps);

        // exists x. P(x) |- P(eps)
        auto h4 = makeProof({{some}, some}, Rule::Hyp);
        auto h5 = makeProof({{some, px}, px}, Rule::Hyp);
        auto i5 = makeProof({{some, px}, pEps}, Rule::EpsIntro, {h5}, atX);
        auto someToEps = makeProof({{some}, pEps}, Rule::ExistsE, {h4, i5}, eigenX);

        out.push_back({name, pTau, all, tauToAll, allToTau});
        out.push_back({name, pEps, some, epsToSome, someToEps});
    }
    return out;
}

}  // namespace epsk
