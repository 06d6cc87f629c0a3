#include "epsk/transform.hpp"

#include <functional>

namespace epsk {

namespace {

using TermMap = std::function<Term(const Term&)>;
using FormulaMap = std::function<Formula(const Formula&)>;

// Rebuilds the terms of an atomic formula with `fn`.
Formula mapAtomTerms(const Formula& f, const TermMap& fn) {
    std::vector<Term> ts;
    ts.reserve(f.terms().size());
    for (const auto& t : f.terms()) ts.push_back(fn(t));
    switch (f.kind()) {
        case Formula::Kind::Atom: return Formula::atom(f.predicate(), std::move(ts));
        case Formula::Kind::Equal: return Formula::equal(ts[0], ts[1]);
        default: return Formula::predicateVariableAtom(f.predicateVariable(), ts[0]);
    }
}

// Applies `fn` to the formulas inside a term (binder bodies, restrictions).
Term mapTermFormulas(const Term& t, const FormulaMap& fn) {
    switch (t.kind()) {
        case Term::Kind::Application: {
            std::vector<Term> args;
            for (const auto& a : t.arguments()) args.push_back(mapTermFormulas(a, fn));
            return Term::application(t.name(), std::move(args), t.sort());
        }
        case Term::Kind::Binder: return Term::binder(t.binderKind(), t.bound(), fn(t.body()));
        case Term::Kind::Generic:
            if (!t.restriction()) return t;
            return Term::generic(t.genericKind(), t.bound(), fn(*t.restriction()));
        default: return t;
    }
}

std::optional<Formula> mapOpt(const std::optional<Formula>& f, const FormulaMap& fn) {
    if (!f) return std::nullopt;
    return fn(*f);
}

// Structural map where `fn` handles the recursive calls for children.
Formula rebuild(const Formula& f, const FormulaMap& fn) {
    using K = Formula::Kind;
    switch (f.kind()) {
        case K::True:
        case K::False: return f;
        case K::Atom:
        case K::Equal:
        case K::PredicateVariableAtom:
            return mapAtomTerms(f, [&](const Term& t) { return mapTermFormulas(t, fn); });
        case K::Not: return Formula::negation(fn(f.operand()));
        case K::And: return Formula::conjunction(fn(f.lhs()), fn(f.rhs()));
        case K::Or: return Formula::disjunction(fn(f.lhs()), fn(f.rhs()));
        case K::Implies: return Formula::implication(fn(f.lhs()), fn(f.rhs()));
        case K::Quantifier:
            return Formula::quantifier(f.quantifierKind(), f.bound(), mapOpt(f.restriction(), fn), fn(f.body()),
                                       f.majority());
        case K::SecondOrder: return Formula::secondOrder(f.secondOrderKind(), f.predicateVariable(), fn(f.body()));
    }
    return f;
}

Formula matrixOf(const Formula& q) {
    if (!q.restriction()) return q.body();
    if (q.quantifierKind() == QuantifierKind::Exists) return Formula::conjunction(*q.restriction(), q.body());
    return Formula::implication(*q.restriction(), q.body());
}

bool mentions(const Formula& f, const Variable& v) { return occursFree(v, f); }

std::set<std::string> predicateVariableNames(const Formula& f) {
    std::set<std::string> out;
    std::function<void(const Formula&)> walk = [&](const Formula& g) {
        if (g.is(Formula::Kind::SecondOrder) || g.is(Formula::Kind::PredicateVariableAtom)) {
            out.insert(g.predicateVariable().name);
        }
        rebuild(g, [&](const Formula& h) {
            walk(h);
            return h;
        });
    };
    walk(f);
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------

FregeResult fregeEmbed(const Formula& f) {
    bool reducible = true;
    std::function<Formula(const Formula&)> go = [&](const Formula& g) -> Formula {
        if (g.is(Formula::Kind::Quantifier)) {
            QuantifierKind k = g.quantifierKind();
            if (k == QuantifierKind::Forall || k == QuantifierKind::Exists) {
                if (!g.restriction()) return Formula::quantifier(k, g.bound(), std::nullopt, go(g.body()));
                Formula r = go(*g.restriction());
                Formula b = go(g.body());
                Formula m = k == QuantifierKind::Forall ? Formula::implication(r, b) : Formula::conjunction(r, b);
                return Formula::quantifier(k, g.bound(), std::nullopt, m);
            }
            reducible = false;
        }
        return rebuild(g, go);
    };
    Formula out = go(f);
    return {out, reducible};
}

Formula fregeUnembed(const Formula& f) {
    std::function<Formula(const Formula&)> go = [&](const Formula& g) -> Formula {
        if (g.is(Formula::Kind::Quantifier) && !g.restriction()) {
            QuantifierKind k = g.quantifierKind();
            const Formula& b = g.body();
            bool pattern = (k == QuantifierKind::Forall && b.is(Formula::Kind::Implies)) ||
                           (k == QuantifierKind::Exists && b.is(Formula::Kind::And));
            if (pattern && b.lhs().is(Formula::Kind::Atom) && mentions(b.lhs(), g.bound())) {
                return Formula::quantifier(k, g.bound(), go(b.lhs()), go(b.rhs()));
            }
        }
        return rebuild(g, go);
    };
    return go(f);
}

Formula epsilonEmbed(const Formula& f, bool tauForm) {
    std::function<Formula(const Formula&)> go;
    std::function<Term(const Term&)> goTerm = [&](const Term& t) -> Term {
        if (t.kind() == Term::Kind::Generic) throw TransformError("generic terms have no epsilon embedding");
        if (t.kind() == Term::Kind::Application) {
            std::vector<Term> args;
            for (const auto& a : t.arguments()) args.push_back(goTerm(a));
            return Term::application(t.name(), std::move(args), t.sort());
        }
        if (t.kind() == Term::Kind::Binder) return Term::binder(t.binderKind(), t.bound(), go(t.body()));
        return t;
    };
    go = [&](const Formula& g) -> Formula {
        using K = Formula::Kind;
        switch (g.kind()) {
            case K::Quantifier: {
                QuantifierKind k = g.quantifierKind();
                if (k != QuantifierKind::Forall && k != QuantifierKind::Exists) {
                    throw TransformError(keyword(k) + " has no epsilon embedding");
                }
                const Variable& x = g.bound();
                Formula inner = go(matrixOf(g));
                Term witness = Term::variable(x);
                if (k == QuantifierKind::Exists) {
                    witness = Term::binder(BinderKind::Epsilon, x, inner);
                } else if (tauForm) {
                    witness = Term::binder(BinderKind::Tau, x, inner);
                } else {
                    witness = Term::binder(BinderKind::Epsilon, x, Formula::negation(inner));
                }
                return substitute(inner, x, witness);
            }
            case K::SecondOrder: throw TransformError("second-order quantifiers have no epsilon embedding");
            case K::Atom:
            case K::Equal:
            case K::PredicateVariableAtom: return mapAtomTerms(g, goTerm);
            default: return rebuild(g, go);
        }
    };
    return go(f);
}

// ---------------------------------------------------------------------------
// Individual concepts

Formula individualConcept(const PredicateVariable& X, bool nonEmptiness) {
    Variable x{"x", X.sort};
    Variable y{"y", X.sort};
    Formula xx = Formula::predicateVariableAtom(X, Term::variable(x));
    Formula xy = Formula::predicateVariableAtom(X, Term::variable(y));
    Formula unique = Formula::quantifier(
        QuantifierKind::Forall, x, std::nullopt,
        Formula::quantifier(QuantifierKind::Forall, y, std::nullopt,
                            Formula::implication(Formula::conjunction(xx, xy),
                                                 Formula::equal(Term::variable(x), Term::variable(y)))));
    if (!nonEmptiness) return unique;
    return Formula::conjunction(unique, Formula::quantifier(QuantifierKind::Exists, x, std::nullopt, xx));
}

namespace {

// Recognizes C(X) in either variant; returns the variant found.
std::optional<bool> conceptGuard(const Formula& g, const PredicateVariable& X) {
    if (alphaEq(g, individualConcept(X, true))) return true;
    if (alphaEq(g, individualConcept(X, false))) return false;
    return std::nullopt;
}

// exists x. (X(x) and F): returns F and x.
std::optional<std::pair<Variable, Formula>> sharpBody(const Formula& q, const PredicateVariable& X) {
    if (!q.is(Formula::Kind::Quantifier) || q.quantifierKind() != QuantifierKind::Exists || q.restriction()) {
        return std::nullopt;
    }
    const Formula& b = q.body();
    if (!b.is(Formula::Kind::And)) return std::nullopt;
    const Formula& l = b.lhs();
    if (!l.is(Formula::Kind::PredicateVariableAtom) || l.predicateVariable() != X) return std::nullopt;
    const Term& arg = l.terms()[0];
    if (arg.kind() != Term::Kind::Variable || arg.var() != q.bound()) return std::nullopt;
    return std::make_pair(q.bound(), b.rhs());
}

}  // namespace

Formula liftToConcepts(const Formula& f, bool nonEmptiness) {
    std::set<std::string> used = predicateVariableNames(f);
    std::function<Formula(const Formula&)> go = [&](const Formula& g) -> Formula {
        if (g.is(Formula::Kind::SecondOrder) && g.body().isBinary()) {
            // already lifted: keep the guard, lift inside the witness body
            const PredicateVariable& X = g.predicateVariable();
            const Formula& b = g.body();
            bool universal = g.secondOrderKind() == SecondOrderKind::Forall;
            bool connective = universal ? b.is(Formula::Kind::Implies) : b.is(Formula::Kind::And);
            if (connective && conceptGuard(b.lhs(), X)) {
                if (auto sharp = sharpBody(b.rhs(), X)) {
                    Formula inner = Formula::quantifier(
                        QuantifierKind::Exists, sharp->first, std::nullopt,
                        Formula::conjunction(b.rhs().body().lhs(), go(sharp->second)));
                    Formula body = universal ? Formula::implication(b.lhs(), inner) : Formula::conjunction(b.lhs(), inner);
                    return Formula::secondOrder(g.secondOrderKind(), X, body);
                }
            }
        }
        if (g.is(Formula::Kind::Quantifier)) {
            QuantifierKind k = g.quantifierKind();
            if (k == QuantifierKind::Forall || k == QuantifierKind::Exists) {
                const Variable& x = g.bound();
                PredicateVariable X{freshName("X", used), x.sort};
                used.insert(X.name);
                Formula body = go(matrixOf(g));
                Formula witness = Formula::quantifier(
                    QuantifierKind::Exists, x, std::nullopt,
                    Formula::conjunction(Formula::predicateVariableAtom(X, Term::variable(x)), body));
                Formula guard = individualConcept(X, nonEmptiness);
                if (k == QuantifierKind::Forall) {
                    return Formula::secondOrder(SecondOrderKind::Forall, X, Formula::implication(guard, witness));
                }
                return Formula::secondOrder(SecondOrderKind::Exists, X, Formula::conjunction(guard, witness));
            }
        }
        return rebuild(g, go);
    };
    return go(f);
}

Formula lowerFromConcepts(const Formula& f) {
    std::function<std::optional<Formula>(const Formula&)> lowerOne = [&](const Formula& g) -> std::optional<Formula> {
        if (!g.is(Formula::Kind::SecondOrder)) return std::nullopt;
        const PredicateVariable& X = g.predicateVariable();
        const Formula& b = g.body();
        bool universal = g.secondOrderKind() == SecondOrderKind::Forall;
        bool connective = universal ? b.is(Formula::Kind::Implies) : b.is(Formula::Kind::And);
        if (!connective) return std::nullopt;
        auto variant = conceptGuard(b.lhs(), X);
        if (!variant) return std::nullopt;
        const Formula& q = b.rhs();
        std::set<std::string> avoid = variableNames(q);
        Variable x{freshName("x", avoid), X.sort};
        Formula inner = Formula::secondOrder(
            SecondOrderKind::Exists, X,
            Formula::conjunction(Formula::conjunction(b.lhs(), Formula::predicateVariableAtom(X, Term::variable(x))), q));
        return Formula::quantifier(universal ? QuantifierKind::Forall : QuantifierKind::Exists, x, std::nullopt,
                                   inner);
    };
    std::function<bool(const Formula&)> secondOrder = [&](const Formula& g) {
        bool found = g.is(Formula::Kind::SecondOrder);
        rebuild(g, [&](const Formula& h) {
            found = found || secondOrder(h);
            return h;
        });
        return found;
    };
    if (!secondOrder(f)) throw TransformError("expected forall2 X. (C(X) implies Q(X)) or exists2 X. (C(X) and Q(X))");
    // every guarded concept quantifier is lowered; already lowered ones no longer match
    std::function<Formula(const Formula&)> go = [&](const Formula& g) -> Formula {
        if (auto lowered = lowerOne(g)) {
            const Formula& ex = lowered->body();  // exists2 X. (C(X) and X(x) and Q)
            const Formula& conj = ex.body();
            Formula q = go(conj.rhs());
            Formula rebuilt = Formula::secondOrder(SecondOrderKind::Exists, ex.predicateVariable(),
                                                   Formula::conjunction(conj.lhs(), q));
            return Formula::quantifier(lowered->quantifierKind(), lowered->bound(), std::nullopt, rebuilt);
        }
        return rebuild(g, go);
    };
    return go(f);
}

// ---------------------------------------------------------------------------

Formula pushNegation(const Formula& f) {
    std::function<Formula(const Formula&, bool)> go = [&](const Formula& g, bool negate) -> Formula {
        using K = Formula::Kind;
        auto pos = [&](const Formula& h) { return go(h, false); };
        switch (g.kind()) {
            case K::True:
            case K::False: return negate ? Formula::truth(g.is(K::False)) : g;
            case K::Atom:
            case K::Equal:
            case K::PredicateVariableAtom: return negate ? Formula::negation(g) : g;
            case K::Not: return go(g.operand(), !negate);
            case K::And:
                if (negate) return Formula::disjunction(go(g.lhs(), true), go(g.rhs(), true));
                return Formula::conjunction(pos(g.lhs()), pos(g.rhs()));
            case K::Or:
                if (negate) return Formula::conjunction(go(g.lhs(), true), go(g.rhs(), true));
                return Formula::disjunction(pos(g.lhs()), pos(g.rhs()));
            case K::Implies:
                if (negate) return Formula::conjunction(pos(g.lhs()), go(g.rhs(), true));
                return Formula::disjunction(go(g.lhs(), true), pos(g.rhs()));
            case K::Quantifier: {
                QuantifierKind k = g.quantifierKind();
                auto restriction = mapOpt(g.restriction(), pos);
                if (k == QuantifierKind::Most || k == QuantifierKind::Many) {
                    Formula q = Formula::quantifier(k, g.bound(), restriction, pos(g.body()), g.majority());
                    return negate ? Formula::negation(q) : q;
                }
                if (!negate) return Formula::quantifier(k, g.bound(), restriction, pos(g.body()), g.majority());
                QuantifierKind dual = k == QuantifierKind::Forall       ? QuantifierKind::Exists
                                      : k == QuantifierKind::Exists     ? QuantifierKind::Forall
                                      : k == QuantifierKind::ForallStar ? QuantifierKind::ExistsStar
                                                                        : QuantifierKind::ForallStar;
                return Formula::quantifier(dual, g.bound(), restriction, go(g.body(), true), g.majority());
            }
            case K::SecondOrder: {
                SecondOrderKind k = g.secondOrderKind();
                if (negate) k = k == SecondOrderKind::Forall ? SecondOrderKind::Exists : SecondOrderKind::Forall;
                return Formula::secondOrder(k, g.predicateVariable(), go(g.body(), negate));
            }
        }
        return g;
    };
    return go(f, false);
}

}  // namespace epsk
