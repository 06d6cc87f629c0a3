#include "epsk/syntax.hpp"

#include <algorithm>
#include <cassert>
#include <utility>

namespace epsk {

// ---------------------------------------------------------------------------
// Signature

void Signature::addSort(const SortName& sort) { sorts_.insert(sort); }

void Signature::addConstant(const std::string& name, const SortName& sort) {
    auto [it, inserted] = constants_.emplace(name, sort);
    if (!inserted && it->second != sort) {
        throw SortError("constant " + name + " redeclared with sort " + sort);
    }
}

void Signature::addFunction(const std::string& name, FunctionType type) {
    auto [it, inserted] = functions_.emplace(name, type);
    if (!inserted && !(it->second == type)) {
        throw SortError("function " + name + " redeclared with a different type");
    }
}

void Signature::addPredicate(const std::string& name, std::vector<SortName> arguments) {
    auto [it, inserted] = predicates_.emplace(name, arguments);
    if (!inserted && it->second != arguments) {
        throw SortError("predicate " + name + " redeclared with different argument sorts");
    }
}

void Signature::addVariable(const std::string& name, const SortName& sort) {
    auto [it, inserted] = variables_.emplace(name, sort);
    if (!inserted && it->second != sort) {
        throw SortError("variable " + name + " redeclared with sort " + sort);
    }
}

void Signature::setIntegerSort(const SortName& sort) {
    if (integerSort_ && *integerSort_ != sort) {
        throw SortError("only one integer sort may be designated");
    }
    sorts_.insert(sort);
    integerSort_ = sort;
}

const SortName* Signature::constantSort(const std::string& name) const {
    auto it = constants_.find(name);
    return it == constants_.end() ? nullptr : &it->second;
}

const FunctionType* Signature::function(const std::string& name) const {
    auto it = functions_.find(name);
    return it == functions_.end() ? nullptr : &it->second;
}

const std::vector<SortName>* Signature::predicate(const std::string& name) const {
    auto it = predicates_.find(name);
    return it == predicates_.end() ? nullptr : &it->second;
}

const SortName* Signature::variableSort(const std::string& name) const {
    auto it = variables_.find(name);
    return it == variables_.end() ? nullptr : &it->second;
}

void Signature::merge(const Signature& other) {
    for (const auto& s : other.sorts_) addSort(s);
    for (const auto& [n, s] : other.constants_) addConstant(n, s);
    for (const auto& [n, t] : other.functions_) addFunction(n, t);
    for (const auto& [n, a] : other.predicates_) addPredicate(n, a);
    for (const auto& [n, s] : other.variables_) addVariable(n, s);
    if (other.integerSort_) setIntegerSort(*other.integerSort_);
}

std::vector<std::string> Signature::validate() const {
    std::vector<std::string> problems;
    auto need = [&](const SortName& s, const std::string& where) {
        if (!hasSort(s)) problems.push_back("undeclared sort " + s + " in " + where);
    };
    for (const auto& [n, s] : constants_) need(s, "constant " + n);
    for (const auto& [n, t] : functions_) {
        for (const auto& a : t.arguments) need(a, "function " + n);
        need(t.result, "function " + n);
    }
    for (const auto& [n, a] : predicates_) {
        for (const auto& s : a) need(s, "predicate " + n);
    }
    for (const auto& [n, s] : variables_) need(s, "variable " + n);
    return problems;
}

// ---------------------------------------------------------------------------
// Keywords

std::string keyword(BinderKind kind) {
    switch (kind) {
        case BinderKind::Epsilon: return "eps";
        case BinderKind::Tau: return "tau";
        case BinderKind::Iota: return "iota";
        case BinderKind::Eta: return "eta";
    }
    return "?";
}

std::string keyword(GenericKind kind) { return kind == GenericKind::Most ? "most" : "many"; }

std::string keyword(QuantifierKind kind) {
    switch (kind) {
        case QuantifierKind::Forall: return "forall";
        case QuantifierKind::Exists: return "exists";
        case QuantifierKind::ForallStar: return "forall*";
        case QuantifierKind::ExistsStar: return "exists*";
        case QuantifierKind::Most: return "most";
        case QuantifierKind::Many: return "many";
    }
    return "?";
}

std::string keyword(SecondOrderKind kind) {
    return kind == SecondOrderKind::Forall ? "forall2" : "exists2";
}

std::string keyword(MajorityMode mode) { return mode == MajorityMode::Strict ? "strict" : "weak"; }

bool isGeneralized(QuantifierKind kind) {
    return kind != QuantifierKind::Forall && kind != QuantifierKind::Exists;
}

// ---------------------------------------------------------------------------
// Term

namespace {

template <class Node>
std::shared_ptr<Node> makeNode() {
    return std::make_shared<Node>();
}

}  // namespace

Term Term::variable(Variable v) {
    auto n = makeNode<TermNode>();
    n->kind = Kind::Variable;
    n->sort = v.sort;
    n->var = std::move(v);
    return Term(std::move(n));
}

Term Term::constant(std::string name, SortName sort) {
    auto n = makeNode<TermNode>();
    n->kind = Kind::Constant;
    n->name = std::move(name);
    n->sort = std::move(sort);
    return Term(std::move(n));
}

Term Term::application(std::string function, std::vector<Term> arguments, SortName result) {
    auto n = makeNode<TermNode>();
    n->kind = Kind::Application;
    n->name = std::move(function);
    n->arguments = std::move(arguments);
    n->sort = std::move(result);
    return Term(std::move(n));
}

Term Term::binder(BinderKind kind, Variable bound, Formula body) {
    auto n = makeNode<TermNode>();
    n->kind = Kind::Binder;
    n->binder = kind;
    n->sort = bound.sort;
    n->var = std::move(bound);
    n->formula = std::move(body);
    return Term(std::move(n));
}

Term Term::generic(GenericKind kind, SortName sort) {
    auto n = makeNode<TermNode>();
    n->kind = Kind::Generic;
    n->generic = kind;
    n->var = Variable{"", sort};
    n->sort = std::move(sort);
    return Term(std::move(n));
}

Term Term::generic(GenericKind kind, Variable bound, Formula restriction) {
    auto n = makeNode<TermNode>();
    n->kind = Kind::Generic;
    n->generic = kind;
    n->sort = bound.sort;
    n->var = std::move(bound);
    n->formula = std::move(restriction);
    return Term(std::move(n));
}

Term::Kind Term::kind() const { return node_->kind; }
const SortName& Term::sort() const { return node_->sort; }

const Variable& Term::var() const {
    assert(kind() == Kind::Variable);
    return node_->var;
}

const std::string& Term::name() const { return node_->name; }
const std::vector<Term>& Term::arguments() const { return node_->arguments; }
BinderKind Term::binderKind() const { return node_->binder; }
const Variable& Term::bound() const { return node_->var; }

const Formula& Term::body() const {
    assert(kind() == Kind::Binder);
    return *node_->formula;
}

GenericKind Term::genericKind() const { return node_->generic; }
const std::optional<Formula>& Term::restriction() const { return node_->formula; }

bool Term::operator==(const Term& other) const {
    if (node_ == other.node_) return true;
    const TermNode& a = *node_;
    const TermNode& b = *other.node_;
    if (a.kind != b.kind || a.sort != b.sort) return false;
    switch (a.kind) {
        case Kind::Variable: return a.var == b.var;
        case Kind::Constant: return a.name == b.name;
        case Kind::Application: return a.name == b.name && a.arguments == b.arguments;
        case Kind::Binder: return a.binder == b.binder && a.var == b.var && *a.formula == *b.formula;
        case Kind::Generic: return a.generic == b.generic && a.var == b.var && a.formula == b.formula;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Formula

Formula Formula::truth(bool value) {
    auto n = makeNode<FormulaNode>();
    n->kind = value ? Kind::True : Kind::False;
    return Formula(std::move(n));
}

Formula Formula::atom(std::string predicate, std::vector<Term> arguments) {
    auto n = makeNode<FormulaNode>();
    n->kind = Kind::Atom;
    n->predicate = std::move(predicate);
    n->terms = std::move(arguments);
    return Formula(std::move(n));
}

Formula Formula::equal(Term lhs, Term rhs) {
    auto n = makeNode<FormulaNode>();
    n->kind = Kind::Equal;
    n->terms = {std::move(lhs), std::move(rhs)};
    return Formula(std::move(n));
}

Formula Formula::predicateVariableAtom(PredicateVariable pv, Term argument) {
    auto n = makeNode<FormulaNode>();
    n->kind = Kind::PredicateVariableAtom;
    n->predicateVariable = std::move(pv);
    n->terms = {std::move(argument)};
    return Formula(std::move(n));
}

Formula Formula::negation(Formula f) {
    auto n = makeNode<FormulaNode>();
    n->kind = Kind::Not;
    n->children = {std::move(f)};
    return Formula(std::move(n));
}

Formula Formula::conjunction(Formula lhs, Formula rhs) {
    auto n = makeNode<FormulaNode>();
    n->kind = Kind::And;
    n->children = {std::move(lhs), std::move(rhs)};
    return Formula(std::move(n));
}

Formula Formula::disjunction(Formula lhs, Formula rhs) {
    auto n = makeNode<FormulaNode>();
    n->kind = Kind::Or;
    n->children = {std::move(lhs), std::move(rhs)};
    return Formula(std::move(n));
}

Formula Formula::implication(Formula lhs, Formula rhs) {
    auto n = makeNode<FormulaNode>();
    n->kind = Kind::Implies;
    n->children = {std::move(lhs), std::move(rhs)};
    return Formula(std::move(n));
}

Formula Formula::quantifier(QuantifierKind kind, Variable bound, std::optional<Formula> restriction,
                            Formula body, std::optional<MajorityMode> mode) {
    auto n = makeNode<FormulaNode>();
    n->kind = Kind::Quantifier;
    n->quantifier = kind;
    n->bound = std::move(bound);
    n->restriction = std::move(restriction);
    n->children = {std::move(body)};
    if (kind == QuantifierKind::Most || kind == QuantifierKind::Many || kind == QuantifierKind::ForallStar ||
        kind == QuantifierKind::ExistsStar) {
        n->majority = mode;
    }
    return Formula(std::move(n));
}

Formula Formula::secondOrder(SecondOrderKind kind, PredicateVariable bound, Formula body) {
    auto n = makeNode<FormulaNode>();
    n->kind = Kind::SecondOrder;
    n->secondOrder = kind;
    n->predicateVariable = std::move(bound);
    n->children = {std::move(body)};
    return Formula(std::move(n));
}

Formula::Kind Formula::kind() const { return node_->kind; }

bool Formula::isBinary() const {
    auto k = kind();
    return k == Kind::And || k == Kind::Or || k == Kind::Implies;
}

const std::string& Formula::predicate() const { return node_->predicate; }
const std::vector<Term>& Formula::terms() const { return node_->terms; }
const PredicateVariable& Formula::predicateVariable() const { return node_->predicateVariable; }
const Formula& Formula::operand() const { return node_->children[0]; }
const Formula& Formula::lhs() const { return node_->children[0]; }
const Formula& Formula::rhs() const { return node_->children[1]; }
QuantifierKind Formula::quantifierKind() const { return node_->quantifier; }
SecondOrderKind Formula::secondOrderKind() const { return node_->secondOrder; }
const Variable& Formula::bound() const { return node_->bound; }
const std::optional<Formula>& Formula::restriction() const { return node_->restriction; }
const std::optional<MajorityMode>& Formula::majority() const { return node_->majority; }
const Formula& Formula::body() const { return node_->children[0]; }

bool Formula::operator==(const Formula& other) const {
    if (node_ == other.node_) return true;
    const FormulaNode& a = *node_;
    const FormulaNode& b = *other.node_;
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Kind::True:
        case Kind::False: return true;
        case Kind::Atom: return a.predicate == b.predicate && a.terms == b.terms;
        case Kind::Equal: return a.terms == b.terms;
        case Kind::PredicateVariableAtom:
            return a.predicateVariable == b.predicateVariable && a.terms == b.terms;
        case Kind::Not:
        case Kind::And:
        case Kind::Or:
        case Kind::Implies: return a.children == b.children;
        case Kind::Quantifier:
            return a.quantifier == b.quantifier && a.bound == b.bound && a.majority == b.majority &&
                   a.restriction == b.restriction && a.children == b.children;
        case Kind::SecondOrder:
            return a.secondOrder == b.secondOrder && a.predicateVariable == b.predicateVariable &&
                   a.children == b.children;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Free variables

namespace {

void collectFree(const Formula& f, VariableSet& out);

void collectFree(const Term& t, VariableSet& out) {
    switch (t.kind()) {
        case Term::Kind::Variable: out.insert(t.var()); break;
        case Term::Kind::Constant: break;
        case Term::Kind::Application:
            for (const auto& a : t.arguments()) collectFree(a, out);
            break;
        case Term::Kind::Binder: {
            VariableSet inner;
            collectFree(t.body(), inner);
            inner.erase(t.bound());
            out.insert(inner.begin(), inner.end());
            break;
        }
        case Term::Kind::Generic:
            if (t.restriction()) {
                VariableSet inner;
                collectFree(*t.restriction(), inner);
                inner.erase(t.bound());
                out.insert(inner.begin(), inner.end());
            }
            break;
    }
}

void collectFree(const Formula& f, VariableSet& out) {
    using K = Formula::Kind;
    switch (f.kind()) {
        case K::True:
        case K::False: break;
        case K::Atom:
        case K::Equal:
        case K::PredicateVariableAtom:
            for (const auto& t : f.terms()) collectFree(t, out);
            break;
        case K::Not: collectFree(f.operand(), out); break;
        case K::And:
        case K::Or:
        case K::Implies:
            collectFree(f.lhs(), out);
            collectFree(f.rhs(), out);
            break;
        case K::Quantifier: {
            VariableSet inner;
            if (f.restriction()) collectFree(*f.restriction(), inner);
            collectFree(f.body(), inner);
            inner.erase(f.bound());
            out.insert(inner.begin(), inner.end());
            break;
        }
        case K::SecondOrder: collectFree(f.body(), out); break;
    }
}

void collectFreePredicates(const Formula& f, std::set<PredicateVariable>& out);

void collectFreePredicates(const Term& t, std::set<PredicateVariable>& out) {
    switch (t.kind()) {
        case Term::Kind::Application:
            for (const auto& a : t.arguments()) collectFreePredicates(a, out);
            break;
        case Term::Kind::Binder: collectFreePredicates(t.body(), out); break;
        case Term::Kind::Generic:
            if (t.restriction()) collectFreePredicates(*t.restriction(), out);
            break;
        default: break;
    }
}

void collectFreePredicates(const Formula& f, std::set<PredicateVariable>& out) {
    using K = Formula::Kind;
    switch (f.kind()) {
        case K::PredicateVariableAtom:
            out.insert(f.predicateVariable());
            [[fallthrough]];
        case K::Atom:
        case K::Equal:
            for (const auto& t : f.terms()) collectFreePredicates(t, out);
            break;
        case K::Not: collectFreePredicates(f.operand(), out); break;
        case K::And:
        case K::Or:
        case K::Implies:
            collectFreePredicates(f.lhs(), out);
            collectFreePredicates(f.rhs(), out);
            break;
        case K::Quantifier:
            if (f.restriction()) collectFreePredicates(*f.restriction(), out);
            collectFreePredicates(f.body(), out);
            break;
        case K::SecondOrder: {
            std::set<PredicateVariable> inner;
            collectFreePredicates(f.body(), inner);
            inner.erase(f.predicateVariable());
            out.insert(inner.begin(), inner.end());
            break;
        }
        default: break;
    }
}

std::set<PredicateVariable> freePredicateVars(const Term& t) {
    std::set<PredicateVariable> out;
    collectFreePredicates(t, out);
    return out;
}

void collectNames(const Formula& f, std::set<std::string>& out);

void collectNames(const Term& t, std::set<std::string>& out) {
    switch (t.kind()) {
        case Term::Kind::Variable: out.insert(t.var().name); break;
        case Term::Kind::Constant: break;
        case Term::Kind::Application:
            for (const auto& a : t.arguments()) collectNames(a, out);
            break;
        case Term::Kind::Binder:
            out.insert(t.bound().name);
            collectNames(t.body(), out);
            break;
        case Term::Kind::Generic:
            if (t.restriction()) {
                out.insert(t.bound().name);
                collectNames(*t.restriction(), out);
            }
            break;
    }
}

void collectNames(const Formula& f, std::set<std::string>& out) {
    using K = Formula::Kind;
    switch (f.kind()) {
        case K::Atom:
        case K::Equal:
        case K::PredicateVariableAtom:
            for (const auto& t : f.terms()) collectNames(t, out);
            if (f.kind() == K::PredicateVariableAtom) out.insert(f.predicateVariable().name);
            break;
        case K::Not: collectNames(f.operand(), out); break;
        case K::And:
        case K::Or:
        case K::Implies:
            collectNames(f.lhs(), out);
            collectNames(f.rhs(), out);
            break;
        case K::Quantifier:
            out.insert(f.bound().name);
            if (f.restriction()) collectNames(*f.restriction(), out);
            collectNames(f.body(), out);
            break;
        case K::SecondOrder:
            out.insert(f.predicateVariable().name);
            collectNames(f.body(), out);
            break;
        default: break;
    }
}

}  // namespace

VariableSet freeVars(const Term& t) {
    VariableSet out;
    collectFree(t, out);
    return out;
}

VariableSet freeVars(const Formula& f) {
    VariableSet out;
    collectFree(f, out);
    return out;
}

std::set<PredicateVariable> freePredicateVars(const Formula& f) {
    std::set<PredicateVariable> out;
    collectFreePredicates(f, out);
    return out;
}

bool occursFree(const Variable& v, const Formula& f) { return freeVars(f).count(v) != 0; }
bool occursFree(const Variable& v, const Term& t) { return freeVars(t).count(v) != 0; }

std::set<std::string> variableNames(const Formula& f) {
    std::set<std::string> out;
    collectNames(f, out);
    return out;
}

std::set<std::string> variableNames(const Term& t) {
    std::set<std::string> out;
    collectNames(t, out);
    return out;
}

std::string freshName(const std::string& base, const std::set<std::string>& avoid) {
    std::string candidate = base;
    while (avoid.count(candidate) != 0) candidate += '\'';
    return candidate;
}

// ---------------------------------------------------------------------------
// Substitution

namespace {

struct Substitution {
    Variable target;
    Term replacement;
    std::set<std::string> replacementNames;  // names of free variables of the replacement
    std::set<PredicateVariable> replacementPredicates;

    Formula apply(const Formula& f) const;
    Term apply(const Term& t) const;

    // Renames `bound` away from the replacement's free names when the
    // substitution is about to enter its scope. `parts` are the formulas
    // under the binder.
    Variable avoidCapture(const Variable& bound, std::vector<Formula>& parts) const {
        if (replacementNames.count(bound.name) == 0) return bound;
        std::set<std::string> avoid = replacementNames;
        avoid.insert(target.name);
        for (const auto& p : parts) {
            auto names = variableNames(p);
            avoid.insert(names.begin(), names.end());
        }
        Variable renamed{freshName(bound.name, avoid), bound.sort};
        Term renamedTerm = Term::variable(renamed);
        for (auto& p : parts) p = substitute(p, bound, renamedTerm);
        return renamed;
    }
};

Term Substitution::apply(const Term& t) const {
    switch (t.kind()) {
        case Term::Kind::Variable: return t.var() == target ? replacement : t;
        case Term::Kind::Constant: return t;
        case Term::Kind::Application: {
            std::vector<Term> args;
            args.reserve(t.arguments().size());
            for (const auto& a : t.arguments()) args.push_back(apply(a));
            return Term::application(t.name(), std::move(args), t.sort());
        }
        case Term::Kind::Binder: {
            if (t.bound() == target || !occursFree(target, t.body())) return t;
            std::vector<Formula> parts{t.body()};
            Variable bound = avoidCapture(t.bound(), parts);
            return Term::binder(t.binderKind(), bound, apply(parts[0]));
        }
        case Term::Kind::Generic: {
            if (!t.restriction()) return t;
            if (t.bound() == target || !occursFree(target, *t.restriction())) return t;
            std::vector<Formula> parts{*t.restriction()};
            Variable bound = avoidCapture(t.bound(), parts);
            return Term::generic(t.genericKind(), bound, apply(parts[0]));
        }
    }
    return t;
}

Formula Substitution::apply(const Formula& f) const {
    using K = Formula::Kind;
    switch (f.kind()) {
        case K::True:
        case K::False: return f;
        case K::Atom: {
            std::vector<Term> args;
            args.reserve(f.terms().size());
            for (const auto& a : f.terms()) args.push_back(apply(a));
            return Formula::atom(f.predicate(), std::move(args));
        }
        case K::Equal: return Formula::equal(apply(f.terms()[0]), apply(f.terms()[1]));
        case K::PredicateVariableAtom:
            return Formula::predicateVariableAtom(f.predicateVariable(), apply(f.terms()[0]));
        case K::Not: return Formula::negation(apply(f.operand()));
        case K::And: return Formula::conjunction(apply(f.lhs()), apply(f.rhs()));
        case K::Or: return Formula::disjunction(apply(f.lhs()), apply(f.rhs()));
        case K::Implies: return Formula::implication(apply(f.lhs()), apply(f.rhs()));
        case K::Quantifier: {
            if (f.bound() == target || !occursFree(target, f)) return f;
            std::vector<Formula> parts{f.body()};
            if (f.restriction()) parts.push_back(*f.restriction());
            Variable bound = avoidCapture(f.bound(), parts);
            std::optional<Formula> restriction;
            if (f.restriction()) restriction = apply(parts[1]);
            return Formula::quantifier(f.quantifierKind(), bound, std::move(restriction), apply(parts[0]),
                                       f.majority());
        }
        case K::SecondOrder: {
            if (!occursFree(target, f.body())) return f;
            PredicateVariable pv = f.predicateVariable();
            Formula body = f.body();
            if (replacementPredicates.count(pv) != 0) {
                std::set<std::string> avoid = variableNames(body);
                for (const auto& p : replacementPredicates) avoid.insert(p.name);
                PredicateVariable renamed{freshName(pv.name, avoid), pv.sort};
                Variable param{freshName("x", avoid), pv.sort};
                body = substitutePredicate(body, pv, param,
                                           Formula::predicateVariableAtom(renamed, Term::variable(param)));
                pv = renamed;
            }
            return Formula::secondOrder(f.secondOrderKind(), pv, apply(body));
        }
    }
    return f;
}

Substitution makeSubstitution(const Variable& v, const Term& t) {
    if (t.sort() != v.sort) {
        throw SortError("cannot substitute a term of sort " + t.sort() + " for " + v.name + ":" + v.sort);
    }
    Substitution s{v, t, {}, freePredicateVars(t)};
    for (const auto& fv : freeVars(t)) s.replacementNames.insert(fv.name);
    return s;
}

}  // namespace

Formula substitute(const Formula& f, const Variable& v, const Term& t) {
    Substitution s = makeSubstitution(v, t);
    if (!occursFree(v, f)) return f;
    return s.apply(f);
}

Term substitute(const Term& s, const Variable& v, const Term& t) {
    Substitution sub = makeSubstitution(v, t);
    if (!occursFree(v, s)) return s;
    return sub.apply(s);
}

namespace {

struct PredicateSubstitution {
    PredicateVariable target;
    Variable param;
    Formula replacement;
    VariableSet replacementFree;  // free variables other than the parameter

    Formula apply(const Formula& f) const;

    Term apply(const Term& t) const {
        switch (t.kind()) {
            case Term::Kind::Application: {
                std::vector<Term> args;
                for (const auto& a : t.arguments()) args.push_back(apply(a));
                return Term::application(t.name(), std::move(args), t.sort());
            }
            case Term::Kind::Binder: {
                auto [bound, body] = enter(t.bound(), t.body());
                return Term::binder(t.binderKind(), bound, apply(body));
            }
            case Term::Kind::Generic: {
                if (!t.restriction()) return t;
                auto [bound, body] = enter(t.bound(), *t.restriction());
                return Term::generic(t.genericKind(), bound, apply(body));
            }
            default: return t;
        }
    }

    std::pair<Variable, Formula> enter(const Variable& bound, const Formula& body) const {
        bool clash = false;
        for (const auto& v : replacementFree) clash = clash || v.name == bound.name;
        if (!clash) return {bound, body};
        std::set<std::string> avoid = variableNames(body);
        avoid.insert(bound.name);
        for (const auto& v : replacementFree) avoid.insert(v.name);
        Variable renamed{freshName(bound.name, avoid), bound.sort};
        return {renamed, substitute(body, bound, Term::variable(renamed))};
    }
};

Formula PredicateSubstitution::apply(const Formula& f) const {
    using K = Formula::Kind;
    switch (f.kind()) {
        case K::True:
        case K::False: return f;
        case K::Atom: {
            std::vector<Term> args;
            for (const auto& a : f.terms()) args.push_back(apply(a));
            return Formula::atom(f.predicate(), std::move(args));
        }
        case K::Equal: return Formula::equal(apply(f.terms()[0]), apply(f.terms()[1]));
        case K::PredicateVariableAtom: {
            Term arg = apply(f.terms()[0]);
            if (f.predicateVariable() == target) return substitute(replacement, param, arg);
            return Formula::predicateVariableAtom(f.predicateVariable(), arg);
        }
        case K::Not: return Formula::negation(apply(f.operand()));
        case K::And: return Formula::conjunction(apply(f.lhs()), apply(f.rhs()));
        case K::Or: return Formula::disjunction(apply(f.lhs()), apply(f.rhs()));
        case K::Implies: return Formula::implication(apply(f.lhs()), apply(f.rhs()));
        case K::Quantifier: {
            std::vector<Formula> parts{f.body()};
            if (f.restriction()) parts.push_back(*f.restriction());
            Variable bound = f.bound();
            bool clash = false;
            for (const auto& v : replacementFree) clash = clash || v.name == bound.name;
            if (clash) {
                std::set<std::string> avoid{bound.name};
                for (const auto& p : parts) {
                    auto n = variableNames(p);
                    avoid.insert(n.begin(), n.end());
                }
                for (const auto& v : replacementFree) avoid.insert(v.name);
                Variable renamed{freshName(bound.name, avoid), bound.sort};
                for (auto& p : parts) p = substitute(p, bound, Term::variable(renamed));
                bound = renamed;
            }
            std::optional<Formula> restriction;
            if (f.restriction()) restriction = apply(parts[1]);
            return Formula::quantifier(f.quantifierKind(), bound, std::move(restriction), apply(parts[0]),
                                       f.majority());
        }
        case K::SecondOrder:
            if (f.predicateVariable() == target) return f;
            return Formula::secondOrder(f.secondOrderKind(), f.predicateVariable(), apply(f.body()));
    }
    return f;
}

}  // namespace

Formula substitutePredicate(const Formula& f, const PredicateVariable& pv, const Variable& param,
                            const Formula& replacement) {
    VariableSet free = freeVars(replacement);
    free.erase(param);
    PredicateSubstitution s{pv, param, replacement, std::move(free)};
    return s.apply(f);
}

// ---------------------------------------------------------------------------
// Alpha-equivalence

namespace {

struct AlphaScope {
    std::vector<Variable> left;
    std::vector<Variable> right;
    std::vector<PredicateVariable> leftPv;
    std::vector<PredicateVariable> rightPv;

    template <class V>
    static int depthOf(const std::vector<V>& stack, const V& v) {
        for (int i = static_cast<int>(stack.size()) - 1; i >= 0; --i) {
            if (stack[static_cast<std::size_t>(i)] == v) return static_cast<int>(stack.size()) - 1 - i;
        }
        return -1;
    }

    bool sameVariable(const Variable& a, const Variable& b) const {
        int da = depthOf(left, a);
        int db = depthOf(right, b);
        if (da < 0 && db < 0) return a == b;
        return da == db;
    }

    bool samePredicate(const PredicateVariable& a, const PredicateVariable& b) const {
        int da = depthOf(leftPv, a);
        int db = depthOf(rightPv, b);
        if (da < 0 && db < 0) return a == b;
        return da == db;
    }
};

bool alphaEqIn(const Formula& a, const Formula& b, AlphaScope& scope);

bool alphaEqIn(const Term& a, const Term& b, AlphaScope& scope) {
    if (a.kind() != b.kind() || a.sort() != b.sort()) return false;
    switch (a.kind()) {
        case Term::Kind::Variable: return scope.sameVariable(a.var(), b.var());
        case Term::Kind::Constant: return a.name() == b.name();
        case Term::Kind::Application: {
            if (a.name() != b.name() || a.arguments().size() != b.arguments().size()) return false;
            for (std::size_t i = 0; i < a.arguments().size(); ++i) {
                if (!alphaEqIn(a.arguments()[i], b.arguments()[i], scope)) return false;
            }
            return true;
        }
        case Term::Kind::Binder: {
            if (a.binderKind() != b.binderKind()) return false;
            scope.left.push_back(a.bound());
            scope.right.push_back(b.bound());
            bool eq = alphaEqIn(a.body(), b.body(), scope);
            scope.left.pop_back();
            scope.right.pop_back();
            return eq;
        }
        case Term::Kind::Generic: {
            if (a.genericKind() != b.genericKind()) return false;
            if (a.restriction().has_value() != b.restriction().has_value()) return false;
            if (!a.restriction()) return true;
            scope.left.push_back(a.bound());
            scope.right.push_back(b.bound());
            bool eq = alphaEqIn(*a.restriction(), *b.restriction(), scope);
            scope.left.pop_back();
            scope.right.pop_back();
            return eq;
        }
    }
    return false;
}

bool alphaEqTerms(const std::vector<Term>& a, const std::vector<Term>& b, AlphaScope& scope) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!alphaEqIn(a[i], b[i], scope)) return false;
    }
    return true;
}

bool alphaEqIn(const Formula& a, const Formula& b, AlphaScope& scope) {
    using K = Formula::Kind;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case K::True:
        case K::False: return true;
        case K::Atom: return a.predicate() == b.predicate() && alphaEqTerms(a.terms(), b.terms(), scope);
        case K::Equal: return alphaEqTerms(a.terms(), b.terms(), scope);
        case K::PredicateVariableAtom:
            return scope.samePredicate(a.predicateVariable(), b.predicateVariable()) &&
                   alphaEqTerms(a.terms(), b.terms(), scope);
        case K::Not: return alphaEqIn(a.operand(), b.operand(), scope);
        case K::And:
        case K::Or:
        case K::Implies: return alphaEqIn(a.lhs(), b.lhs(), scope) && alphaEqIn(a.rhs(), b.rhs(), scope);
        case K::Quantifier: {
            if (a.quantifierKind() != b.quantifierKind() || a.bound().sort != b.bound().sort ||
                a.majority() != b.majority() || a.restriction().has_value() != b.restriction().has_value()) {
                return false;
            }
            scope.left.push_back(a.bound());
            scope.right.push_back(b.bound());
            bool eq = (!a.restriction() || alphaEqIn(*a.restriction(), *b.restriction(), scope)) &&
                      alphaEqIn(a.body(), b.body(), scope);
            scope.left.pop_back();
            scope.right.pop_back();
            return eq;
        }
        case K::SecondOrder: {
            if (a.secondOrderKind() != b.secondOrderKind() ||
                a.predicateVariable().sort != b.predicateVariable().sort) {
                return false;
            }
            scope.leftPv.push_back(a.predicateVariable());
            scope.rightPv.push_back(b.predicateVariable());
            bool eq = alphaEqIn(a.body(), b.body(), scope);
            scope.leftPv.pop_back();
            scope.rightPv.pop_back();
            return eq;
        }
    }
    return false;
}

}  // namespace

bool alphaEq(const Formula& a, const Formula& b) {
    AlphaScope scope;
    return alphaEqIn(a, b, scope);
}

bool alphaEq(const Term& a, const Term& b) {
    AlphaScope scope;
    return alphaEqIn(a, b, scope);
}

// ---------------------------------------------------------------------------
// Well-sortedness

namespace {

class SortChecker {
  public:
    explicit SortChecker(const Signature& sig) : sig_(sig) {}

    std::vector<SortDiagnostic> diagnostics;

    void check(const Formula& f, const std::string& where) {
        using K = Formula::Kind;
        switch (f.kind()) {
            case K::True:
            case K::False: break;
            case K::Atom: {
                const auto* args = sig_.predicate(f.predicate());
                if (args == nullptr) {
                    report(where, "undeclared predicate " + f.predicate());
                    break;
                }
                if (args->size() != f.terms().size()) {
                    report(where, "predicate " + f.predicate() + " expects " + std::to_string(args->size()) +
                                      " arguments, got " + std::to_string(f.terms().size()));
                    break;
                }
                for (std::size_t i = 0; i < args->size(); ++i) {
                    std::string loc = "argument " + std::to_string(i + 1) + " of " + f.predicate();
                    const Term& t = f.terms()[i];
                    if (t.sort() != (*args)[i]) {
                        report(join(where, loc), "expected sort " + (*args)[i] + ", found " + t.sort());
                    }
                    check(t, join(where, loc));
                }
                break;
            }
            case K::Equal: {
                const Term& l = f.terms()[0];
                const Term& r = f.terms()[1];
                if (l.sort() != r.sort()) {
                    report(where, "equality between sorts " + l.sort() + " and " + r.sort());
                }
                check(l, join(where, "left of ="));
                check(r, join(where, "right of ="));
                break;
            }
            case K::PredicateVariableAtom: {
                const auto& pv = f.predicateVariable();
                if (!inScope(pv)) report(where, "unbound predicate variable " + pv.name);
                if (f.terms()[0].sort() != pv.sort) {
                    report(join(where, "argument 1 of " + pv.name),
                           "expected sort " + pv.sort + ", found " + f.terms()[0].sort());
                }
                check(f.terms()[0], join(where, "argument 1 of " + pv.name));
                break;
            }
            case K::Not: check(f.operand(), join(where, "operand of not")); break;
            case K::And:
            case K::Or:
            case K::Implies:
                check(f.lhs(), join(where, "left operand"));
                check(f.rhs(), join(where, "right operand"));
                break;
            case K::Quantifier: {
                const Variable& v = f.bound();
                std::string loc = join(where, keyword(f.quantifierKind()) + " " + v.name);
                requireSort(v.sort, loc);
                bound_.push_back(v);
                if (f.restriction()) check(*f.restriction(), join(loc, "restriction"));
                check(f.body(), join(loc, "body"));
                bound_.pop_back();
                break;
            }
            case K::SecondOrder: {
                const auto& pv = f.predicateVariable();
                std::string loc = join(where, keyword(f.secondOrderKind()) + " " + pv.name);
                requireSort(pv.sort, loc);
                boundPv_.push_back(pv);
                check(f.body(), join(loc, "body"));
                boundPv_.pop_back();
                break;
            }
        }
    }

    void check(const Term& t, const std::string& where) {
        switch (t.kind()) {
            case Term::Kind::Variable: {
                const Variable& v = t.var();
                requireSort(v.sort, where);
                if (!isBoundExactly(v)) {
                    auto [it, inserted] = free_.emplace(v.name, v.sort);
                    if (!inserted && it->second != v.sort) {
                        report(where, "free variable " + v.name + " used with sorts " + it->second + " and " + v.sort);
                    }
                }
                break;
            }
            case Term::Kind::Constant: {
                const SortName* s = sig_.constantSort(t.name());
                if (s == nullptr) {
                    report(where, "undeclared constant " + t.name());
                } else if (*s != t.sort()) {
                    report(where, "constant " + t.name() + " has sort " + *s + ", not " + t.sort());
                }
                break;
            }
            case Term::Kind::Application: {
                const FunctionType* ft = sig_.function(t.name());
                if (ft == nullptr) {
                    report(where, "undeclared function " + t.name());
                    break;
                }
                if (ft->result != t.sort()) report(where, "function " + t.name() + " returns sort " + ft->result);
                if (ft->arguments.size() != t.arguments().size()) {
                    report(where, "function " + t.name() + " expects " + std::to_string(ft->arguments.size()) +
                                      " arguments");
                    break;
                }
                for (std::size_t i = 0; i < ft->arguments.size(); ++i) {
                    std::string loc = join(where, "argument " + std::to_string(i + 1) + " of " + t.name());
                    if (t.arguments()[i].sort() != ft->arguments[i]) {
                        report(loc, "expected sort " + ft->arguments[i] + ", found " + t.arguments()[i].sort());
                    }
                    check(t.arguments()[i], loc);
                }
                break;
            }
            case Term::Kind::Binder: {
                std::string loc = join(where, keyword(t.binderKind()) + " " + t.bound().name);
                requireSort(t.bound().sort, loc);
                bound_.push_back(t.bound());
                check(t.body(), join(loc, "body"));
                bound_.pop_back();
                break;
            }
            case Term::Kind::Generic: {
                std::string loc = join(where, keyword(t.genericKind()) + "[" + t.sort() + "]");
                requireSort(t.sort(), loc);
                if (t.restriction()) {
                    VariableSet fv = freeVars(*t.restriction());
                    fv.erase(t.bound());
                    if (!fv.empty()) {
                        report(loc, "restriction must have exactly one free variable, " + t.bound().name);
                    }
                    bound_.push_back(t.bound());
                    check(*t.restriction(), join(loc, "restriction"));
                    bound_.pop_back();
                }
                break;
            }
        }
    }

  private:
    static std::string join(const std::string& a, const std::string& b) { return a.empty() ? b : a + ", " + b; }

    void report(const std::string& where, std::string message) {
        diagnostics.push_back({where.empty() ? "top level" : where, std::move(message)});
    }

    void requireSort(const SortName& s, const std::string& where) {
        if (!sig_.hasSort(s)) report(where, "undeclared sort " + s);
    }

    bool isBoundExactly(const Variable& v) const {
        return std::find(bound_.begin(), bound_.end(), v) != bound_.end();
    }

    bool inScope(const PredicateVariable& pv) const {
        return std::find(boundPv_.begin(), boundPv_.end(), pv) != boundPv_.end();
    }

    const Signature& sig_;
    std::vector<Variable> bound_;
    std::vector<PredicateVariable> boundPv_;
    std::map<std::string, SortName> free_;
};

}  // namespace

std::vector<SortDiagnostic> wellSorted(const Formula& f, const Signature& sig) {
    SortChecker checker(sig);
    checker.check(f, "");
    return std::move(checker.diagnostics);
}

std::vector<SortDiagnostic> wellSorted(const Term& t, const Signature& sig) {
    SortChecker checker(sig);
    checker.check(t, "");
    return std::move(checker.diagnostics);
}

// ---------------------------------------------------------------------------
// Shape queries

namespace {

int depthOf(const Formula& f);

int depthOf(const Term& t) {
    switch (t.kind()) {
        case Term::Kind::Application: {
            int d = 0;
            for (const auto& a : t.arguments()) d = std::max(d, depthOf(a));
            return d;
        }
        case Term::Kind::Binder: return depthOf(t.body());
        case Term::Kind::Generic: return t.restriction() ? depthOf(*t.restriction()) : 0;
        default: return 0;
    }
}

int depthOf(const Formula& f) {
    using K = Formula::Kind;
    switch (f.kind()) {
        case K::Atom:
        case K::Equal:
        case K::PredicateVariableAtom: {
            int d = 0;
            for (const auto& t : f.terms()) d = std::max(d, depthOf(t));
            return d;
        }
        case K::Not: return depthOf(f.operand());
        case K::And:
        case K::Or:
        case K::Implies: return std::max(depthOf(f.lhs()), depthOf(f.rhs()));
        case K::Quantifier: {
            int d = depthOf(f.body());
            if (f.restriction()) d = std::max(d, depthOf(*f.restriction()));
            return d + 1;
        }
        case K::SecondOrder: return depthOf(f.body());
        default: return 0;
    }
}

bool hasQuantifier(const Formula& f);

bool hasQuantifier(const Term& t) {
    switch (t.kind()) {
        case Term::Kind::Application:
            return std::any_of(t.arguments().begin(), t.arguments().end(),
                               [](const Term& a) { return hasQuantifier(a); });
        case Term::Kind::Binder: return hasQuantifier(t.body());
        case Term::Kind::Generic: return t.restriction() && hasQuantifier(*t.restriction());
        default: return false;
    }
}

bool hasQuantifier(const Formula& f) {
    using K = Formula::Kind;
    switch (f.kind()) {
        case K::Atom:
        case K::Equal:
        case K::PredicateVariableAtom:
            return std::any_of(f.terms().begin(), f.terms().end(), [](const Term& t) { return hasQuantifier(t); });
        case K::Not: return hasQuantifier(f.operand());
        case K::And:
        case K::Or:
        case K::Implies: return hasQuantifier(f.lhs()) || hasQuantifier(f.rhs());
        case K::Quantifier:
        case K::SecondOrder: return true;
        default: return false;
    }
}

}  // namespace

int quantifierDepth(const Formula& f) { return depthOf(f); }
bool quantifierFree(const Formula& f) { return !hasQuantifier(f); }

}  // namespace epsk
