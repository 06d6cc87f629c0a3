#include "epsk/evaluator.hpp"

#include "epsk/print.hpp"

namespace epsk {

std::vector<std::string> EvalFlags::names() const {
    std::vector<std::string> out;
    if (undetermined) out.emplace_back("undetermined");
    if (presuppositionFailure) out.emplace_back("presupposition-failure");
    if (emptyRestriction) out.emplace_back("empty-restriction");
    return out;
}

Evaluator::Evaluator(const Model& model, bool record) : model_(model), record_(record) {}

void Evaluator::reset() {
    bindings_.clear();
    concepts_.clear();
    etaExcluded_.clear();
    flags_ = {};
    witnesses_.clear();
    measures_.clear();
    choiceShapes_.clear();
    choiceValues_.clear();
    loopDepth_ = 0;
}

void Evaluator::reset(const Environment& env) {
    reset();
    for (const auto& [v, e] : env.individuals) {
        if (e >= model_.domainSize(v.sort)) throw EvalError("value of " + v.name + " outside sort " + v.sort);
        bindings_.push_back({v, e});
    }
    for (const auto& [pv, members] : env.concepts) {
        if (members.size() != model_.domainSize(pv.sort)) {
            throw EvalError("extension of " + pv.name + " does not match sort " + pv.sort);
        }
        concepts_.push_back({pv, members});
    }
    etaExcluded_ = env.etaExcluded;
}

Element Evaluator::lookup(const Variable& v) const {
    for (auto it = bindings_.rbegin(); it != bindings_.rend(); ++it) {
        if (it->var == v) return it->value;
    }
    throw EvalError("unbound variable " + v.name + ":" + v.sort);
}

const std::vector<bool>& Evaluator::lookupConcept(const PredicateVariable& pv) const {
    for (auto it = concepts_.rbegin(); it != concepts_.rend(); ++it) {
        if (it->var == pv) return it->members;
    }
    throw EvalError("unbound predicate variable " + pv.name + ":" + pv.sort);
}

bool Evaluator::satisfiedAt(const Variable& x, Element e, const Formula& body) {
    bindings_.push_back({x, e});
    bool value = formula(body);
    bindings_.pop_back();
    return value;
}

bool Evaluator::excludedForEta(const SortName& sort, Element e) const {
    auto it = etaExcluded_.find(sort);
    return it != etaExcluded_.end() && it->second.count(e) != 0;
}

Element Evaluator::choose(const Term& t) {
    // recording wants every witness, and eta exclusions make values depend on more than the bindings
    if (record_ || !etaExcluded_.empty()) return chooseUncached(t);
    auto [shape, inserted] = choiceShapes_.try_emplace(t.identity(), ChoiceShape{t, {}, false});
    if (inserted) {
        VariableSet free = freeVars(t);
        shape->second.free.assign(free.begin(), free.end());
        shape->second.cacheable = freePredicateVars(t.body()).empty();
    }
    if (!shape->second.cacheable) return chooseUncached(t);
    std::vector<Element> key;
    key.reserve(shape->second.free.size());
    for (const auto& v : shape->second.free) key.push_back(lookup(v));
    auto found = choiceValues_.find({t.identity(), key});
    if (found != choiceValues_.end()) {
        flags_.merge(found->second.flags);
        return found->second.value;
    }
    EvalFlags outer = flags_;
    flags_ = {};
    Element value = chooseUncached(t);
    choiceValues_.emplace(std::pair{t.identity(), std::move(key)}, ChoiceValue{value, flags_});
    flags_.merge(outer);
    return value;
}

Element Evaluator::chooseUncached(const Term& t) {
    const Variable& x = t.bound();
    const Formula& body = t.body();
    std::size_t n = model_.domainSize(x.sort);
    Element chosen = 0;
    ++loopDepth_;
    switch (t.binderKind()) {
        case BinderKind::Epsilon:
            for (Element e = 0; e < n; ++e) {
                if (satisfiedAt(x, e, body)) {
                    chosen = e;
                    break;
                }
            }
            break;
        case BinderKind::Tau:
            for (Element e = 0; e < n; ++e) {
                if (!satisfiedAt(x, e, body)) {
                    chosen = e;
                    break;
                }
            }
            break;
        case BinderKind::Iota: {
            std::size_t count = 0;
            for (Element e = 0; e < n && count < 2; ++e) {
                if (satisfiedAt(x, e, body)) {
                    if (count == 0) chosen = e;
                    ++count;
                }
            }
            if (count != 1) {
                chosen = 0;
                flags_.undetermined = true;
            }
            break;
        }
        case BinderKind::Eta: {
            bool found = false;
            std::optional<Element> first;
            for (Element e = 0; e < n; ++e) {
                if (!satisfiedAt(x, e, body)) continue;
                if (!first) first = e;
                if (!excludedForEta(x.sort, e)) {
                    chosen = e;
                    found = true;
                    break;
                }
            }
            if (!found) chosen = first.value_or(0);
            break;
        }
    }
    --loopDepth_;
    if (record_ && loopDepth_ == 0) {
        witnesses_.push_back({printTerm(t), x.sort, chosen, model_.elementName(x.sort, chosen)});
    }
    return chosen;
}

Element Evaluator::generic(const Term& t) {
    Element chosen = 0;
    if (t.restriction()) {
        std::size_t n = model_.domainSize(t.sort());
        bool found = false;
        ++loopDepth_;
        for (Element e = 0; e < n; ++e) {
            if (satisfiedAt(t.bound(), e, *t.restriction())) {
                chosen = e;
                found = true;
                break;
            }
        }
        --loopDepth_;
        if (!found) flags_.presuppositionFailure = true;
    }
    if (record_ && loopDepth_ == 0) {
        witnesses_.push_back({printTerm(t), t.sort(), chosen, model_.elementName(t.sort(), chosen)});
    }
    return chosen;
}

Element Evaluator::term(const Term& t) {
    switch (t.kind()) {
        case Term::Kind::Variable: return lookup(t.var());
        case Term::Kind::Constant: return model_.constant(t.name());
        case Term::Kind::Application: {
            std::vector<Element> args;
            args.reserve(t.arguments().size());
            for (const auto& a : t.arguments()) args.push_back(term(a));
            return model_.apply(t.name(), args);
        }
        case Term::Kind::Binder: return choose(t);
        case Term::Kind::Generic: return generic(t);
    }
    throw EvalError("unknown term kind");
}

bool Evaluator::atom(const Formula& f) {
    const auto& terms = f.terms();
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (terms[i].kind() == Term::Kind::Generic) return atomWithGeneric(f, i);
    }
    Element buffer[8];
    std::vector<Element> heap;
    Element* args = buffer;
    if (terms.size() > 8) {
        heap.resize(terms.size());
        args = heap.data();
    }
    for (std::size_t i = 0; i < terms.size(); ++i) args[i] = term(terms[i]);
    return model_.holds(f.predicate(), std::span<const Element>(args, terms.size()));
}

// P(..., most[N], ...) is read as MOST x:N. P(..., x, ...), the leftmost
// generic taking widest scope.
bool Evaluator::atomWithGeneric(const Formula& f, std::size_t position) {
    const Term& g = f.terms()[position];
    Variable x{freshName("g", variableNames(f)), g.sort()};
    std::vector<Term> args = f.terms();
    args[position] = Term::variable(x);
    Formula body = Formula::atom(f.predicate(), std::move(args));
    std::optional<Formula> restriction;
    if (g.restriction()) restriction = substitute(*g.restriction(), g.bound(), Term::variable(x));
    QuantifierKind kind = g.genericKind() == GenericKind::Most ? QuantifierKind::Most : QuantifierKind::Many;
    return generalized(kind, std::nullopt, x, restriction ? &*restriction : nullptr, body,
                       record_ && loopDepth_ == 0 ? printFormula(f) : std::string());
}

bool Evaluator::generalized(QuantifierKind kind, std::optional<MajorityMode> explicitMode, const Variable& x,
                            const Formula* restriction, const Formula& body, const std::string& display) {
    const MeasureConfig& cfg = model_.config();
    std::size_t n = model_.domainSize(x.sort);
    std::uint64_t whole = 0;
    std::uint64_t part = 0;
    bool topLevel = loopDepth_ == 0;
    ++loopDepth_;
    for (Element e = 0; e < n; ++e) {
        if (restriction != nullptr && !satisfiedAt(x, e, *restriction)) continue;
        ++whole;
        bool b = satisfiedAt(x, e, body);
        if (kind == QuantifierKind::ExistsStar ? !b : b) ++part;
    }
    --loopDepth_;

    MajorityMode mode = explicitMode.value_or(cfg.majorityMode);
    auto exceeds = [&](const Rational& theta) {
        int c = theta.compareShare(part, whole);
        return mode == MajorityMode::Strict ? c > 0 : c >= 0;
    };
    bool value = false;
    switch (kind) {
        case QuantifierKind::Most:
        case QuantifierKind::Many:
            if (whole == 0) {
                flags_.emptyRestriction = true;
                value = false;
            } else {
                value = exceeds(kind == QuantifierKind::Most ? cfg.mostThreshold : cfg.manyThreshold);
            }
            break;
        case QuantifierKind::ForallStar:
            value = whole == 0 || exceeds(cfg.mostThreshold);
            break;
        case QuantifierKind::ExistsStar:
            // dual of forall*: part counts the falsifiers
            value = whole != 0 && !exceeds(cfg.mostThreshold);
            break;
        default: throw EvalError("not a generalized quantifier");
    }
    if (record_ && topLevel) measures_.push_back({display, part, whole, value});
    return value;
}

bool Evaluator::quantifier(const Formula& f) {
    QuantifierKind kind = f.quantifierKind();
    const Variable& x = f.bound();
    const Formula* restriction = f.restriction() ? &*f.restriction() : nullptr;
    if ((kind == QuantifierKind::ForallStar || kind == QuantifierKind::ExistsStar) &&
        model_.config().starRegime == StarRegime::A) {
        kind = kind == QuantifierKind::ForallStar ? QuantifierKind::Forall : QuantifierKind::Exists;
    }
    if (kind != QuantifierKind::Forall && kind != QuantifierKind::Exists) {
        return generalized(kind, f.majority(), x, restriction, f.body(),
                           record_ && loopDepth_ == 0 ? printFormula(f) : std::string());
    }
    std::size_t n = model_.domainSize(x.sort);
    bool universal = kind == QuantifierKind::Forall;
    bool result = universal;
    ++loopDepth_;
    for (Element e = 0; e < n; ++e) {
        if (restriction != nullptr && !satisfiedAt(x, e, *restriction)) continue;
        if (satisfiedAt(x, e, f.body()) != universal) {
            result = !universal;
            break;
        }
    }
    --loopDepth_;
    return result;
}

bool Evaluator::secondOrder(const Formula& f) {
    const PredicateVariable& pv = f.predicateVariable();
    std::size_t n = model_.domainSize(pv.sort);
    if (n > kMaxSecondOrderDomain) {
        throw EvalError("second-order quantifier over sort " + pv.sort + " with " + std::to_string(n) +
                        " elements exceeds the enumeration limit");
    }
    bool universal = f.secondOrderKind() == SecondOrderKind::Forall;
    bool result = universal;
    ++loopDepth_;
    concepts_.push_back({pv, std::vector<bool>(n, false)});
    std::size_t slot = concepts_.size() - 1;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        for (std::size_t i = 0; i < n; ++i) concepts_[slot].members[i] = ((mask >> i) & 1U) != 0;
        if (formula(f.body()) != universal) {
            result = !universal;
            break;
        }
    }
    concepts_.pop_back();
    --loopDepth_;
    return result;
}

bool Evaluator::formula(const Formula& f) {
    using K = Formula::Kind;
    switch (f.kind()) {
        case K::True: return true;
        case K::False: return false;
        case K::Atom: return atom(f);
        case K::Equal: return term(f.terms()[0]) == term(f.terms()[1]);
        case K::PredicateVariableAtom: {
            const auto& members = lookupConcept(f.predicateVariable());
            return members[term(f.terms()[0])];
        }
        case K::Not: return !formula(f.operand());
        case K::And: return formula(f.lhs()) && formula(f.rhs());
        case K::Or: return formula(f.lhs()) || formula(f.rhs());
        case K::Implies: return !formula(f.lhs()) || formula(f.rhs());
        case K::Quantifier: return quantifier(f);
        case K::SecondOrder: return secondOrder(f);
    }
    throw EvalError("unknown formula kind");
}

// ---------------------------------------------------------------------------

Element evalTerm(const Model& m, const Environment& env, const Term& t, EvalFlags* flags) {
    Evaluator ev(m);
    try {
        ev.reset(env);
        Element e = ev.term(t);
        if (flags != nullptr) flags->merge(ev.flags());
        return e;
    } catch (const ModelError& e) {
        throw EvalError(e.what());
    }
}

bool evalFormula(const Model& m, const Environment& env, const Formula& f, EvalFlags* flags) {
    Evaluator ev(m);
    try {
        ev.reset(env);
        bool v = ev.formula(f);
        if (flags != nullptr) flags->merge(ev.flags());
        return v;
    } catch (const ModelError& e) {
        throw EvalError(e.what());
    }
}

EvalRecord evaluate(const Model& m, const Environment& env, const Formula& f) {
    Evaluator ev(m, true);
    try {
        ev.reset(env);
        EvalRecord r;
        r.value = ev.formula(f);
        r.flags = ev.flags();
        r.witnesses = ev.witnesses();
        r.measures = ev.measures();
        return r;
    } catch (const ModelError& e) {
        throw EvalError(e.what());
    }
}

bool holds(const Model& m, const Formula& f) { return evalFormula(m, Environment{}, f); }

}  // namespace epsk
