// Truth and denotation in finite models.
//
// Choice terms are resolved by deterministic least-element policies over
// the sort order of the model:
//   eps   least satisfier of the body, else the least element
//   tau   least falsifier of the body, else the least element
//   iota  the unique satisfier, else the least element (flagged undetermined)
//   eta   least satisfier outside the environment's excluded set, else as eps
// Generic elements denote the least element of their sort (or the least
// satisfier of their restriction) but an atom applied to a generic is read
// as the corresponding MOST/MANY formula.

#ifndef EPSK_EVALUATOR_HPP
#define EPSK_EVALUATOR_HPP

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "epsk/model.hpp"
#include "epsk/syntax.hpp"

namespace epsk {

class EvalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Environment {
    std::map<Variable, Element> individuals;
    /// Extension of each predicate variable as a membership vector over its sort.
    std::map<PredicateVariable, std::vector<bool>> concepts;
    /// Referents already in use, skipped by eta terms of the same sort.
    std::map<SortName, std::set<Element>> etaExcluded;
};

struct EvalFlags {
    bool undetermined = false;           // an iota term lacked a unique satisfier
    bool presuppositionFailure = false;  // a restricted generic had an empty restriction
    bool emptyRestriction = false;       // a MOST/MANY quantifier measured an empty class

    bool any() const { return undetermined || presuppositionFailure || emptyRestriction; }
    void merge(const EvalFlags& o) {
        undetermined |= o.undetermined;
        presuppositionFailure |= o.presuppositionFailure;
        emptyRestriction |= o.emptyRestriction;
    }
    std::vector<std::string> names() const;
};

/// Element chosen for a choice term or generic outside any quantifier loop.
struct Witness {
    std::string term;
    SortName sort;
    Element element = 0;
    std::string elementName;
};

/// Share computed for a top-level generalized quantifier.
struct MeasureRecord {
    std::string formula;
    std::uint64_t part = 0;
    std::uint64_t whole = 0;
    bool value = false;
};

struct EvalRecord {
    bool value = false;
    EvalFlags flags;
    std::vector<Witness> witnesses;
    std::vector<MeasureRecord> measures;
};

/// Reusable evaluator over one model. Holds a binding stack so that hot
/// loops (model enumeration) avoid rebuilding environments.
class Evaluator {
  public:
    explicit Evaluator(const Model& model, bool record = false);

    /// Replaces the current bindings with `env`.
    void reset(const Environment& env);
    void reset();

    bool formula(const Formula& f);
    Element term(const Term& t);

    const EvalFlags& flags() const { return flags_; }
    const std::vector<Witness>& witnesses() const { return witnesses_; }
    const std::vector<MeasureRecord>& measures() const { return measures_; }

  private:
    struct Bound {
        Variable var;
        Element value;
    };
    struct Concept {
        PredicateVariable var;
        std::vector<bool> members;
    };
    // Choice terms are pure in their free variables, so values are reused.
    struct ChoiceShape {
        Term term;  // keeps the node, and so the cache key, alive
        std::vector<Variable> free;
        bool cacheable = false;
    };
    struct ChoiceValue {
        Element value = 0;
        EvalFlags flags;
    };

    Element lookup(const Variable& v) const;
    const std::vector<bool>& lookupConcept(const PredicateVariable& pv) const;
    bool atom(const Formula& f);
    bool atomWithGeneric(const Formula& f, std::size_t position);
    bool quantifier(const Formula& f);
    bool generalized(QuantifierKind kind, std::optional<MajorityMode> explicitMode, const Variable& x,
                     const Formula* restriction, const Formula& body, const std::string& display);
    bool secondOrder(const Formula& f);
    Element choose(const Term& t);
    Element chooseUncached(const Term& t);
    Element generic(const Term& t);
    bool satisfiedAt(const Variable& x, Element e, const Formula& body);
    bool excludedForEta(const SortName& sort, Element e) const;

    const Model& model_;
    bool record_;
    int loopDepth_ = 0;
    std::vector<Bound> bindings_;
    std::vector<Concept> concepts_;
    std::map<SortName, std::set<Element>> etaExcluded_;
    EvalFlags flags_;
    std::vector<Witness> witnesses_;
    std::vector<MeasureRecord> measures_;
    std::map<const void*, ChoiceShape> choiceShapes_;
    std::map<std::pair<const void*, std::vector<Element>>, ChoiceValue> choiceValues_;
};

Element evalTerm(const Model& m, const Environment& env, const Term& t, EvalFlags* flags = nullptr);
bool evalFormula(const Model& m, const Environment& env, const Formula& f, EvalFlags* flags = nullptr);
/// Evaluates and keeps the witnesses and measures chosen at top level.
EvalRecord evaluate(const Model& m, const Environment& env, const Formula& f);

/// Closed formula in the empty environment.
bool holds(const Model& m, const Formula& f);

/// Largest domain for which second-order quantifiers are enumerated.
inline constexpr std::size_t kMaxSecondOrderDomain = 20;

}  // namespace epsk

#endif  // EPSK_EVALUATOR_HPP
