// Formula translations: restriction embedding, epsilon embedding,
// individual concepts and negation normal form.

#ifndef EPSK_TRANSFORM_HPP
#define EPSK_TRANSFORM_HPP

#include <stdexcept>

#include "epsk/syntax.hpp"

namespace epsk {

class TransformError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct FregeResult {
    Formula formula;
    /// False when a MOST, MANY or starred quantifier was left in place.
    bool reducible = true;
};

/// forall x (M). P  =>  forall x. (M implies P);  exists x (M). P  =>  exists x. (M and P).
FregeResult fregeEmbed(const Formula& f);

/// Inverse pattern on unrestricted quantifiers whose guard M is an atom
/// mentioning the bound variable; everything else is left as is.
Formula fregeUnembed(const Formula& f);

/// Quantifier-free equivalent built innermost first:
/// exists x. F => F[x := eps x. F], forall x. F => F[x := eps x. not F]
/// (or F[x := tau x. F] with tauForm). Throws TransformError on starred,
/// MOST/MANY, second-order quantifiers and generic terms.
Formula epsilonEmbed(const Formula& f, bool tauForm = false);

/// C(X): X holds of at most one element, and (with nonEmptiness) of some element.
Formula individualConcept(const PredicateVariable& X, bool nonEmptiness = true);

/// forall x. F  =>  forall2 X. (C(X) implies exists x. (X(x) and F))
/// exists x. F  =>  exists2 X. (C(X) and exists x. (X(x) and F))
/// Already lifted subformulas are kept, so lifting is idempotent.
Formula liftToConcepts(const Formula& f, bool nonEmptiness = true);

/// forall2 X. (C(X) implies Q(X))  =>  forall x. exists2 X. (C(X) and X(x) and Q(X))
/// and dually for exists2, wherever such a quantifier occurs. Idempotent.
/// Throws TransformError when f has no second-order quantifier at all.
Formula lowerFromConcepts(const Formula& f);

/// Negation normal form, implications eliminated. Negated MOST/MANY
/// formulas stay negated.
Formula pushNegation(const Formula& f);

}  // namespace epsk

#endif  // EPSK_TRANSFORM_HPP
