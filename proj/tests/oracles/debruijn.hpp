// Nameless rendering of formulas. Bound variables become binder distances,
// free variables keep their names, so two formulas are alpha-equivalent
// exactly when their renderings are equal. Substitution in this form is
// plain replacement because nothing can be captured.

#ifndef EPSK_TESTS_DEBRUIJN_HPP
#define EPSK_TESTS_DEBRUIJN_HPP

#include <optional>
#include <string>
#include <vector>

#include "epsk/syntax.hpp"

namespace oracle {

class Nameless {
  public:
    /// Renders f with every free occurrence of `v` replaced by `replacement`.
    static std::string render(const epsk::Formula& f, const std::optional<epsk::Variable>& v = std::nullopt,
                              const std::optional<epsk::Term>& replacement = std::nullopt) {
        Nameless n(v, replacement);
        return n.formula(f);
    }

    static std::string render(const epsk::Term& t) {
        Nameless n(std::nullopt, std::nullopt);
        return n.term(t);
    }

  private:
    Nameless(std::optional<epsk::Variable> v, std::optional<epsk::Term> r) : target_(std::move(v)) {
        if (r) replacement_ = Nameless(std::nullopt, std::nullopt).term(*r);
    }

    std::string variable(const epsk::Variable& x) {
        for (std::size_t i = bound_.size(); i-- > 0;) {
            if (bound_[i] == x.name + ":" + x.sort) return "#" + std::to_string(bound_.size() - 1 - i);
        }
        if (target_ && *target_ == x) return replacement_;
        return x.name + ":" + x.sort;
    }

    std::string predicateVariable(const epsk::PredicateVariable& x) {
        std::string key = "^" + x.name + ":" + x.sort;
        for (std::size_t i = bound_.size(); i-- > 0;) {
            if (bound_[i] == key) return "^#" + std::to_string(bound_.size() - 1 - i);
        }
        return key;
    }

    template <class F>
    std::string under(const std::string& key, F&& body) {
        bound_.push_back(key);
        std::string s = body();
        bound_.pop_back();
        return s;
    }

    std::string term(const epsk::Term& t) {
        using K = epsk::Term::Kind;
        switch (t.kind()) {
            case K::Variable: return variable(t.var());
            case K::Constant: return "c." + t.name();
            case K::Application: {
                std::string s = "f." + t.name() + "(";
                for (const auto& a : t.arguments()) s += term(a) + ",";
                return s + ")";
            }
            case K::Binder: {
                const auto& x = t.bound();
                return "B" + std::to_string(static_cast<int>(t.binderKind())) + ":" + x.sort + "[" +
                       under(x.name + ":" + x.sort, [&] { return formula(t.body()); }) + "]";
            }
            case K::Generic: {
                std::string head = "G" + std::to_string(static_cast<int>(t.genericKind())) + ":" + t.sort();
                if (!t.restriction()) return head;
                const auto& x = t.bound();
                return head + "|" + under(x.name + ":" + x.sort, [&] { return formula(*t.restriction()); });
            }
        }
        return "?";
    }

    std::string formula(const epsk::Formula& f) {
        using K = epsk::Formula::Kind;
        switch (f.kind()) {
            case K::True: return "T";
            case K::False: return "F";
            case K::Atom: {
                std::string s = f.predicate() + "(";
                for (const auto& a : f.terms()) s += term(a) + ",";
                return s + ")";
            }
            case K::Equal: return "(" + term(f.terms()[0]) + "=" + term(f.terms()[1]) + ")";
            case K::PredicateVariableAtom: return predicateVariable(f.predicateVariable()) + "(" + term(f.terms()[0]) + ")";
            case K::Not: return "~" + formula(f.operand());
            case K::And: return "(" + formula(f.lhs()) + "&" + formula(f.rhs()) + ")";
            case K::Or: return "(" + formula(f.lhs()) + "|" + formula(f.rhs()) + ")";
            case K::Implies: return "(" + formula(f.lhs()) + ">" + formula(f.rhs()) + ")";
            case K::Quantifier: {
                const auto& x = f.bound();
                std::string head = "Q" + std::to_string(static_cast<int>(f.quantifierKind()));
                if (f.majority()) head += "m" + std::to_string(static_cast<int>(*f.majority()));
                head += ":" + x.sort;
                return head + under(x.name + ":" + x.sort, [&] {
                           std::string r = f.restriction() ? "{" + formula(*f.restriction()) + "}" : "";
                           return r + "." + formula(f.body());
                       });
            }
            case K::SecondOrder: {
                const auto& X = f.predicateVariable();
                return "S" + std::to_string(static_cast<int>(f.secondOrderKind())) + ":" + X.sort + "." +
                       under("^" + X.name + ":" + X.sort, [&] { return formula(f.body()); });
            }
        }
        return "?";
    }

    std::optional<epsk::Variable> target_;
    std::string replacement_;
    std::vector<std::string> bound_;
};

}  // namespace oracle

#endif  // EPSK_TESTS_DEBRUIJN_HPP
