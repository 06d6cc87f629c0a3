#include "epsk/print.hpp"

#include <sstream>

namespace epsk {

namespace {

// Binding strength; quantifiers extend maximally to the right and sit lowest.
int precedence(const Formula& f) {
    switch (f.kind()) {
        case Formula::Kind::Quantifier:
        case Formula::Kind::SecondOrder: return 0;
        case Formula::Kind::Implies: return 1;
        case Formula::Kind::Or: return 2;
        case Formula::Kind::And: return 3;
        case Formula::Kind::Not: return 4;
        default: return 5;
    }
}

// True when the printed form ends in a binder whose body would swallow
// whatever follows it.
bool openRight(const Formula& f) {
    switch (f.kind()) {
        case Formula::Kind::Quantifier:
        case Formula::Kind::SecondOrder: return true;
        case Formula::Kind::Not: return openRight(f.operand());
        case Formula::Kind::And:
        case Formula::Kind::Or:
        case Formula::Kind::Implies: return openRight(f.rhs());
        default: return false;
    }
}

class Printer {
  public:
    std::string term(const Term& t, bool forceAnnotation = false) {
        switch (t.kind()) {
            case Term::Kind::Variable: {
                const Variable& v = t.var();
                const Variable* inner = innermostNamed(v.name);
                // free variables carry their sort so the text parses without declarations
                bool annotate = forceAnnotation || inner == nullptr || !(*inner == v);
                return annotate ? v.name + ":" + v.sort : v.name;
            }
            case Term::Kind::Constant: return t.name();
            case Term::Kind::Application: {
                std::string out = t.name() + "(";
                for (std::size_t i = 0; i < t.arguments().size(); ++i) {
                    if (i != 0) out += ", ";
                    out += term(t.arguments()[i]);
                }
                return out + ")";
            }
            case Term::Kind::Binder: {
                std::string head = keyword(t.binderKind()) + " " + t.bound().name + ":" + t.bound().sort + ". ";
                bound_.push_back(t.bound());
                std::string body = formula(t.body());
                bound_.pop_back();
                return head + body;
            }
            case Term::Kind::Generic: {
                if (!t.restriction()) return keyword(t.genericKind()) + "[" + t.sort() + "]";
                std::string head = keyword(t.genericKind()) + "[" + t.bound().name + ":" + t.sort() + " | ";
                bound_.push_back(t.bound());
                std::string body = formula(*t.restriction());
                bound_.pop_back();
                return head + body + "]";
            }
        }
        return "?";
    }

    std::string formula(const Formula& f) {
        using K = Formula::Kind;
        switch (f.kind()) {
            case K::True: return "true";
            case K::False: return "false";
            case K::Atom: {
                if (f.terms().empty()) return f.predicate();
                std::string out = f.predicate() + "(";
                for (std::size_t i = 0; i < f.terms().size(); ++i) {
                    if (i != 0) out += ", ";
                    out += term(f.terms()[i]);
                }
                return out + ")";
            }
            case K::Equal: {
                const Term& l = f.terms()[0];
                const Term& r = f.terms()[1];
                bool bothFree = isFreeVariable(l) && isFreeVariable(r);
                return operand(l, bothFree) + " = " + operand(r, bothFree);
            }
            case K::PredicateVariableAtom:
                return f.predicateVariable().name + "(" + term(f.terms()[0]) + ")";
            case K::Not: {
                const Formula& g = f.operand();
                std::string inner = formula(g);
                if (g.isBinary()) inner = "(" + inner + ")";
                return "not " + inner;
            }
            case K::And:
            case K::Or:
            case K::Implies: {
                int p = precedence(f);
                bool rightAssoc = f.kind() == K::Implies;
                const Formula& l = f.lhs();
                const Formula& r = f.rhs();
                std::string ls = formula(l);
                std::string rs = formula(r);
                int pl = precedence(l);
                int pr = precedence(r);
                if (openRight(l) || pl < p || (rightAssoc && pl == p)) ls = "(" + ls + ")";
                bool rhsBare = pr == 0 || pr > p || (rightAssoc && pr == p);
                if (!rhsBare) rs = "(" + rs + ")";
                const char* op = f.kind() == K::And ? " and " : (f.kind() == K::Or ? " or " : " implies ");
                return ls + op + rs;
            }
            case K::Quantifier: {
                const Variable& v = f.bound();
                std::string head = keyword(f.quantifierKind());
                if (f.majority()) head += *f.majority() == MajorityMode::Strict ? ">" : ">=";
                head += " " + v.name + ":" + v.sort;
                bound_.push_back(v);
                if (f.restriction()) head += " (" + formula(*f.restriction()) + ")";
                std::string body = formula(f.body());
                bound_.pop_back();
                return head + ". " + body;
            }
            case K::SecondOrder: {
                const auto& pv = f.predicateVariable();
                return keyword(f.secondOrderKind()) + " " + pv.name + ":" + pv.sort + ". " + formula(f.body());
            }
        }
        return "?";
    }

  private:
    std::string operand(const Term& t, bool annotate) {
        std::string s = term(t, annotate && t.kind() == Term::Kind::Variable);
        return t.kind() == Term::Kind::Binder ? "(" + s + ")" : s;
    }

    bool isFreeVariable(const Term& t) const {
        if (t.kind() != Term::Kind::Variable) return false;
        for (const auto& b : bound_) {
            if (b == t.var()) return false;
        }
        return true;
    }

    const Variable* innermostNamed(const std::string& name) const {
        for (auto it = bound_.rbegin(); it != bound_.rend(); ++it) {
            if (it->name == name) return &*it;
        }
        return nullptr;
    }

    std::vector<Variable> bound_;
};

}  // namespace

std::string printTerm(const Term& t) { return Printer().term(t); }

std::string printFormula(const Formula& f) { return Printer().formula(f); }

std::string printSequent(const std::vector<Formula>& hypotheses, const Formula& conclusion) {
    std::string out;
    for (std::size_t i = 0; i < hypotheses.size(); ++i) {
        if (i != 0) out += ", ";
        out += printFormula(hypotheses[i]);
    }
    if (!hypotheses.empty()) out += " ";
    return out + "|- " + printFormula(conclusion);
}

std::string printSignature(const Signature& sig) {
    std::ostringstream os;
    for (const auto& s : sig.sorts()) {
        if (sig.integerSort() && *sig.integerSort() == s) {
            os << "integer " << s << "\n";
        } else {
            os << "sort " << s << "\n";
        }
    }
    for (const auto& [n, s] : sig.constants()) os << "const " << n << " : " << s << "\n";
    for (const auto& [n, t] : sig.functions()) {
        os << "func " << n << " : ";
        for (std::size_t i = 0; i < t.arguments.size(); ++i) os << (i ? ", " : "") << t.arguments[i];
        os << " -> " << t.result << "\n";
    }
    for (const auto& [n, a] : sig.predicates()) {
        os << "pred " << n;
        if (!a.empty()) {
            os << " : ";
            for (std::size_t i = 0; i < a.size(); ++i) os << (i ? ", " : "") << a[i];
        }
        os << "\n";
    }
    for (const auto& [n, s] : sig.variables()) os << "var " << n << " : " << s << "\n";
    return os.str();
}

}  // namespace epsk
