// Terms, formulas and signatures of the many-sorted kernel language.
//
// Values are immutable and share structure; copying a Term or Formula is a
// reference-count bump.

#ifndef EPSK_SYNTAX_HPP
#define EPSK_SYNTAX_HPP

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace epsk {

using SortName = std::string;

/// A sorted variable. Identity is the (name, sort) pair.
struct Variable {
    std::string name;
    SortName sort;

    auto operator<=>(const Variable&) const = default;
};

struct FunctionType {
    std::vector<SortName> arguments;
    SortName result;

    bool operator==(const FunctionType&) const = default;
};

class SortError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class Signature {
  public:
    void addSort(const SortName& sort);
    void addConstant(const std::string& name, const SortName& sort);
    void addFunction(const std::string& name, FunctionType type);
    void addPredicate(const std::string& name, std::vector<SortName> arguments);
    void addVariable(const std::string& name, const SortName& sort);
    void setIntegerSort(const SortName& sort);

    bool hasSort(const SortName& sort) const { return sorts_.count(sort) != 0; }
    const SortName* constantSort(const std::string& name) const;
    const FunctionType* function(const std::string& name) const;
    const std::vector<SortName>* predicate(const std::string& name) const;
    const SortName* variableSort(const std::string& name) const;
    const std::optional<SortName>& integerSort() const { return integerSort_; }

    const std::set<SortName>& sorts() const { return sorts_; }
    const std::map<std::string, SortName>& constants() const { return constants_; }
    const std::map<std::string, FunctionType>& functions() const { return functions_; }
    const std::map<std::string, std::vector<SortName>>& predicates() const { return predicates_; }
    const std::map<std::string, SortName>& variables() const { return variables_; }

    /// Adds every declaration of `other`; conflicting redeclarations throw.
    void merge(const Signature& other);

    /// Problems with undeclared sorts; empty when the signature is coherent.
    std::vector<std::string> validate() const;

    bool operator==(const Signature&) const = default;

  private:
    std::set<SortName> sorts_;
    std::map<std::string, SortName> constants_;
    std::map<std::string, FunctionType> functions_;
    std::map<std::string, std::vector<SortName>> predicates_;
    std::map<std::string, SortName> variables_;
    std::optional<SortName> integerSort_;
};

enum class BinderKind { Epsilon, Tau, Iota, Eta };
enum class GenericKind { Most, Many };
enum class QuantifierKind { Forall, Exists, ForallStar, ExistsStar, Most, Many };
enum class SecondOrderKind { Forall, Exists };
enum class MajorityMode { Strict, Weak };

std::string keyword(BinderKind kind);
std::string keyword(GenericKind kind);
std::string keyword(QuantifierKind kind);
std::string keyword(SecondOrderKind kind);
std::string keyword(MajorityMode mode);

/// True for the measure-based kinds (MOST, MANY, and the starred pair).
bool isGeneralized(QuantifierKind kind);

class Formula;
struct TermNode;
struct FormulaNode;

class Term {
  public:
    enum class Kind { Variable, Constant, Application, Binder, Generic };

    static Term variable(Variable v);
    static Term constant(std::string name, SortName sort);
    static Term application(std::string function, std::vector<Term> arguments, SortName result);
    static Term binder(BinderKind kind, Variable bound, Formula body);
    /// Typed generic element: `most[dog]`.
    static Term generic(GenericKind kind, SortName sort);
    /// Predicate generic element: `most[x:student | passed(x)]`.
    static Term generic(GenericKind kind, Variable bound, Formula restriction);

    Kind kind() const;
    const SortName& sort() const;

    const Variable& var() const;                 // Variable
    const std::string& name() const;             // Constant, Application
    const std::vector<Term>& arguments() const;  // Application
    BinderKind binderKind() const;               // Binder
    const Variable& bound() const;               // Binder, restricted Generic
    const Formula& body() const;                 // Binder
    GenericKind genericKind() const;             // Generic
    const std::optional<Formula>& restriction() const;  // Generic

    bool operator==(const Term& other) const;
    bool operator!=(const Term& other) const { return !(*this == other); }
    bool sameNode(const Term& other) const { return node_ == other.node_; }
    /// Address of the shared node; stable while any copy of the term lives.
    const void* identity() const { return node_.get(); }

  private:
    explicit Term(std::shared_ptr<const TermNode> node) : node_(std::move(node)) {}
    std::shared_ptr<const TermNode> node_;
};

struct PredicateVariable {
    std::string name;
    SortName sort;

    auto operator<=>(const PredicateVariable&) const = default;
};

class Formula {
  public:
    enum class Kind {
        True,
        False,
        Atom,
        Equal,
        PredicateVariableAtom,
        Not,
        And,
        Or,
        Implies,
        Quantifier,
        SecondOrder
    };

    static Formula truth(bool value);
    static Formula atom(std::string predicate, std::vector<Term> arguments);
    static Formula equal(Term lhs, Term rhs);
    static Formula predicateVariableAtom(PredicateVariable pv, Term argument);
    static Formula negation(Formula f);
    static Formula conjunction(Formula lhs, Formula rhs);
    static Formula disjunction(Formula lhs, Formula rhs);
    static Formula implication(Formula lhs, Formula rhs);
    static Formula quantifier(QuantifierKind kind, Variable bound, std::optional<Formula> restriction,
                              Formula body, std::optional<MajorityMode> mode = std::nullopt);
    static Formula secondOrder(SecondOrderKind kind, PredicateVariable bound, Formula body);

    Kind kind() const;
    bool is(Kind k) const { return kind() == k; }
    bool isBinary() const;

    const std::string& predicate() const;        // Atom
    const std::vector<Term>& terms() const;      // Atom, Equal (two), PredicateVariableAtom (one)
    const PredicateVariable& predicateVariable() const;  // PredicateVariableAtom, SecondOrder
    const Formula& operand() const;              // Not
    const Formula& lhs() const;                  // And, Or, Implies
    const Formula& rhs() const;
    QuantifierKind quantifierKind() const;       // Quantifier
    SecondOrderKind secondOrderKind() const;     // SecondOrder
    const Variable& bound() const;               // Quantifier
    const std::optional<Formula>& restriction() const;  // Quantifier
    const std::optional<MajorityMode>& majority() const;  // Quantifier
    const Formula& body() const;                 // Quantifier, SecondOrder

    bool operator==(const Formula& other) const;
    bool operator!=(const Formula& other) const { return !(*this == other); }

  private:
    explicit Formula(std::shared_ptr<const FormulaNode> node) : node_(std::move(node)) {}
    std::shared_ptr<const FormulaNode> node_;
};

struct TermNode {
    Term::Kind kind;
    SortName sort;
    Variable var;
    std::string name;
    std::vector<Term> arguments;
    BinderKind binder = BinderKind::Epsilon;
    GenericKind generic = GenericKind::Most;
    std::optional<Formula> formula;
};

struct FormulaNode {
    Formula::Kind kind;
    std::string predicate;
    std::vector<Term> terms;
    std::vector<Formula> children;
    Variable bound;
    PredicateVariable predicateVariable;
    std::optional<Formula> restriction;
    std::optional<MajorityMode> majority;
    QuantifierKind quantifier = QuantifierKind::Forall;
    SecondOrderKind secondOrder = SecondOrderKind::Forall;
};

// ---------------------------------------------------------------------------
// Operations

using VariableSet = std::set<Variable>;

VariableSet freeVars(const Term& t);
VariableSet freeVars(const Formula& f);
std::set<PredicateVariable> freePredicateVars(const Formula& f);
bool occursFree(const Variable& v, const Formula& f);
bool occursFree(const Variable& v, const Term& t);

/// Every variable name occurring anywhere, bound or free.
std::set<std::string> variableNames(const Formula& f);
std::set<std::string> variableNames(const Term& t);

/// `base` if not in `avoid`, else the first of base', base'', ... that is not.
std::string freshName(const std::string& base, const std::set<std::string>& avoid);

/// Capture-avoiding substitution of `t` for the free occurrences of `v`.
/// Throws SortError when t's sort differs from v's.
Formula substitute(const Formula& f, const Variable& v, const Term& t);
Term substitute(const Term& s, const Variable& v, const Term& t);

/// Replaces the free occurrences of a predicate variable by a formula
/// abstraction `lambda param. replacement`.
Formula substitutePredicate(const Formula& f, const PredicateVariable& pv, const Variable& param,
                            const Formula& replacement);

bool alphaEq(const Formula& a, const Formula& b);
bool alphaEq(const Term& a, const Term& b);

struct SortDiagnostic {
    std::string location;
    std::string message;
};

/// Empty when `f` is well-sorted under `sig`. Never throws.
std::vector<SortDiagnostic> wellSorted(const Formula& f, const Signature& sig);
std::vector<SortDiagnostic> wellSorted(const Term& t, const Signature& sig);

/// Number of nested first-order quantifiers on the deepest path.
int quantifierDepth(const Formula& f);
/// True when no quantifier (first or second order) occurs, including inside terms.
bool quantifierFree(const Formula& f);

}  // namespace epsk

#endif  // EPSK_SYNTAX_HPP
