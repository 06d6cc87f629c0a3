// Finite many-sorted structures.
//
// Each sort has an ordered domain; the listing order is the total order
// used by the choice policies of the evaluator (least element first).
// Elements are addressed by their 0-based position in that order.

#ifndef EPSK_MODEL_HPP
#define EPSK_MODEL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "epsk/measure.hpp"
#include "epsk/syntax.hpp"

namespace epsk {

using Element = std::uint32_t;

class ModelError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Measure {
    enum class Kind { Count, Density };
    Kind kind = Kind::Count;
    std::size_t bound = 0;  // N of density(N)

    bool operator==(const Measure&) const = default;
};

/// Arithmetic predicates available on the integer sort.
enum class Builtin { None, Prime, Even, Odd, Square };
std::optional<Builtin> parseBuiltin(const std::string& name);
std::string builtinName(Builtin b);

/// Reading parameters of the generalized quantifiers.
struct MeasureConfig {
    Rational mostThreshold{1, 2};
    Rational manyThreshold{2, 5};
    MajorityMode majorityMode = MajorityMode::Strict;
    StarRegime starRegime = StarRegime::B;

    bool operator==(const MeasureConfig&) const = default;
};

class Model {
  public:
    // -- construction -------------------------------------------------------

    void addSort(const SortName& sort, std::vector<std::string> elements);
    /// Pseudo-infinite integer sort measured on the initial segment [1..N].
    void addIntegerSort(const SortName& sort, std::size_t n);
    /// Re-measures an integer sort on [1..n]. Throws when a function
    /// table or constant depends on the old bound.
    void setDensityBound(const SortName& sort, std::size_t n);
    void addPredicate(const std::string& name, std::vector<SortName> arguments);
    void setBuiltin(const std::string& predicate, Builtin builtin);
    void setHolds(const std::string& predicate, std::span<const Element> args, bool value);
    void addConstant(const std::string& name, const SortName& sort, Element value);
    void addFunction(const std::string& name, FunctionType type);
    void setFunctionValue(const std::string& name, std::span<const Element> args, Element value);

    MeasureConfig& config() { return config_; }
    const MeasureConfig& config() const { return config_; }

    // -- queries -------------------------------------------------------------

    const Signature& signature() const { return signature_; }
    bool hasSort(const SortName& sort) const { return sorts_.count(sort) != 0; }
    std::size_t domainSize(const SortName& sort) const;
    std::string elementName(const SortName& sort, Element e) const;
    std::optional<Element> findElement(const SortName& sort, const std::string& name) const;
    const Measure& measure(const SortName& sort) const;

    bool holds(const std::string& predicate, std::span<const Element> args) const;
    Element constant(const std::string& name) const;
    Element apply(const std::string& function, std::span<const Element> args) const;
    /// Functions whose table has an undefined cell, for totality checks.
    std::vector<std::string> partialFunctions() const;

    /// Direct access to a predicate's dense extension, row-major over its
    /// argument domains. Not available for builtins.
    std::vector<bool>& cells(const std::string& predicate);
    std::vector<bool> const& cells(const std::string& predicate) const;
    Builtin builtin(const std::string& predicate) const;
    void setConstantValue(const std::string& name, Element value);
    std::vector<Element>& functionTable(const std::string& name);

  private:
    struct Domain {
        std::vector<std::string> elements;  // empty for integer sorts
        std::size_t size = 0;
        Measure measure;
    };
    struct Table {
        std::vector<SortName> arguments;
        std::vector<std::size_t> strides;
        std::vector<bool> cells;
        Builtin builtin = Builtin::None;
    };
    struct FunctionTable {
        FunctionType type;
        std::vector<std::size_t> strides;
        std::vector<Element> values;  // kUndefined where unset
    };

    const Domain& domain(const SortName& sort) const;
    std::size_t offset(const std::vector<SortName>& sorts, const std::vector<std::size_t>& strides,
                       std::span<const Element> args, const std::string& what) const;
    std::vector<std::size_t> stridesFor(const std::vector<SortName>& sorts, std::size_t& total) const;

    Signature signature_;
    std::map<SortName, Domain> sorts_;
    std::map<std::string, Table> predicates_;
    std::map<std::string, Element> constants_;
    std::map<std::string, FunctionTable> functions_;
    MeasureConfig config_;
};

/// Text in the model file format, parseable by parseModel.
std::string printModel(const Model& m);

}  // namespace epsk

#endif  // EPSK_MODEL_HPP
