// Exhaustive enumeration of the finite models of a signature.
//
// Models are ordered first by the tuple of domain sizes (one per sort, in
// sort-name order, later sorts varying fastest) and then by a mixed-radix
// counter over predicate cells, constant values and function cells.
// Domain elements are named d1..dn.

#ifndef EPSK_ENUMERATE_HPP
#define EPSK_ENUMERATE_HPP

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "epsk/model.hpp"

namespace epsk {

class EnumerationLimit : public std::runtime_error {
  public:
    EnumerationLimit(const std::string& what, long double estimate)
        : std::runtime_error(what), estimate_(estimate) {}
    long double estimate() const { return estimate_; }

  private:
    long double estimate_;
};

class ModelSpace {
  public:
    /// Callback returns false to stop early.
    using Visitor = std::function<bool(const Model&, std::uint64_t index)>;

    ModelSpace(Signature sig, std::size_t minSize, std::size_t maxSize, MeasureConfig cfg,
               std::uint64_t limit);

    std::uint64_t count() const { return total_; }
    Model at(std::uint64_t index) const;

    /// Visits models [begin, end) in order, mutating one model per block.
    void forEach(std::uint64_t begin, std::uint64_t end, const Visitor& visit) const;
    void forEach(const Visitor& visit) const { forEach(0, total_, visit); }

  private:
    struct Digit {
        enum class Kind { Cell, Constant, FunctionCell } kind;
        std::string name;
        std::size_t cell;
        std::size_t radix;
    };
    struct Block {
        std::vector<std::size_t> sizes;
        std::uint64_t first;
        std::uint64_t count;
    };

    Model baseModel(const Block& b) const;
    std::vector<Digit> digits(const Block& b) const;
    static void apply(Model& m, const Digit& d, std::size_t value);

    Signature sig_;
    std::vector<SortName> sorts_;
    MeasureConfig cfg_;
    std::vector<Block> blocks_;
    std::uint64_t total_ = 0;
};

inline constexpr std::uint64_t kDefaultEnumerationLimit = 50'000'000;

/// All models with every sort of size 1..maxSize. Throws EnumerationLimit
/// (with the count estimate) when the space exceeds `limit`, and
/// std::invalid_argument for signatures with an integer sort.
ModelSpace enumerateModels(const Signature& sig, std::size_t maxSize, MeasureConfig cfg = {},
                           std::uint64_t limit = kDefaultEnumerationLimit);

}  // namespace epsk

#endif  // EPSK_ENUMERATE_HPP
