// Brute-force properties of binary quantifiers and the square of opposition.

#ifndef EPSK_CLASSIFY_HPP
#define EPSK_CLASSIFY_HPP

#include <optional>
#include <string>
#include <vector>

#include "epsk/model.hpp"
#include "epsk/syntax.hpp"

namespace epsk {

/// A binary quantifier Q(A, B) given as a closed formula over sort U with
/// unary predicates A and B, plus the reading parameters it is evaluated with.
struct QuantifierDefinition {
    std::string name;
    Formula formula;
    MeasureConfig config;
};

/// sort U; pred A : U; pred B : U
Signature quantifierSignature();

/// forall, exists, no, not-every, most, most>=, many, forall*, exists*.
/// A bare "most" or "many" takes its strictness from cfg.majorityMode.
std::optional<QuantifierDefinition> builtinQuantifier(const std::string& name, MeasureConfig cfg = {});
std::vector<std::string> builtinQuantifierNames();

enum class Monotonicity { Upward, Downward, None, Both };
std::string monotonicityName(Monotonicity m);

struct QuantifierProfile {
    std::string name;
    bool conservative = false;
    Monotonicity left = Monotonicity::None;
    Monotonicity right = Monotonicity::None;
    bool symmetric = false;
    /// Truth depends only on A∩B. Reported as a proxy for "weak" behaviour.
    bool intersective = false;
    std::size_t sizeBound = 0;
    std::size_t modelsChecked = 0;
};

/// Exhaustive over all (A, B) on domains of size 1..sizeBound.
/// Throws std::invalid_argument when sizeBound < 1.
QuantifierProfile classifyQuantifier(const QuantifierDefinition& q, std::size_t sizeBound);

struct SquareReport {
    bool all = false;
    bool some = false;
    bool no = false;
    bool notAll = false;
    bool existentialImport = false;
    bool contradictoryAllNotAll = false;  // opposite values
    bool contradictorySomeNo = false;
    bool contrary = false;                // All and No not both true
    bool subcontrary = false;             // Some or NotAll true
    bool subalternationAll = false;       // All implies Some
    bool subalternationNo = false;        // No implies NotAll
    std::vector<Formula> corners;         // All, Some, No, NotAll
};

/// The four corner formulas for unary predicates a and b of one sort.
std::vector<Formula> squareCorners(const std::string& a, const std::string& b, const SortName& sort,
                                   bool existentialImport);

/// Throws ModelError when a or b is not a unary predicate, or their sorts differ.
SquareReport checkSquare(const Model& m, const std::string& a, const std::string& b, bool existentialImport);

}  // namespace epsk

#endif  // EPSK_CLASSIFY_HPP
