// Brute-force semantic comparisons over enumerated models.

#ifndef EPSK_TESTS_SEMANTIC_HPP
#define EPSK_TESTS_SEMANTIC_HPP

#include <optional>
#include <string>

#include "epsk/enumerate.hpp"
#include "epsk/evaluator.hpp"
#include "epsk/print.hpp"

namespace testing_support {

struct Disagreement {
    std::string model;
    bool lhs = false;
    bool rhs = false;
};

/// First model of size <= maxSize on which f and g differ.
inline std::optional<Disagreement> firstDifference(const epsk::Signature& sig, const epsk::Formula& f,
                                                   const epsk::Formula& g, std::size_t maxSize,
                                                   epsk::MeasureConfig cfg = {}) {
    std::optional<Disagreement> found;
    epsk::enumerateModels(sig, maxSize, cfg).forEach([&](const epsk::Model& m, std::uint64_t) {
        bool a = epsk::holds(m, f);
        bool b = epsk::holds(m, g);
        if (a != b) found = Disagreement{epsk::printModel(m), a, b};
        return !found;
    });
    return found;
}

inline std::string describe(const std::optional<Disagreement>& d) {
    if (!d) return "equivalent";
    return "differ (" + std::to_string(d->lhs) + " vs " + std::to_string(d->rhs) + ") on\n" + d->model;
}

}  // namespace testing_support

#endif  // EPSK_TESTS_SEMANTIC_HPP
