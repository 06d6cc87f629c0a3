// Seeded random formulas for property tests and the selftest suites.

#ifndef EPSK_GENERATE_HPP
#define EPSK_GENERATE_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "epsk/syntax.hpp"

namespace epsk {

struct GeneratorConfig {
    int maxQuantifierDepth = 3;
    /// Connectives allowed on any path below the root.
    int maxConnectives = 3;
    /// Emit restricted quantifiers `forall x (R). F`.
    bool restricted = false;
    /// Emit starred quantifiers and MOST/MANY besides forall/exists.
    bool generalized = false;
    /// Use eps/tau terms as atom arguments.
    bool choiceTerms = false;
    /// Names drawn for bound variables; reuse exercises shadowing.
    std::vector<std::string> variableNames{"x", "y", "z"};
};

class FormulaGenerator {
  public:
    FormulaGenerator(Signature sig, GeneratorConfig cfg, std::uint64_t seed);

    /// A closed formula.
    Formula closed();
    /// A formula whose free variables are among `scope`.
    Formula open(const std::vector<Variable>& scope);

    std::mt19937_64& engine() { return rng_; }

  private:
    Formula formula(std::vector<Variable>& scope, int depth, int budget);
    std::optional<Formula> atom(const std::vector<Variable>& scope, int depth);
    std::optional<Term> termOf(const SortName& sort, const std::vector<Variable>& scope, int depth);
    Formula quantified(std::vector<Variable>& scope, int depth, int budget);
    int below(int n);
    bool chance(double p);

    Signature sig_;
    GeneratorConfig cfg_;
    std::mt19937_64 rng_;
};

/// The EPSKERNEL_SEED environment variable when set, else `fallback`.
/// Throws std::invalid_argument when the variable is not an unsigned integer.
std::uint64_t seedFromEnvironment(std::uint64_t fallback);

}  // namespace epsk

#endif  // EPSK_GENERATE_HPP
