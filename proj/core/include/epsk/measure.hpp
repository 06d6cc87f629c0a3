// Exact thresholds and the reading parameters shared by the evaluator and
// the proof kernel.

#ifndef EPSK_MEASURE_HPP
#define EPSK_MEASURE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace epsk {

/// Non-negative rational in lowest terms. Thresholds are kept exact so that
/// `share > 1/2` never depends on floating point.
class Rational {
  public:
    constexpr Rational() = default;
    Rational(std::int64_t num, std::int64_t den);

    /// Parses "0.8771", "1/2" or "1". Returns nullopt on malformed input.
    static std::optional<Rational> parse(std::string_view text);

    std::int64_t numerator() const { return num_; }
    std::int64_t denominator() const { return den_; }
    double toDouble() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    std::string str() const;

    /// Compares part/whole against this threshold without division.
    /// Returns <0, 0, >0 as part/whole is below, at, or above the threshold.
    int compareShare(std::uint64_t part, std::uint64_t whole) const;

    friend bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator<(const Rational& a, const Rational& b);
    friend bool operator<=(const Rational& a, const Rational& b) { return a < b || a == b; }

  private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

/// Entailment orientation between the starred quantifiers and the classical
/// ones. B: forall => forall*, exists* => exists. A: the converse pair.
enum class StarRegime { A, B };

std::string regimeName(StarRegime regime);
std::optional<StarRegime> parseRegime(std::string_view text);

}  // namespace epsk

#endif  // EPSK_MEASURE_HPP
