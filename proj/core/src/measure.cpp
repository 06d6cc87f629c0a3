#include "epsk/measure.hpp"

#include <cctype>
#include <numeric>
#include <stdexcept>

namespace epsk {

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den <= 0 || num < 0) throw std::invalid_argument("rational must be non-negative with positive denominator");
    std::int64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
}

std::optional<Rational> Rational::parse(std::string_view text) {
    auto digits = [](std::string_view s) {
        if (s.empty() || s.size() > 12) return false;
        for (char c : s) {
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        }
        return true;
    };
    auto toInt = [](std::string_view s) {
        std::int64_t v = 0;
        for (char c : s) v = v * 10 + (c - '0');
        return v;
    };
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        auto n = text.substr(0, slash);
        auto d = text.substr(slash + 1);
        if (!digits(n) || !digits(d) || toInt(d) == 0) return std::nullopt;
        return Rational(toInt(n), toInt(d));
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        auto whole = text.substr(0, dot);
        auto frac = text.substr(dot + 1);
        if (!digits(whole) || !digits(frac)) return std::nullopt;
        std::int64_t den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        return Rational(toInt(whole) * den + toInt(frac), den);
    }
    if (!digits(text)) return std::nullopt;
    return Rational(toInt(text), 1);
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

int Rational::compareShare(std::uint64_t part, std::uint64_t whole) const {
    // part/whole ? num/den  <=>  part*den ? num*whole
    __int128 lhs = static_cast<__int128>(part) * den_;
    __int128 rhs = static_cast<__int128>(num_) * static_cast<__int128>(whole);
    return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
}

std::string regimeName(StarRegime regime) { return regime == StarRegime::A ? "A" : "B"; }

std::optional<StarRegime> parseRegime(std::string_view text) {
    if (text == "A" || text == "a") return StarRegime::A;
    if (text == "B" || text == "b") return StarRegime::B;
    return std::nullopt;
}

}  // namespace epsk
