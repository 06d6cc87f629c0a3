// Binary quantifiers as predicates on subsets of {0..n-1} encoded as
// bitmasks, and their closure properties computed directly from the
// definitions. Independent of the formula evaluator.

#ifndef EPSK_TESTS_BITMASK_HPP
#define EPSK_TESTS_BITMASK_HPP

#include <bit>
#include <cstdint>
#include <functional>
#include <string>

namespace oracle {

using Mask = std::uint32_t;
using Quantifier = std::function<bool(int n, Mask a, Mask b)>;

inline int card(Mask m) { return std::popcount(m); }

inline bool every(int, Mask a, Mask b) { return (a & ~b) == 0; }
inline bool some(int, Mask a, Mask b) { return (a & b) != 0; }
inline bool none(int, Mask a, Mask b) { return (a & b) == 0; }
inline bool notEvery(int, Mask a, Mask b) { return (a & ~b) != 0; }

/// |A and B| / |A| > num/den (or >= when weak); false when A is empty.
inline Quantifier proportion(int num, int den, bool weak) {
    return [=](int, Mask a, Mask b) {
        if (a == 0) return false;
        long lhs = static_cast<long>(card(a & b)) * den;
        long rhs = static_cast<long>(card(a)) * num;
        return weak ? lhs >= rhs : lhs > rhs;
    };
}

struct Profile {
    bool conservative = true;
    bool leftUp = true, leftDown = true;
    bool rightUp = true, rightDown = true;
    bool symmetric = true;
};

/// Checks every property on all pairs (A, B) over domains 1..maxSize.
/// Monotonicity compares every pair of sets related by inclusion.
inline Profile profile(const Quantifier& q, int maxSize) {
    Profile p;
    for (int n = 1; n <= maxSize; ++n) {
        Mask all = (Mask{1} << n) - 1;
        for (Mask a = 0; a <= all; ++a) {
            for (Mask b = 0; b <= all; ++b) {
                bool v = q(n, a, b);
                if (v != q(n, a, a & b)) p.conservative = false;
                if (v != q(n, b, a)) p.symmetric = false;
                for (Mask c = 0; c <= all; ++c) {
                    if ((b & ~c) != 0) continue;  // b subset of c
                    if (v && !q(n, a, c)) p.rightUp = false;
                    if (q(n, a, c) && !v) p.rightDown = false;
                }
                for (Mask c = 0; c <= all; ++c) {
                    if ((a & ~c) != 0) continue;  // a subset of c
                    if (v && !q(n, c, b)) p.leftUp = false;
                    if (q(n, c, b) && !v) p.leftDown = false;
                }
            }
        }
    }
    return p;
}

/// "up", "down", "both" or "none", matching the library's naming.
inline std::string direction(bool up, bool down) {
    if (up && down) return "both";
    if (up) return "up";
    if (down) return "down";
    return "none";
}

}  // namespace oracle

#endif  // EPSK_TESTS_BITMASK_HPP
