#include "epsk/classify.hpp"

#include <map>
#include <stdexcept>

#include "epsk/evaluator.hpp"

namespace epsk {

namespace {

const SortName kU = "U";

Formula unary(const std::string& p, const Variable& x) { return Formula::atom(p, {Term::variable(x)}); }

Formula binaryQuantifier(QuantifierKind kind, std::optional<MajorityMode> mode = std::nullopt) {
    Variable x{"x", kU};
    return Formula::quantifier(kind, x, unary("A", x), unary("B", x), mode);
}

// Truth table indexed by [n][a][b] where a and b are bitmasks over d1..dn.
using Table = std::vector<std::vector<std::vector<bool>>>;

Table truthTable(const QuantifierDefinition& q, std::size_t bound, std::size_t& checked) {
    Table table(bound + 1);
    for (std::size_t n = 1; n <= bound; ++n) {
        Model m;
        std::vector<std::string> names;
        for (std::size_t i = 1; i <= n; ++i) names.push_back("d" + std::to_string(i));
        m.addSort(kU, names);
        m.addPredicate("A", {kU});
        m.addPredicate("B", {kU});
        m.config() = q.config;
        Evaluator ev(m);
        std::size_t subsets = std::size_t{1} << n;
        table[n].assign(subsets, std::vector<bool>(subsets, false));
        for (std::size_t a = 0; a < subsets; ++a) {
            for (std::size_t i = 0; i < n; ++i) m.cells("A")[i] = ((a >> i) & 1U) != 0;
            for (std::size_t b = 0; b < subsets; ++b) {
                for (std::size_t i = 0; i < n; ++i) m.cells("B")[i] = ((b >> i) & 1U) != 0;
                ev.reset();
                table[n][a][b] = ev.formula(q.formula);
                ++checked;
            }
        }
    }
    return table;
}

Monotonicity combine(bool up, bool down) {
    if (up && down) return Monotonicity::Both;
    if (up) return Monotonicity::Upward;
    if (down) return Monotonicity::Downward;
    return Monotonicity::None;
}

}  // namespace

Signature quantifierSignature() {
    Signature sig;
    sig.addSort(kU);
    sig.addPredicate("A", {kU});
    sig.addPredicate("B", {kU});
    return sig;
}

std::vector<std::string> builtinQuantifierNames() {
    return {"forall", "exists", "no", "not-every", "most", "most>", "most>=", "many", "many>", "many>=",
            "forall*", "exists*"};
}

std::optional<QuantifierDefinition> builtinQuantifier(const std::string& name, MeasureConfig cfg) {
    Variable x{"x", kU};
    std::optional<Formula> f;
    if (name == "forall") f = binaryQuantifier(QuantifierKind::Forall);
    if (name == "exists") f = binaryQuantifier(QuantifierKind::Exists);
    if (name == "no") f = Formula::negation(binaryQuantifier(QuantifierKind::Exists));
    if (name == "not-every") f = Formula::negation(binaryQuantifier(QuantifierKind::Forall));
    if (name == "most") f = binaryQuantifier(QuantifierKind::Most);
    if (name == "most>") f = binaryQuantifier(QuantifierKind::Most, MajorityMode::Strict);
    if (name == "most>=") f = binaryQuantifier(QuantifierKind::Most, MajorityMode::Weak);
    if (name == "many") f = binaryQuantifier(QuantifierKind::Many);
    if (name == "many>") f = binaryQuantifier(QuantifierKind::Many, MajorityMode::Strict);
    if (name == "many>=") f = binaryQuantifier(QuantifierKind::Many, MajorityMode::Weak);
    if (name == "forall*") f = binaryQuantifier(QuantifierKind::ForallStar);
    if (name == "exists*") f = binaryQuantifier(QuantifierKind::ExistsStar);
    if (!f) return std::nullopt;
    return QuantifierDefinition{name, *f, cfg};
}

std::string monotonicityName(Monotonicity m) {
    switch (m) {
        case Monotonicity::Upward: return "up";
        case Monotonicity::Downward: return "down";
        case Monotonicity::None: return "none";
        case Monotonicity::Both: return "both";
    }
    return "none";
}

QuantifierProfile classifyQuantifier(const QuantifierDefinition& q, std::size_t sizeBound) {
    if (sizeBound < 1) throw std::invalid_argument("size bound must be at least 1");
    if (sizeBound > 10) throw std::invalid_argument("size bound above 10 is not supported");
    if (!freeVars(q.formula).empty()) throw std::invalid_argument("quantifier definition must be closed");
    QuantifierProfile p;
    p.name = q.name;
    p.sizeBound = sizeBound;
    Table t = truthTable(q, sizeBound, p.modelsChecked);

    bool conservative = true, symmetric = true, intersective = true;
    bool leftUp = true, leftDown = true, rightUp = true, rightDown = true;
    for (std::size_t n = 1; n <= sizeBound; ++n) {
        std::size_t subsets = std::size_t{1} << n;
        std::map<std::size_t, bool> byIntersection;
        for (std::size_t a = 0; a < subsets; ++a) {
            for (std::size_t b = 0; b < subsets; ++b) {
                bool v = t[n][a][b];
                if (v != t[n][a][a & b]) conservative = false;
                if (v != t[n][b][a]) symmetric = false;
                auto [it, inserted] = byIntersection.emplace(a & b, v);
                if (!inserted && it->second != v) intersective = false;
                if (!v) continue;
                // every pair (a, b) -> (a', b) or (a, b') with one element added or removed
                for (std::size_t i = 0; i < n; ++i) {
                    std::size_t bit = std::size_t{1} << i;
                    if ((b & bit) == 0 && !t[n][a][b | bit]) rightUp = false;
                    if ((b & bit) != 0 && !t[n][a][b & ~bit]) rightDown = false;
                    if ((a & bit) == 0 && !t[n][a | bit][b]) leftUp = false;
                    if ((a & bit) != 0 && !t[n][a & ~bit][b]) leftDown = false;
                }
            }
        }
    }
    p.conservative = conservative;
    p.symmetric = symmetric;
    p.intersective = intersective;
    p.left = combine(leftUp, leftDown);
    p.right = combine(rightUp, rightDown);
    return p;
}

std::vector<Formula> squareCorners(const std::string& a, const std::string& b, const SortName& sort,
                                   bool existentialImport) {
    Variable x{"x", sort};
    Formula ax = unary(a, x);
    Formula bx = unary(b, x);
    Formula all = Formula::quantifier(QuantifierKind::Forall, x, ax, bx);
    Formula some = Formula::quantifier(QuantifierKind::Exists, x, ax, bx);
    Formula no = Formula::quantifier(QuantifierKind::Forall, x, ax, Formula::negation(bx));
    Formula notAll = Formula::quantifier(QuantifierKind::Exists, x, ax, Formula::negation(bx));
    if (existentialImport) {
        Formula inhabited = Formula::quantifier(QuantifierKind::Exists, x, std::nullopt, ax);
        all = Formula::conjunction(all, inhabited);
        no = Formula::conjunction(no, inhabited);
    }
    return {all, some, no, notAll};
}

SquareReport checkSquare(const Model& m, const std::string& a, const std::string& b, bool existentialImport) {
    const auto* sa = m.signature().predicate(a);
    const auto* sb = m.signature().predicate(b);
    if (sa == nullptr || sa->size() != 1) throw ModelError(a + " is not a unary predicate");
    if (sb == nullptr || sb->size() != 1) throw ModelError(b + " is not a unary predicate");
    if ((*sa)[0] != (*sb)[0]) throw ModelError(a + " and " + b + " range over different sorts");

    SquareReport r;
    r.existentialImport = existentialImport;
    r.corners = squareCorners(a, b, (*sa)[0], existentialImport);
    Evaluator ev(m);
    bool v[4];
    for (int i = 0; i < 4; ++i) {
        ev.reset();
        v[i] = ev.formula(r.corners[static_cast<std::size_t>(i)]);
    }
    r.all = v[0];
    r.some = v[1];
    r.no = v[2];
    r.notAll = v[3];
    r.contradictoryAllNotAll = r.all != r.notAll;
    r.contradictorySomeNo = r.some != r.no;
    r.contrary = !(r.all && r.no);
    r.subcontrary = r.some || r.notAll;
    r.subalternationAll = !r.all || r.some;
    r.subalternationNo = !r.no || r.notAll;
    return r;
}

}  // namespace epsk
