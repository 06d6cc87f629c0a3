#include "epsk/model.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>

namespace epsk {

namespace {

constexpr Element kUndefined = std::numeric_limits<Element>::max();

bool isPrime(std::size_t n) {
    if (n < 2) return false;
    for (std::size_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

bool isSquare(std::size_t n) {
    std::size_t r = 0;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r * r == n;
}

}  // namespace

std::optional<Builtin> parseBuiltin(const std::string& name) {
    if (name == "prime") return Builtin::Prime;
    if (name == "even") return Builtin::Even;
    if (name == "odd") return Builtin::Odd;
    if (name == "square") return Builtin::Square;
    return std::nullopt;
}

std::string builtinName(Builtin b) {
    switch (b) {
        case Builtin::Prime: return "prime";
        case Builtin::Even: return "even";
        case Builtin::Odd: return "odd";
        case Builtin::Square: return "square";
        case Builtin::None: break;
    }
    return "none";
}

void Model::addSort(const SortName& sort, std::vector<std::string> elements) {
    if (sorts_.count(sort) != 0) throw ModelError("sort " + sort + " declared twice");
    if (elements.empty()) throw ModelError("sort " + sort + " has an empty domain");
    std::set<std::string> seen;
    for (const auto& e : elements) {
        if (!seen.insert(e).second) throw ModelError("duplicate element " + e + " in sort " + sort);
    }
    Domain d;
    d.size = elements.size();
    d.elements = std::move(elements);
    sorts_.emplace(sort, std::move(d));
    signature_.addSort(sort);
}

void Model::addIntegerSort(const SortName& sort, std::size_t n) {
    if (sorts_.count(sort) != 0) throw ModelError("sort " + sort + " declared twice");
    if (n == 0) throw ModelError("density bound must be positive");
    Domain d;
    d.size = n;
    d.measure = Measure{Measure::Kind::Density, n};
    sorts_.emplace(sort, std::move(d));
    signature_.setIntegerSort(sort);
}

void Model::setDensityBound(const SortName& sort, std::size_t n) {
    auto it = sorts_.find(sort);
    if (it == sorts_.end() || it->second.measure.kind != Measure::Kind::Density) {
        throw ModelError(sort + " is not an integer sort");
    }
    if (n == 0) throw ModelError("density bound must be positive");
    for (const auto& [name, table] : functions_) {
        const auto& args = table.type.arguments;
        if (table.type.result == sort || std::find(args.begin(), args.end(), sort) != args.end()) {
            throw ModelError("function " + name + " is tabulated over " + sort);
        }
    }
    for (const auto& [name, value] : constants_) {
        if (*signature_.constantSort(name) == sort && value >= n) {
            throw ModelError("constant " + name + " lies outside [1.." + std::to_string(n) + "]");
        }
    }
    it->second.size = n;
    it->second.measure.bound = n;
}

std::vector<std::size_t> Model::stridesFor(const std::vector<SortName>& sorts, std::size_t& total) const {
    std::vector<std::size_t> strides(sorts.size());
    total = 1;
    for (std::size_t i = sorts.size(); i-- > 0;) {
        strides[i] = total;
        total *= domain(sorts[i]).size;
    }
    return strides;
}

void Model::addPredicate(const std::string& name, std::vector<SortName> arguments) {
    if (predicates_.count(name) != 0) throw ModelError("predicate " + name + " declared twice");
    for (const auto& s : arguments) {
        if (!hasSort(s)) throw ModelError("predicate " + name + " uses unknown sort " + s);
    }
    Table t;
    std::size_t total = 0;
    t.strides = stridesFor(arguments, total);
    t.arguments = arguments;
    bool onInteger = false;
    for (const auto& s : arguments) onInteger = onInteger || domain(s).elements.empty();
    if (!onInteger) t.cells.assign(total, false);
    predicates_.emplace(name, std::move(t));
    signature_.addPredicate(name, std::move(arguments));
}

void Model::setBuiltin(const std::string& predicate, Builtin builtin) {
    auto it = predicates_.find(predicate);
    if (it == predicates_.end()) throw ModelError("unknown predicate " + predicate);
    if (it->second.arguments.size() != 1 || !signature_.integerSort() ||
        it->second.arguments[0] != *signature_.integerSort()) {
        throw ModelError("builtin predicates are unary over the integer sort");
    }
    it->second.builtin = builtin;
    it->second.cells.clear();
}

std::size_t Model::offset(const std::vector<SortName>& sorts, const std::vector<std::size_t>& strides,
                          std::span<const Element> args, const std::string& what) const {
    if (args.size() != sorts.size()) throw ModelError("arity mismatch for " + what);
    std::size_t off = 0;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] >= domain(sorts[i]).size) throw ModelError("element out of domain for " + what);
        off += args[i] * strides[i];
    }
    return off;
}

void Model::setHolds(const std::string& predicate, std::span<const Element> args, bool value) {
    auto it = predicates_.find(predicate);
    if (it == predicates_.end()) throw ModelError("unknown predicate " + predicate);
    Table& t = it->second;
    if (t.builtin != Builtin::None || (t.cells.empty() && !t.arguments.empty())) {
        throw ModelError("predicate " + predicate + " has no explicit extension");
    }
    if (t.cells.empty()) t.cells.assign(1, false);
    t.cells[offset(t.arguments, t.strides, args, predicate)] = value;
}

void Model::addConstant(const std::string& name, const SortName& sort, Element value) {
    if (constants_.count(name) != 0) throw ModelError("constant " + name + " declared twice");
    if (value >= domain(sort).size) throw ModelError("constant " + name + " outside its domain");
    constants_.emplace(name, value);
    signature_.addConstant(name, sort);
}

void Model::addFunction(const std::string& name, FunctionType type) {
    if (functions_.count(name) != 0) throw ModelError("function " + name + " declared twice");
    FunctionTable f;
    std::size_t total = 0;
    f.strides = stridesFor(type.arguments, total);
    domain(type.result);
    f.values.assign(total, kUndefined);
    f.type = type;
    functions_.emplace(name, std::move(f));
    signature_.addFunction(name, std::move(type));
}

void Model::setFunctionValue(const std::string& name, std::span<const Element> args, Element value) {
    auto it = functions_.find(name);
    if (it == functions_.end()) throw ModelError("unknown function " + name);
    FunctionTable& f = it->second;
    if (value >= domain(f.type.result).size) throw ModelError("value of " + name + " outside its domain");
    f.values[offset(f.type.arguments, f.strides, args, name)] = value;
}

const Model::Domain& Model::domain(const SortName& sort) const {
    auto it = sorts_.find(sort);
    if (it == sorts_.end()) throw ModelError("unknown sort " + sort);
    return it->second;
}

std::size_t Model::domainSize(const SortName& sort) const { return domain(sort).size; }

std::string Model::elementName(const SortName& sort, Element e) const {
    const Domain& d = domain(sort);
    if (d.elements.empty()) return std::to_string(static_cast<std::size_t>(e) + 1);
    return d.elements.at(e);
}

std::optional<Element> Model::findElement(const SortName& sort, const std::string& name) const {
    const Domain& d = domain(sort);
    if (d.elements.empty()) {
        std::size_t value = 0;
        if (name.empty() || name.size() > 18) return std::nullopt;
        for (char c : name) {
            if (c < '0' || c > '9') return std::nullopt;
            value = value * 10 + static_cast<std::size_t>(c - '0');
        }
        if (value < 1 || value > d.size) return std::nullopt;
        return static_cast<Element>(value - 1);
    }
    for (std::size_t i = 0; i < d.elements.size(); ++i) {
        if (d.elements[i] == name) return static_cast<Element>(i);
    }
    return std::nullopt;
}

const Measure& Model::measure(const SortName& sort) const { return domain(sort).measure; }

bool Model::holds(const std::string& predicate, std::span<const Element> args) const {
    auto it = predicates_.find(predicate);
    if (it == predicates_.end()) throw ModelError("unknown predicate " + predicate);
    const Table& t = it->second;
    if (t.builtin != Builtin::None) {
        std::size_t n = static_cast<std::size_t>(args[0]) + 1;
        switch (t.builtin) {
            case Builtin::Prime: return isPrime(n);
            case Builtin::Even: return n % 2 == 0;
            case Builtin::Odd: return n % 2 == 1;
            case Builtin::Square: return isSquare(n);
            case Builtin::None: break;
        }
    }
    if (t.cells.empty()) return false;
    return t.cells[offset(t.arguments, t.strides, args, predicate)];
}

Element Model::constant(const std::string& name) const {
    auto it = constants_.find(name);
    if (it == constants_.end()) throw ModelError("unknown constant " + name);
    return it->second;
}

Element Model::apply(const std::string& function, std::span<const Element> args) const {
    auto it = functions_.find(function);
    if (it == functions_.end()) throw ModelError("unknown function " + function);
    const FunctionTable& f = it->second;
    Element v = f.values[offset(f.type.arguments, f.strides, args, function)];
    if (v == kUndefined) throw ModelError("function " + function + " undefined at this argument");
    return v;
}

std::vector<std::string> Model::partialFunctions() const {
    std::vector<std::string> out;
    for (const auto& [n, f] : functions_) {
        for (Element v : f.values) {
            if (v == kUndefined) {
                out.push_back(n);
                break;
            }
        }
    }
    return out;
}

std::vector<bool>& Model::cells(const std::string& predicate) {
    auto it = predicates_.find(predicate);
    if (it == predicates_.end()) throw ModelError("unknown predicate " + predicate);
    if (it->second.cells.empty()) it->second.cells.assign(1, false);
    return it->second.cells;
}

const std::vector<bool>& Model::cells(const std::string& predicate) const {
    auto it = predicates_.find(predicate);
    if (it == predicates_.end()) throw ModelError("unknown predicate " + predicate);
    return it->second.cells;
}

Builtin Model::builtin(const std::string& predicate) const {
    auto it = predicates_.find(predicate);
    if (it == predicates_.end()) throw ModelError("unknown predicate " + predicate);
    return it->second.builtin;
}

void Model::setConstantValue(const std::string& name, Element value) {
    auto it = constants_.find(name);
    if (it == constants_.end()) throw ModelError("unknown constant " + name);
    it->second = value;
}

std::vector<Element>& Model::functionTable(const std::string& name) {
    auto it = functions_.find(name);
    if (it == functions_.end()) throw ModelError("unknown function " + name);
    return it->second.values;
}

// ---------------------------------------------------------------------------

namespace {

// Decodes a row-major offset back into argument positions.
std::vector<Element> decode(std::size_t off, const std::vector<std::size_t>& sizes) {
    std::vector<Element> args(sizes.size());
    for (std::size_t i = sizes.size(); i-- > 0;) {
        args[i] = static_cast<Element>(off % sizes[i]);
        off /= sizes[i];
    }
    return args;
}

}  // namespace

std::string printModel(const Model& m) {
    std::ostringstream os;
    const Signature& sig = m.signature();
    for (const auto& s : sig.sorts()) {
        if (sig.integerSort() && *sig.integerSort() == s) {
            os << "integer " << s << "\n";
            os << "measure " << s << " = density(" << m.measure(s).bound << ")\n";
            continue;
        }
        os << "sort " << s << " = {";
        for (std::size_t i = 0; i < m.domainSize(s); ++i) {
            os << (i ? ", " : "") << m.elementName(s, static_cast<Element>(i));
        }
        os << "}\n";
    }
    for (const auto& [name, args] : sig.predicates()) {
        os << "pred " << name;
        if (!args.empty()) {
            os << " : ";
            for (std::size_t i = 0; i < args.size(); ++i) os << (i ? ", " : "") << args[i];
        }
        Builtin b = m.builtin(name);
        if (b != Builtin::None) {
            os << " = builtin(" << builtinName(b) << ")\n";
            continue;
        }
        if (args.empty()) {
            os << " = " << (m.holds(name, {}) ? "true" : "false") << "\n";
            continue;
        }
        std::vector<std::size_t> sizes;
        for (const auto& s : args) sizes.push_back(m.domainSize(s));
        os << " = {";
        bool first = true;
        const auto& cells = m.cells(name);
        for (std::size_t off = 0; off < cells.size(); ++off) {
            if (!cells[off]) continue;
            auto tuple = decode(off, sizes);
            os << (first ? "" : ", ");
            first = false;
            if (tuple.size() == 1) {
                os << m.elementName(args[0], tuple[0]);
            } else {
                os << "(";
                for (std::size_t i = 0; i < tuple.size(); ++i) os << (i ? "," : "") << m.elementName(args[i], tuple[i]);
                os << ")";
            }
        }
        os << "}\n";
    }
    for (const auto& [name, sort] : sig.constants()) {
        os << "const " << name << " : " << sort << " = " << m.elementName(sort, m.constant(name)) << "\n";
    }
    for (const auto& [name, type] : sig.functions()) {
        os << "func " << name << " : ";
        for (std::size_t i = 0; i < type.arguments.size(); ++i) os << (i ? ", " : "") << type.arguments[i];
        os << " -> " << type.result << " = {";
        std::vector<std::size_t> sizes;
        std::size_t total = 1;
        for (const auto& s : type.arguments) {
            sizes.push_back(m.domainSize(s));
            total *= sizes.back();
        }
        for (std::size_t off = 0; off < total; ++off) {
            auto tuple = decode(off, sizes);
            os << (off ? ", " : "") << "(";
            for (std::size_t i = 0; i < tuple.size(); ++i) os << (i ? "," : "") << m.elementName(type.arguments[i], tuple[i]);
            os << ") -> " << m.elementName(type.result, m.apply(name, tuple));
        }
        os << "}\n";
    }
    const MeasureConfig& c = m.config();
    os << "threshold most = " << c.mostThreshold.str() << "\n";
    os << "threshold many = " << c.manyThreshold.str() << "\n";
    os << "mode majority = " << keyword(c.majorityMode) << "\n";
    os << "regime star = " << regimeName(c.starRegime) << "\n";
    return os.str();
}

}  // namespace epsk
