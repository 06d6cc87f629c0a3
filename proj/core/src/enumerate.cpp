#include "epsk/enumerate.hpp"

#include <cmath>
#include <sstream>

namespace epsk {

namespace {

std::vector<std::string> elementNames(std::size_t n) {
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 1; i <= n; ++i) out.push_back("d" + std::to_string(i));
    return out;
}

std::size_t sizeOf(const std::vector<SortName>& sorts, const std::vector<std::size_t>& sizes, const SortName& s) {
    for (std::size_t i = 0; i < sorts.size(); ++i) {
        if (sorts[i] == s) return sizes[i];
    }
    throw ModelError("unknown sort " + s);
}

}  // namespace

ModelSpace::ModelSpace(Signature sig, std::size_t minSize, std::size_t maxSize, MeasureConfig cfg,
                       std::uint64_t limit)
    : sig_(std::move(sig)), sorts_(sig_.sorts().begin(), sig_.sorts().end()), cfg_(cfg) {
    if (sig_.integerSort()) throw std::invalid_argument("cannot enumerate models of an integer sort");
    if (auto problems = sig_.validate(); !problems.empty()) throw std::invalid_argument(problems.front());
    if (minSize < 1 || maxSize < minSize) throw std::invalid_argument("domain sizes must satisfy 1 <= min <= max");

    std::vector<std::size_t> sizes(sorts_.size(), minSize);
    long double estimate = 0;
    std::uint64_t first = 0;
    for (;;) {
        // log2 of the block size keeps the estimate finite for huge spaces
        long double bits = 0;
        for (const auto& [name, args] : sig_.predicates()) {
            long double cells = 1;
            for (const auto& a : args) cells *= sizeOf(sorts_, sizes, a);
            bits += cells;
        }
        for (const auto& [name, sort] : sig_.constants()) bits += std::log2(static_cast<long double>(sizeOf(sorts_, sizes, sort)));
        for (const auto& [name, type] : sig_.functions()) {
            long double cells = 1;
            for (const auto& a : type.arguments) cells *= sizeOf(sorts_, sizes, a);
            bits += cells * std::log2(static_cast<long double>(sizeOf(sorts_, sizes, type.result)));
        }
        long double blockCount = std::exp2(bits);
        estimate += blockCount;
        if (estimate > static_cast<long double>(limit)) {
            std::ostringstream os;
            os << "model space too large: about " << static_cast<double>(estimate)
               << " models so far, limit " << limit;
            throw EnumerationLimit(os.str(), estimate);
        }
        std::uint64_t count = 1;
        for (const Digit& d : digits(Block{sizes, 0, 0})) count *= d.radix;
        blocks_.push_back({sizes, first, count});
        first += count;

        bool done = true;
        for (std::size_t i = sizes.size(); i-- > 0;) {
            if (++sizes[i] <= maxSize) {
                done = false;
                break;
            }
            sizes[i] = minSize;
        }
        if (done) break;
    }
    total_ = first;
}

Model ModelSpace::baseModel(const Block& b) const {
    Model m;
    for (std::size_t i = 0; i < sorts_.size(); ++i) m.addSort(sorts_[i], elementNames(b.sizes[i]));
    for (const auto& [name, args] : sig_.predicates()) m.addPredicate(name, args);
    for (const auto& [name, sort] : sig_.constants()) m.addConstant(name, sort, 0);
    for (const auto& [name, type] : sig_.functions()) {
        m.addFunction(name, type);
        auto& table = m.functionTable(name);
        std::fill(table.begin(), table.end(), Element{0});
    }
    m.config() = cfg_;
    return m;
}

std::vector<ModelSpace::Digit> ModelSpace::digits(const Block& b) const {
    std::vector<Digit> out;
    for (const auto& [name, args] : sig_.predicates()) {
        std::size_t cells = 1;
        for (const auto& a : args) cells *= sizeOf(sorts_, b.sizes, a);
        for (std::size_t c = 0; c < cells; ++c) out.push_back({Digit::Kind::Cell, name, c, 2});
    }
    for (const auto& [name, sort] : sig_.constants()) {
        out.push_back({Digit::Kind::Constant, name, 0, sizeOf(sorts_, b.sizes, sort)});
    }
    for (const auto& [name, type] : sig_.functions()) {
        std::size_t cells = 1;
        for (const auto& a : type.arguments) cells *= sizeOf(sorts_, b.sizes, a);
        std::size_t radix = sizeOf(sorts_, b.sizes, type.result);
        for (std::size_t c = 0; c < cells; ++c) out.push_back({Digit::Kind::FunctionCell, name, c, radix});
    }
    return out;
}

void ModelSpace::apply(Model& m, const Digit& d, std::size_t value) {
    switch (d.kind) {
        case Digit::Kind::Cell: m.cells(d.name)[d.cell] = value != 0; break;
        case Digit::Kind::Constant: m.setConstantValue(d.name, static_cast<Element>(value)); break;
        case Digit::Kind::FunctionCell: m.functionTable(d.name)[d.cell] = static_cast<Element>(value); break;
    }
}

Model ModelSpace::at(std::uint64_t index) const {
    Model result;
    forEach(index, index + 1, [&](const Model& m, std::uint64_t) {
        result = m;
        return false;
    });
    return result;
}

void ModelSpace::forEach(std::uint64_t begin, std::uint64_t end, const Visitor& visit) const {
    if (end > total_) end = total_;
    for (const Block& b : blocks_) {
        std::uint64_t blockEnd = b.first + b.count;
        if (blockEnd <= begin || b.first >= end) continue;
        Model m = baseModel(b);
        std::vector<Digit> ds = digits(b);
        std::vector<std::size_t> value(ds.size(), 0);
        std::uint64_t local = begin > b.first ? begin - b.first : 0;
        for (std::size_t i = 0; i < ds.size(); ++i) {
            value[i] = local % ds[i].radix;
            local /= ds[i].radix;
            apply(m, ds[i], value[i]);
        }
        for (std::uint64_t index = std::max(begin, b.first); index < std::min(end, blockEnd); ++index) {
            if (!visit(m, index)) return;
            for (std::size_t i = 0; i < ds.size(); ++i) {
                if (++value[i] < ds[i].radix) {
                    apply(m, ds[i], value[i]);
                    break;
                }
                value[i] = 0;
                apply(m, ds[i], 0);
            }
        }
    }
}

ModelSpace enumerateModels(const Signature& sig, std::size_t maxSize, MeasureConfig cfg, std::uint64_t limit) {
    if (maxSize < 1) throw std::invalid_argument("maximum domain size must be at least 1");
    return ModelSpace(sig, 1, maxSize, cfg, limit);
}

}  // namespace epsk
