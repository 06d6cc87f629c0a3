#include "epsk/proof.hpp"

#include <map>
#include <sstream>

#include "epsk/print.hpp"

namespace epsk {

namespace {

struct RuleInfo {
    Rule rule;
    const char* name;
    std::size_t arity;
};

constexpr RuleInfo kRules[] = {
    {Rule::Hyp, "hyp", 0},
    {Rule::AndI, "and-i", 2},
    {Rule::AndE1, "and-e1", 1},
    {Rule::AndE2, "and-e2", 1},
    {Rule::OrI1, "or-i1", 1},
    {Rule::OrI2, "or-i2", 1},
    {Rule::OrE, "or-e", 3},
    {Rule::ImpI, "imp-i", 1},
    {Rule::ImpE, "imp-e", 2},
    {Rule::NotI, "not-i", 1},
    {Rule::NotE, "not-e", 2},
    {Rule::Raa, "raa", 1},
    {Rule::FalseE, "false-e", 1},
    {Rule::ForallI, "forall-i", 1},
    {Rule::ForallE, "forall-e", 1},
    {Rule::ExistsI, "exists-i", 1},
    {Rule::ExistsE, "exists-e", 2},
    {Rule::EpsIntro, "eps-intro", 1},
    {Rule::TauIntro, "tau-intro", 1},
    {Rule::EpsDual, "eps-dual", 1},
    {Rule::TauDual, "tau-dual", 1},
    {Rule::TauElim, "tau-elim", 1},
    {Rule::StarWeaken, "star-weaken", 1},
    {Rule::StarStrengthen, "star-strengthen", 1},
    {Rule::MajRefuteMinority, "maj-refute-minority", 1},
    {Rule::MajRefuteDisjoint, "maj-refute-disjoint", 2},
    {Rule::MostInst, "most-inst", 1},
};

}  // namespace

std::string ruleName(Rule r) {
    for (const auto& info : kRules) {
        if (info.rule == r) return info.name;
    }
    return "?";
}

std::optional<Rule> parseRule(const std::string& name) {
    for (const auto& info : kRules) {
        if (name == info.name) return info.rule;
    }
    return std::nullopt;
}

std::vector<Rule> allRules() {
    std::vector<Rule> out;
    for (const auto& info : kRules) out.push_back(info.rule);
    return out;
}

std::size_t ruleArity(Rule r) {
    for (const auto& info : kRules) {
        if (info.rule == r) return info.arity;
    }
    return 0;
}

ProofRef makeProof(Sequent s, Rule rule, std::vector<ProofRef> premises, Annotation a) {
    auto node = std::make_shared<ProofTree>();
    node->sequent = std::move(s);
    node->rule = rule;
    node->premises = std::move(premises);
    node->annotation = std::move(a);
    return node;
}

namespace {

class ScriptPrinter {
  public:
    int emit(const ProofTree& t) {
        if (auto it = numbers_.find(&t); it != numbers_.end()) return it->second;
        std::vector<int> refs;
        for (const auto& p : t.premises) refs.push_back(emit(*p));
        int n = ++counter_;
        numbers_.emplace(&t, n);
        os_ << n << ". " << printSequent(t.sequent.hypotheses, t.sequent.conclusion) << " ; " << ruleName(t.rule);
        if (!refs.empty()) {
            os_ << "(";
            for (std::size_t i = 0; i < refs.size(); ++i) os_ << (i ? ", " : "") << refs[i];
            os_ << ")";
        }
        const Annotation& a = t.annotation;
        if (a.witness) {
            os_ << " [" << a.instanceOf.value_or("x") << " := " << printTerm(*a.witness) << "]";
        } else if (a.eigenName) {
            os_ << " [eigen " << *a.eigenName;
            if (a.eigenSort) os_ << ":" << *a.eigenSort;
            os_ << "]";
        }
        os_ << "\n";
        return n;
    }

    std::string str() const { return os_.str(); }

  private:
    std::map<const ProofTree*, int> numbers_;
    int counter_ = 0;
    std::ostringstream os_;
};

}  // namespace

std::string printProofScript(const ProofTree& root) {
    ScriptPrinter p;
    p.emit(root);
    return p.str();
}

}  // namespace epsk
