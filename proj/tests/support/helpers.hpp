// Small conveniences shared by the test programs.

#ifndef EPSK_TESTS_HELPERS_HPP
#define EPSK_TESTS_HELPERS_HPP

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "epsk/parser.hpp"
#include "epsk/print.hpp"

namespace testing_support {

inline std::string dataPath(const std::string& relative) { return std::string(EPSK_TEST_DATA) + "/" + relative; }

inline std::string readData(const std::string& relative) {
    std::ifstream in(dataPath(relative));
    if (!in) throw std::runtime_error("missing test data " + relative);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline std::string joinDiagnostics(const std::vector<epsk::Diagnostic>& ds) {
    std::string out;
    for (const auto& d : ds) out += epsk::formatDiagnostic(d) + "\n";
    return out;
}

inline epsk::Formula formula(const std::string& text, const epsk::Signature& sig) {
    auto r = epsk::parseFormula(text, sig);
    if (!r) throw std::runtime_error("cannot parse '" + text + "':\n" + joinDiagnostics(r.diagnostics));
    return *r;
}

inline epsk::Term term(const std::string& text, const epsk::Signature& sig) {
    auto r = epsk::parseTerm(text, sig);
    if (!r) throw std::runtime_error("cannot parse '" + text + "':\n" + joinDiagnostics(r.diagnostics));
    return *r;
}

inline epsk::Signature signature(const std::string& text) {
    auto r = epsk::parseSignature(text);
    if (!r) throw std::runtime_error("bad signature:\n" + joinDiagnostics(r.diagnostics));
    return *r;
}

inline epsk::Model model(const std::string& text) {
    auto r = epsk::parseModel(text);
    if (!r) throw std::runtime_error("bad model:\n" + joinDiagnostics(r.diagnostics));
    return *r;
}

inline epsk::ProofScript proof(const std::string& text, const epsk::Signature& sig) {
    auto r = epsk::parseProofScript(text, sig);
    if (!r) throw std::runtime_error("bad proof:\n" + joinDiagnostics(r.diagnostics));
    return *r;
}

}  // namespace testing_support

#endif  // EPSK_TESTS_HELPERS_HPP
