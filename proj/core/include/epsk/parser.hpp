// Concrete syntax: formulas, terms, signature files, model files and proof
// scripts. Parsing never throws; failures come back as diagnostics.
//
// Formula syntax, loosest binding first:
//   forall x:S (R). F    exists, forall*, exists*, most, many likewise
//   most> / most>=       MOST with explicit strict / weak comparison
//   forall2 X:S. F       second-order, X ranges over subsets of S
//   A implies B          right associative
//   A or B, A and B, not A
//   P(t, ...), t = u, true, false, (F)
// Terms: x, x:S, c, f(t, ...), eps x:S. F (tau, iota, eta), most[S],
// most[x:S | R], many[...].

#ifndef EPSK_PARSER_HPP
#define EPSK_PARSER_HPP

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "epsk/model.hpp"
#include "epsk/proof.hpp"
#include "epsk/syntax.hpp"

namespace epsk {

struct SourceSpan {
    std::size_t start = 0;  // byte offsets, end exclusive
    std::size_t end = 0;
    std::size_t line = 1;
    std::size_t column = 1;
};

enum class Severity { Error, Warning };

struct Diagnostic {
    Severity severity = Severity::Error;
    std::string message;
    SourceSpan span;
};

/// "file:line:col: error: message"
std::string formatDiagnostic(const Diagnostic& d, const std::string& source = "");

template <class T>
struct ParseResult {
    std::optional<T> value;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return value.has_value(); }
    explicit operator bool() const { return ok(); }
    const T& operator*() const { return *value; }
    const T* operator->() const { return &*value; }
};

struct ParseOptions {
    /// Declare unknown predicates and sorts on first use instead of rejecting them.
    bool inferSignature = false;
};

/// `extended`, when given, receives the signature plus any inferred declarations.
ParseResult<Formula> parseFormula(std::string_view text, const Signature& sig, const ParseOptions& opts = {},
                                  Signature* extended = nullptr);
ParseResult<Term> parseTerm(std::string_view text, const Signature& sig, const ParseOptions& opts = {});

ParseResult<Signature> parseSignature(std::string_view text);
ParseResult<Model> parseModel(std::string_view text);

struct ProofScript {
    ProofRef root;
    Signature signature;  // input signature plus in-script declarations
    std::size_t lines = 0;
};

/// Numbered lines `n. H1, ..., Hk |- F ; rule(refs) [annotation]`; the last
/// line is the root. Declarations (sort/const/func/pred/var) may be interleaved.
ParseResult<ProofScript> parseProofScript(std::string_view text, const Signature& sig);

}  // namespace epsk

#endif  // EPSK_PARSER_HPP
