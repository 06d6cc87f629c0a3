// A controlled-English fragment mapped to logical forms whose noun phrases
// are individual terms. Anaphora is resolved against a salience stack.
//
// Fragment:
//   discourse := sentence ("." sentence)*
//   sentence  := np vp
//   np        := det adj* noun rel? | pronoun
//   rel       := "that" verb | "that" tverb np
//   vp        := verb | tverb np

#ifndef EPSK_SEMANTICS_HPP
#define EPSK_SEMANTICS_HPP

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "epsk/kernel.hpp"
#include "epsk/parser.hpp"
#include "epsk/syntax.hpp"

namespace epsk {

class SemanticsError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class Determiner { A, Some, The, Every, All, Each, No, Most, Many, NotEvery };

std::string determinerName(Determiner d);

struct Lexicon {
    /// Word form (possibly several words) to sort.
    std::map<std::string, SortName> nouns;
    /// Word form to predicate name; arities are in `signature`.
    std::map<std::string, std::string> verbs;
    std::map<std::string, std::string> transitiveVerbs;
    std::map<std::string, std::string> adjectives;
    /// Pronoun to the sort it refers to; nullopt accepts any sort.
    std::map<std::string, std::optional<SortName>> pronouns;
    Signature signature;
};

/// Lines of the form
///   noun dog, dogs : dog
///   verb bite, bites : bite(dog)
///   tverb know, knows : know(person, person)
///   adj red : red(thing)
///   pronoun he : man        (or `pronoun it : *`)
/// Words may span several tokens ("passed algebra"). `#` starts a comment.
ParseResult<Lexicon> parseLexicon(std::string_view text);

struct Token {
    std::string text;  // lower-cased
    std::size_t offset = 0;
};

/// Splits at whitespace; "." and "," become tokens of their own.
std::vector<Token> tokenizeFragment(std::string_view text);

struct NounPhrase;
using NounPhraseRef = std::shared_ptr<const NounPhrase>;

struct RelativeClause {
    std::string predicate;
    NounPhraseRef object;  // null for an intransitive verb
};

struct NounPhrase {
    std::optional<Determiner> determiner;  // absent for pronouns
    std::string noun;                      // word as written
    SortName sort;
    std::vector<std::string> adjectives;   // predicate names
    std::optional<RelativeClause> relative;
    std::string pronoun;
    std::optional<SortName> pronounSort;

    bool isPronoun() const { return !determiner.has_value(); }
};

struct Clause {
    NounPhrase subject;
    std::string predicate;
    NounPhraseRef object;  // null for an intransitive verb
};

struct Discourse {
    std::vector<Clause> sentences;
};

ParseResult<Discourse> parseFragment(const std::vector<Token>& tokens, const Lexicon& lex);

struct Referent {
    Term term;
    SortName sort;
    std::string noun;
};

struct DiscourseState {
    std::vector<Referent> salience;  // most salient first
    std::vector<Formula> presuppositions;
    std::optional<Formula> accumulated;
};

struct Construction {
    Formula formula;
    DiscourseState state;
};

/// Translates every sentence and conjoins the results onto the state's
/// accumulator. Throws SemanticsError for unresolved pronouns and sort clashes.
Construction buildLogicalForm(const Discourse& tree, const Lexicon& lex, DiscourseState state,
                              const KernelConfig& cfg = {});

/// Topmost referent whose sort matches (any sort when `sort` is empty);
/// the referent moves to the top of the stack. Throws SemanticsError.
Term resolvePronoun(DiscourseState& state, const std::optional<SortName>& sort);

/// Tokenizes, parses and builds in one step; throws SemanticsError with the
/// first diagnostic on parse failure.
Construction interpret(std::string_view text, const Lexicon& lex, const KernelConfig& cfg = {});

}  // namespace epsk

#endif  // EPSK_SEMANTICS_HPP
