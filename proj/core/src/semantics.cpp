#include "epsk/semantics.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

#include "epsk/print.hpp"

namespace epsk {

std::string determinerName(Determiner d) {
    switch (d) {
        case Determiner::A: return "a";
        case Determiner::Some: return "some";
        case Determiner::The: return "the";
        case Determiner::Every: return "every";
        case Determiner::All: return "all";
        case Determiner::Each: return "each";
        case Determiner::No: return "no";
        case Determiner::Most: return "most";
        case Determiner::Many: return "many";
        case Determiner::NotEvery: return "not every";
    }
    return "?";
}

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])) != 0) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])) != 0) --e;
    return std::string(s.substr(b, e - b));
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

// Collapses internal runs of whitespace so "passed   algebra" matches.
std::string normalizePhrase(std::string_view s) {
    std::istringstream in{std::string(s)};
    std::string word;
    std::string out;
    while (in >> word) {
        if (!out.empty()) out += ' ';
        out += lower(word);
    }
    return out;
}

bool validName(const std::string& s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(),
                       [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; });
}

Diagnostic lineError(std::size_t line, std::size_t offset, std::string message) {
    SourceSpan span{offset, offset, line, 1};
    return Diagnostic{Severity::Error, std::move(message), span};
}

}  // namespace

ParseResult<Lexicon> parseLexicon(std::string_view text) {
    ParseResult<Lexicon> result;
    Lexicon lex;
    std::size_t lineNo = 0;
    std::size_t offset = 0;
    while (offset <= text.size()) {
        std::size_t nl = text.find('\n', offset);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view raw = text.substr(offset, nl - offset);
        ++lineNo;
        std::size_t lineStart = offset;
        offset = nl + 1;
        if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        std::string line = trim(raw);
        if (line.empty()) continue;

        auto fail = [&](const std::string& msg) { result.diagnostics.push_back(lineError(lineNo, lineStart, msg)); };
        std::size_t space = line.find_first_of(" \t");
        std::size_t colon = line.rfind(':');
        if (space == std::string::npos || colon == std::string::npos || colon < space) {
            fail("expected 'category words : entry'");
            continue;
        }
        std::string category = line.substr(0, space);
        std::string entry = trim(std::string_view(line).substr(colon + 1));
        std::vector<std::string> words;
        {
            std::string list = line.substr(space, colon - space);
            std::size_t start = 0;
            while (start <= list.size()) {
                std::size_t comma = list.find(',', start);
                if (comma == std::string::npos) comma = list.size();
                std::string w = normalizePhrase(std::string_view(list).substr(start, comma - start));
                if (!w.empty()) words.push_back(w);
                start = comma + 1;
            }
        }
        if (words.empty()) {
            fail("no words before ':'");
            continue;
        }

        try {
            if (category == "noun") {
                if (!validName(entry)) {
                    fail("invalid sort name '" + entry + "'");
                    continue;
                }
                lex.signature.addSort(entry);
                for (const auto& w : words) lex.nouns[w] = entry;
            } else if (category == "pronoun") {
                std::optional<SortName> sort;
                if (entry != "*") {
                    if (!validName(entry)) {
                        fail("invalid sort name '" + entry + "'");
                        continue;
                    }
                    lex.signature.addSort(entry);
                    sort = entry;
                }
                for (const auto& w : words) lex.pronouns[w] = sort;
            } else if (category == "verb" || category == "tverb" || category == "adj") {
                std::size_t open = entry.find('(');
                std::size_t close = entry.rfind(')');
                if (open == std::string::npos || close == std::string::npos || close < open ||
                    trim(std::string_view(entry).substr(close + 1)) != "") {
                    fail("expected 'pred(sort, ...)' after ':'");
                    continue;
                }
                std::string pred = trim(std::string_view(entry).substr(0, open));
                std::vector<SortName> sorts;
                std::string inside = entry.substr(open + 1, close - open - 1);
                std::size_t start = 0;
                while (start <= inside.size()) {
                    std::size_t comma = inside.find(',', start);
                    if (comma == std::string::npos) comma = inside.size();
                    sorts.push_back(trim(std::string_view(inside).substr(start, comma - start)));
                    start = comma + 1;
                }
                std::size_t arity = category == "tverb" ? 2 : 1;
                if (!validName(pred) ||
                    !std::all_of(sorts.begin(), sorts.end(), [](const std::string& s) { return validName(s); })) {
                    fail("invalid predicate declaration '" + entry + "'");
                    continue;
                }
                if (sorts.size() != arity) {
                    fail(category + " '" + pred + "' needs " + std::to_string(arity) + " argument sort" +
                         (arity == 1 ? "" : "s"));
                    continue;
                }
                for (const auto& s : sorts) lex.signature.addSort(s);
                lex.signature.addPredicate(pred, sorts);
                auto& target = category == "verb" ? lex.verbs : category == "tverb" ? lex.transitiveVerbs : lex.adjectives;
                for (const auto& w : words) target[w] = pred;
            } else {
                fail("unknown category '" + category + "'");
            }
        } catch (const SortError& e) {
            fail(e.what());
        }
    }
    if (result.diagnostics.empty()) result.value = std::move(lex);
    return result;
}

std::vector<Token> tokenizeFragment(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c)) != 0) {
            ++i;
        } else if (c == '.' || c == ',') {
            out.push_back({std::string(1, c), i});
            ++i;
        } else {
            std::size_t start = i;
            while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])) == 0 && text[i] != '.' &&
                   text[i] != ',') {
                ++i;
            }
            out.push_back({lower(std::string(text.substr(start, i - start))), start});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct FragmentError {
    std::size_t token;
    std::string message;
};

template <class V>
struct Match {
    V value;
    std::size_t length;
    std::string phrase;
};

class FragmentParser {
  public:
    FragmentParser(const std::vector<Token>& tokens, const Lexicon& lex) : tokens_(tokens), lex_(lex) {
        auto widest = [&](const auto& map) {
            for (const auto& [w, _] : map) {
                maxWords_ = std::max<std::size_t>(maxWords_, std::count(w.begin(), w.end(), ' ') + 1);
            }
        };
        widest(lex.nouns);
        widest(lex.verbs);
        widest(lex.transitiveVerbs);
        widest(lex.adjectives);
        widest(lex.pronouns);
    }

    Discourse discourse() {
        Discourse d;
        while (pos_ < tokens_.size()) {
            if (at(".")) {
                ++pos_;
                continue;
            }
            d.sentences.push_back(sentence());
            if (pos_ < tokens_.size() && !at(".")) {
                throw FragmentError{pos_, "expected '.' or end of input, found '" + tokens_[pos_].text + "'"};
            }
        }
        if (d.sentences.empty()) throw FragmentError{pos_, "empty input"};
        return d;
    }

  private:
    bool at(const char* word) const { return pos_ < tokens_.size() && tokens_[pos_].text == word; }

    bool atSequence(std::initializer_list<const char*> words) const {
        std::size_t i = pos_;
        for (const char* w : words) {
            if (i >= tokens_.size() || tokens_[i].text != w) return false;
            ++i;
        }
        return true;
    }

    template <class Map>
    std::optional<Match<typename Map::mapped_type>> match(const Map& map, std::size_t from) const {
        for (std::size_t len = std::min(maxWords_, tokens_.size() - std::min(from, tokens_.size())); len >= 1; --len) {
            std::string phrase;
            bool broken = false;
            for (std::size_t k = 0; k < len; ++k) {
                const std::string& w = tokens_[from + k].text;
                if (w == "." || w == ",") {
                    broken = true;
                    break;
                }
                if (k) phrase += ' ';
                phrase += w;
            }
            if (broken) continue;
            for (const std::string& form : inflections(phrase)) {
                if (auto it = map.find(form); it != map.end()) return Match<typename Map::mapped_type>{it->second, len, phrase};
            }
        }
        return std::nullopt;
    }

    // The phrase itself, then the last word with a plural or third-person ending removed.
    static std::vector<std::string> inflections(const std::string& phrase) {
        std::vector<std::string> out{phrase};
        auto ends = [&](const char* suffix) {
            std::string s(suffix);
            return phrase.size() > s.size() + 1 && phrase.compare(phrase.size() - s.size(), s.size(), s) == 0;
        };
        if (ends("ies")) out.push_back(phrase.substr(0, phrase.size() - 3) + "y");
        if (ends("es")) out.push_back(phrase.substr(0, phrase.size() - 2));
        if (ends("s")) out.push_back(phrase.substr(0, phrase.size() - 1));
        return out;
    }

    bool known(std::size_t i) const {
        return match(lex_.nouns, i) || match(lex_.verbs, i) || match(lex_.transitiveVerbs, i) ||
               match(lex_.adjectives, i) || match(lex_.pronouns, i) || determinerAt(i) ||
               tokens_[i].text == "that";
    }

    std::optional<std::pair<Determiner, std::size_t>> determinerAt(std::size_t i) const {
        auto seq = [&](std::initializer_list<const char*> words) {
            std::size_t j = i;
            for (const char* w : words) {
                if (j >= tokens_.size() || tokens_[j].text != w) return false;
                ++j;
            }
            return true;
        };
        if (seq({"not", "every"})) return std::make_pair(Determiner::NotEvery, std::size_t{2});
        if (seq({"most", "of", "the"})) return std::make_pair(Determiner::Most, std::size_t{3});
        if (seq({"many", "of", "the"})) return std::make_pair(Determiner::Many, std::size_t{3});
        if (seq({"most", "of"})) return std::make_pair(Determiner::Most, std::size_t{2});
        if (seq({"many", "of"})) return std::make_pair(Determiner::Many, std::size_t{2});
        if (i >= tokens_.size()) return std::nullopt;
        static const std::map<std::string, Determiner> single{
            {"a", Determiner::A},         {"an", Determiner::A},     {"some", Determiner::Some},
            {"the", Determiner::The},     {"every", Determiner::Every}, {"all", Determiner::All},
            {"each", Determiner::Each},   {"no", Determiner::No},     {"most", Determiner::Most},
            {"many", Determiner::Many},
        };
        if (auto it = single.find(tokens_[i].text); it != single.end()) return std::make_pair(it->second, std::size_t{1});
        return std::nullopt;
    }

    [[noreturn]] void unexpected(const std::string& expected) const {
        if (pos_ >= tokens_.size() || tokens_[pos_].text == ".") {
            throw FragmentError{pos_, "expected " + expected + " before end of sentence"};
        }
        if (!known(pos_)) throw FragmentError{pos_, "unknown word '" + tokens_[pos_].text + "'"};
        throw FragmentError{pos_, "expected " + expected + ", found '" + tokens_[pos_].text + "'"};
    }

    bool startsNounPhrase() const { return determinerAt(pos_) || match(lex_.pronouns, pos_); }

    NounPhrase nounPhrase() {
        NounPhrase np;
        if (auto p = match(lex_.pronouns, pos_)) {
            np.pronoun = p->phrase;
            np.pronounSort = p->value;
            pos_ += p->length;
            return np;
        }
        auto det = determinerAt(pos_);
        if (!det) unexpected("a determiner or pronoun");
        np.determiner = det->first;
        pos_ += det->second;
        while (pos_ < tokens_.size() && !match(lex_.nouns, pos_)) {
            auto adj = match(lex_.adjectives, pos_);
            if (!adj) break;
            np.adjectives.push_back(adj->value);
            pos_ += adj->length;
        }
        auto noun = match(lex_.nouns, pos_);
        if (!noun) unexpected("a noun");
        np.noun = noun->phrase;
        np.sort = noun->value;
        pos_ += noun->length;
        if (at("that")) {
            ++pos_;
            auto [pred, object] = verbPhrase();
            np.relative = RelativeClause{pred, object};
        }
        return np;
    }

    std::pair<std::string, NounPhraseRef> verbPhrase() {
        if (auto tv = match(lex_.transitiveVerbs, pos_)) {
            std::size_t save = pos_;
            pos_ += tv->length;
            if (startsNounPhrase()) {
                auto object = std::make_shared<const NounPhrase>(nounPhrase());
                return {tv->value, object};
            }
            pos_ = save;
        }
        if (auto v = match(lex_.verbs, pos_)) {
            pos_ += v->length;
            return {v->value, nullptr};
        }
        unexpected("a verb");
    }

    Clause sentence() {
        Clause c;
        c.subject = nounPhrase();
        auto [pred, object] = verbPhrase();
        c.predicate = pred;
        c.object = object;
        return c;
    }

    const std::vector<Token>& tokens_;
    const Lexicon& lex_;
    std::size_t pos_ = 0;
    std::size_t maxWords_ = 1;
};

}  // namespace

ParseResult<Discourse> parseFragment(const std::vector<Token>& tokens, const Lexicon& lex) {
    ParseResult<Discourse> result;
    try {
        result.value = FragmentParser(tokens, lex).discourse();
    } catch (const FragmentError& e) {
        std::size_t offset = e.token < tokens.size() ? tokens[e.token].offset
                             : tokens.empty()        ? 0
                                                     : tokens.back().offset + tokens.back().text.size();
        std::size_t width = e.token < tokens.size() ? tokens[e.token].text.size() : 0;
        result.diagnostics.push_back(
            Diagnostic{Severity::Error, e.message, SourceSpan{offset, offset + width, 1, offset + 1}});
    }
    return result;
}

// ---------------------------------------------------------------------------
// Construction

Term resolvePronoun(DiscourseState& state, const std::optional<SortName>& sort) {
    auto it = std::find_if(state.salience.begin(), state.salience.end(),
                           [&](const Referent& r) { return !sort || r.sort == *sort; });
    if (it == state.salience.end()) {
        throw SemanticsError(sort ? "no salient referent of sort " + *sort : "no salient referent");
    }
    Referent r = *it;
    state.salience.erase(it);
    state.salience.insert(state.salience.begin(), r);
    return r.term;
}

namespace {

using Body = std::function<Formula(const Term&, DiscourseState&)>;

class Builder {
  public:
    Builder(const Lexicon& lex, const KernelConfig& cfg) : lex_(lex), cfg_(cfg) {}

    Formula clause(const Clause& c, DiscourseState& state) {
        return scope(c.subject, 0, state, slot(c.predicate, 0), [&](const Term& s, DiscourseState& st) {
            return predication(c.predicate, s, c.object, 1, st);
        });
    }

  private:
    static std::string variableName(int level) {
        static const char* names[] = {"x", "y", "z", "u", "v", "w"};
        if (level < 6) return names[level];
        return "x" + std::to_string(level - 5);
    }

    // Sort the predicate expects at `position`, used to resolve pronouns of any sort.
    std::optional<SortName> slot(const std::string& pred, std::size_t position) const {
        const auto* sorts = lex_.signature.predicate(pred);
        if (!sorts || position >= sorts->size()) return std::nullopt;
        return (*sorts)[position];
    }

    Formula atom(const std::string& pred, std::vector<Term> args) const {
        const auto* sorts = lex_.signature.predicate(pred);
        if (!sorts || sorts->size() != args.size()) throw SemanticsError("predicate " + pred + " is not declared");
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (args[i].sort() != (*sorts)[i]) {
                throw SemanticsError(pred + " expects " + (*sorts)[i] + " as argument " + std::to_string(i + 1) +
                                     ", got " + args[i].sort());
            }
        }
        return Formula::atom(pred, std::move(args));
    }

    Formula predication(const std::string& pred, const Term& subject, const NounPhraseRef& object, int level,
                        DiscourseState& state) {
        if (!object) return atom(pred, {subject});
        return scope(*object, level, state, slot(pred, 1),
                     [&](const Term& o, DiscourseState&) { return atom(pred, {subject, o}); });
    }

    std::optional<Formula> restriction(const NounPhrase& np, const Term& x, int level, const DiscourseState& state) {
        std::optional<Formula> r;
        auto add = [&](Formula f) { r = r ? Formula::conjunction(*r, f) : f; };
        for (const auto& adj : np.adjectives) add(atom(adj, {x}));
        if (np.relative) {
            DiscourseState scratch = state;
            add(predication(np.relative->predicate, x, np.relative->object, level + 1, scratch));
        }
        return r;
    }

    Formula scope(const NounPhrase& np, int level, DiscourseState& state, const std::optional<SortName>& expected,
                  const Body& body) {
        if (np.isPronoun()) return body(resolvePronoun(state, np.pronounSort ? np.pronounSort : expected), state);

        Variable x{variableName(level), np.sort};
        Term xt = Term::variable(x);
        std::optional<Formula> r = restriction(np, xt, level, state);
        auto probe = [&]() {
            DiscourseState scratch = state;
            return body(xt, scratch);
        };
        auto guarded = [&](bool implication) {
            Formula p = probe();
            if (!r) return p;
            return implication ? Formula::implication(*r, p) : Formula::conjunction(*r, p);
        };

        switch (*np.determiner) {
            case Determiner::A:
            case Determiner::Some: {
                Formula inner = guarded(false);
                for (const auto& ref : state.salience) {
                    if (ref.sort == np.sort) inner = Formula::conjunction(inner, Formula::negation(Formula::equal(xt, ref.term)));
                }
                Term e = Term::binder(BinderKind::Eta, x, inner);
                state.salience.insert(state.salience.begin(), Referent{e, np.sort, np.noun});
                Formula out = body(e, state);
                // the referent is asserted to meet its restriction as well
                if (r) out = Formula::conjunction(substitute(*r, x, e), out);
                if (cfg_.epsilonPresupposition) {
                    const auto* sorts = lex_.signature.predicate(np.sort);
                    if (sorts && *sorts == std::vector<SortName>{np.sort}) {
                        out = Formula::conjunction(Formula::atom(np.sort, {e}), out);
                    }
                }
                return out;
            }
            case Determiner::The: {
                if (!r) {
                    auto it = std::find_if(state.salience.begin(), state.salience.end(),
                                           [&](const Referent& ref) { return ref.noun == np.noun; });
                    if (it == state.salience.end()) {
                        it = std::find_if(state.salience.begin(), state.salience.end(),
                                          [&](const Referent& ref) { return ref.sort == np.sort; });
                    }
                    if (it != state.salience.end()) {
                        Referent ref = *it;
                        state.salience.erase(it);
                        state.salience.insert(state.salience.begin(), ref);
                        return body(ref.term, state);
                    }
                }
                Term e = Term::binder(BinderKind::Epsilon, x, r.value_or(Formula::truth(true)));
                state.salience.insert(state.salience.begin(), Referent{e, np.sort, np.noun});
                return body(e, state);
            }
            case Determiner::Every:
            case Determiner::All:
            case Determiner::Each:
            case Determiner::NotEvery: {
                Formula h = guarded(true);
                Formula out = substitute(h, x, Term::binder(BinderKind::Tau, x, h));
                return *np.determiner == Determiner::NotEvery ? Formula::negation(out) : out;
            }
            case Determiner::No:
                return Formula::negation(Formula::quantifier(QuantifierKind::Exists, x, std::nullopt, guarded(false)));
            case Determiner::Most:
            case Determiner::Many: {
                GenericKind kind = *np.determiner == Determiner::Most ? GenericKind::Most : GenericKind::Many;
                if (!r) return body(Term::generic(kind, np.sort), state);
                state.presuppositions.push_back(Formula::quantifier(QuantifierKind::Exists, x, std::nullopt, *r));
                return body(Term::generic(kind, x, *r), state);
            }
        }
        throw SemanticsError("unsupported determiner");
    }

    const Lexicon& lex_;
    const KernelConfig& cfg_;
};

}  // namespace

Construction buildLogicalForm(const Discourse& tree, const Lexicon& lex, DiscourseState state,
                              const KernelConfig& cfg) {
    if (tree.sentences.empty()) throw SemanticsError("empty discourse");
    Builder builder(lex, cfg);
    std::optional<Formula> formula;
    for (const auto& c : tree.sentences) {
        Formula f = builder.clause(c, state);
        formula = formula ? Formula::conjunction(*formula, f) : f;
        state.accumulated = state.accumulated ? Formula::conjunction(*state.accumulated, f) : f;
    }
    if (auto diags = wellSorted(*formula, lex.signature); !diags.empty()) {
        throw SemanticsError(diags.front().message);
    }
    return Construction{*formula, std::move(state)};
}

Construction interpret(std::string_view text, const Lexicon& lex, const KernelConfig& cfg) {
    auto tree = parseFragment(tokenizeFragment(text), lex);
    if (!tree) throw SemanticsError(formatDiagnostic(tree.diagnostics.front()));
    return buildLogicalForm(*tree, lex, DiscourseState{}, cfg);
}

}  // namespace epsk
