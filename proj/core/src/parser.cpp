#include "epsk/parser.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace epsk {

namespace {

// ---------------------------------------------------------------------------
// Lexing

struct Token {
    enum class Kind { Ident, Punct, Newline, End };
    Kind kind = Kind::End;
    std::string text;
    SourceSpan span;
};

struct ParseError {
    SourceSpan span;
    std::string message;
};

bool identStart(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }
bool identChar(char c) { return identStart(c) || c == '\''; }

class Lexer {
  public:
    Lexer(std::string_view text, bool newlines) : text_(text), newlines_(newlines) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\n') {
                if (newlines_) out.push_back(make(Token::Kind::Newline, pos_, pos_ + 1));
                advance(1);
            } else if (std::isspace(static_cast<unsigned char>(c)) != 0) {
                advance(1);
            } else if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance(1);
            } else if (identStart(c)) {
                out.push_back(ident());
            } else {
                out.push_back(punct());
            }
        }
        out.push_back(make(Token::Kind::End, pos_, pos_));
        return out;
    }

  private:
    Token make(Token::Kind kind, std::size_t start, std::size_t end) {
        Token t;
        t.kind = kind;
        t.text = std::string(text_.substr(start, end - start));
        t.span = {start, end, startLine_, startColumn_};
        return t;
    }

    void mark() {
        startLine_ = line_;
        startColumn_ = column_;
    }

    void advance(std::size_t n) {
        for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i) {
            if (text_[pos_] == '\n') {
                ++line_;
                column_ = 1;
            } else {
                ++column_;
            }
            ++pos_;
        }
        mark();
    }

    Token ident() {
        mark();
        std::size_t start = pos_;
        std::size_t end = pos_;
        auto digit = [&](std::size_t i) {
            return i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i])) != 0;
        };
        if (digit(end)) {
            while (digit(end)) ++end;
            if (end + 1 < text_.size() && text_[end] == '.' && digit(end + 1)) {
                ++end;
                while (digit(end)) ++end;
            }
        }
        for (;;) {
            if (end < text_.size() && identChar(text_[end])) {
                ++end;
            } else if (end + 1 < text_.size() && text_[end] == '-' && identStart(text_[end + 1])) {
                ++end;
            } else {
                break;
            }
        }
        Token t = make(Token::Kind::Ident, start, end);
        advance(end - start);
        return t;
    }

    Token punct() {
        mark();
        static const char* const kTwo[] = {"|-", ":=", "->", ">="};
        for (const char* p : kTwo) {
            if (text_.substr(pos_, 2) == p) {
                Token t = make(Token::Kind::Punct, pos_, pos_ + 2);
                advance(2);
                return t;
            }
        }
        static const std::string kOne = "()[]{},.:;|=>*/";
        if (kOne.find(text_[pos_]) != std::string::npos) {
            Token t = make(Token::Kind::Punct, pos_, pos_ + 1);
            advance(1);
            return t;
        }
        SourceSpan span{pos_, pos_ + 1, line_, column_};
        unsigned char c = static_cast<unsigned char>(text_[pos_]);
        std::string shown = std::isprint(c) != 0 ? std::string(1, static_cast<char>(c)) : "\\x" + hex(c);
        throw ParseError{span, "unexpected character '" + shown + "'"};
    }

    static std::string hex(unsigned char c) {
        const char* digits = "0123456789abcdef";
        return {digits[c >> 4], digits[c & 15]};
    }

    std::string_view text_;
    bool newlines_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
    std::size_t startLine_ = 1;
    std::size_t startColumn_ = 1;
};

const std::set<std::string>& keywords() {
    static const std::set<std::string> k = {"forall", "exists", "most",  "many",    "eps",     "tau",
                                            "iota",   "eta",    "not",   "and",     "or",      "implies",
                                            "true",   "false",  "forall2", "exists2"};
    return k;
}

bool isKeyword(const std::string& s) { return keywords().count(s) != 0; }

constexpr int kMaxDepth = 400;

// ---------------------------------------------------------------------------
// Formula and term parsing over a token range

class Parser {
  public:
    Parser(std::vector<Token> tokens, Signature& sig, const ParseOptions& opts,
           std::map<std::string, SortName>& freeSorts)
        : tokens_(std::move(tokens)), sig_(sig), opts_(opts), freeSorts_(freeSorts) {}

    // -- cursor ---------------------------------------------------------------

    const Token& peek(std::size_t k = 0) const { return tokens_[std::min(pos_ + k, tokens_.size() - 1)]; }
    const Token& next() {
        const Token& t = peek();
        if (pos_ < tokens_.size() - 1) ++pos_;
        return t;
    }
    bool atEnd() const { return peek().kind == Token::Kind::End; }
    bool isPunct(const char* p, std::size_t k = 0) const {
        return peek(k).kind == Token::Kind::Punct && peek(k).text == p;
    }
    bool isWord(const char* w, std::size_t k = 0) const {
        return peek(k).kind == Token::Kind::Ident && peek(k).text == w;
    }
    bool accept(const char* p) {
        if (!isPunct(p)) return false;
        next();
        return true;
    }
    bool acceptWord(const char* w) {
        if (!isWord(w)) return false;
        next();
        return true;
    }
    void expect(const char* p) {
        if (!accept(p)) fail(peek(), std::string("expected '") + p + "'" + found(peek()));
    }
    std::string identifier(const char* what) {
        const Token& t = peek();
        if (t.kind != Token::Kind::Ident) fail(t, std::string("expected ") + what + found(t));
        if (isKeyword(t.text)) fail(t, std::string("expected ") + what + ", found keyword '" + t.text + "'");
        next();
        return t.text;
    }
    bool adjacent() const { return pos_ > 0 && peek().span.start == tokens_[pos_ - 1].span.end; }
    std::size_t position() const { return pos_; }
    void rewind(std::size_t p) { pos_ = p; }

    [[noreturn]] static void fail(const Token& t, const std::string& message) { throw ParseError{t.span, message}; }
    static std::string found(const Token& t) {
        if (t.kind == Token::Kind::End) return ", found end of input";
        if (t.kind == Token::Kind::Newline) return ", found end of line";
        return ", found '" + t.text + "'";
    }

    // -- sorts ----------------------------------------------------------------

    SortName sortName() {
        const Token& t = peek();
        SortName s = identifier("a sort name");
        if (!sig_.hasSort(s)) {
            if (!opts_.inferSignature) fail(t, "unknown sort '" + s + "'");
            sig_.addSort(s);
        }
        return s;
    }

    // Sort of a binder variable written without annotation.
    SortName defaultSort(const Token& at, const std::string& name, const std::optional<SortName>& expected) {
        if (const SortName* s = sig_.variableSort(name)) return *s;
        if (expected) return *expected;
        if (sig_.sorts().size() == 1) return *sig_.sorts().begin();
        fail(at, "sort of '" + name + "' is unknown; write " + name + ":S");
    }

    // -- formulas -------------------------------------------------------------

    Formula formula() {
        Depth d(*this);
        Formula lhs = disjunction();
        if (acceptWord("implies")) return Formula::implication(lhs, formula());
        return lhs;
    }

    Formula disjunction() {
        Formula lhs = conjunction();
        while (acceptWord("or")) lhs = Formula::disjunction(lhs, conjunction());
        return lhs;
    }

    Formula conjunction() {
        Formula lhs = unary();
        while (acceptWord("and")) lhs = Formula::conjunction(lhs, unary());
        return lhs;
    }

    Formula unary() {
        Depth d(*this);
        if (acceptWord("not")) return Formula::negation(unary());
        const Token& t = peek();
        if (t.kind == Token::Kind::Ident) {
            if (t.text == "forall" || t.text == "exists" || t.text == "most" || t.text == "many") {
                // most[...] is a generic term, not a quantifier
                if (!(isPunct("[", 1) && (t.text == "most" || t.text == "many"))) return quantifier();
            }
            if (t.text == "forall2" || t.text == "exists2") return secondOrder();
        }
        return primary();
    }

    Formula quantifier() {
        const Token kw = next();
        QuantifierKind kind = QuantifierKind::Forall;
        std::optional<MajorityMode> mode;
        if (kw.text == "forall" || kw.text == "exists") {
            bool star = isPunct("*") && adjacent();
            if (star) next();
            if (kw.text == "forall") kind = star ? QuantifierKind::ForallStar : QuantifierKind::Forall;
            else kind = star ? QuantifierKind::ExistsStar : QuantifierKind::Exists;
        } else {
            kind = kw.text == "most" ? QuantifierKind::Most : QuantifierKind::Many;
            if ((isPunct(">") || isPunct(">=")) && adjacent()) {
                mode = next().text == ">" ? MajorityMode::Strict : MajorityMode::Weak;
            }
        }
        const Token& vt = peek();
        std::string name = identifier("a bound variable");
        SortName sort = accept(":") ? sortName() : defaultSort(vt, name, std::nullopt);
        Variable v{name, sort};
        scope_.push_back(v);
        std::optional<Formula> restriction;
        if (accept("(")) {
            restriction = formula();
            expect(")");
        }
        expect(".");
        Formula body = formula();
        scope_.pop_back();
        return Formula::quantifier(kind, v, restriction, body, mode);
    }

    Formula secondOrder() {
        const Token kw = next();
        const Token& vt = peek();
        std::string name = identifier("a predicate variable");
        SortName sort = accept(":") ? sortName() : defaultSort(vt, name, std::nullopt);
        PredicateVariable pv{name, sort};
        predicateScope_.push_back(pv);
        expect(".");
        Formula body = formula();
        predicateScope_.pop_back();
        return Formula::secondOrder(kw.text == "forall2" ? SecondOrderKind::Forall : SecondOrderKind::Exists, pv,
                                    body);
    }

    Formula primary() {
        const Token& t = peek();
        if (acceptWord("true")) return Formula::truth(true);
        if (acceptWord("false")) return Formula::truth(false);
        if (isPunct("(")) {
            std::size_t start = position();
            std::optional<ParseError> asFormula;
            try {
                next();
                Formula f = formula();
                expect(")");
                if (!isPunct("=")) return f;
            } catch (const ParseError& e) {
                asFormula = e;
            }
            std::size_t formulaEnd = position();
            rewind(start);
            try {
                return equality();
            } catch (const ParseError& e) {
                if (asFormula && asFormula->span.start >= e.span.start) throw *asFormula;
                if (!asFormula && formulaEnd > e.span.start) fail(t, "expected a formula");
                throw;
            }
        }
        if (t.kind != Token::Kind::Ident) fail(t, "expected a formula" + found(t));

        if (const PredicateVariable* pv = lookupPredicateVariable(t.text); pv != nullptr && isPunct("(", 1)) {
            next();
            next();
            Term arg = term(pv->sort);
            expect(")");
            return Formula::predicateVariableAtom(*pv, arg);
        }
        if (!isKeyword(t.text) && lookupBound(t.text) == nullptr) {
            if (const auto* args = sig_.predicate(t.text)) return atom(*args);
        }
        std::size_t start = position();
        try {
            return equality();
        } catch (const ParseError& e) {
            bool inferable = opts_.inferSignature && !isKeyword(t.text) && lookupBound(t.text) == nullptr &&
                             sig_.constantSort(t.text) == nullptr && sig_.function(t.text) == nullptr;
            if (!inferable) throw;
            rewind(start);
            std::size_t p = position();
            try {
                return inferredAtom();
            } catch (const ParseError&) {
                rewind(p);
                throw e;
            }
        }
    }

    Formula atom(const std::vector<SortName>& sorts) {
        const Token& name = next();
        std::vector<Term> args;
        if (accept("(")) {
            if (!isPunct(")")) {
                do {
                    std::optional<SortName> expected;
                    if (args.size() < sorts.size()) expected = sorts[args.size()];
                    args.push_back(term(expected));
                } while (accept(","));
            }
            expect(")");
        }
        if (args.size() != sorts.size()) {
            fail(name, "predicate '" + name.text + "' expects " + std::to_string(sorts.size()) + " argument(s), got " +
                           std::to_string(args.size()));
        }
        if (isPunct("=")) fail(peek(), "predicate '" + name.text + "' cannot be used as a term");
        return Formula::atom(name.text, std::move(args));
    }

    Formula inferredAtom() {
        const Token& name = next();
        std::vector<Term> args;
        if (accept("(")) {
            if (!isPunct(")")) {
                do {
                    args.push_back(term(std::nullopt));
                } while (accept(","));
            }
            expect(")");
        }
        if (isPunct("=")) fail(peek(), "'" + name.text + "' is not a known term");
        std::vector<SortName> sorts;
        for (const auto& a : args) sorts.push_back(a.sort());
        sig_.addPredicate(name.text, sorts);
        return Formula::atom(name.text, std::move(args));
    }

    Formula equality() {
        // x = t with x free and of unknown sort: x takes the sort of t
        const Token& first = peek();
        if (first.kind == Token::Kind::Ident && !isKeyword(first.text) && isPunct("=", 1) &&
            !resolvable(first.text)) {
            next();
            next();
            Term rhs = term(std::nullopt);
            Variable v{first.text, rhs.sort()};
            freeSorts_.emplace(v.name, v.sort);
            return Formula::equal(Term::variable(v), rhs);
        }
        Term lhs = term(std::nullopt);
        if (!isPunct("=")) fail(peek(), "expected '='" + found(peek()));
        next();
        Term rhs = term(lhs.sort());
        return Formula::equal(lhs, rhs);
    }

    // -- terms ----------------------------------------------------------------

    Term term(const std::optional<SortName>& expected) {
        Depth d(*this);
        const Token& t = peek();
        if (accept("(")) {
            Term inner = term(expected);
            expect(")");
            return inner;
        }
        if (t.kind != Token::Kind::Ident) fail(t, "expected a term" + found(t));
        if (t.text == "eps" || t.text == "tau" || t.text == "iota" || t.text == "eta") return binderTerm(expected);
        if ((t.text == "most" || t.text == "many") && isPunct("[", 1)) return genericTerm();
        if (isKeyword(t.text)) fail(t, "expected a term, found keyword '" + t.text + "'");
        next();
        const std::string& name = t.text;

        if (isPunct(":") && peek(1).kind == Token::Kind::Ident && !isPunct(":=")) {
            next();
            SortName sort = sortName();
            for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
                if (it->name == name && it->sort == sort) return Term::variable(*it);
            }
            freeSorts_.emplace(name, sort);
            return Term::variable({name, sort});
        }
        if (const Variable* v = lookupBound(name)) return Term::variable(*v);
        if (const SortName* s = sig_.constantSort(name)) return Term::constant(name, *s);
        if (isPunct("(")) {
            const FunctionType* ft = sig_.function(name);
            if (ft == nullptr) fail(t, "unknown predicate or function '" + name + "'");
            next();
            std::vector<Term> args;
            if (!isPunct(")")) {
                do {
                    std::optional<SortName> e;
                    if (args.size() < ft->arguments.size()) e = ft->arguments[args.size()];
                    args.push_back(term(e));
                } while (accept(","));
            }
            expect(")");
            if (args.size() != ft->arguments.size()) {
                fail(t, "function '" + name + "' expects " + std::to_string(ft->arguments.size()) +
                            " argument(s), got " + std::to_string(args.size()));
            }
            return Term::application(name, std::move(args), ft->result);
        }
        if (sig_.function(name) != nullptr) fail(t, "function '" + name + "' needs arguments");
        if (sig_.predicate(name) != nullptr) fail(t, "predicate '" + name + "' cannot be used as a term");
        if (auto it = freeSorts_.find(name); it != freeSorts_.end()) return Term::variable({name, it->second});
        if (const SortName* s = sig_.variableSort(name)) return Term::variable({name, *s});
        if (expected) {
            freeSorts_.emplace(name, *expected);
            return Term::variable({name, *expected});
        }
        fail(t, "cannot determine the sort of '" + name + "'; write " + name + ":S");
    }

    Term binderTerm(const std::optional<SortName>& expected) {
        const Token kw = next();
        BinderKind kind = kw.text == "eps"   ? BinderKind::Epsilon
                          : kw.text == "tau" ? BinderKind::Tau
                          : kw.text == "iota" ? BinderKind::Iota
                                              : BinderKind::Eta;
        const Token& vt = peek();
        std::string name = identifier("a bound variable");
        SortName sort = accept(":") ? sortName() : defaultSort(vt, name, expected);
        Variable v{name, sort};
        expect(".");
        scope_.push_back(v);
        Formula body = formula();
        scope_.pop_back();
        return Term::binder(kind, v, body);
    }

    Term genericTerm() {
        const Token kw = next();
        GenericKind kind = kw.text == "most" ? GenericKind::Most : GenericKind::Many;
        expect("[");
        if (isPunct(":", 1)) {
            std::string name = identifier("a bound variable");
            expect(":");
            SortName sort = sortName();
            expect("|");
            Variable v{name, sort};
            scope_.push_back(v);
            Formula restriction = formula();
            scope_.pop_back();
            expect("]");
            return Term::generic(kind, v, restriction);
        }
        SortName sort = sortName();
        expect("]");
        return Term::generic(kind, sort);
    }

    // -- declarations shared by signature files and proof scripts -------------

    /// Parses one declaration statement; returns false when the first word
    /// is not a declaration keyword.
    bool declaration() {
        const Token& kw = peek();
        if (kw.kind != Token::Kind::Ident) return false;
        if (kw.text == "sort") {
            next();
            do {
                std::string s = identifier("a sort name");
                sig_.addSort(s);
            } while (accept(","));
        } else if (kw.text == "integer") {
            next();
            sig_.setIntegerSort(identifier("a sort name"));
        } else if (kw.text == "const") {
            next();
            std::vector<std::string> names;
            do {
                names.push_back(identifier("a constant name"));
            } while (accept(","));
            expect(":");
            SortName s = declaredSort();
            for (const auto& n : names) guarded(kw, [&] { sig_.addConstant(n, s); });
        } else if (kw.text == "var") {
            next();
            std::vector<std::string> names;
            do {
                names.push_back(identifier("a variable name"));
            } while (accept(","));
            expect(":");
            SortName s = declaredSort();
            for (const auto& n : names) guarded(kw, [&] { sig_.addVariable(n, s); });
        } else if (kw.text == "pred") {
            next();
            std::string name = identifier("a predicate name");
            std::vector<SortName> args;
            if (accept(":")) args = sortList();
            guarded(kw, [&] { sig_.addPredicate(name, args); });
        } else if (kw.text == "func") {
            next();
            std::string name = identifier("a function name");
            expect(":");
            std::vector<SortName> args = sortList();
            expect("->");
            SortName result = declaredSort();
            guarded(kw, [&] { sig_.addFunction(name, {args, result}); });
        } else {
            return false;
        }
        return true;
    }

    SortName declaredSort() {
        const Token& t = peek();
        SortName s = identifier("a sort name");
        if (!sig_.hasSort(s)) fail(t, "unknown sort '" + s + "'");
        return s;
    }

    std::vector<SortName> sortList() {
        std::vector<SortName> out;
        do {
            out.push_back(declaredSort());
        } while (accept(","));
        return out;
    }

    template <class F>
    void guarded(const Token& at, F&& f) {
        try {
            f();
        } catch (const SortError& e) {
            fail(at, e.what());
        }
    }

    Signature& signature() { return sig_; }

  private:
    struct Depth {
        explicit Depth(Parser& p) : p_(p) {
            if (++p_.depth_ > kMaxDepth) fail(p_.peek(), "input nested too deeply");
        }
        ~Depth() { --p_.depth_; }
        Parser& p_;
    };

    const Variable* lookupBound(const std::string& name) const {
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
            if (it->name == name) return &*it;
        }
        return nullptr;
    }

    const PredicateVariable* lookupPredicateVariable(const std::string& name) const {
        for (auto it = predicateScope_.rbegin(); it != predicateScope_.rend(); ++it) {
            if (it->name == name) return &*it;
        }
        return nullptr;
    }

    bool resolvable(const std::string& name) const {
        return lookupBound(name) != nullptr || sig_.constantSort(name) != nullptr || freeSorts_.count(name) != 0 ||
               sig_.variableSort(name) != nullptr;
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    Signature& sig_;
    const ParseOptions& opts_;
    std::map<std::string, SortName>& freeSorts_;
    std::vector<Variable> scope_;
    std::vector<PredicateVariable> predicateScope_;
    int depth_ = 0;
};

Diagnostic error(const SourceSpan& span, std::string message) {
    return Diagnostic{Severity::Error, std::move(message), span};
}

SourceSpan wholeSpan(std::string_view text) { return SourceSpan{0, text.size(), 1, 1}; }

void addSortDiagnostics(std::vector<Diagnostic>& out, const std::vector<SortDiagnostic>& ds, const SourceSpan& span) {
    for (const auto& d : ds) out.push_back(error(span, "sort error at " + d.location + ": " + d.message));
}

// Splits a token stream into statements at newlines (and at ';' when
// `semicolons` is set), ignoring newlines inside braces.
std::vector<std::vector<Token>> statements(const std::vector<Token>& tokens, bool semicolons) {
    std::vector<std::vector<Token>> out;
    std::vector<Token> current;
    int braces = 0;
    auto flush = [&](const Token& at) {
        if (!current.empty()) {
            Token end;
            end.kind = Token::Kind::End;
            end.span = {at.span.start, at.span.start, at.span.line, at.span.column};
            current.push_back(end);
            out.push_back(std::move(current));
            current.clear();
        }
    };
    for (const Token& t : tokens) {
        if (t.kind == Token::Kind::End) {
            flush(t);
            break;
        }
        if (t.kind == Token::Kind::Punct && t.text == "{") ++braces;
        if (t.kind == Token::Kind::Punct && t.text == "}") braces = std::max(0, braces - 1);
        if (t.kind == Token::Kind::Newline) {
            if (braces == 0) flush(t);
            continue;
        }
        if (semicolons && braces == 0 && t.kind == Token::Kind::Punct && t.text == ";") {
            flush(t);
            continue;
        }
        current.push_back(t);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Model files

class ModelReader {
  public:
    explicit ModelReader(Model& m) : m_(m) {}

    void statement(Parser& parser) {
        p_ = &parser;
        const Token& kw = parser.peek();
        if (kw.kind != Token::Kind::Ident) Parser::fail(kw, "expected a declaration" + Parser::found(kw));
        const std::string word = kw.text;
        parser.next();
        try {
            if (word == "sort") sortDecl();
            else if (word == "integer") integerDecl();
            else if (word == "measure") measureDecl();
            else if (word == "pred") predDecl();
            else if (word == "const") constDecl();
            else if (word == "func") funcDecl();
            else if (word == "threshold") thresholdDecl();
            else if (word == "mode") modeDecl();
            else if (word == "regime") regimeDecl();
            else Parser::fail(kw, "unknown declaration '" + word + "'");
        } catch (const ModelError& e) {
            Parser::fail(kw, e.what());
        } catch (const SortError& e) {
            Parser::fail(kw, e.what());
        }
        if (!parser.atEnd()) Parser::fail(parser.peek(), "unexpected text after declaration" + Parser::found(parser.peek()));
    }

    void finish(std::vector<Diagnostic>& diags, const SourceSpan& span) {
        for (const auto& s : pendingIntegers_) {
            diags.push_back(error(span, "integer sort '" + s + "' needs 'measure " + s + " = density(N)'"));
        }
        for (const auto& f : m_.partialFunctions()) {
            diags.push_back(error(span, "function '" + f + "' is not total"));
        }
    }

  private:
    void sortDecl() {
        std::string name = p_->identifier("a sort name");
        p_->expect("=");
        std::vector<std::string> elements = elementSet();
        m_.addSort(name, elements);
    }

    std::vector<std::string> elementSet() {
        p_->expect("{");
        std::vector<std::string> out;
        if (!p_->isPunct("}")) {
            do {
                out.push_back(p_->identifier("an element name"));
            } while (p_->accept(","));
        }
        p_->expect("}");
        return out;
    }

    void integerDecl() {
        const Token& t = p_->peek();
        std::string name = p_->identifier("a sort name");
        if (m_.hasSort(name)) Parser::fail(t, "sort '" + name + "' already declared");
        if (m_.signature().integerSort() || !pendingIntegers_.empty()) {
            Parser::fail(t, "only one integer sort may be designated");
        }
        pendingIntegers_.insert(name);
    }

    void measureDecl() {
        const Token& t = p_->peek();
        std::string name = p_->identifier("a sort name");
        p_->expect("=");
        const Token& kind = p_->peek();
        std::string k = p_->identifier("'count' or 'density'");
        if (k == "count") {
            if (pendingIntegers_.count(name) != 0) Parser::fail(kind, "the integer sort is measured by density(N)");
            if (!m_.hasSort(name)) Parser::fail(t, "unknown sort '" + name + "'");
            return;
        }
        if (k != "density") Parser::fail(kind, "expected 'count' or 'density'");
        if (pendingIntegers_.count(name) == 0) {
            Parser::fail(t, "density is only available on the integer sort; declare 'integer " + name + "' first");
        }
        p_->expect("(");
        std::size_t n = natural();
        p_->expect(")");
        pendingIntegers_.erase(name);
        m_.addIntegerSort(name, n);
    }

    std::size_t natural() {
        const Token& t = p_->peek();
        std::string s = p_->identifier("a number");
        if (s.empty() || s.size() > 9 || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
            Parser::fail(t, "expected a number below 10^9");
        }
        return static_cast<std::size_t>(std::stoul(s));
    }

    SortName knownSort() {
        const Token& t = p_->peek();
        std::string s = p_->identifier("a sort name");
        if (pendingIntegers_.count(s) != 0) Parser::fail(t, "integer sort '" + s + "' needs a density measure first");
        if (!m_.hasSort(s)) Parser::fail(t, "unknown sort '" + s + "'");
        return s;
    }

    Element element(const SortName& sort) {
        const Token& t = p_->peek();
        std::string name = p_->identifier("an element name");
        auto e = m_.findElement(sort, name);
        if (!e) Parser::fail(t, "'" + name + "' is not an element of sort " + sort);
        return *e;
    }

    std::vector<Element> tuple(const std::vector<SortName>& sorts) {
        std::vector<Element> out;
        bool paren = p_->accept("(");
        if (!paren && sorts.size() != 1) Parser::fail(p_->peek(), "expected a parenthesized tuple");
        for (std::size_t i = 0; i < sorts.size(); ++i) {
            if (i != 0) p_->expect(",");
            out.push_back(element(sorts[i]));
        }
        if (paren) p_->expect(")");
        return out;
    }

    void predDecl() {
        const Token& t = p_->peek();
        std::string name = p_->identifier("a predicate name");
        std::vector<SortName> sorts;
        if (p_->accept(":")) {
            do {
                sorts.push_back(knownSort());
            } while (p_->accept(","));
        }
        p_->expect("=");
        m_.addPredicate(name, sorts);
        if (p_->isWord("builtin")) {
            p_->next();
            p_->expect("(");
            const Token& b = p_->peek();
            std::string which = p_->identifier("a builtin name");
            p_->expect(")");
            auto builtin = parseBuiltin(which);
            if (!builtin) Parser::fail(b, "unknown builtin '" + which + "' (prime, even, odd, square)");
            m_.setBuiltin(name, *builtin);
            return;
        }
        if (sorts.empty() && (p_->isWord("true") || p_->isWord("false"))) {
            m_.setHolds(name, {}, p_->next().text == "true");
            return;
        }
        for (const auto& s : sorts) {
            if (m_.signature().integerSort() && *m_.signature().integerSort() == s) {
                Parser::fail(t, "predicates over the integer sort must be builtins");
            }
        }
        p_->expect("{");
        if (!p_->isPunct("}")) {
            do {
                m_.setHolds(name, tuple(sorts), true);
            } while (p_->accept(","));
        }
        p_->expect("}");
    }

    void constDecl() {
        std::string name = p_->identifier("a constant name");
        p_->expect(":");
        SortName sort = knownSort();
        p_->expect("=");
        m_.addConstant(name, sort, element(sort));
    }

    void funcDecl() {
        std::string name = p_->identifier("a function name");
        p_->expect(":");
        std::vector<SortName> args;
        do {
            args.push_back(knownSort());
        } while (p_->accept(","));
        p_->expect("->");
        SortName result = knownSort();
        p_->expect("=");
        m_.addFunction(name, {args, result});
        p_->expect("{");
        if (!p_->isPunct("}")) {
            do {
                std::vector<Element> in = tuple(args);
                p_->expect("->");
                m_.setFunctionValue(name, in, element(result));
            } while (p_->accept(","));
        }
        p_->expect("}");
    }

    Rational rational() {
        const Token& t = p_->peek();
        std::string text = p_->identifier("a number");
        if (p_->accept("/")) text += "/" + p_->identifier("a number");
        auto r = Rational::parse(text);
        if (!r) Parser::fail(t, "malformed number '" + text + "'");
        return *r;
    }

    void thresholdDecl() {
        const Token& t = p_->peek();
        if (!p_->isWord("most") && !p_->isWord("many")) Parser::fail(t, "expected 'most' or 'many'");
        std::string which = p_->next().text;
        p_->expect("=");
        const Token& v = p_->peek();
        Rational r = rational();
        if (r.numerator() == 0 || !(r < Rational(1, 1))) Parser::fail(v, "threshold must lie strictly between 0 and 1");
        (which == "most" ? m_.config().mostThreshold : m_.config().manyThreshold) = r;
    }

    void modeDecl() {
        const Token& t = p_->peek();
        if (p_->identifier("'majority'") != "majority") Parser::fail(t, "expected 'majority'");
        p_->expect("=");
        const Token& v = p_->peek();
        std::string mode = p_->identifier("'strict' or 'weak'");
        if (mode == "strict") m_.config().majorityMode = MajorityMode::Strict;
        else if (mode == "weak") m_.config().majorityMode = MajorityMode::Weak;
        else Parser::fail(v, "expected 'strict' or 'weak'");
    }

    void regimeDecl() {
        const Token& t = p_->peek();
        if (p_->identifier("'star'") != "star") Parser::fail(t, "expected 'star'");
        p_->expect("=");
        const Token& v = p_->peek();
        auto r = parseRegime(p_->identifier("'A' or 'B'"));
        if (!r) Parser::fail(v, "expected 'A' or 'B'");
        m_.config().starRegime = *r;
    }

    Parser* p_ = nullptr;
    Model& m_;
    std::set<std::string> pendingIntegers_;
};

}  // namespace

// ---------------------------------------------------------------------------

std::string formatDiagnostic(const Diagnostic& d, const std::string& source) {
    std::string out = source.empty() ? "" : source + ":";
    out += std::to_string(d.span.line) + ":" + std::to_string(d.span.column) + ": ";
    out += d.severity == Severity::Error ? "error: " : "warning: ";
    return out + d.message;
}

ParseResult<Formula> parseFormula(std::string_view text, const Signature& sig, const ParseOptions& opts,
                                  Signature* extended) {
    ParseResult<Formula> result;
    Signature local = sig;
    std::map<std::string, SortName> freeSorts;
    try {
        Parser p(Lexer(text, false).run(), local, opts, freeSorts);
        if (p.atEnd()) Parser::fail(p.peek(), "expected a formula, found end of input");
        Formula f = p.formula();
        if (!p.atEnd()) Parser::fail(p.peek(), "unexpected '" + p.peek().text + "' after formula");
        auto sorts = wellSorted(f, local);
        if (!sorts.empty()) {
            addSortDiagnostics(result.diagnostics, sorts, wholeSpan(text));
            return result;
        }
        result.value = f;
        if (extended != nullptr) *extended = local;
    } catch (const ParseError& e) {
        result.diagnostics.push_back(error(e.span, e.message));
    }
    return result;
}

ParseResult<Term> parseTerm(std::string_view text, const Signature& sig, const ParseOptions& opts) {
    ParseResult<Term> result;
    Signature local = sig;
    std::map<std::string, SortName> freeSorts;
    try {
        Parser p(Lexer(text, false).run(), local, opts, freeSorts);
        Term t = p.term(std::nullopt);
        if (!p.atEnd()) Parser::fail(p.peek(), "unexpected '" + p.peek().text + "' after term");
        auto sorts = wellSorted(t, local);
        if (!sorts.empty()) {
            addSortDiagnostics(result.diagnostics, sorts, wholeSpan(text));
            return result;
        }
        result.value = t;
    } catch (const ParseError& e) {
        result.diagnostics.push_back(error(e.span, e.message));
    }
    return result;
}

ParseResult<Signature> parseSignature(std::string_view text) {
    ParseResult<Signature> result;
    Signature sig;
    std::map<std::string, SortName> freeSorts;
    ParseOptions opts;
    std::vector<Token> tokens;
    try {
        tokens = Lexer(text, true).run();
    } catch (const ParseError& e) {
        result.diagnostics.push_back(error(e.span, e.message));
        return result;
    }
    for (auto& stmt : statements(tokens, true)) {
        try {
            Parser p(stmt, sig, opts, freeSorts);
            if (!p.declaration()) Parser::fail(p.peek(), "expected a declaration" + Parser::found(p.peek()));
            if (!p.atEnd()) Parser::fail(p.peek(), "unexpected text after declaration" + Parser::found(p.peek()));
        } catch (const ParseError& e) {
            result.diagnostics.push_back(error(e.span, e.message));
        }
    }
    for (const auto& problem : sig.validate()) result.diagnostics.push_back(error(wholeSpan(text), problem));
    if (result.diagnostics.empty()) result.value = sig;
    return result;
}

ParseResult<Model> parseModel(std::string_view text) {
    ParseResult<Model> result;
    Model m;
    Signature scratch;
    std::map<std::string, SortName> freeSorts;
    ParseOptions opts;
    std::vector<Token> tokens;
    try {
        tokens = Lexer(text, true).run();
    } catch (const ParseError& e) {
        result.diagnostics.push_back(error(e.span, e.message));
        return result;
    }
    ModelReader reader(m);
    for (auto& stmt : statements(tokens, true)) {
        Parser p(stmt, scratch, opts, freeSorts);
        try {
            reader.statement(p);
        } catch (const ParseError& e) {
            result.diagnostics.push_back(error(e.span, e.message));
        }
    }
    reader.finish(result.diagnostics, tokens.back().span);
    if (result.diagnostics.empty()) result.value = std::move(m);
    return result;
}

ParseResult<ProofScript> parseProofScript(std::string_view text, const Signature& sig) {
    ParseResult<ProofScript> result;
    Signature local = sig;
    std::map<std::string, SortName> freeSorts;
    ParseOptions opts;
    std::vector<Token> tokens;
    try {
        tokens = Lexer(text, true).run();
    } catch (const ParseError& e) {
        result.diagnostics.push_back(error(e.span, e.message));
        return result;
    }

    struct Line {
        int label;
        SourceSpan span;
        std::shared_ptr<ProofTree> node;
        std::vector<std::pair<int, SourceSpan>> refs;
    };
    std::vector<Line> lines;
    std::map<int, std::size_t> byLabel;

    for (auto& stmt : statements(tokens, false)) {
        Parser p(stmt, local, opts, freeSorts);
        try {
            if (p.declaration()) {
                if (!p.atEnd()) Parser::fail(p.peek(), "unexpected text after declaration" + Parser::found(p.peek()));
                continue;
            }
            const Token& num = p.peek();
            if (num.kind != Token::Kind::Ident ||
                !std::all_of(num.text.begin(), num.text.end(), [](char c) { return c >= '0' && c <= '9'; }) ||
                num.text.size() > 9) {
                Parser::fail(num, "expected a line number" + Parser::found(num));
            }
            p.next();
            int label = std::stoi(num.text);
            if (byLabel.count(label) != 0) Parser::fail(num, "line " + num.text + " is defined twice");
            p.expect(".");

            auto node = std::make_shared<ProofTree>();
            node->line = label;
            if (!p.isPunct("|-")) {
                for (;;) {
                    node->sequent.hypotheses.push_back(p.formula());
                    if (p.accept(",")) continue;
                    break;
                }
            }
            p.expect("|-");
            Formula conclusion = p.formula();
            node->sequent.conclusion = conclusion;
            p.expect(";");
            const Token& ruleTok = p.peek();
            if (ruleTok.kind != Token::Kind::Ident) Parser::fail(ruleTok, "expected a rule name" + Parser::found(ruleTok));
            p.next();
            auto rule = parseRule(ruleTok.text);
            if (!rule) Parser::fail(ruleTok, "unknown rule '" + ruleTok.text + "'");
            node->rule = *rule;

            Line line{label, num.span, node, {}};
            if (p.accept("(")) {
                if (!p.isPunct(")")) {
                    do {
                        const Token& r = p.peek();
                        std::string ref = p.identifier("a line reference");
                        if (ref.size() > 9 ||
                            !std::all_of(ref.begin(), ref.end(), [](char c) { return c >= '0' && c <= '9'; })) {
                            Parser::fail(r, "expected a line number" + Parser::found(r));
                        }
                        line.refs.emplace_back(std::stoi(ref), r.span);
                    } while (p.accept(","));
                }
                p.expect(")");
            }
            if (p.accept("[")) {
                if (p.isWord("eigen")) {
                    p.next();
                    node->annotation.eigenName = p.identifier("an eigenvariable");
                    if (p.accept(":")) node->annotation.eigenSort = p.sortName();
                } else {
                    node->annotation.instanceOf = p.identifier("a variable");
                    p.expect(":=");
                    node->annotation.witness = p.term(std::nullopt);
                }
                p.expect("]");
            }
            if (!p.atEnd()) Parser::fail(p.peek(), "unexpected text after rule" + Parser::found(p.peek()));

            std::vector<SortDiagnostic> sorts;
            for (const auto& h : node->sequent.hypotheses) {
                auto d = wellSorted(h, local);
                sorts.insert(sorts.end(), d.begin(), d.end());
            }
            auto d = wellSorted(node->sequent.conclusion, local);
            sorts.insert(sorts.end(), d.begin(), d.end());
            if (!sorts.empty()) Parser::fail(num, "sort error at " + sorts.front().location + ": " + sorts.front().message);

            for (const auto& [ref, span] : line.refs) {
                auto it = byLabel.find(ref);
                if (it == byLabel.end()) {
                    throw ParseError{span, "line " + std::to_string(label) + " refers to undefined line " +
                                               std::to_string(ref)};
                }
                node->premises.push_back(lines[it->second].node);
            }
            byLabel.emplace(label, lines.size());
            lines.push_back(std::move(line));
        } catch (const ParseError& e) {
            result.diagnostics.push_back(error(e.span, e.message));
        } catch (const SortError& e) {
            result.diagnostics.push_back(error(stmt.front().span, e.what()));
        }
    }

    bool failed = std::any_of(result.diagnostics.begin(), result.diagnostics.end(),
                              [](const Diagnostic& d) { return d.severity == Severity::Error; });
    if (lines.empty()) {
        if (!failed) result.diagnostics.push_back(error(tokens.back().span, "proof script has no lines"));
        return result;
    }
    if (failed) return result;

    // lines not reachable from the root are reported but do not fail the parse
    std::set<const ProofTree*> reached;
    std::vector<const ProofTree*> stack{lines.back().node.get()};
    while (!stack.empty()) {
        const ProofTree* n = stack.back();
        stack.pop_back();
        if (!reached.insert(n).second) continue;
        for (const auto& pr : n->premises) stack.push_back(pr.get());
    }
    for (const auto& l : lines) {
        if (reached.count(l.node.get()) == 0) {
            result.diagnostics.push_back(Diagnostic{Severity::Warning,
                                                    "line " + std::to_string(l.label) +
                                                        " is not used by the last line",
                                                    l.span});
        }
    }
    ProofScript script;
    script.root = lines.back().node;
    script.signature = local;
    script.lines = lines.size();
    result.value = std::move(script);
    return result;
}

}  // namespace epsk
