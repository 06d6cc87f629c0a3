#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "json.hpp"

#include "epsk/classify.hpp"
#include "epsk/evaluator.hpp"
#include "epsk/generate.hpp"
#include "epsk/kernel.hpp"
#include "epsk/parser.hpp"
#include "epsk/print.hpp"
#include "epsk/selftest.hpp"
#include "epsk/semantics.hpp"
#include "epsk/transform.hpp"

namespace epsk::cli {

namespace {

using json = nlohmann::json;

struct InputError {
    std::string message;
};

std::string readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError{"cannot read " + path};
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Non-empty, non-comment lines of a file.
std::vector<std::string> readLines(const std::string& path) {
    std::istringstream in(readFile(path));
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        out.push_back(line);
    }
    return out;
}

template <class T>
T require(ParseResult<T> r, const std::string& source, std::ostream& err) {
    for (const auto& d : r.diagnostics) err << formatDiagnostic(d, source) << "\n";
    if (!r) throw InputError{};
    return std::move(*r.value);
}

Signature loadSignature(const std::optional<std::string>& path, std::ostream& err) {
    if (!path) return {};
    return require(parseSignature(readFile(*path)), *path, err);
}

Rational parseThreshold(const std::string& text, const char* what) {
    auto r = Rational::parse(text);
    if (!r || r->numerator() <= 0 || r->numerator() >= r->denominator()) {
        throw InputError{std::string(what) + " must lie strictly between 0 and 1, got '" + text + "'"};
    }
    return *r;
}

MajorityMode parseMajority(const std::string& text) {
    if (text == "strict") return MajorityMode::Strict;
    if (text == "weak") return MajorityMode::Weak;
    throw InputError{"majority mode must be strict or weak, got '" + text + "'"};
}

StarRegime parseStar(const std::string& text) {
    auto r = parseRegime(text);
    if (!r) throw InputError{"star regime must be A or B, got '" + text + "'"};
    return *r;
}

void applyParameters(MeasureConfig& cfg, const Parameters& p) {
    if (p.theta) cfg.mostThreshold = parseThreshold(*p.theta, "--theta");
    if (p.thetaMany) cfg.manyThreshold = parseThreshold(*p.thetaMany, "--theta-many");
    if (p.majority) cfg.majorityMode = parseMajority(*p.majority);
    if (p.regime) cfg.starRegime = parseStar(*p.regime);
}

KernelConfig kernelConfig(const Parameters& p) {
    KernelConfig k;
    if (p.regime) k.starRegime = parseStar(*p.regime);
    if (p.majority) k.majorityMode = parseMajority(*p.majority);
    if (p.theta) k.threshold = parseThreshold(*p.theta, "--theta");
    k.epsilonPresupposition = p.presupposition;
    k.experimentalMostInst = p.mostInst;
    return k;
}

void emit(const Io& io, const json& record) { io.out << record.dump() << "\n"; }

std::string yesNo(bool b) { return b ? "yes" : "no"; }

std::string decimal(std::uint64_t part, std::uint64_t whole) {
    if (whole == 0) return "undefined";
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << static_cast<double>(part) / static_cast<double>(whole);
    return os.str();
}

template <class F>
int guarded(const Io& io, F&& body) {
    try {
        return body();
    } catch (const InputError& e) {
        if (!e.message.empty()) io.err << "epsk: " << e.message << "\n";
        return kInputError;
    } catch (const std::invalid_argument& e) {
        io.err << "epsk: " << e.what() << "\n";
        return kInputError;
    } catch (const SortError& e) {
        io.err << "epsk: " << e.what() << "\n";
        return kInputError;
    } catch (const ModelError& e) {
        io.err << "epsk: " << e.what() << "\n";
        return kInputError;
    } catch (const EvalError& e) {
        io.err << "epsk: " << e.what() << "\n";
        return kInputError;
    } catch (const TransformError& e) {
        io.err << "epsk: " << e.what() << "\n";
        return kInputError;
    } catch (const SemanticsError& e) {
        io.err << "epsk: " << e.what() << "\n";
        return kInputError;
    }
}

std::vector<std::string> gatherInputs(const std::vector<std::string>& inline_, const std::optional<std::string>& file) {
    std::vector<std::string> out = inline_;
    if (file) {
        auto lines = readLines(*file);
        out.insert(out.end(), lines.begin(), lines.end());
    }
    if (out.empty()) throw InputError{"no input given"};
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------

int runParse(const ParseOptions& o, const Io& io) {
    return guarded(io, [&] {
        if (o.kind == "formula" || o.kind == "term") {
            Signature sig = loadSignature(o.signature, io.err);
            epsk::ParseOptions popts;
            popts.inferSignature = !o.signature;
            Signature known = sig;
            for (const auto& text : gatherInputs(o.inputs, o.file)) {
                if (o.kind == "term") {
                    Term t = require(parseTerm(text, known, popts), "<input>", io.err);
                    if (io.format == Format::Jsonl) {
                        emit(io, {{"kind", "term"}, {"term", printTerm(t)}, {"sort", t.sort()}});
                    } else {
                        io.out << printTerm(t) << " : " << t.sort() << "\n";
                    }
                    continue;
                }
                Signature extended;
                Formula f = require(parseFormula(text, known, popts, &extended), "<input>", io.err);
                known = extended;
                if (io.format == Format::Jsonl) {
                    emit(io, {{"kind", "formula"}, {"formula", printFormula(f)}, {"depth", quantifierDepth(f)}});
                } else {
                    io.out << printFormula(f) << "\n";
                }
            }
            if (!o.signature && io.format == Format::Text && o.kind == "formula") {
                io.out << "# inferred signature\n" << printSignature(known);
            }
            return int(kOk);
        }
        if (!o.file && o.inputs.size() != 1) throw InputError{"parse --kind " + o.kind + " takes one file"};
        std::string path = o.file ? *o.file : o.inputs.front();
        std::string text = readFile(path);
        std::string rendered;
        if (o.kind == "signature") {
            rendered = printSignature(require(parseSignature(text), path, io.err));
        } else if (o.kind == "model") {
            rendered = printModel(require(parseModel(text), path, io.err));
        } else if (o.kind == "proof") {
            Signature sig = loadSignature(o.signature, io.err);
            rendered = printProofScript(*require(parseProofScript(text, sig), path, io.err).root);
        } else if (o.kind == "lexicon") {
            Lexicon lex = require(parseLexicon(text), path, io.err);
            std::ostringstream os;
            for (const auto& [w, s] : lex.nouns) os << "noun " << w << " : " << s << "\n";
            for (const auto& [w, s] : lex.pronouns) os << "pronoun " << w << " : " << s.value_or("*") << "\n";
            auto preds = [&](const char* cat, const std::map<std::string, std::string>& m) {
                for (const auto& [w, p] : m) {
                    os << cat << " " << w << " : " << p << "(";
                    const auto& sorts = *lex.signature.predicate(p);
                    for (std::size_t i = 0; i < sorts.size(); ++i) os << (i ? ", " : "") << sorts[i];
                    os << ")\n";
                }
            };
            preds("verb", lex.verbs);
            preds("tverb", lex.transitiveVerbs);
            preds("adj", lex.adjectives);
            rendered = os.str();
        } else {
            throw InputError{"unknown kind '" + o.kind + "'"};
        }
        if (io.format == Format::Jsonl) {
            emit(io, {{"kind", o.kind}, {"text", rendered}});
        } else {
            io.out << rendered;
        }
        return int(kOk);
    });
}

// ---------------------------------------------------------------------------

int runCheck(const CheckOptions& o, const Parameters& p, const Io& io) {
    return guarded(io, [&] {
        KernelConfig cfg = kernelConfig(p);
        Signature sig = loadSignature(o.signature, io.err);
        ProofScript script = require(parseProofScript(readFile(o.proof), sig), o.proof, io.err);
        Verdict v = checkProof(*script.root, script.signature, cfg);
        for (const auto& n : v.nodes) {
            if (io.format == Format::Jsonl) {
                json rec{{"line", n.line}, {"rule", n.rule}, {"ok", n.ok}};
                if (!n.ok) rec["reason"] = n.reason;
                emit(io, rec);
            } else {
                io.out << "line " << n.line << " " << n.rule << ": " << (n.ok ? "ok" : "rejected");
                if (!n.ok) io.out << " (" << n.reason << ")";
                io.out << "\n";
            }
        }
        if (io.format == Format::Jsonl) {
            json failures = json::array();
            for (const auto& f : v.failures) {
                failures.push_back({{"line", f.line}, {"rule", f.rule}, {"condition", f.condition}, {"message", f.message}});
            }
            emit(io, {{"verdict", v.accepted ? "accepted" : "rejected"}, {"failures", failures}});
        } else {
            for (const auto& f : v.failures) {
                io.out << o.proof << ": line " << f.line << ": " << f.rule << ": " << f.message << "\n";
            }
            io.out << (v.accepted ? "accepted" : "rejected") << "\n";
        }
        return int(v.accepted ? kOk : kRejected);
    });
}

// ---------------------------------------------------------------------------

int runEval(const EvalOptions& o, const Parameters& p, const Io& io) {
    return guarded(io, [&] {
        Model model = require(parseModel(readFile(o.model)), o.model, io.err);
        applyParameters(model.config(), p);
        if (p.density) {
            const auto& integer = model.signature().integerSort();
            if (!integer) throw InputError{"--density needs a model with an integer sort"};
            model.setDensityBound(*integer, *p.density);
        }
        bool allTrue = true;
        for (const auto& text : gatherInputs(o.formulas, o.file)) {
            Formula f = require(parseFormula(text, model.signature()), "<formula>", io.err);
            if (!freeVars(f).empty()) throw InputError{"formula has free variables: " + printFormula(f)};
            EvalRecord r = evaluate(model, Environment{}, f);
            allTrue = allTrue && r.value;
            if (io.format == Format::Jsonl) {
                json measures = json::array();
                for (const auto& m : r.measures) {
                    measures.push_back({{"formula", m.formula},
                                        {"part", m.part},
                                        {"whole", m.whole},
                                        {"proportion", decimal(m.part, m.whole)},
                                        {"value", m.value}});
                }
                json witnesses = json::array();
                for (const auto& w : r.witnesses) {
                    witnesses.push_back({{"term", w.term}, {"sort", w.sort}, {"element", w.elementName}});
                }
                emit(io, {{"formula", printFormula(f)},
                          {"value", r.value},
                          {"flags", r.flags.names()},
                          {"measures", measures},
                          {"witnesses", witnesses}});
                continue;
            }
            io.out << printFormula(f) << " = " << (r.value ? "true" : "false") << "\n";
            for (const auto& m : r.measures) {
                io.out << "  measure " << m.formula << ": " << m.part << "/" << m.whole << " = "
                       << decimal(m.part, m.whole) << "\n";
            }
            for (const auto& w : r.witnesses) io.out << "  witness " << w.term << " = " << w.elementName << "\n";
            if (r.flags.any()) {
                io.out << "  flags:";
                for (const auto& n : r.flags.names()) io.out << " " << n;
                io.out << "\n";
            }
        }
        return int(o.expectTrue && !allTrue ? kRejected : kOk);
    });
}

// ---------------------------------------------------------------------------

int runTranslate(const TranslateOptions& o, const Io& io) {
    return guarded(io, [&] {
        static const std::vector<std::string> modes{"frege", "unfrege", "epsilon", "concepts-up", "concepts-down", "nnf"};
        if (std::find(modes.begin(), modes.end(), o.mode) == modes.end()) {
            throw InputError{"unknown mode '" + o.mode + "'"};
        }
        Signature known = loadSignature(o.signature, io.err);
        epsk::ParseOptions popts;
        popts.inferSignature = !o.signature;
        for (const auto& text : gatherInputs(o.formulas, o.file)) {
            Signature extended;
            Formula f = require(parseFormula(text, known, popts, &extended), "<formula>", io.err);
            known = extended;
            std::optional<bool> reducible;
            Formula out = f;
            if (o.mode == "frege") {
                FregeResult r = fregeEmbed(f);
                out = r.formula;
                reducible = r.reducible;
            } else if (o.mode == "unfrege") {
                out = fregeUnembed(f);
            } else if (o.mode == "epsilon") {
                out = epsilonEmbed(f, o.tauForm);
            } else if (o.mode == "concepts-up") {
                out = liftToConcepts(f, o.nonEmptiness);
            } else if (o.mode == "concepts-down") {
                out = lowerFromConcepts(f);
            } else {
                out = pushNegation(f);
            }
            if (io.format == Format::Jsonl) {
                json rec{{"mode", o.mode}, {"input", printFormula(f)}, {"formula", printFormula(out)}};
                if (reducible) rec["reducible"] = *reducible;
                emit(io, rec);
            } else {
                io.out << printFormula(out) << "\n";
                if (reducible && !*reducible) io.out << "# not reducible: generalized quantifier left in place\n";
            }
        }
        return int(kOk);
    });
}

// ---------------------------------------------------------------------------

int runClassify(const ClassifyOptions& o, const Parameters& p, const Io& io) {
    return guarded(io, [&] {
        if (o.squareModel) {
            Model m = require(parseModel(readFile(*o.squareModel)), *o.squareModel, io.err);
            applyParameters(m.config(), p);
            SquareReport r = checkSquare(m, o.a, o.b, o.existentialImport);
            if (io.format == Format::Jsonl) {
                emit(io, {{"all", r.all},
                          {"some", r.some},
                          {"no", r.no},
                          {"not-all", r.notAll},
                          {"existential-import", r.existentialImport},
                          {"contradictory", r.contradictoryAllNotAll && r.contradictorySomeNo},
                          {"contrary", r.contrary},
                          {"subcontrary", r.subcontrary},
                          {"subalternation", r.subalternationAll && r.subalternationNo}});
            } else {
                const char* labels[] = {"all", "some", "no", "not-all"};
                bool values[] = {r.all, r.some, r.no, r.notAll};
                for (int i = 0; i < 4; ++i) {
                    io.out << labels[i] << ": " << printFormula(r.corners[i]) << " = " << (values[i] ? "true" : "false")
                           << "\n";
                }
                io.out << "contradictory: " << yesNo(r.contradictoryAllNotAll && r.contradictorySomeNo) << "\n"
                       << "contrary: " << yesNo(r.contrary) << "\n"
                       << "subcontrary: " << yesNo(r.subcontrary) << "\n"
                       << "subalternation: " << yesNo(r.subalternationAll && r.subalternationNo) << "\n";
            }
            return int(kOk);
        }

        MeasureConfig cfg;
        applyParameters(cfg, p);
        std::vector<QuantifierDefinition> defs;
        for (const auto& name : o.names) {
            auto q = builtinQuantifier(name, cfg);
            if (!q) {
                std::string known;
                for (const auto& n : builtinQuantifierNames()) known += " " + n;
                throw InputError{"unknown quantifier '" + name + "'; known:" + known};
            }
            defs.push_back(*q);
        }
        if (o.formula) {
            Formula f = require(parseFormula(*o.formula, quantifierSignature()), "<formula>", io.err);
            defs.push_back({o.formulaName, f, cfg});
        }
        if (defs.empty()) throw InputError{"name a quantifier or give --formula"};
        for (const auto& q : defs) {
            QuantifierProfile prof = classifyQuantifier(q, o.size);
            if (io.format == Format::Jsonl) {
                emit(io, {{"name", prof.name},
                          {"formula", printFormula(q.formula)},
                          {"conservative", prof.conservative},
                          {"left", monotonicityName(prof.left)},
                          {"right", monotonicityName(prof.right)},
                          {"symmetric", prof.symmetric},
                          {"intersective", prof.intersective},
                          {"size", prof.sizeBound},
                          {"models", prof.modelsChecked}});
                continue;
            }
            io.out << prof.name << ": " << printFormula(q.formula) << "\n"
                   << "  conservative: " << yesNo(prof.conservative) << "\n"
                   << "  left-monotone: " << monotonicityName(prof.left) << "\n"
                   << "  right-monotone: " << monotonicityName(prof.right) << "\n"
                   << "  symmetric: " << yesNo(prof.symmetric) << "\n"
                   << "  intersective: " << yesNo(prof.intersective) << "\n"
                   << "  models: " << prof.modelsChecked << " (sizes 1.." << prof.sizeBound << ")\n";
        }
        return int(kOk);
    });
}

// ---------------------------------------------------------------------------

int runSemantics(const SemanticsOptions& o, const Parameters& p, const Io& io) {
    return guarded(io, [&] {
        Lexicon lex = require(parseLexicon(readFile(o.lexicon)), o.lexicon, io.err);
        std::string text;
        for (const auto& t : o.text) text += (text.empty() ? "" : " ") + t;
        if (text.empty()) throw InputError{"no sentence given"};
        auto tree = require(parseFragment(tokenizeFragment(text), lex), "<sentence>", io.err);
        Construction c = buildLogicalForm(tree, lex, DiscourseState{}, kernelConfig(p));
        if (io.format == Format::Jsonl) {
            json stack = json::array();
            for (const auto& r : c.state.salience) {
                stack.push_back({{"term", printTerm(r.term)}, {"sort", r.sort}, {"noun", r.noun}});
            }
            json presup = json::array();
            for (const auto& f : c.state.presuppositions) presup.push_back(printFormula(f));
            emit(io, {{"formula", printFormula(c.formula)}, {"salience", stack}, {"presuppositions", presup}});
            return int(kOk);
        }
        io.out << printFormula(c.formula) << "\n";
        io.out << "salience:";
        if (c.state.salience.empty()) io.out << " (empty)";
        io.out << "\n";
        for (std::size_t i = 0; i < c.state.salience.size(); ++i) {
            const Referent& r = c.state.salience[i];
            io.out << "  " << i + 1 << ". " << printTerm(r.term) << " : " << r.sort << " (" << r.noun << ")\n";
        }
        if (!c.state.presuppositions.empty()) {
            io.out << "presuppositions:\n";
            for (const auto& f : c.state.presuppositions) io.out << "  " << printFormula(f) << "\n";
        }
        return int(kOk);
    });
}

// ---------------------------------------------------------------------------

int runSelftest(const SelftestOptions& o, const Io& io) {
    return guarded(io, [&] {
        if (o.list) {
            for (const auto& n : selftestSuiteNames()) io.out << n << "\n";
            return int(kOk);
        }
        epsk::SelftestOptions opts;
        opts.seed = o.seed ? *o.seed : seedFromEnvironment(1);
        opts.cases = o.cases;
        opts.maxModelSize = o.size;
        opts.jobs = o.jobs;
        opts.suites = o.suites;
        bool clean = true;
        for (const auto& suite : runSelftest(opts)) {
            clean = clean && suite.failures() == 0;
            if (io.format == Format::Jsonl) {
                for (const auto& c : suite.cases) {
                    json rec{{"suite", suite.name}, {"case", c.index}, {"formula", printFormula(c.formula)},
                             {"models", c.models}, {"ok", c.ok}};
                    if (!c.ok) rec["detail"] = c.detail;
                    emit(io, rec);
                }
                continue;
            }
            io.out << suite.name << ": " << suite.cases.size() << " cases, " << suite.models() << " models, "
                   << suite.failures() << " failures\n";
            for (const auto& c : suite.cases) {
                if (c.ok) continue;
                io.out << "  case " << c.index << ": " << printFormula(c.formula) << "\n    " << c.detail << "\n";
            }
        }
        if (io.format == Format::Text) io.out << "seed " << opts.seed << "\n";
        return int(clean ? kOk : kRejected);
    });
}

}  // namespace epsk::cli
