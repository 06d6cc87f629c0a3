// epsk: parse, check, evaluate, translate and classify kernel-language
// inputs, and map controlled English to logical forms.

#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

using namespace epsk::cli;

void addParameters(CLI::App* app, Parameters& p, bool kernelFlags) {
    app->add_option("--regime", p.regime, "Star-quantifier regime (A or B, default B)");
    app->add_option("--majority", p.majority, "Reading of a bare MOST: strict or weak (default strict)");
    app->add_option("--theta", p.theta, "MOST threshold, e.g. 1/2 or 0.5 (default 1/2)");
    if (kernelFlags) {
        app->add_flag("--most-inst", p.mostInst, "Enable the experimental most-inst rule");
    } else {
        app->add_option("--theta-many", p.thetaMany, "MANY threshold (default 2/5)");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hilbert-operator proof kernel and model checker"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "epsk 0.1.0");

    std::string format = "text";
    app.add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"text", "jsonl"}))
        ->capture_default_str();

    ParseOptions parseOpts;
    auto* parse = app.add_subcommand("parse", "Parse and pretty-print input");
    parse->add_option("--kind", parseOpts.kind, "formula, term, signature, model, proof or lexicon")
        ->check(CLI::IsMember({"formula", "term", "signature", "model", "proof", "lexicon"}))
        ->capture_default_str();
    parse->add_option("--signature", parseOpts.signature, "Signature file (default: infer)");
    parse->add_option("--file", parseOpts.file, "Read inputs from a file, one formula per line");
    parse->add_option("input", parseOpts.inputs, "Formula text, or a file for the other kinds");

    CheckOptions checkOpts;
    Parameters checkParams;
    auto* check = app.add_subcommand("check", "Check a proof script");
    check->add_option("proof", checkOpts.proof, "Proof script")->required();
    check->add_option("--signature", checkOpts.signature, "Signature file");
    addParameters(check, checkParams, true);

    EvalOptions evalOpts;
    Parameters evalParams;
    auto* eval = app.add_subcommand("eval", "Evaluate closed formulas in a model");
    eval->add_option("--model", evalOpts.model, "Model file")->required();
    eval->add_option("--file", evalOpts.file, "Read formulas from a file, one per line");
    eval->add_option("formula", evalOpts.formulas, "Formula text");
    eval->add_flag("--expect-true", evalOpts.expectTrue, "Exit 1 when some formula is false");
    eval->add_option("--density", evalParams.density, "Re-measure the integer sort on [1..N]")
        ->check(CLI::PositiveNumber);
    addParameters(eval, evalParams, false);

    TranslateOptions translateOpts;
    auto* translate = app.add_subcommand("translate", "Translate formulas");
    translate->add_option("--mode", translateOpts.mode, "frege, unfrege, epsilon, concepts-up, concepts-down or nnf")
        ->required();
    translate->add_option("--signature", translateOpts.signature, "Signature file (default: infer)");
    translate->add_option("--file", translateOpts.file, "Read formulas from a file, one per line");
    translate->add_option("formula", translateOpts.formulas, "Formula text");
    translate->add_flag("--tau", translateOpts.tauForm, "epsilon mode: witness universals with tau terms");
    translate->add_flag("!--no-nonempty", translateOpts.nonEmptiness,
                        "concepts-up: drop the non-emptiness conjunct of C(X)");

    ClassifyOptions classifyOpts;
    Parameters classifyParams;
    auto* classify = app.add_subcommand("classify", "Brute-force quantifier properties or the square of opposition");
    classify->add_option("name", classifyOpts.names, "Built-in quantifier names");
    classify->add_option("--formula", classifyOpts.formula, "Custom quantifier over sort U and predicates A, B");
    classify->add_option("--label", classifyOpts.formulaName, "Label for --formula");
    classify->add_option("--size", classifyOpts.size, "Largest domain size")
        ->check(CLI::Range(1, 10))
        ->capture_default_str();
    classify->add_option("--square", classifyOpts.squareModel, "Check the square of opposition on a model file");
    classify->add_option("--a", classifyOpts.a, "Subject predicate for --square")->capture_default_str();
    classify->add_option("--b", classifyOpts.b, "Predicate for --square")->capture_default_str();
    classify->add_flag("--import", classifyOpts.existentialImport, "Universal corners carry existential import");
    addParameters(classify, classifyParams, false);

    SemanticsOptions semOpts;
    Parameters semParams;
    auto* semantics = app.add_subcommand("semantics", "Logical form of a controlled-English discourse");
    semantics->add_option("--lexicon", semOpts.lexicon, "Lexicon file")->required();
    semantics->add_option("text", semOpts.text, "Sentences separated by periods")->required();
    semantics->add_flag("--presupposition", semParams.presupposition, "Indefinites also assert their noun");

    SelftestOptions selfOpts;
    selfOpts.jobs = std::max(1u, std::thread::hardware_concurrency());
    auto* selftest = app.add_subcommand("selftest", "Run the invariant suites on generated formulas");
    selftest->add_option("--seed", selfOpts.seed, "Generator seed (default: EPSKERNEL_SEED or 1)");
    selftest->add_option("--cases", selfOpts.cases, "Formulas per suite")->capture_default_str();
    selftest->add_option("--size", selfOpts.size, "Largest model size")->check(CLI::Range(1, 4))->capture_default_str();
    selftest->add_option("--jobs", selfOpts.jobs, "Worker threads")->check(CLI::PositiveNumber);
    selftest->add_option("--suite", selfOpts.suites, "Run only the named suites");
    selftest->add_flag("--list", selfOpts.list, "List suite names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    Io io{std::cout, std::cerr, format == "jsonl" ? Format::Jsonl : Format::Text};
    if (*parse) return runParse(parseOpts, io);
    if (*check) return runCheck(checkOpts, checkParams, io);
    if (*eval) return runEval(evalOpts, evalParams, io);
    if (*translate) return runTranslate(translateOpts, io);
    if (*classify) return runClassify(classifyOpts, classifyParams, io);
    if (*semantics) return runSemantics(semOpts, semParams, io);
    return runSelftest(selfOpts, io);
}
