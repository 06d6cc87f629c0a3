// Subcommand implementations behind the epsk binary. Each returns the
// process exit status.

#ifndef EPSK_TOOLS_COMMANDS_HPP
#define EPSK_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace epsk::cli {

enum Exit : int { kOk = 0, kRejected = 1, kInputError = 2 };

enum class Format { Text, Jsonl };

/// Reading parameters shared by every subcommand that evaluates or checks.
struct Parameters {
    std::optional<std::string> regime;      // A | B
    std::optional<std::string> majority;    // strict | weak
    std::optional<std::string> theta;       // MOST threshold, "a/b" or decimal
    std::optional<std::string> thetaMany;
    std::optional<std::size_t> density;     // integer-sort bound override
    bool presupposition = false;
    bool mostInst = false;
};

struct Io {
    std::ostream& out;
    std::ostream& err;
    Format format = Format::Text;
};

struct ParseOptions {
    std::string kind = "formula";
    std::optional<std::string> signature;
    std::optional<std::string> file;
    std::vector<std::string> inputs;
};

struct CheckOptions {
    std::string proof;
    std::optional<std::string> signature;
};

struct EvalOptions {
    std::string model;
    std::optional<std::string> file;
    std::vector<std::string> formulas;
    bool expectTrue = false;
};

struct TranslateOptions {
    std::string mode;
    std::optional<std::string> signature;
    std::optional<std::string> file;
    std::vector<std::string> formulas;
    bool tauForm = false;
    bool nonEmptiness = true;
};

struct ClassifyOptions {
    std::vector<std::string> names;
    std::optional<std::string> formula;
    std::string formulaName = "custom";
    std::size_t size = 4;
    // square of opposition on a model
    std::optional<std::string> squareModel;
    std::string a = "A";
    std::string b = "B";
    bool existentialImport = false;
};

struct SemanticsOptions {
    std::string lexicon;
    std::vector<std::string> text;
};

struct SelftestOptions {
    std::optional<std::uint64_t> seed;
    std::size_t cases = 60;
    std::size_t size = 3;
    unsigned jobs = 1;
    std::vector<std::string> suites;
    bool list = false;
};

int runParse(const ParseOptions& o, const Io& io);
int runCheck(const CheckOptions& o, const Parameters& p, const Io& io);
int runEval(const EvalOptions& o, const Parameters& p, const Io& io);
int runTranslate(const TranslateOptions& o, const Io& io);
int runClassify(const ClassifyOptions& o, const Parameters& p, const Io& io);
int runSemantics(const SemanticsOptions& o, const Parameters& p, const Io& io);
int runSelftest(const SelftestOptions& o, const Io& io);

}  // namespace epsk::cli

#endif  // EPSK_TOOLS_COMMANDS_HPP
