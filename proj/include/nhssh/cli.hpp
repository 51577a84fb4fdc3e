#pragma once

// Command-line front end: flag parsing, config-file merging, pipeline
// orchestration, and figure reproduction recipes.
//
// Exit codes: 0 success, 1 computation failure, 2 usage error.

#include "nhssh/lattice.hpp"

#include <iosfwd>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace nhssh::cli {

enum class Command { Spectrum, Mode, Sweep, Ep, Propagate, Reproduce };
enum class OutputFormat { Csv, Json };

struct RangeSpec {
    double start = 0.0;
    double stop = 0.0;
    int count = 0;

    std::vector<double> values() const;
};

struct RunConfig {
    Command command = Command::Spectrum;
    LatticeSpec lattice;
    OutputFormat format = OutputFormat::Csv;
    std::string output_path;
    int jobs = 0;                    // <= 0 selects hardware concurrency

    std::optional<RangeSpec> range;  // sweep strengths / ep bracket+scan
    double z_max = 30.0;
    int steps = 600;
    int site = 1;
    std::string figure;              // reproduce only
    bool grid_output = false;        // dense grid instead of long CSV

    // Flags given explicitly on the command line (long names); reproduce
    // lets these override the figure's documented parameters.
    std::set<std::string> provided;
};

// Malformed invocation; maps to exit code 2.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// --help was requested; carries the text to print (exit code 0).
class HelpRequested : public std::runtime_error {
public:
    explicit HelpRequested(const std::string& text) : std::runtime_error(text) {}
};

// Parses argv (without the program name) into a validated RunConfig.
// A --config JSON file (LatticeSpec schema) is merged first, explicit flags
// win. Throws UsageError / HelpRequested.
RunConfig parse_args(const std::vector<std::string>& args);

// Executes the configured pipeline, writes the output file atomically, and
// prints a one-line summary. Returns 0; throws nhssh::Error on failure.
int run(const RunConfig& config, std::ostream& out);

// Figure ids accepted by `reproduce`.
const std::vector<std::string>& known_figures();

// Resolved parameter set for one figure, with the user's explicit flags kept.
RunConfig figure_config(const std::string& id, const RunConfig& base);

// parse_args + run with exit-code mapping (0/1/2): the whole program except
// for stream setup.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace nhssh::cli
