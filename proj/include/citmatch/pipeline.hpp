#ifndef CITMATCH_PIPELINE_HPP
#define CITMATCH_PIPELINE_HPP

#include <iosfwd>
#include <string>
#include <vector>

// The CLI commands as library functions, so tools and tests drive the exact
// same code paths. Each command reads/writes files named in the config and
// reports through the supplied stream; outputs carry no timestamps, so a
// rerun with the same inputs is byte-identical.

namespace citmatch::cli {

// Exit codes shared by the command functions and the binary.
enum ExitCode : int {
    kOk = 0,
    kInternalError = 1,
    kUsageError = 2,
    kUnknownProfile = 3,
    kDataFormatError = 4,
    kIoError = 5,
};

struct RunConfig {
    std::string command;  // generate | inject | match | classify | evaluate | compare

    // inputs
    std::string targets_path;
    std::string refs_path;
    std::string links_path;
    std::string matches_path;
    std::vector<std::string> matches_paths;  // compare: one per profile
    std::string plan_path;
    std::string exclude_path;

    // matching
    std::string profile = "strict";          // builtin name ...
    std::string cascade_config_path;         // ... or explicit cascade file (wins)
    std::vector<std::string> profiles;       // compare
    unsigned threads = 1;

    // generate / inject
    std::uint64_t seed = 1;
    int n_targets = 0;
    int n_refs = 0;

    // outputs
    std::string out_dir;        // generate/inject write fixed names into this
    std::string out_path;       // single-file commands
    std::string format = "table";  // table | delimited
    std::string mode = "technical";  // evaluate: technical | empirical | empirical-best-case
};

// Returns an ExitCode. Never throws: errors are printed to `err` and mapped
// to the exit code classes above.
int run(const RunConfig &config, std::ostream &out, std::ostream &err);

// argv front-end (CLI11): parses flags into a RunConfig and calls run().
int main_with_args(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace citmatch::cli

#endif  // CITMATCH_PIPELINE_HPP
