#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "citmatch/corpusforge.hpp"
#include "citmatch/io.hpp"
#include "citmatch/pipeline.hpp"

using namespace citmatch;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

// Drives the exact argv front-end the installed binary uses.
CliResult run_cli(const std::vector<std::string> &args) {
    std::vector<const char *> argv;
    argv.push_back("citmatch");
    for (const std::string &a : args)
        argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code =
        cli::main_with_args(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class TempDir {
  public:
    explicit TempDir(const std::string &name)
        : path_(fs::temp_directory_path() / ("citmatch_pipe_" + name)) {
        std::error_code ec;
        fs::remove_all(path_, ec);
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    const fs::path &path() const { return path_; }
    std::string file(const char *name) const { return (path_ / name).string(); }

  private:
    fs::path path_;
};

std::string slurp(const std::string &path) { return io::read_text_file(path); }

// A corrupted corpus on disk plus the paths the commands need.
struct DiskCorpus {
    explicit DiskCorpus(const TempDir &dir, double corruption_rate = 0.0) {
        Corpus corpus = forge::generate_clean(30, 120, 11);
        if (corruption_rate > 0.0) {
            forge::InjectionPlan plan;
            plan.seed = 2;
            plan.per_code_rates["T"] = corruption_rate;
            plan.per_code_rates["B"] = corruption_rate;
            corpus.refs = forge::inject(corpus, plan).refs;
        }
        targets = dir.file("targets.jsonl");
        refs = dir.file("refs.jsonl");
        links = dir.file("links.jsonl");
        io::write_targets(targets, corpus.targets);
        io::write_refs(refs, corpus.refs);
        io::write_links(links, corpus.links);
    }
    std::string targets;
    std::string refs;
    std::string links;
};

}  // namespace

TEST_CASE("help and usage errors come back as exit codes") {
    CHECK(run_cli({"--help"}).code == cli::kOk);
    const auto help = run_cli({"--help"});
    CHECK(help.out.find("generate") != std::string::npos);
    CHECK(help.out.find("compare") != std::string::npos);

    CHECK(run_cli({}).code == cli::kUsageError);              // a subcommand is required
    CHECK(run_cli({"--bogus"}).code == cli::kUsageError);
    CHECK(run_cli({"match", "--no-such-flag"}).code == cli::kUsageError);

    cli::RunConfig config;
    config.command = "frobnicate";
    std::ostringstream out;
    std::ostringstream err;
    CHECK(cli::run(config, out, err) == cli::kUsageError);
    CHECK(err.str().find("unknown command") != std::string::npos);
}

TEST_CASE("generate writes a loadable corpus and is rerun-stable") {
    TempDir dir("generate");
    const auto first = run_cli({"generate", "--seed", "5", "--n-targets", "25", "--n-refs",
                                "100", "--out-dir", dir.file("a")});
    REQUIRE_MESSAGE(first.code == cli::kOk, first.err);
    CHECK(first.out.find("generated 25 targets, 100 refs") != std::string::npos);

    Corpus corpus;
    corpus.targets = io::read_targets(dir.file("a") + "/targets.jsonl");
    corpus.refs = io::read_refs(dir.file("a") + "/refs.jsonl");
    corpus.links = io::read_links(dir.file("a") + "/links.jsonl");
    CHECK(corpus.targets.size() == 25);
    CHECK(corpus.refs.size() == 100);
    CHECK(validate_corpus(corpus).ok());

    const auto second = run_cli({"generate", "--seed", "5", "--n-targets", "25", "--n-refs",
                                 "100", "--out-dir", dir.file("b")});
    REQUIRE(second.code == cli::kOk);
    for (const char *name : {"targets.jsonl", "refs.jsonl", "links.jsonl"})
        CHECK(slurp(dir.file("a") + "/" + name) == slurp(dir.file("b") + "/" + name));

    CHECK(run_cli({"generate", "--n-targets", "25"}).code == cli::kUsageError);  // no out dir
    CHECK(run_cli({"generate", "--out-dir", dir.file("c")}).code == cli::kUsageError);
    // an over-capacity request is a data/config problem, not a usage one
    CHECK(run_cli({"generate", "--n-targets", "2000", "--out-dir", dir.file("c")}).code ==
          cli::kDataFormatError);
}

TEST_CASE("generate takes its numbers from a plan file when flags are silent") {
    TempDir dir("genplan");
    io::write_text_file(dir.file("plan.json"),
                        R"({"seed": 9, "n_targets": 12, "n_refs": 30})");
    const auto from_plan = run_cli({"generate", "--plan", dir.file("plan.json"), "--out-dir",
                                    dir.file("p")});
    REQUIRE_MESSAGE(from_plan.code == cli::kOk, from_plan.err);
    CHECK(from_plan.out.find("generated 12 targets, 30 refs") != std::string::npos);

    // explicit flags beat the plan
    const auto overridden = run_cli({"generate", "--plan", dir.file("plan.json"), "--n-targets",
                                     "7", "--out-dir", dir.file("q")});
    REQUIRE(overridden.code == cli::kOk);
    CHECK(overridden.out.find("generated 7 targets, 30 refs") != std::string::npos);

    io::write_text_file(dir.file("bad.json"), "{\"n_targets\": }");
    CHECK(run_cli({"generate", "--plan", dir.file("bad.json"), "--out-dir", dir.file("r")})
              .code == cli::kDataFormatError);
}

TEST_CASE("inject produces the corpus, the logs and a summary") {
    TempDir dir("inject");
    DiskCorpus corpus(dir);
    io::write_text_file(dir.file("plan.json"), R"({
        "seed": 4,
        "rates": {"T": 0.2, "B": 0.1, "G": 0.1},
        "multi_inaccuracy_rate": 0.2,
        "phantom_rate": 0.05,
        "duplicate_target_rate": 0.1
    })");

    const std::vector<std::string> args = {
        "inject",  "--targets", corpus.targets,      "--refs",    corpus.refs,
        "--links", corpus.links, "--plan", dir.file("plan.json"), "--out-dir", dir.file("out")};
    const auto result = run_cli(args);
    REQUIRE_MESSAGE(result.code == cli::kOk, result.err);
    CHECK(result.out.find("injected ") != std::string::npos);
    CHECK(result.out.find("6 phantom refs") != std::string::npos);    // llround(0.05 * 120)
    CHECK(result.out.find("3 duplicate targets") != std::string::npos);

    const auto targets = io::read_targets(dir.file("out") + "/targets.jsonl");
    CHECK(targets.size() == 33);
    const auto log = io::read_injection_log(dir.file("out") + "/injection_log.tsv");
    CHECK_FALSE(log.empty());
    CHECK(io::read_refs(dir.file("out") + "/refs.jsonl").size() == 120);
    CHECK(io::read_links(dir.file("out") + "/links.jsonl").size() == 120);
    CHECK(fs::exists(dir.file("out") + "/phantom_log.tsv"));
    CHECK(fs::exists(dir.file("out") + "/duplicate_log.tsv"));

    // byte-identical on a rerun
    const auto rerun_args = [&] {
        auto a = args;
        a.back() = dir.file("out2");
        return a;
    }();
    REQUIRE(run_cli(rerun_args).code == cli::kOk);
    for (const char *name : {"refs.jsonl", "targets.jsonl", "links.jsonl",
                             "injection_log.tsv", "phantom_log.tsv", "duplicate_log.tsv"})
        CHECK(slurp(dir.file("out") + "/" + name) == slurp(dir.file("out2") + "/" + name));

    CHECK(run_cli({"inject", "--targets", corpus.targets, "--refs", corpus.refs, "--links",
                   corpus.links, "--out-dir", dir.file("x")})
              .code == cli::kUsageError);  // --plan missing
}

TEST_CASE("match runs a profile and reports the outcome split") {
    TempDir dir("match");
    DiskCorpus corpus(dir);

    const auto result = run_cli({"match", "--targets", corpus.targets, "--refs", corpus.refs,
                                 "--profile", "strict", "--out", dir.file("matches.jsonl")});
    REQUIRE_MESSAGE(result.code == cli::kOk, result.err);
    CHECK(result.out ==
          "profile strict: matched 120  ambiguous 0  missed 0  (of 120 refs)\n");
    const auto matches = io::read_matches(dir.file("matches.jsonl"));
    CHECK(matches.size() == 120);

    // --out-dir picks the fixed file name
    REQUIRE(run_cli({"match", "--targets", corpus.targets, "--refs", corpus.refs, "--out-dir",
                     dir.file("md")})
                .code == cli::kOk);
    CHECK(fs::exists(dir.file("md") + "/matches.jsonl"));

    // a cascade file wins over --profile and reports its own name
    const std::string cascade = std::string(CITMATCH_SOURCE_DIR) + "/configs/ifq.cascade";
    const auto custom = run_cli({"match", "--targets", corpus.targets, "--refs", corpus.refs,
                                 "--profile", "strict", "--cascade-config", cascade, "--out",
                                 dir.file("m2.jsonl")});
    REQUIRE(custom.code == cli::kOk);
    CHECK(custom.out.rfind("profile ifq:", 0) == 0);

    const auto unknown = run_cli({"match", "--targets", corpus.targets, "--refs", corpus.refs,
                                  "--profile", "wos2000", "--out", dir.file("m3.jsonl")});
    CHECK(unknown.code == cli::kUnknownProfile);
    CHECK(unknown.err.find("unknown matching profile: wos2000") != std::string::npos);

    CHECK(run_cli({"match", "--refs", corpus.refs, "--out", dir.file("m4.jsonl")}).code ==
          cli::kUsageError);
    CHECK(run_cli({"match", "--targets", corpus.targets, "--refs", corpus.refs, "--threads",
                   "0", "--out", dir.file("m5.jsonl")})
              .code == cli::kUsageError);
    CHECK(run_cli({"match", "--targets", dir.file("nope.jsonl"), "--refs", corpus.refs,
                   "--out", dir.file("m6.jsonl")})
              .code == cli::kIoError);
}

TEST_CASE("classify annotates the missed references") {
    TempDir dir("classify");
    DiskCorpus corpus(dir, 0.3);  // enough corruption for real misses

    REQUIRE(run_cli({"match", "--targets", corpus.targets, "--refs", corpus.refs, "--profile",
                     "strict", "--out", dir.file("matches.jsonl")})
                .code == cli::kOk);
    const auto matches = io::read_matches(dir.file("matches.jsonl"));
    std::size_t missed = 0;
    for (const MatchRecord &m : matches)
        if (m.outcome == MatchOutcome::Missed)
            ++missed;
    REQUIRE(missed > 0);

    const auto result = run_cli({"classify", "--targets", corpus.targets, "--refs", corpus.refs,
                                 "--links", corpus.links, "--matches", dir.file("matches.jsonl"),
                                 "--out", dir.file("annotations.tsv")});
    REQUIRE_MESSAGE(result.code == cli::kOk, result.err);
    CHECK(result.out.find("refs assessed " + std::to_string(missed) + "  skipped 0") !=
          std::string::npos);
    const auto annotations = io::read_annotations(dir.file("annotations.tsv"));
    CHECK_FALSE(annotations.empty());
    CHECK(result.out.find("code frequencies ") != std::string::npos);

    // without matcher output every reference is assessed; a clean corpus
    // yields no annotations at all
    TempDir clean_dir("classify_clean");
    DiskCorpus clean(clean_dir);
    const auto none = run_cli({"classify", "--targets", clean.targets, "--refs", clean.refs,
                               "--links", clean.links, "--out",
                               clean_dir.file("annotations.tsv")});
    REQUIRE(none.code == cli::kOk);
    CHECK(none.out.find("refs assessed 120  skipped 0") != std::string::npos);
    CHECK(none.out.find("annotated fields 0") != std::string::npos);
    CHECK(none.out.find("code frequencies (none)") != std::string::npos);
    CHECK(io::read_annotations(clean_dir.file("annotations.tsv")).empty());
}

TEST_CASE("evaluate scores matches in every mode") {
    TempDir dir("evaluate");
    DiskCorpus corpus(dir, 0.2);
    REQUIRE(run_cli({"match", "--targets", corpus.targets, "--refs", corpus.refs, "--profile",
                     "cwts", "--out", dir.file("matches.jsonl")})
                .code == cli::kOk);

    const auto table = run_cli({"evaluate", "--matches", dir.file("matches.jsonl"), "--links",
                                corpus.links, "--mode", "technical"});
    REQUIRE_MESSAGE(table.code == cli::kOk, table.err);
    CHECK(table.out.find("== evaluation ==") != std::string::npos);
    CHECK(table.out.find("technical") != std::string::npos);

    const auto all = run_cli({"evaluate", "--matches", dir.file("matches.jsonl"), "--links",
                              corpus.links, "--mode", "all", "--format", "delimited"});
    REQUIRE(all.code == cli::kOk);
    CHECK(std::count(all.out.begin(), all.out.end(), '\n') == 4);  // header + 3 modes
    CHECK(all.out.find("\tempirical\t") != std::string::npos);
    CHECK(all.out.find("\tempirical_best_case\t") != std::string::npos);

    // --out redirects the report into a file
    const auto to_file = run_cli({"evaluate", "--matches", dir.file("matches.jsonl"), "--links",
                                  corpus.links, "--mode", "all", "--format", "delimited",
                                  "--out", dir.file("report.tsv")});
    REQUIRE(to_file.code == cli::kOk);
    CHECK(to_file.out.empty());
    CHECK(slurp(dir.file("report.tsv")) == all.out);

    // exclusions show up in the refs_excluded column
    io::write_text_file(dir.file("exclude.txt"),
                        "# citmatch-exclude v1\nref R000001\nref R000002\n");
    const auto excluded = run_cli({"evaluate", "--matches", dir.file("matches.jsonl"),
                                   "--links", corpus.links, "--exclude", dir.file("exclude.txt"),
                                   "--mode", "technical", "--format", "delimited"});
    REQUIRE(excluded.code == cli::kOk);
    CHECK(excluded.out.find("\t118\t2\t") != std::string::npos);

    CHECK(run_cli({"evaluate", "--matches", dir.file("matches.jsonl"), "--links", corpus.links,
                   "--mode", "bogus"})
              .code == cli::kUsageError);
    CHECK(run_cli({"evaluate", "--matches", dir.file("matches.jsonl"), "--links", corpus.links,
                   "--format", "csv"})
              .code == cli::kUsageError);
    CHECK(run_cli({"evaluate", "--links", corpus.links}).code == cli::kUsageError);

    // a matches file naming a ref without truth is a data error
    io::write_matches(dir.file("orphan.jsonl"),
                      {{"R999999", MatchOutcome::Missed, {}, ""}});
    const auto orphan = run_cli({"evaluate", "--matches", dir.file("orphan.jsonl"), "--links",
                                 corpus.links});
    CHECK(orphan.code == cli::kDataFormatError);
    CHECK(orphan.err.find("R999999") != std::string::npos);

    io::write_text_file(dir.file("broken.jsonl"),
                        "{\"format\":\"citmatch-matches\",\"version\":1}\n{oops\n");
    const auto broken = run_cli({"evaluate", "--matches", dir.file("broken.jsonl"), "--links",
                                 corpus.links});
    CHECK(broken.code == cli::kDataFormatError);
    CHECK(broken.err.find(":2:") != std::string::npos);  // path:line diagnostics
}

TEST_CASE("compare runs the builtin profiles side by side") {
    TempDir dir("compare");
    DiskCorpus corpus(dir, 0.25);

    const std::vector<std::string> base = {"compare",  "--targets", corpus.targets,
                                           "--refs",   corpus.refs, "--links",
                                           corpus.links};
    auto delimited = base;
    delimited.insert(delimited.end(), {"--format", "delimited"});
    const auto tsv = run_cli(delimited);
    REQUIRE_MESSAGE(tsv.code == cli::kOk, tsv.err);
    CHECK(std::count(tsv.out.begin(), tsv.out.end(), '\n') == 1 + 3 * 3);
    CHECK(tsv.out.find("strict\ttechnical\t") != std::string::npos);
    CHECK(tsv.out.find("ifq\tempirical_best_case\t") != std::string::npos);

    const auto again = run_cli(delimited);
    CHECK(again.out == tsv.out);  // rerun-stable

    auto table = base;
    const auto human = run_cli(table);
    REQUIRE(human.code == cli::kOk);
    CHECK(human.out.find("== profile comparison ==") != std::string::npos);
    CHECK(human.out.find("profile: cwts") != std::string::npos);
    CHECK(human.out.find("missed-set overlap:") != std::string::npos);

    // precomputed matches must line up with the profile list
    REQUIRE(run_cli({"match", "--targets", corpus.targets, "--refs", corpus.refs, "--profile",
                     "strict", "--out", dir.file("strict.jsonl")})
                .code == cli::kOk);
    auto mismatched = base;
    mismatched.insert(mismatched.end(), {"--profiles", "strict", "--profiles", "cwts",
                                         "--matches", dir.file("strict.jsonl")});
    CHECK(run_cli(mismatched).code == cli::kUsageError);

    auto matched = base;
    matched.insert(matched.end(), {"--profiles", "strict", "--matches",
                                   dir.file("strict.jsonl"), "--format", "delimited"});
    const auto precomputed = run_cli(matched);
    REQUIRE(precomputed.code == cli::kOk);
    CHECK(std::count(precomputed.out.begin(), precomputed.out.end(), '\n') == 1 + 3);

    auto unknown = base;
    unknown.insert(unknown.end(), {"--profiles", "wos2000"});
    CHECK(run_cli(unknown).code == cli::kUnknownProfile);
}

TEST_CASE("the installed binary maps the same exit codes") {
    TempDir dir("binary");
    const std::string bin = CITMATCH_CLI;
    REQUIRE(fs::exists(bin));

    const auto shell = [](const std::string &cmd) {
        const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
        REQUIRE(WIFEXITED(status));
        return WEXITSTATUS(status);
    };

    CHECK(shell(bin + " --help") == 0);
    CHECK(shell(bin + " generate --seed 3 --n-targets 10 --n-refs 20 --out-dir " +
                dir.file("g")) == 0);
    CHECK(fs::exists(dir.file("g") + "/targets.jsonl"));
    CHECK(shell(bin + " match --targets " + dir.file("g") + "/targets.jsonl --refs " +
                dir.file("g") + "/refs.jsonl --profile wos2000 --out " + dir.file("m.jsonl")) ==
          3);
    CHECK(shell(bin + " evaluate --matches " + dir.file("missing.jsonl") + " --links " +
                dir.file("g") + "/links.jsonl") == 5);
    CHECK(shell(bin + " frobnicate") == 2);
}
