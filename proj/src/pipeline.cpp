#include <filesystem>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "citmatch/corpusforge.hpp"
#include "citmatch/errors.hpp"
#include "citmatch/evalkit.hpp"
#include "citmatch/io.hpp"
#include "citmatch/pipeline.hpp"
#include "citmatch/ruleengine.hpp"
#include "citmatch/taxonomy.hpp"

namespace citmatch::cli {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
  public:
    explicit UsageError(const std::string &what) : std::runtime_error(what) {}
};

void require(bool ok, const std::string &message) {
    if (!ok)
        throw UsageError(message);
}

std::string joined(const std::string &dir, const char *name) {
    return (fs::path(dir) / name).string();
}

void ensure_out_dir(const std::string &dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

forge::InjectionPlan load_plan(const std::string &path) {
    return forge::plan_from_json(io::read_text_file(path));
}

engine::CascadeProfile load_profile(const RunConfig &config) {
    if (!config.cascade_config_path.empty())
        return engine::load_cascade_file(config.cascade_config_path);
    return engine::builtin_profile(config.profile);
}

Corpus load_corpus(const RunConfig &config, bool need_links) {
    require(!config.targets_path.empty(), "--targets is required");
    require(!config.refs_path.empty(), "--refs is required");
    if (need_links)
        require(!config.links_path.empty(), "--links is required");
    Corpus corpus;
    corpus.targets = io::read_targets(config.targets_path);
    corpus.refs = io::read_refs(config.refs_path);
    if (!config.links_path.empty())
        corpus.links = io::read_links(config.links_path);
    return corpus;
}

eval::ExclusionList load_exclusions(const RunConfig &config) {
    if (config.exclude_path.empty())
        return {};
    return io::read_exclusion_list(config.exclude_path);
}

// Writes to --out when given, to the report stream otherwise.
void deliver(const RunConfig &config, std::ostream &out, const std::string &text) {
    if (config.out_path.empty())
        out << text;
    else
        io::write_text_file(config.out_path, text);
}

std::string summarize_matches(const std::vector<MatchRecord> &matches) {
    long long matched = 0;
    long long ambiguous = 0;
    long long missed = 0;
    for (const MatchRecord &m : matches) {
        switch (m.outcome) {
            case MatchOutcome::Matched:
                ++matched;
                break;
            case MatchOutcome::Ambiguous:
                ++ambiguous;
                break;
            case MatchOutcome::Missed:
                ++missed;
                break;
        }
    }
    std::ostringstream line;
    line << "matched " << matched << "  ambiguous " << ambiguous << "  missed " << missed
         << "  (of " << matches.size() << " refs)\n";
    return line.str();
}

int cmd_generate(const RunConfig &config, std::ostream &out) {
    require(!config.out_dir.empty(), "--out-dir is required");
    forge::GeneratorOptions options;
    int n_targets = config.n_targets;
    int n_refs = config.n_refs;
    std::uint64_t seed = config.seed;
    if (!config.plan_path.empty()) {
        const forge::InjectionPlan plan = load_plan(config.plan_path);
        options = plan.generator;
        if (n_targets == 0)
            n_targets = plan.n_targets;
        if (n_refs == 0)
            n_refs = plan.n_refs;
        if (seed == 1)
            seed = plan.seed;
    }
    require(n_targets > 0, "--n-targets must be positive (flag or plan)");
    require(n_refs >= 0, "--n-refs must be non-negative");

    const Corpus corpus = forge::generate_clean(n_targets, n_refs, seed, options);
    ensure_out_dir(config.out_dir);
    io::write_targets(joined(config.out_dir, "targets.jsonl"), corpus.targets);
    io::write_refs(joined(config.out_dir, "refs.jsonl"), corpus.refs);
    io::write_links(joined(config.out_dir, "links.jsonl"), corpus.links);
    out << "generated " << corpus.targets.size() << " targets, " << corpus.refs.size()
        << " refs into " << config.out_dir << "\n";
    return kOk;
}

int cmd_inject(const RunConfig &config, std::ostream &out) {
    require(!config.plan_path.empty(), "--plan is required");
    require(!config.out_dir.empty(), "--out-dir is required");
    Corpus corpus = load_corpus(config, true);
    const forge::InjectionPlan plan = load_plan(config.plan_path);

    // phantoms first (they replace whole references), then field-level
    // corruption of the remaining genuine refs, then duplicate targets
    const forge::PhantomResult phantoms = forge::inject_phantoms(corpus, plan);
    corpus.refs = phantoms.refs;
    corpus.links = phantoms.links;
    const forge::InjectionResult injected = forge::inject(corpus, plan);
    corpus.refs = injected.refs;
    const forge::DuplicateResult duplicates = forge::inject_duplicates(corpus.targets, plan);
    corpus.targets = duplicates.targets;

    ensure_out_dir(config.out_dir);
    io::write_targets(joined(config.out_dir, "targets.jsonl"), corpus.targets);
    io::write_refs(joined(config.out_dir, "refs.jsonl"), corpus.refs);
    io::write_links(joined(config.out_dir, "links.jsonl"), corpus.links);
    io::write_injection_log(joined(config.out_dir, "injection_log.tsv"), injected.log);
    io::write_phantom_log(joined(config.out_dir, "phantom_log.tsv"), phantoms.log);
    io::write_duplicate_log(joined(config.out_dir, "duplicate_log.tsv"), duplicates.log);

    long long applied = 0;
    for (const forge::InjectionLogRow &row : injected.log)
        if (row.applied)
            ++applied;
    out << "injected " << applied << " field corruptions, " << phantoms.log.size()
        << " phantom refs, " << duplicates.log.size() << " duplicate targets into "
        << config.out_dir << "\n";
    return kOk;
}

int cmd_match(const RunConfig &config, std::ostream &out) {
    require(!config.targets_path.empty(), "--targets is required");
    require(!config.refs_path.empty(), "--refs is required");
    std::string out_path = config.out_path;
    if (out_path.empty() && !config.out_dir.empty()) {
        ensure_out_dir(config.out_dir);
        out_path = joined(config.out_dir, "matches.jsonl");
    }
    require(!out_path.empty(), "--out (or --out-dir) is required");
    require(config.threads >= 1, "--threads must be at least 1");

    const engine::CascadeProfile profile = load_profile(config);
    const std::vector<TargetArticle> targets = io::read_targets(config.targets_path);
    const std::vector<CitedReference> refs = io::read_refs(config.refs_path);
    const engine::TargetIndex index = engine::build_index(targets, profile);
    const std::vector<MatchRecord> matches =
        engine::match_corpus(refs, index, profile, config.threads);
    io::write_matches(out_path, matches);
    out << "profile " << profile.name << ": " << summarize_matches(matches);
    return kOk;
}

int cmd_classify(const RunConfig &config, std::ostream &out) {
    Corpus corpus = load_corpus(config, true);

    std::vector<MatchRecord> matches;
    if (!config.matches_path.empty()) {
        matches = io::read_matches(config.matches_path);
    } else {
        // no matcher output: assess every reference against its truth target
        matches.reserve(corpus.refs.size());
        for (const CitedReference &r : corpus.refs)
            matches.push_back({r.ref_id, MatchOutcome::Missed, {}, ""});
    }
    const taxonomy::MissedAnnotationResult result = taxonomy::annotate_missed(matches, corpus);

    std::string annotations_path = config.out_path;
    if (annotations_path.empty() && !config.out_dir.empty()) {
        ensure_out_dir(config.out_dir);
        annotations_path = joined(config.out_dir, "annotations.tsv");
    }
    if (!annotations_path.empty())
        io::write_annotations(annotations_path, result.annotations);

    const auto freq = eval::iac_frequency_table(result.annotations);
    const taxonomy::InaccuracyStats stats =
        taxonomy::single_vs_multi_inaccuracy_stats(result.annotations);
    out << "refs assessed " << result.refs_assessed << "  skipped " << result.refs_skipped
        << "\n";
    out << "annotated fields " << result.annotations.size() << "  refs with annotations "
        << stats.refs_with_annotations << " (single " << stats.single_inaccuracy_refs
        << ", multi " << stats.multi_inaccuracy_refs << ")\n";
    std::string line;
    for (const auto &[code, count] : freq) {
        if (!line.empty())
            line += "  ";
        line += code + ":" + std::to_string(count);
    }
    out << "code frequencies " << (line.empty() ? "(none)" : line) << "\n";
    return kOk;
}

eval::ScoreMode parse_mode(const std::string &raw) {
    std::string s = raw;
    for (char &c : s)
        if (c == '-')
            c = '_';
    const auto mode = eval::score_mode_from_string(s);
    if (!mode)
        throw UsageError("unknown --mode: " + raw +
                         " (expected technical, empirical, empirical-best-case or all)");
    return *mode;
}

int cmd_evaluate(const RunConfig &config, std::ostream &out) {
    require(!config.matches_path.empty(), "--matches is required");
    require(!config.links_path.empty(), "--links is required");
    require(config.format == "table" || config.format == "delimited",
            "--format must be table or delimited");
    const std::vector<MatchRecord> matches = io::read_matches(config.matches_path);
    const std::vector<GroundTruthLink> links = io::read_links(config.links_path);
    const eval::ExclusionList exclusions = load_exclusions(config);

    std::vector<eval::ScoreMode> modes;
    if (config.mode == "all")
        modes = {eval::ScoreMode::Technical, eval::ScoreMode::Empirical,
                 eval::ScoreMode::EmpiricalBestCaseAmbiguous};
    else
        modes = {parse_mode(config.mode)};

    std::vector<eval::ScoreReport> reports;
    reports.reserve(modes.size());
    for (eval::ScoreMode mode : modes)
        reports.push_back(eval::score(matches, links, mode, exclusions));

    deliver(config, out,
            config.format == "table" ? eval::render_score_table("evaluation", reports)
                                     : eval::render_score_tsv(reports));
    return kOk;
}

int cmd_compare(const RunConfig &config, std::ostream &out) {
    require(config.format == "table" || config.format == "delimited",
            "--format must be table or delimited");
    const Corpus corpus = load_corpus(config, true);
    const eval::ExclusionList exclusions = load_exclusions(config);

    std::vector<std::string> profiles = config.profiles;
    if (profiles.empty())
        profiles = engine::builtin_profile_names();

    std::vector<eval::ProfileRun> runs;
    if (!config.matches_paths.empty()) {
        require(config.matches_paths.size() == profiles.size(),
                "--matches count must equal --profiles count");
        for (std::size_t i = 0; i < profiles.size(); ++i)
            runs.push_back({profiles[i], io::read_matches(config.matches_paths[i])});
    } else {
        require(config.threads >= 1, "--threads must be at least 1");
        for (const std::string &name : profiles) {
            const engine::CascadeProfile profile = engine::builtin_profile(name);
            const engine::TargetIndex index = engine::build_index(corpus.targets, profile);
            runs.push_back(
                {name, engine::match_corpus(corpus.refs, index, profile, config.threads)});
        }
    }

    const eval::ProfileComparison cmp = eval::compare_profiles(corpus, runs, exclusions);
    deliver(config, out,
            config.format == "table" ? eval::render_comparison_table(cmp)
                                     : eval::render_comparison_tsv(cmp));
    return kOk;
}

}  // namespace

int run(const RunConfig &config, std::ostream &out, std::ostream &err) {
    try {
        if (config.command == "generate")
            return cmd_generate(config, out);
        if (config.command == "inject")
            return cmd_inject(config, out);
        if (config.command == "match")
            return cmd_match(config, out);
        if (config.command == "classify")
            return cmd_classify(config, out);
        if (config.command == "evaluate")
            return cmd_evaluate(config, out);
        if (config.command == "compare")
            return cmd_compare(config, out);
        err << "error: unknown command: " << config.command << "\n";
        return kUsageError;
    } catch (const UsageError &e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const UnknownProfileError &e) {
        err << "error: " << e.what() << "\n";
        return kUnknownProfile;
    } catch (const CorpusParseError &e) {
        err << "error: " << e.what() << "\n";
        for (const ParseIssue &issue : e.issues())
            err << "  " << e.path() << ":" << issue.line << ": " << issue.message << "\n";
        return kDataFormatError;
    } catch (const ConfigError &e) {
        err << "error: " << e.what() << "\n";
        return kDataFormatError;
    } catch (const EvalError &e) {
        err << "error: " << e.what() << "\n";
        return kDataFormatError;
    } catch (const IoError &e) {
        err << "error: " << e.what() << "\n";
        return kIoError;
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << "\n";
        return kInternalError;
    }
}

int main_with_args(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    RunConfig config;
    CLI::App app{"citmatch: synthetic citation corpora, cascade matching, evaluation"};
    app.require_subcommand(1);

    auto add_common_io = [&config](CLI::App *cmd, bool targets, bool refs, bool links) {
        if (targets)
            cmd->add_option("--targets", config.targets_path, "target records (JSONL)");
        if (refs)
            cmd->add_option("--refs", config.refs_path, "cited references (JSONL)");
        if (links)
            cmd->add_option("--links", config.links_path, "ground-truth links (JSONL)");
    };

    CLI::App *generate = app.add_subcommand("generate", "write a clean synthetic corpus");
    generate->add_option("--seed", config.seed, "generator seed");
    generate->add_option("--n-targets", config.n_targets, "number of target articles");
    generate->add_option("--n-refs", config.n_refs, "number of cited references");
    generate->add_option("--plan", config.plan_path, "plan JSON (defaults for the above)");
    generate->add_option("--out-dir", config.out_dir, "output directory");

    CLI::App *inject = app.add_subcommand("inject", "apply typed corruptions to a corpus");
    add_common_io(inject, true, true, true);
    inject->add_option("--plan", config.plan_path, "injection plan JSON");
    inject->add_option("--out-dir", config.out_dir, "output directory");

    CLI::App *match = app.add_subcommand("match", "run a cascade profile over a corpus");
    add_common_io(match, true, true, false);
    match->add_option("--profile", config.profile, "builtin profile (strict, cwts, ifq)");
    match->add_option("--cascade-config", config.cascade_config_path,
                      "cascade definition file (overrides --profile)");
    match->add_option("--threads", config.threads, "worker threads");
    match->add_option("--out,-o", config.out_path, "matches output path");
    match->add_option("--out-dir", config.out_dir, "directory for matches.jsonl");

    CLI::App *classify = app.add_subcommand("classify", "annotate reference inaccuracies");
    add_common_io(classify, true, true, true);
    classify->add_option("--matches", config.matches_path,
                         "matcher output; only its missed refs are assessed");
    classify->add_option("--out,-o", config.out_path, "annotations output path");
    classify->add_option("--out-dir", config.out_dir, "directory for annotations.tsv");

    CLI::App *evaluate = app.add_subcommand("evaluate", "score matches against ground truth");
    evaluate->add_option("--matches", config.matches_path, "matcher output (JSONL)");
    evaluate->add_option("--links", config.links_path, "ground-truth links (JSONL)");
    evaluate->add_option("--exclude", config.exclude_path, "exclusion list");
    evaluate->add_option("--mode", config.mode,
                         "technical | empirical | empirical-best-case | all");
    evaluate->add_option("--format", config.format, "table | delimited");
    evaluate->add_option("--out,-o", config.out_path, "report output path");

    CLI::App *compare = app.add_subcommand("compare", "run and score several profiles");
    add_common_io(compare, true, true, true);
    compare->add_option("--profiles", config.profiles, "profiles to compare");
    compare->add_option("--matches", config.matches_paths,
                        "precomputed matches, one per profile");
    compare->add_option("--exclude", config.exclude_path, "exclusion list");
    compare->add_option("--threads", config.threads, "worker threads");
    compare->add_option("--format", config.format, "table | delimited");
    compare->add_option("--out,-o", config.out_path, "report output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp &e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }

    config.command = app.get_subcommands().front()->get_name();
    return run(config, out, err);
}

}  // namespace citmatch::cli
