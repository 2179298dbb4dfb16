#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "citmatch/corpusforge.hpp"
#include "citmatch/errors.hpp"
#include "citmatch/evalkit.hpp"
#include "citmatch/io.hpp"
#include "citmatch/model.hpp"
#include "citmatch/pipeline.hpp"
#include "citmatch/ruleengine.hpp"
#include "citmatch/strmetrics.hpp"
#include "citmatch/taxonomy.hpp"
#include "citmatch/textnorm.hpp"

namespace py = pybind11;

namespace {

using namespace citmatch;

Field parse_field(const std::string &name) {
    const auto field = field_from_string(name);
    if (!field)
        throw py::value_error("unknown field: " + name);
    return *field;
}

eval::ScoreMode parse_mode(const std::string &name) {
    const auto mode = eval::score_mode_from_string(name);
    if (!mode)
        throw py::value_error("unknown score mode: " + name);
    return *mode;
}

std::vector<MatchRecord> py_match_corpus(const std::vector<TargetArticle> &targets,
                                         const std::vector<CitedReference> &refs,
                                         const std::string &profile_name, unsigned threads) {
    const engine::CascadeProfile profile = engine::builtin_profile(profile_name);
    const engine::TargetIndex index = engine::build_index(targets, profile);
    return engine::match_corpus(refs, index, profile, threads);
}

std::vector<MatchRecord> py_match_corpus_config(const std::vector<TargetArticle> &targets,
                                                const std::vector<CitedReference> &refs,
                                                const std::string &cascade_text,
                                                unsigned threads) {
    const engine::CascadeProfile profile = engine::parse_cascade(cascade_text, "<python>");
    const engine::TargetIndex index = engine::build_index(targets, profile);
    return engine::match_corpus(refs, index, profile, threads);
}

std::vector<std::string> py_classify_field(const std::string &expected,
                                           const std::string &observed,
                                           const std::string &field) {
    std::vector<std::string> out;
    for (taxonomy::IacCode code :
         taxonomy::classify_field(expected, observed, parse_field(field)))
        out.push_back(taxonomy::to_string(code));
    return out;
}

}  // namespace

PYBIND11_MODULE(_citmatch, m) {
    m.doc() = "citation matching engine: corpus synthesis, cascade matching, evaluation";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<UnknownProfileError>(m, "UnknownProfileError");
    py::register_exception<CorpusParseError>(m, "CorpusParseError");
    py::register_exception<IoError>(m, "IoError");
    py::register_exception<EvalError>(m, "EvalError");

    // --- records ---------------------------------------------------------

    py::class_<Author>(m, "Author")
        .def(py::init<>())
        .def(py::init([](const std::string &last, const std::string &initials) {
                 return Author{last, initials};
             }),
             py::arg("last"), py::arg("initials") = "")
        .def_readwrite("last", &Author::last)
        .def_readwrite("initials", &Author::initials)
        .def("__repr__", [](const Author &a) {
            return "Author(last='" + a.last + "', initials='" + a.initials + "')";
        });

    py::class_<TargetArticle>(m, "TargetArticle")
        .def(py::init<>())
        .def_readwrite("id", &TargetArticle::id)
        .def_readwrite("first_author_last", &TargetArticle::first_author_last)
        .def_readwrite("first_initial", &TargetArticle::first_initial)
        .def_readwrite("second_initial", &TargetArticle::second_initial)
        .def_readwrite("all_authors", &TargetArticle::all_authors)
        .def_readwrite("pub_year", &TargetArticle::pub_year)
        .def_readwrite("pub_name_full", &TargetArticle::pub_name_full)
        .def_readwrite("pub_name_abbrevs", &TargetArticle::pub_name_abbrevs)
        .def_readwrite("volume", &TargetArticle::volume)
        .def_readwrite("issue", &TargetArticle::issue)
        .def_readwrite("start_page", &TargetArticle::start_page)
        .def_readwrite("end_page", &TargetArticle::end_page)
        .def_readwrite("doi", &TargetArticle::doi)
        .def_readwrite("article_title", &TargetArticle::article_title)
        .def_property(
            "domain", [](const TargetArticle &t) { return to_string(t.domain); },
            [](TargetArticle &t, const std::string &s) {
                const auto d = domain_from_string(s);
                if (!d)
                    throw py::value_error("unknown domain: " + s);
                t.domain = *d;
            })
        .def_readwrite("accumulated_citations", &TargetArticle::accumulated_citations)
        .def("__repr__",
             [](const TargetArticle &t) { return "TargetArticle(id='" + t.id + "')"; });

    py::class_<CitedReference>(m, "CitedReference")
        .def(py::init<>())
        .def_readwrite("ref_id", &CitedReference::ref_id)
        .def_readwrite("source_article_id", &CitedReference::source_article_id)
        .def_readwrite("first_author_last", &CitedReference::first_author_last)
        .def_readwrite("first_initial", &CitedReference::first_initial)
        .def_readwrite("second_initial", &CitedReference::second_initial)
        .def_readwrite("pub_year", &CitedReference::pub_year)
        .def_readwrite("pub_name", &CitedReference::pub_name)
        .def_readwrite("volume", &CitedReference::volume)
        .def_readwrite("issue", &CitedReference::issue)
        .def_readwrite("start_page", &CitedReference::start_page)
        .def_readwrite("doi", &CitedReference::doi)
        .def("__repr__",
             [](const CitedReference &r) { return "CitedReference(ref_id='" + r.ref_id + "')"; });

    py::class_<GroundTruthLink>(m, "GroundTruthLink")
        .def(py::init<>())
        .def(py::init([](const std::string &ref_id, const std::string &true_target_id,
                         bool truly_cites, const std::string &phantom_target_id) {
                 return GroundTruthLink{ref_id, true_target_id, truly_cites, phantom_target_id};
             }),
             py::arg("ref_id"), py::arg("true_target_id") = "", py::arg("truly_cites") = true,
             py::arg("phantom_target_id") = "")
        .def_readwrite("ref_id", &GroundTruthLink::ref_id)
        .def_readwrite("true_target_id", &GroundTruthLink::true_target_id)
        .def_readwrite("truly_cites", &GroundTruthLink::truly_cites)
        .def_readwrite("phantom_target_id", &GroundTruthLink::phantom_target_id);

    py::class_<MatchRecord>(m, "MatchRecord")
        .def(py::init<>())
        .def_readwrite("ref_id", &MatchRecord::ref_id)
        .def_property(
            "outcome", [](const MatchRecord &r) { return to_string(r.outcome); },
            [](MatchRecord &r, const std::string &s) {
                const auto o = match_outcome_from_string(s);
                if (!o)
                    throw py::value_error("unknown outcome: " + s);
                r.outcome = *o;
            })
        .def_readwrite("matched_targets", &MatchRecord::matched_targets)
        .def_readwrite("selected_target", &MatchRecord::selected_target)
        .def("__repr__", [](const MatchRecord &r) {
            return "MatchRecord(ref_id='" + r.ref_id + "', outcome='" + to_string(r.outcome) +
                   "')";
        });

    py::class_<Corpus>(m, "Corpus")
        .def(py::init<>())
        .def_readwrite("targets", &Corpus::targets)
        .def_readwrite("refs", &Corpus::refs)
        .def_readwrite("links", &Corpus::links);

    py::class_<taxonomy::IacAnnotation>(m, "IacAnnotation")
        .def(py::init<>())
        .def_readwrite("ref_id", &taxonomy::IacAnnotation::ref_id)
        .def_property_readonly(
            "field",
            [](const taxonomy::IacAnnotation &a) { return to_string(a.field); })
        .def_readwrite("expected", &taxonomy::IacAnnotation::expected)
        .def_readwrite("observed", &taxonomy::IacAnnotation::observed)
        .def_property_readonly("codes", [](const taxonomy::IacAnnotation &a) {
            std::vector<std::string> out;
            for (taxonomy::IacCode c : a.codes)
                out.push_back(taxonomy::to_string(c));
            return out;
        });

    py::class_<eval::ConfusionCounts>(m, "ConfusionCounts")
        .def(py::init<>())
        .def_readwrite("correct", &eval::ConfusionCounts::correct)
        .def_readwrite("incorrect", &eval::ConfusionCounts::incorrect)
        .def_readwrite("missed", &eval::ConfusionCounts::missed)
        .def_readwrite("ambiguous_records", &eval::ConfusionCounts::ambiguous_records)
        .def_readwrite("ambiguous_containing_correct",
                       &eval::ConfusionCounts::ambiguous_containing_correct)
        .def_readwrite("ambiguous_resolved_correct",
                       &eval::ConfusionCounts::ambiguous_resolved_correct)
        .def_readwrite("refs_scored", &eval::ConfusionCounts::refs_scored)
        .def_readwrite("refs_excluded", &eval::ConfusionCounts::refs_excluded);

    py::class_<eval::ScoreReport>(m, "ScoreReport")
        .def(py::init<>())
        .def_property_readonly("mode",
                               [](const eval::ScoreReport &r) { return to_string(r.mode); })
        .def_readwrite("counts", &eval::ScoreReport::counts)
        .def_readwrite("precision", &eval::ScoreReport::precision)
        .def_readwrite("recall", &eval::ScoreReport::recall)
        .def_readwrite("f1", &eval::ScoreReport::f1);

    // --- text normalization + metrics --------------------------------------

    m.def("fold_diacritics", &textnorm::fold_diacritics, py::arg("s"));
    m.def("fold_diacritics_expanded", &textnorm::fold_diacritics_expanded, py::arg("s"));
    m.def("to_upper_ascii", &textnorm::to_upper_ascii, py::arg("s"));
    m.def("has_diacritics", &textnorm::has_diacritics, py::arg("s"));
    m.def("levenshtein", &metrics::levenshtein, py::arg("a"), py::arg("b"));
    m.def("damerau_levenshtein", &metrics::damerau_levenshtein, py::arg("a"), py::arg("b"));
    m.def(
        "soundex",
        [](const std::string &name) -> std::optional<std::string> {
            return metrics::soundex(name);
        },
        py::arg("name"));

    // --- corpus synthesis ------------------------------------------------------

    m.def(
        "generate_clean",
        [](int n_targets, int n_refs, std::uint64_t seed) {
            return forge::generate_clean(n_targets, n_refs, seed);
        },
        py::arg("n_targets"), py::arg("n_refs"), py::arg("seed") = 1);
    m.def(
        "inject",
        [](const Corpus &corpus, const std::string &plan_json) {
            const forge::InjectionPlan plan = forge::plan_from_json(plan_json);
            Corpus out = corpus;
            const forge::PhantomResult phantoms = forge::inject_phantoms(out, plan);
            out.refs = phantoms.refs;
            out.links = phantoms.links;
            const forge::InjectionResult injected = forge::inject(out, plan);
            out.refs = injected.refs;
            const forge::DuplicateResult duplicates =
                forge::inject_duplicates(out.targets, plan);
            out.targets = duplicates.targets;
            return out;
        },
        py::arg("corpus"), py::arg("plan_json"),
        "Applies a plan (phantoms, field corruptions, duplicate targets) to a corpus.");

    // --- matching ---------------------------------------------------------------

    m.def("builtin_profile_names", &engine::builtin_profile_names);
    m.def("builtin_profile_text", &engine::builtin_profile_text, py::arg("name"));
    m.def("match_corpus", &py_match_corpus, py::arg("targets"), py::arg("refs"),
          py::arg("profile") = "cwts", py::arg("threads") = 1);
    m.def("match_corpus_with_config", &py_match_corpus_config, py::arg("targets"),
          py::arg("refs"), py::arg("cascade_text"), py::arg("threads") = 1);

    // --- classification ----------------------------------------------------------

    m.def("classify_field", &py_classify_field, py::arg("expected"), py::arg("observed"),
          py::arg("field"));
    m.def("annotate_pair", &taxonomy::annotate_pair, py::arg("ref"), py::arg("target"));

    // --- evaluation ----------------------------------------------------------------

    m.def(
        "count_links",
        [](const std::vector<MatchRecord> &matches, const std::vector<GroundTruthLink> &links,
           const std::string &mode) {
            return eval::count_links(matches, links, parse_mode(mode));
        },
        py::arg("matches"), py::arg("links"), py::arg("mode") = "technical");
    m.def(
        "score",
        [](const std::vector<MatchRecord> &matches, const std::vector<GroundTruthLink> &links,
           const std::string &mode) {
            return eval::score(matches, links, parse_mode(mode));
        },
        py::arg("matches"), py::arg("links"), py::arg("mode") = "technical");
    m.def(
        "score_from_counts",
        [](const eval::ConfusionCounts &counts, const std::string &mode) {
            return eval::score_from_counts(counts, parse_mode(mode));
        },
        py::arg("counts"), py::arg("mode") = "technical");
    m.def(
        "format_percent",
        [](long long num, long long den) { return eval::format_percent(num, den); },
        py::arg("num"), py::arg("den"));

    // --- file formats ----------------------------------------------------------------

    m.def("read_targets", &io::read_targets, py::arg("path"));
    m.def("write_targets", &io::write_targets, py::arg("path"), py::arg("targets"));
    m.def("read_refs", &io::read_refs, py::arg("path"));
    m.def("write_refs", &io::write_refs, py::arg("path"), py::arg("refs"));
    m.def("read_links", &io::read_links, py::arg("path"));
    m.def("write_links", &io::write_links, py::arg("path"), py::arg("links"));
    m.def("read_matches", &io::read_matches, py::arg("path"));
    m.def("write_matches", &io::write_matches, py::arg("path"), py::arg("matches"));
    m.def("parse_compact_reference", &io::parse_compact_reference, py::arg("compact"));

    m.def(
        "run_cli",
        [](const std::vector<std::string> &args) {
            std::vector<const char *> argv;
            argv.push_back("citmatch");
            for (const std::string &a : args)
                argv.push_back(a.c_str());
            std::ostringstream out;
            std::ostringstream err;
            const int code = cli::main_with_args(static_cast<int>(argv.size()), argv.data(),
                                                 out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the CLI in-process; returns (exit_code, stdout, stderr).");
}
