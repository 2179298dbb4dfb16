#ifndef CITMATCH_EVALKIT_HPP
#define CITMATCH_EVALKIT_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "citmatch/model.hpp"
#include "citmatch/taxonomy.hpp"

// Scoring of matcher output against ground truth, plus the report helpers.
//
// Counting model (link-based):
//   correct   = refs whose truth link was produced (selected, or contained in
//               a stored ambiguous candidate set)
//   missed    = refs with in-corpus truth whose truth link was NOT produced
//   incorrect = number of wrong links produced (a resolved-but-wrong match
//               counts as missed AND incorrect; each wrong member of an
//               ambiguous set counts)
// so correct + missed == number of refs with an in-corpus truth target, and
// the missed and incorrect populations may overlap.

namespace citmatch::eval {

enum class ScoreMode {
    Technical,  // a phantom link to the phantom target counts as correct
    Empirical,  // only truly-cited targets count; phantom links are wrong links
    EmpiricalBestCaseAmbiguous,  // empirical + ambiguous sets manually verified:
                                 // their wrong links are discarded
};

std::string to_string(ScoreMode m);
std::optional<ScoreMode> score_mode_from_string(const std::string &s);

struct ConfusionCounts {
    long long correct = 0;
    long long incorrect = 0;
    long long missed = 0;
    long long ambiguous_records = 0;           // refs with a kept-ambiguous outcome
    long long ambiguous_containing_correct = 0;
    long long ambiguous_resolved_correct = 0;  // multi-candidate records resolved onto truth
    long long refs_scored = 0;
    long long refs_excluded = 0;
};

struct ScoreReport {
    ScoreMode mode = ScoreMode::Technical;
    ConfusionCounts counts;
    // Percent values in [0,100]; absent when the denominator is zero.
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
};

// Which records/links to ignore (the double-record verification workflow).
struct ExclusionList {
    std::set<std::string> ref_ids;
    std::set<std::string> target_ids;
};

// Every match record must have a truth link; a missing one raises EvalError
// naming the ref. Percentages use exact integer half-up rounding only at
// display time; the report carries full-precision doubles.
ScoreReport score(const std::vector<MatchRecord> &matches,
                  const std::vector<GroundTruthLink> &links, ScoreMode mode,
                  const ExclusionList &exclusions = {});

ConfusionCounts count_links(const std::vector<MatchRecord> &matches,
                            const std::vector<GroundTruthLink> &links, ScoreMode mode,
                            const ExclusionList &exclusions = {});

// Derive a report straight from counts (precision = C/(C+I), recall =
// C/(C+M), f1 = 2C/(2C+I+M), each absent when its denominator is 0).
ScoreReport score_from_counts(const ConfusionCounts &counts, ScoreMode mode);

struct Proportions {
    std::optional<double> missed_of_attempted;     // missed / (correct + missed)
    std::optional<double> incorrect_of_matched;    // incorrect / (correct + incorrect)
};

Proportions proportions(const ConfusionCounts &counts);

// Exact half-up percent formatting with 2 decimals, computed on integers:
// round_half_up(100 * num / den). den == 0 -> "n/a".
std::string format_percent(long long num, long long den);
// Falls back to floating math (documenting double-precision half-up) for
// values that do not come from an integer ratio.
std::string format_percent(double percent);
std::string format_percent(const std::optional<double> &percent);

// Frequency of base codes over a set of annotations (G subtypes collapse).
std::map<std::string, long long> iac_frequency_table(
    const std::vector<taxonomy::IacAnnotation> &annotations);

// Same, from an injection-style code list.
std::map<std::string, long long> iac_frequency_table(const std::vector<taxonomy::IacCode> &codes);

// Subcategory shares normalized by subcategory size: share(s) =
// (count(s)/size(s)) / sum over nonzero subcategories. Empty input -> empty map.
std::map<taxonomy::Subcategory, double> subcategory_shares(
    const std::map<std::string, long long> &code_frequencies);

// --- profile comparison ----------------------------------------------------

struct ProfileRun {
    std::string profile_name;
    std::vector<MatchRecord> matches;
};

struct ProfileComparisonRow {
    std::string profile_name;
    ScoreReport technical;
    ScoreReport empirical;
    ScoreReport empirical_best_case;
    Proportions technical_proportions;
    std::map<std::string, long long> missed_iac_frequencies;
    std::size_t missed_refs_skipped = 0;
    std::set<std::string> missed_ref_ids;
};

struct ProfileComparison {
    std::vector<ProfileComparisonRow> rows;  // input order preserved
    // missed-set overlap, keyed by (profile_a, profile_b) with a < b positions
    std::map<std::pair<std::string, std::string>, long long> missed_overlap;
};

ProfileComparison compare_profiles(const Corpus &corpus, const std::vector<ProfileRun> &runs,
                                   const ExclusionList &exclusions = {});

// Renderers. "table" is the human-readable fixed-order text report,
// "delimited" a TSV with one row per profile.
std::string render_comparison_table(const ProfileComparison &cmp);
std::string render_comparison_tsv(const ProfileComparison &cmp);
std::string render_score_table(const std::string &title, const std::vector<ScoreReport> &reports);
std::string render_score_tsv(const std::vector<ScoreReport> &reports);

}  // namespace citmatch::eval

#endif  // CITMATCH_EVALKIT_HPP
