#ifndef CITMATCH_RULEENGINE_HPP
#define CITMATCH_RULEENGINE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "citmatch/model.hpp"
#include "citmatch/strmetrics.hpp"
#include "citmatch/textnorm.hpp"

// The matcher core: an ordered cascade of rules of decreasing strictness.
// For each reference the rules are tried in order; the first rule satisfied
// by at least one candidate decides the outcome, with ties resolved by the
// profile's ambiguity policy.

namespace citmatch::engine {

enum class FieldTest {
    Exact,          // normalized keys equal (pub_name: ref key in target's name pool)
    ExactOptional,  // like Exact, but passes when either side is empty
    Fuzzy,          // string distance within threshold (with floor/cap for proportional)
    SoundexEqual,   // phonetic codes equal (author names)
    YearDelta,      // target_year - ref_year in a fixed delta set
    PageInRange,    // cited start page inside the target's page span
    NumericDelta,   // |a - b| <= max_delta on digit strings
    DigitsFuzzy,    // equal-length digit strings within a Damerau edit budget
    Omit,           // field not consulted by this rule
    SwappedWith,    // field value equals the *other* field's value on the target
};

std::string to_string(FieldTest t);

struct FieldPredicate {
    Field field = Field::AuthorLast;
    FieldTest test = FieldTest::Omit;

    // Fuzzy
    metrics::MetricKind metric = metrics::MetricKind::Levenshtein;
    metrics::MetricThreshold threshold;
    std::size_t floor_edits = 0;  // proportional thresholds only
    std::size_t cap_edits = SIZE_MAX;

    // YearDelta
    std::set<int> year_deltas;

    // NumericDelta
    long long max_delta = 0;

    // DigitsFuzzy
    std::size_t max_edits = 0;

    // SwappedWith
    Field other_field = Field::Volume;
};

struct MatchRule {
    std::string label;
    bool requires_doi = false;  // rule is skipped entirely for refs without a DOI
    // One predicate per matchable field; fields without an entry are Omit.
    std::vector<FieldPredicate> predicates;

    const FieldPredicate *predicate_for(Field f) const;
};

enum class AmbiguityPolicy {
    MostCited,      // pick the candidate with the highest citation count, ties -> smallest id
    KeepAmbiguous,  // store the whole candidate set, select nothing
    Fail,           // treat the reference as missed
};

std::string to_string(AmbiguityPolicy p);

enum class FuzzyNamePool {
    FullNames,  // fuzzy pub-name tests run against the target's full name
    Abbrevs,    // ... against its abbreviations (full name if it has none)
    All,        // ... against everything
};

std::string to_string(FuzzyNamePool p);

struct CascadeProfile {
    std::string name;
    textnorm::NormProfile norm;
    std::set<int> year_window;  // hard candidate filter on target_year - ref_year
    AmbiguityPolicy ambiguity = AmbiguityPolicy::Fail;
    FuzzyNamePool fuzzy_names = FuzzyNamePool::All;
    std::vector<MatchRule> rules;
};

// Throws ConfigError when the profile breaks an invariant: no rules, rule 0
// not all-exact, a rule's year deltas outside the window, invalid norm flags,
// duplicate field predicates within a rule.
void validate_profile(const CascadeProfile &profile);

// The matchable fields, i.e. the fields a rule may carry a predicate for.
extern const Field kMatchFields[8];

// --- profile sources ----------------------------------------------------

// "strict", "cwts", "ifq". Unknown name -> UnknownProfileError.
CascadeProfile builtin_profile(const std::string &name);
std::vector<std::string> builtin_profile_names();

// Text of the built-in cascade definitions (identical to configs/*.cascade).
std::string builtin_profile_text(const std::string &name);

// Cascade definition parser (same format as configs/*.cascade). Throws
// ConfigError with a line number on malformed input; the result is validated.
CascadeProfile parse_cascade(const std::string &text, const std::string &origin = "<string>");
CascadeProfile load_cascade_file(const std::string &path);

// Serializes a profile back to the config format (used for round-trip tests).
std::string format_cascade(const CascadeProfile &profile);

// --- normalized views ----------------------------------------------------

struct NormalizedTarget {
    std::uint32_t ordinal = 0;  // position in the indexed target vector
    const TargetArticle *src = nullptr;
    std::vector<std::string> author_variants;
    std::vector<std::string> soundex_codes;
    std::string initials_key;
    int year = 0;
    std::vector<std::string> exact_name_keys;    // full + abbrevs, folded variants
    std::vector<std::string> fuzzy_full_names;   // full-name variants
    std::vector<std::string> fuzzy_abbrev_names; // abbrev variants (full if none)
    std::string volume, issue, start_page, end_page, doi_key;
};

struct NormalizedRef {
    const CitedReference *src = nullptr;
    std::vector<std::string> author_variants;
    std::vector<std::string> soundex_codes;
    std::string initials_key;
    std::optional<int> year;
    std::vector<std::string> name_variants;
    std::string volume, issue, start_page, doi_key;
};

NormalizedTarget normalize_target(const TargetArticle &t, const CascadeProfile &profile);
NormalizedRef normalize_ref(const CitedReference &r, const CascadeProfile &profile);

// --- blocking index -------------------------------------------------------

// Retrieval never misses a candidate the cascade could match: year buckets
// are expanded over the profile's year window, and refs without a year fall
// back to the union of author-soundex and pub-name buckets.
class TargetIndex {
  public:
    TargetIndex() = default;

    const std::vector<NormalizedTarget> &targets() const { return targets_; }
    const std::string &profile_name() const { return profile_name_; }

    // Candidate ordinals, sorted ascending (deterministic).
    std::vector<std::uint32_t> retrieve(const NormalizedRef &ref) const;

    friend TargetIndex build_index(const std::vector<TargetArticle> &targets,
                                   const CascadeProfile &profile);

  private:
    std::string profile_name_;
    std::vector<NormalizedTarget> targets_;
    std::unordered_map<int, std::vector<std::uint32_t>> by_year_;
    std::unordered_map<std::string, std::vector<std::uint32_t>> by_soundex_;
    std::unordered_map<std::string, std::vector<std::uint32_t>> by_name_key_;
};

// The index keeps pointers into `targets`; the vector must outlive it.
TargetIndex build_index(const std::vector<TargetArticle> &targets, const CascadeProfile &profile);

// --- matching -------------------------------------------------------------

bool predicate_satisfied(const FieldPredicate &p, const NormalizedRef &ref,
                         const NormalizedTarget &target, const CascadeProfile &profile);

bool rule_satisfied(const MatchRule &rule, const NormalizedRef &ref,
                    const NormalizedTarget &target, const CascadeProfile &profile);

MatchRecord match_reference(const CitedReference &ref, const TargetIndex &index,
                            const CascadeProfile &profile);

// Debug / oracle path: evaluates the cascade against every target with no
// blocking. Semantically identical to the indexed path.
MatchRecord match_reference_all_pairs(const CitedReference &ref,
                                      const std::vector<TargetArticle> &targets,
                                      const CascadeProfile &profile);

// Runs match_reference over all refs; results are written by reference index
// so the output is independent of thread count and scheduling.
std::vector<MatchRecord> match_corpus(const std::vector<CitedReference> &refs,
                                      const TargetIndex &index, const CascadeProfile &profile,
                                      unsigned n_threads = 1);

}  // namespace citmatch::engine

#endif  // CITMATCH_RULEENGINE_HPP
