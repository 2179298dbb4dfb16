#ifndef CITMATCH_CORPUSFORGE_HPP
#define CITMATCH_CORPUSFORGE_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "citmatch/model.hpp"
#include "citmatch/taxonomy.hpp"

// Synthetic corpus generation and typed error injection. Everything is
// driven by a single seed: identical inputs give byte-identical outputs.

namespace citmatch::forge {

struct GeneratorOptions {
    double ref_doi_probability = 0.35;   // ref carries the target's DOI (when it has one)
    double ref_issue_probability = 0.7;  // ref carries the issue (when the target has one)
};

// Injection rates are keyed by base code ("B".."U", G as one key).
struct InjectionPlan {
    std::uint64_t seed = 1;
    int n_targets = 0;  // used by the generate convenience path
    int n_refs = 0;
    std::map<std::string, double> per_code_rates;
    double multi_inaccuracy_rate = 0.0;
    double phantom_rate = 0.0;
    double duplicate_target_rate = 0.0;
    GeneratorOptions generator;
};

// JSON (de)serialization of a plan; throws ConfigError on malformed input.
InjectionPlan plan_from_json(const std::string &json_text);
std::string plan_to_json(const InjectionPlan &plan);

// A clean corpus: every reference copies its target's fields verbatim
// (DOI / issue subject to availability sampling), so the strict profile
// resolves 100% of it. Distinct targets never share the (first author,
// journal) pair, which keeps single-field corruptions from colliding with
// a foreign target's full key.
Corpus generate_clean(int n_targets, int n_refs, std::uint64_t seed,
                      const GeneratorOptions &options = {});

struct InjectionLogRow {
    std::string ref_id;
    Field field = Field::AuthorLast;
    taxonomy::IacCode code = taxonomy::IacCode::B;
    std::string original;
    std::string corrupted;
    bool applied = true;  // false: draw was skipped (no eligible field)

    bool operator==(const InjectionLogRow &) const = default;
};

struct InjectionResult {
    std::vector<CitedReference> refs;
    std::vector<InjectionLogRow> log;
};

// Applies the plan's per-code corruptions to the corpus' references.
// Each applied transform logs one row per changed field (interchanges and
// author restructurings touch several). The log fully explains the diff
// between the clean and the corrupted references.
InjectionResult inject(const Corpus &corpus, const InjectionPlan &plan);

struct PhantomLogRow {
    std::string ref_id;
    std::string original_target_id;
    std::string phantom_target_id;
};

struct PhantomResult {
    std::vector<CitedReference> refs;
    std::vector<GroundTruthLink> links;
    std::vector<PhantomLogRow> log;
};

// Rewrites llround(phantom_rate * n_refs) references to carry the fields of
// a *different* target (preferring same-surname-prefix, cross-domain
// candidates) and flips their links to truly_cites=false.
PhantomResult inject_phantoms(const Corpus &corpus, const InjectionPlan &plan);

struct DuplicateLogRow {
    std::string original_target_id;
    std::string duplicate_target_id;
};

struct DuplicateResult {
    std::vector<TargetArticle> targets;
    std::vector<DuplicateLogRow> log;
};

// Clones llround(duplicate_target_rate * n_targets) targets under fresh ids
// (differing citation counts) to create genuinely ambiguous match candidates.
DuplicateResult inject_duplicates(const std::vector<TargetArticle> &targets,
                                  const InjectionPlan &plan);

// Fixture sanity used by tests: surname pools are collision-free, every
// first-author initial has an expansion name, journals have distinct keys.
bool fixtures_self_check(std::string *problem = nullptr);

}  // namespace citmatch::forge

#endif  // CITMATCH_CORPUSFORGE_HPP
