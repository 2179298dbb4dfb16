#ifndef CITMATCH_MODEL_HPP
#define CITMATCH_MODEL_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

// Core record types shared by every other component: the indexed side
// (TargetArticle), the citing side (CitedReference), the ground truth that
// ties them together, and the matcher output.

namespace citmatch {

enum class Domain {
    NaturalSciences,
    SocialSciences,
};

std::string to_string(Domain d);
std::optional<Domain> domain_from_string(const std::string &s);

// One author as it appears in a target's author list: family name plus the
// concatenated initials ("Garcia-Elias" / "MA").
struct Author {
    std::string last;
    std::string initials;

    bool operator==(const Author &) const = default;
};

struct TargetArticle {
    std::string id;
    std::string first_author_last;
    std::string first_initial;   // first initial of the first author, may carry punctuation
    std::string second_initial;  // possibly empty
    std::vector<Author> all_authors;
    int pub_year = 0;
    std::string pub_name_full;
    std::vector<std::string> pub_name_abbrevs;  // may be empty (no abbreviated form known)
    std::string volume;      // as printed, digits expected but not enforced
    std::string issue;       // possibly empty
    std::string start_page;
    std::string end_page;
    std::string doi;         // possibly empty
    std::string article_title;
    Domain domain = Domain::NaturalSciences;
    long long accumulated_citations = 0;

    bool operator==(const TargetArticle &) const = default;
};

struct CitedReference {
    std::string ref_id;
    std::string source_article_id;  // the citing paper
    std::string first_author_last;
    std::string first_initial;
    std::string second_initial;
    std::optional<int> pub_year;    // compact formats sometimes omit the year
    std::string pub_name;           // usually an abbreviation, sometimes full or garbled
    std::string volume;
    std::string issue;
    std::string start_page;
    std::string doi;

    bool operator==(const CitedReference &) const = default;
};

struct GroundTruthLink {
    std::string ref_id;
    std::string true_target_id;     // empty when the cited work is not in the corpus
    bool truly_cites = true;        // false: the reference only looks like the phantom target
    std::string phantom_target_id;  // set iff !truly_cites

    bool operator==(const GroundTruthLink &) const = default;
};

enum class MatchOutcome {
    Matched,
    Ambiguous,  // kept-ambiguous candidate set, no selection
    Missed,
};

std::string to_string(MatchOutcome o);
std::optional<MatchOutcome> match_outcome_from_string(const std::string &s);

// (target id, index of the cascade rule that fired)
using MatchedTarget = std::pair<std::string, int>;

struct MatchRecord {
    std::string ref_id;
    MatchOutcome outcome = MatchOutcome::Missed;
    std::vector<MatchedTarget> matched_targets;  // all candidates that satisfied the firing rule
    std::string selected_target;                 // empty unless outcome == Matched

    bool operator==(const MatchRecord &) const = default;
};

// The record fields a matcher or classifier can look at.
enum class Field {
    AuthorLast,
    FirstInitial,
    SecondInitial,
    PubYear,
    PubName,
    Volume,
    Issue,
    StartPage,
    EndPage,
    Doi,
};

std::string to_string(Field f);
std::optional<Field> field_from_string(const std::string &s);

struct Corpus {
    std::vector<TargetArticle> targets;
    std::vector<CitedReference> refs;
    std::vector<GroundTruthLink> links;
};

enum class ViolationKind {
    DuplicateTargetId,
    DuplicateRefId,
    DuplicateLink,
    EmptyId,
    YearOutOfRange,
    PageOrder,
    DanglingLinkRef,
    DanglingLinkTarget,
    LinkShape,  // truly_cites/phantom inconsistencies
};

std::string to_string(ViolationKind k);

struct Violation {
    ViolationKind kind;
    std::string subject_id;  // offending target/ref id
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
};

// Structural sanity checks on a corpus: id uniqueness, sane year range,
// start<=end page when both numeric, links referencing known ids, phantom
// link shape. Violations come back sorted (kind, subject, message) so the
// report does not depend on container iteration order.
ValidationReport validate_corpus(const Corpus &corpus);

}  // namespace citmatch

#endif  // CITMATCH_MODEL_HPP
