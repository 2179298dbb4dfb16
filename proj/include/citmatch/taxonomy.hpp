#ifndef CITMATCH_TAXONOMY_HPP
#define CITMATCH_TAXONOMY_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "citmatch/model.hpp"

// Typology of bibliographic inaccuracies and the heuristic classifier that
// assigns codes to an (expected, observed) field discrepancy.

namespace citmatch::taxonomy {

// The inaccuracy codes. G splits by the field found holding a foreign value:
//   G1 issue, G2 start page, G3 end page, G4 volume,
//   G5 author name, G6 first initial, G7 second initial.
enum class IacCode {
    B,   // misspelled (small edit, no other explanation)
    D,   // completely different value
    E,   // omitted element (token or whole value)
    F,   // cropped value (leading part kept)
    G1, G2, G3, G4, G5, G6, G7,  // interchanged fields
    H,   // jumbled characters (same multiset, different order)
    I,   // abbreviated words
    J,   // conjoint names (token glued onto another)
    K,   // spacing difference only
    M,   // name parts shifted between name and initials
    N,   // added information (extra words around the true value)
    O,   // different author of the same work
    Q,   // spelling variation of decorated letters
    R,   // punctuation difference only
    S,   // padded value (digits appended)
    T,   // numeric deviation (+-1/2 whole or one digit)
    U,   // initial expanded to a full name (or vice versa)
};

std::string to_string(IacCode c);
std::optional<IacCode> iac_from_string(const std::string &s);

// G1..G7 -> G; everything else -> its own single-letter label. Used for
// frequency tables and subcategory lookups.
std::string base_code(IacCode c);

// All codes in classifier priority order (G as a block after its position).
std::vector<IacCode> all_iac_codes();

enum class Subcategory {
    SpellingVariations,
    CompletelyIncorrect,
    MissingDataValues,
    DisarrangedDataValues,
    AbbreviatedDataValues,
    IncorrectInterpretation,
    AddedDataValues,
    OtherVariations,
};

std::string to_string(Subcategory s);
Subcategory subcategory_of(IacCode c);
// Number of distinct base codes a subcategory owns (G counts once).
int subcategory_size(Subcategory s);
std::vector<Subcategory> all_subcategories();

// Optional record context for the structured codes (G needs the expected
// values of the other fields, M/O need the author triple / author list).
struct AssessContext {
    const TargetArticle *target = nullptr;
    const CitedReference *ref = nullptr;
};

// Classifies one field discrepancy. `expected` is the value the target
// carries (canonical), `observed` the value found on the reference. Returns
// every code whose evidence holds, in priority order; an earlier code
// suppresses only the weaker fallbacks (B needs "no other explanation",
// D "no explanation at all"). Equal values yield an empty set.
std::vector<IacCode> classify_field(const std::string &expected, const std::string &observed,
                                    Field field, const AssessContext &ctx = {});

struct IacAnnotation {
    std::string ref_id;
    Field field = Field::AuthorLast;
    std::string expected;
    std::string observed;
    std::vector<IacCode> codes;

    bool operator==(const IacAnnotation &) const = default;
};

struct MissedAnnotationResult {
    std::vector<IacAnnotation> annotations;
    std::size_t refs_assessed = 0;
    std::size_t refs_skipped = 0;  // no in-corpus truth target -> nothing to compare against
};

// Runs the field-by-field assessment for every missed reference in `matches`
// against its true target (the fields a cited reference actually carries:
// author name, both initials, year, pub name, volume, start page).
MissedAnnotationResult annotate_missed(const std::vector<MatchRecord> &matches,
                                       const Corpus &corpus);

// As above but for an explicit list of (ref, target) pairs.
std::vector<IacAnnotation> annotate_pair(const CitedReference &ref, const TargetArticle &target);

struct InaccuracyStats {
    std::size_t refs_with_annotations = 0;
    std::size_t single_inaccuracy_refs = 0;  // exactly one annotated field
    std::size_t multi_inaccuracy_refs = 0;   // more than one annotated field
};

InaccuracyStats single_vs_multi_inaccuracy_stats(const std::vector<IacAnnotation> &annotations);

}  // namespace citmatch::taxonomy

#endif  // CITMATCH_TAXONOMY_HPP
