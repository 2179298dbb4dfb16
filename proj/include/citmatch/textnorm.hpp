#ifndef CITMATCH_TEXTNORM_HPP
#define CITMATCH_TEXTNORM_HPP

#include <string>
#include <utility>
#include <vector>

// Normalization used to build comparison keys. All functions treat input as
// UTF-8; invalid bytes pass through as single code points so normalization
// never throws on dirty data.

namespace citmatch::textnorm {

struct NormProfile {
    std::string name;
    bool strip_diacritics = false;          // fold Ä->A, ß->ss, ...
    bool drop_non_alpha_from_text = false;  // keep only ASCII letters
    bool drop_non_alnum_from_text = false;  // keep only ASCII letters + digits
    bool keep_first_initial_only = false;   // reduce_initials keeps one initial
    bool strip_non_numeric_from_numbers = false;
    bool uppercase = false;

    // drop_non_alpha and drop_non_alnum are mutually exclusive; call before use.
    bool valid() const { return !(drop_non_alpha_from_text && drop_non_alnum_from_text); }
};

// UTF-8 helpers (decoding failures yield one replacement entry per bad byte,
// carrying the original byte so encode(decode(s)) == s for valid input and
// stays lossless for dirty input).
std::u32string decode_utf8(const std::string &s);
std::string encode_utf8(const std::u32string &s);

// Whitespace is always removed: spacing differences are treated as an
// inaccuracy of the data, never as a distinguishing feature of a key.
// Guarantees: idempotent, never lengthens the input (in code points).
std::string normalize_text(const std::string &s, const NormProfile &p);

// Variants of the same value that should act as alternative keys: the plain
// fold ("Müller" -> "MULLER") plus the umlaut-expanded form ("MUELLER") when
// they differ. Always non-empty; first entry is normalize_text(s, p).
std::vector<std::string> normalize_text_variants(const std::string &s, const NormProfile &p);

// Volume / page / issue / year-as-text cleanup. With
// strip_non_numeric_from_numbers the result is a pure (possibly empty) digit
// string; otherwise only whitespace is removed. Idempotent.
std::string normalize_number(const std::string &s, const NormProfile &p);

// Applies the profile's initial-reduction rule: with keep_first_initial_only
// the first value is cut to its first code point and the second is dropped.
std::pair<std::string, std::string> reduce_initials(const std::string &first,
                                                    const std::string &second,
                                                    const NormProfile &p);

// Single-code-point diacritic folding used by normalize_text; exposed for the
// taxonomy (spelling-variant detection needs both forms).
//   fold_diacritics:        Ä -> A,  ö -> o,  ß -> ss
//   fold_diacritics_expanded: Ä -> AE, ö -> oe, ß -> ss (German library practice)
std::string fold_diacritics(const std::string &s);
std::string fold_diacritics_expanded(const std::string &s);

// True if the string contains at least one foldable (decorated) code point.
bool has_diacritics(const std::string &s);

std::string to_upper_ascii(const std::string &s);

}  // namespace citmatch::textnorm

#endif  // CITMATCH_TEXTNORM_HPP
