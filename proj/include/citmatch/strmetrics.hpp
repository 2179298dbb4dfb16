#ifndef CITMATCH_STRMETRICS_HPP
#define CITMATCH_STRMETRICS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

// String and numeric similarity primitives. Distances operate on Unicode
// code points, not bytes, so one decorated letter counts as one edit.

namespace citmatch::metrics {

// Classic edit distance (insert / delete / substitute).
std::size_t levenshtein(const std::string &a, const std::string &b);

// Unrestricted Damerau-Levenshtein (insert / delete / substitute / transpose,
// transposed blocks may be edited again). This is the variant that is a true
// metric; the cheaper "optimal string alignment" walk is NOT used because it
// breaks the triangle inequality.
std::size_t damerau_levenshtein(const std::string &a, const std::string &b);

// American Soundex. Letters H and W are skipped without separating the codes
// around them; vowels separate. The first letter is kept verbatim but its
// code still collapses an immediately following equivalent consonant.
// Returns nullopt when the input has no ASCII letter to encode.
std::optional<std::string> soundex(const std::string &name);

// Both strings must be non-empty digit strings; true when the absolute
// numeric difference is <= max_delta. Values longer than 18 digits fall back
// to exact string comparison (delta 0).
bool numeric_deviation_ok(const std::string &a, const std::string &b, long long max_delta);

enum class ThresholdKind {
    Absolute,      // allowed edits = value
    Proportional,  // allowed edits = ceil(value * max(len(a), len(b)))
};

struct MetricThreshold {
    ThresholdKind kind = ThresholdKind::Absolute;
    double value = 0.0;
};

enum class MetricKind {
    Levenshtein,
    DamerauLevenshtein,
};

std::size_t distance(MetricKind m, const std::string &a, const std::string &b);

// Number of edits a threshold allows for the given pair (code-point lengths).
std::size_t allowed_edits(const MetricThreshold &t, const std::string &a, const std::string &b);

bool within_threshold(const std::string &a, const std::string &b, MetricKind metric,
                      const MetricThreshold &threshold);

}  // namespace citmatch::metrics

#endif  // CITMATCH_STRMETRICS_HPP
