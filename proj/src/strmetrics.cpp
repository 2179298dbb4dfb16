#include "citmatch/strmetrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <unordered_map>
#include <vector>

#include "citmatch/textnorm.hpp"

namespace citmatch::metrics {

namespace {

using textnorm::decode_utf8;

std::size_t lev_u32(const std::u32string &a, const std::u32string &b) {
    // trim common affixes, then the usual two-row DP
    std::size_t lo = 0, ahi = a.size(), bhi = b.size();
    while (lo < ahi && lo < bhi && a[lo] == b[lo])
        ++lo;
    while (ahi > lo && bhi > lo && a[ahi - 1] == b[bhi - 1]) {
        --ahi;
        --bhi;
    }
    const std::size_t n = ahi - lo, m = bhi - lo;
    if (n == 0)
        return m;
    if (m == 0)
        return n;
    std::vector<std::size_t> prev(m + 1), cur(m + 1);
    for (std::size_t j = 0; j <= m; ++j)
        prev[j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = i;
        const char32_t ca = a[lo + i - 1];
        for (std::size_t j = 1; j <= m; ++j) {
            const std::size_t sub = prev[j - 1] + (ca == b[lo + j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

// Unrestricted Damerau-Levenshtein (Lowrance/Wagner): the matrix carries two
// extra border rows and `da` remembers the last row where each symbol was
// seen, so transposed blocks can still be edited afterwards.
std::size_t dl_u32(const std::u32string &a, const std::u32string &b) {
    const std::size_t n = a.size(), m = b.size();
    if (a == b)
        return 0;
    if (n == 0)
        return m;
    if (m == 0)
        return n;
    const std::size_t inf = n + m;
    std::vector<std::size_t> d((n + 2) * (m + 2), 0);
    auto at = [&](std::size_t i, std::size_t j) -> std::size_t & {
        return d[i * (m + 2) + j];
    };
    at(0, 0) = inf;
    for (std::size_t i = 0; i <= n; ++i) {
        at(i + 1, 0) = inf;
        at(i + 1, 1) = i;
    }
    for (std::size_t j = 0; j <= m; ++j) {
        at(0, j + 1) = inf;
        at(1, j + 1) = j;
    }
    std::unordered_map<char32_t, std::size_t> da;
    da.reserve(n + m);
    for (char32_t c : a)
        da.emplace(c, 0);
    for (char32_t c : b)
        da.emplace(c, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        std::size_t db = 0;
        for (std::size_t j = 1; j <= m; ++j) {
            const std::size_t k = da[b[j - 1]];
            const std::size_t l = db;
            std::size_t cost = 1;
            if (a[i - 1] == b[j - 1]) {
                cost = 0;
                db = j;
            }
            const std::size_t subst = at(i, j) + cost;
            const std::size_t insert = at(i + 1, j) + 1;
            const std::size_t del = at(i, j + 1) + 1;
            // transposition of a[k-1]..a[i-1] against b[l-1]..b[j-1]
            const std::size_t trans = at(k, l) + (i - k - 1) + 1 + (j - l - 1);
            std::size_t best = std::min({subst, insert, del});
            if (k > 0 && l > 0)
                best = std::min(best, trans);
            at(i + 1, j + 1) = best;
        }
        da[a[i - 1]] = i;
    }
    return at(n + 1, m + 1);
}

int soundex_class(char c) {
    switch (c) {
        case 'B': case 'F': case 'P': case 'V':
            return 1;
        case 'C': case 'G': case 'J': case 'K': case 'Q': case 'S': case 'X': case 'Z':
            return 2;
        case 'D': case 'T':
            return 3;
        case 'L':
            return 4;
        case 'M': case 'N':
            return 5;
        case 'R':
            return 6;
        case 'A': case 'E': case 'I': case 'O': case 'U': case 'Y':
            return 0;          // vowels separate duplicate codes
        case 'H': case 'W':
            return -1;         // transparent: do not separate
        default:
            return -2;         // not a letter
    }
}

bool parse_digits(const std::string &s, unsigned long long &out) {
    if (s.empty() || s.size() > 18)
        return false;
    for (char c : s)
        if (c < '0' || c > '9')
            return false;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
}

}  // namespace

std::size_t levenshtein(const std::string &a, const std::string &b) {
    return lev_u32(decode_utf8(a), decode_utf8(b));
}

std::size_t damerau_levenshtein(const std::string &a, const std::string &b) {
    return dl_u32(decode_utf8(a), decode_utf8(b));
}

std::optional<std::string> soundex(const std::string &name) {
    std::string code;
    int last = -2;
    for (char raw : name) {
        char c = raw;
        if (c >= 'a' && c <= 'z')
            c = static_cast<char>(c - ('a' - 'A'));
        if (c < 'A' || c > 'Z') {
            // non-letters act like separators
            if (!code.empty())
                last = 0;
            continue;
        }
        const int cls = soundex_class(c);
        if (code.empty()) {
            code.push_back(c);  // first letter kept verbatim, its class still collapses
            last = cls;
            continue;
        }
        if (cls == -1)
            continue;  // H/W: invisible, previous class stays in force
        if (cls == 0) {
            last = 0;
            continue;
        }
        if (cls != last) {
            code.push_back(static_cast<char>('0' + cls));
            last = cls;
            if (code.size() == 4)
                break;
        }
    }
    if (code.empty())
        return std::nullopt;
    while (code.size() < 4)
        code.push_back('0');
    return code;
}

bool numeric_deviation_ok(const std::string &a, const std::string &b, long long max_delta) {
    if (a.empty() || b.empty() || max_delta < 0)
        return false;
    unsigned long long va = 0, vb = 0;
    if (!parse_digits(a, va) || !parse_digits(b, vb)) {
        // overflow-length or non-digit input: only exact equality passes
        return a == b;
    }
    const unsigned long long delta = va > vb ? va - vb : vb - va;
    return delta <= static_cast<unsigned long long>(max_delta);
}

std::size_t distance(MetricKind m, const std::string &a, const std::string &b) {
    return m == MetricKind::Levenshtein ? levenshtein(a, b) : damerau_levenshtein(a, b);
}

std::size_t allowed_edits(const MetricThreshold &t, const std::string &a, const std::string &b) {
    if (t.kind == ThresholdKind::Absolute)
        return static_cast<std::size_t>(t.value < 0 ? 0 : t.value);
    const std::size_t la = decode_utf8(a).size();
    const std::size_t lb = decode_utf8(b).size();
    const double longest = static_cast<double>(std::max(la, lb));
    // the epsilon keeps 0.2 * 15 from landing on 3.0000000000000004 -> 4
    return static_cast<std::size_t>(std::ceil(t.value * longest - 1e-9));
}

bool within_threshold(const std::string &a, const std::string &b, MetricKind metric,
                      const MetricThreshold &threshold) {
    return distance(metric, a, b) <= allowed_edits(threshold, a, b);
}

}  // namespace citmatch::metrics
