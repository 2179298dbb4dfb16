#include "citmatch/textnorm.hpp"

#include <algorithm>
#include <array>
#include <cstdint>

namespace citmatch::textnorm {

namespace {

// One decorated code point -> ASCII base form, plus the umlaut-expanded form
// where German library practice writes a trailing E (Ü -> UE). `expanded`
// is null when it equals `base`.
struct FoldEntry {
    char32_t cp;
    const char *base;
    const char *expanded;
};

// Sorted by code point (binary searched). Latin-1 Supplement plus the common
// Latin Extended-A letters.
constexpr FoldEntry kFoldTable[] = {
    {U'À', "A", nullptr},  {U'Á', "A", nullptr},  {U'Â', "A", nullptr},
    {U'Ã', "A", nullptr},  {U'Ä', "A", "AE"},     {U'Å', "A", nullptr},
    {U'Æ', "AE", nullptr}, {U'Ç', "C", nullptr},  {U'È', "E", nullptr},
    {U'É', "E", nullptr},  {U'Ê', "E", nullptr},  {U'Ë', "E", nullptr},
    {U'Ì', "I", nullptr},  {U'Í', "I", nullptr},  {U'Î', "I", nullptr},
    {U'Ï', "I", nullptr},  {U'Ð', "D", nullptr},  {U'Ñ', "N", nullptr},
    {U'Ò', "O", nullptr},  {U'Ó', "O", nullptr},  {U'Ô', "O", nullptr},
    {U'Õ', "O", nullptr},  {U'Ö', "O", "OE"},     {U'Ø', "O", nullptr},
    {U'Ù', "U", nullptr},  {U'Ú', "U", nullptr},  {U'Û', "U", nullptr},
    {U'Ü', "U", "UE"},     {U'Ý', "Y", nullptr},  {U'Þ', "TH", nullptr},
    {U'ß', "ss", nullptr},
    {U'à', "a", nullptr},  {U'á', "a", nullptr},  {U'â', "a", nullptr},
    {U'ã', "a", nullptr},  {U'ä', "a", "ae"},     {U'å', "a", nullptr},
    {U'æ', "ae", nullptr}, {U'ç', "c", nullptr},  {U'è', "e", nullptr},
    {U'é', "e", nullptr},  {U'ê', "e", nullptr},  {U'ë', "e", nullptr},
    {U'ì', "i", nullptr},  {U'í', "i", nullptr},  {U'î', "i", nullptr},
    {U'ï', "i", nullptr},  {U'ð', "d", nullptr},  {U'ñ', "n", nullptr},
    {U'ò', "o", nullptr},  {U'ó', "o", nullptr},  {U'ô', "o", nullptr},
    {U'õ', "o", nullptr},  {U'ö', "o", "oe"},     {U'ø', "o", nullptr},
    {U'ù', "u", nullptr},  {U'ú', "u", nullptr},  {U'û', "u", nullptr},
    {U'ü', "u", "ue"},     {U'ý', "y", nullptr},  {U'þ', "th", nullptr},
    {U'ÿ', "y", nullptr},
    {U'Ā', "A", nullptr},  {U'ā', "a", nullptr},  {U'Ă', "A", nullptr},
    {U'ă', "a", nullptr},  {U'Ą', "A", nullptr},  {U'ą', "a", nullptr},
    {U'Ć', "C", nullptr},  {U'ć', "c", nullptr},  {U'Ĉ', "C", nullptr},
    {U'ĉ', "c", nullptr},  {U'Ċ', "C", nullptr},  {U'ċ', "c", nullptr},
    {U'Č', "C", nullptr},  {U'č', "c", nullptr},  {U'Ď', "D", nullptr},
    {U'ď', "d", nullptr},  {U'Đ', "D", nullptr},  {U'đ', "d", nullptr},
    {U'Ē', "E", nullptr},  {U'ē', "e", nullptr},  {U'Ĕ', "E", nullptr},
    {U'ĕ', "e", nullptr},  {U'Ė', "E", nullptr},  {U'ė', "e", nullptr},
    {U'Ę', "E", nullptr},  {U'ę', "e", nullptr},  {U'Ě', "E", nullptr},
    {U'ě', "e", nullptr},  {U'Ĝ', "G", nullptr},  {U'ĝ', "g", nullptr},
    {U'Ğ', "G", nullptr},  {U'ğ', "g", nullptr},  {U'Ġ', "G", nullptr},
    {U'ġ', "g", nullptr},  {U'Ģ', "G", nullptr},  {U'ģ', "g", nullptr},
    {U'Ĥ', "H", nullptr},  {U'ĥ', "h", nullptr},  {U'Ħ', "H", nullptr},
    {U'ħ', "h", nullptr},  {U'Ĩ', "I", nullptr},  {U'ĩ', "i", nullptr},
    {U'Ī', "I", nullptr},  {U'ī', "i", nullptr},  {U'Ĭ', "I", nullptr},
    {U'ĭ', "i", nullptr},  {U'Į', "I", nullptr},  {U'į', "i", nullptr},
    {U'İ', "I", nullptr},  {U'ı', "i", nullptr},  {U'Ĳ', "IJ", nullptr},
    {U'ĳ', "ij", nullptr}, {U'Ĵ', "J", nullptr},  {U'ĵ', "j", nullptr},
    {U'Ķ', "K", nullptr},  {U'ķ', "k", nullptr},  {U'ĸ', "k", nullptr},
    {U'Ĺ', "L", nullptr},  {U'ĺ', "l", nullptr},  {U'Ļ', "L", nullptr},
    {U'ļ', "l", nullptr},  {U'Ľ', "L", nullptr},  {U'ľ', "l", nullptr},
    {U'Ŀ', "L", nullptr},  {U'ŀ', "l", nullptr},  {U'Ł', "L", nullptr},
    {U'ł', "l", nullptr},  {U'Ń', "N", nullptr},  {U'ń', "n", nullptr},
    {U'Ņ', "N", nullptr},  {U'ņ', "n", nullptr},  {U'Ň', "N", nullptr},
    {U'ň', "n", nullptr},  {U'ŉ', "n", nullptr},  {U'Ŋ', "N", nullptr},
    {U'ŋ', "n", nullptr},  {U'Ō', "O", nullptr},  {U'ō', "o", nullptr},
    {U'Ŏ', "O", nullptr},  {U'ŏ', "o", nullptr},  {U'Ő', "O", "OE"},
    {U'ő', "o", "oe"},     {U'Œ', "OE", nullptr}, {U'œ', "oe", nullptr},
    {U'Ŕ', "R", nullptr},  {U'ŕ', "r", nullptr},  {U'Ŗ', "R", nullptr},
    {U'ŗ', "r", nullptr},  {U'Ř', "R", nullptr},  {U'ř', "r", nullptr},
    {U'Ś', "S", nullptr},  {U'ś', "s", nullptr},  {U'Ŝ', "S", nullptr},
    {U'ŝ', "s", nullptr},  {U'Ş', "S", nullptr},  {U'ş', "s", nullptr},
    {U'Š', "S", nullptr},  {U'š', "s", nullptr},  {U'Ţ', "T", nullptr},
    {U'ţ', "t", nullptr},  {U'Ť', "T", nullptr},  {U'ť', "t", nullptr},
    {U'Ŧ', "T", nullptr},  {U'ŧ', "t", nullptr},  {U'Ũ', "U", nullptr},
    {U'ũ', "u", nullptr},  {U'Ū', "U", nullptr},  {U'ū', "u", nullptr},
    {U'Ŭ', "U", nullptr},  {U'ŭ', "u", nullptr},  {U'Ů', "U", nullptr},
    {U'ů', "u", nullptr},  {U'Ű', "U", "UE"},     {U'ű', "u", "ue"},
    {U'Ų', "U", nullptr},  {U'ų', "u", nullptr},  {U'Ŵ', "W", nullptr},
    {U'ŵ', "w", nullptr},  {U'Ŷ', "Y", nullptr},  {U'ŷ', "y", nullptr},
    {U'Ÿ', "Y", nullptr},  {U'Ź', "Z", nullptr},  {U'ź', "z", nullptr},
    {U'Ż', "Z", nullptr},  {U'ż', "z", nullptr},  {U'Ž', "Z", nullptr},
    {U'ž', "z", nullptr},  {U'ſ', "s", nullptr},
};

const FoldEntry *fold_lookup(char32_t cp) {
    auto it = std::lower_bound(std::begin(kFoldTable), std::end(kFoldTable), cp,
                               [](const FoldEntry &e, char32_t c) { return e.cp < c; });
    if (it != std::end(kFoldTable) && it->cp == cp)
        return it;
    return nullptr;
}

bool is_space_cp(char32_t cp) {
    return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' || cp == U'\v' ||
           cp == U'\f' || cp == U' ';
}

bool is_ascii_alpha(char32_t cp) {
    return (cp >= U'A' && cp <= U'Z') || (cp >= U'a' && cp <= U'z');
}

bool is_ascii_digit(char32_t cp) { return cp >= U'0' && cp <= U'9'; }

char32_t upper_ascii_cp(char32_t cp) {
    if (cp >= U'a' && cp <= U'z')
        return cp - (U'a' - U'A');
    return cp;
}

void append_utf8(std::string &out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

// Core transform shared by normalize_text and the variant generator.
std::string normalize_text_impl(const std::string &s, const NormProfile &p, bool expanded) {
    std::u32string cps = decode_utf8(s);
    std::string out;
    out.reserve(s.size());
    auto emit = [&](char32_t cp) {
        if (p.uppercase)
            cp = upper_ascii_cp(cp);
        if (p.drop_non_alpha_from_text && !is_ascii_alpha(cp))
            return;
        if (p.drop_non_alnum_from_text && !is_ascii_alpha(cp) && !is_ascii_digit(cp))
            return;
        append_utf8(out, cp);
    };
    for (char32_t cp : cps) {
        if (is_space_cp(cp))
            continue;  // spacing is never a distinguishing feature of a key
        const FoldEntry *fold = p.strip_diacritics ? fold_lookup(cp) : nullptr;
        if (fold != nullptr) {
            const char *repl = (expanded && fold->expanded != nullptr) ? fold->expanded
                                                                       : fold->base;
            for (const char *q = repl; *q != '\0'; ++q)
                emit(static_cast<char32_t>(static_cast<unsigned char>(*q)));
        } else {
            emit(cp);
        }
    }
    return out;
}

std::string fold_impl(const std::string &s, bool expanded) {
    std::u32string cps = decode_utf8(s);
    std::string out;
    out.reserve(s.size());
    for (char32_t cp : cps) {
        const FoldEntry *fold = fold_lookup(cp);
        if (fold != nullptr) {
            const char *repl = (expanded && fold->expanded != nullptr) ? fold->expanded
                                                                       : fold->base;
            out.append(repl);
        } else {
            append_utf8(out, cp);
        }
    }
    return out;
}

}  // namespace

std::u32string decode_utf8(const std::string &s) {
    std::u32string out;
    out.reserve(s.size());
    std::size_t i = 0;
    const auto n = s.size();
    while (i < n) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        std::size_t extra = 0;
        char32_t cp = 0;
        if (c < 0x80) {
            cp = c;
        } else if ((c & 0xE0) == 0xC0) {
            extra = 1;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            extra = 2;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            extra = 3;
            cp = c & 0x07;
        } else {
            // stray continuation / invalid byte: pass through as-is
            out.push_back(c);
            ++i;
            continue;
        }
        if (extra > 0 && i + extra >= n) {
            out.push_back(c);  // truncated sequence at end of string
            ++i;
            continue;
        }
        bool ok = true;
        for (std::size_t k = 1; k <= extra; ++k) {
            unsigned char cc = static_cast<unsigned char>(s[i + k]);
            if ((cc & 0xC0) != 0x80) {
                ok = false;
                break;
            }
            cp = (cp << 6) | (cc & 0x3F);
        }
        if (!ok) {
            out.push_back(c);
            ++i;
            continue;
        }
        out.push_back(cp);
        i += extra + 1;
    }
    return out;
}

std::string encode_utf8(const std::u32string &s) {
    std::string out;
    out.reserve(s.size());
    for (char32_t cp : s)
        append_utf8(out, cp);
    return out;
}

std::string normalize_text(const std::string &s, const NormProfile &p) {
    return normalize_text_impl(s, p, /*expanded=*/false);
}

std::vector<std::string> normalize_text_variants(const std::string &s, const NormProfile &p) {
    std::vector<std::string> out;
    out.push_back(normalize_text_impl(s, p, false));
    if (p.strip_diacritics) {
        std::string expanded = normalize_text_impl(s, p, true);
        if (expanded != out.front())
            out.push_back(std::move(expanded));
    }
    return out;
}

std::string normalize_number(const std::string &s, const NormProfile &p) {
    std::u32string cps = decode_utf8(s);
    std::string out;
    out.reserve(s.size());
    for (char32_t cp : cps) {
        if (is_space_cp(cp))
            continue;
        if (p.strip_non_numeric_from_numbers && !is_ascii_digit(cp))
            continue;
        append_utf8(out, cp);
    }
    return out;
}

std::pair<std::string, std::string> reduce_initials(const std::string &first,
                                                    const std::string &second,
                                                    const NormProfile &p) {
    if (!p.keep_first_initial_only)
        return {first, second};
    std::u32string cps = decode_utf8(first);
    if (cps.empty())
        return {std::string(), std::string()};
    return {encode_utf8(std::u32string(1, cps.front())), std::string()};
}

std::string fold_diacritics(const std::string &s) { return fold_impl(s, false); }

std::string fold_diacritics_expanded(const std::string &s) { return fold_impl(s, true); }

bool has_diacritics(const std::string &s) {
    for (char32_t cp : decode_utf8(s))
        if (fold_lookup(cp) != nullptr)
            return true;
    return false;
}

std::string to_upper_ascii(const std::string &s) {
    std::string out = s;
    for (char &c : out)
        if (c >= 'a' && c <= 'z')
            c = static_cast<char>(c - ('a' - 'A'));
    return out;
}

}  // namespace citmatch::textnorm
