#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <unordered_map>

#include "citmatch/strmetrics.hpp"
#include "citmatch/taxonomy.hpp"
#include "citmatch/textnorm.hpp"

namespace citmatch::taxonomy {

namespace {

bool is_ascii_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string trim(const std::string &s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && is_ascii_space(s[b]))
        ++b;
    while (e > b && is_ascii_space(s[e - 1]))
        --e;
    return s.substr(b, e - b);
}

// Token characters: ASCII alphanumerics plus anything non-ASCII (so UTF-8
// sequences inside accented names are never split apart).
bool is_token_char(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    return u >= 0x80 || std::isalnum(u) != 0;
}

std::vector<std::string> name_tokens(const std::string &s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (is_token_char(c)) {
            cur.push_back(c);
        } else if (!cur.empty()) {
            out.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty())
        out.push_back(cur);
    return out;
}

// Uppercased letters; non-ASCII bytes kept verbatim, everything else dropped.
std::string letters_of(const std::string &s) {
    std::string out;
    for (char c : s) {
        unsigned char u = static_cast<unsigned char>(c);
        if (u >= 0x80)
            out.push_back(c);
        else if (std::isalpha(u))
            out.push_back(static_cast<char>(std::toupper(u)));
    }
    return out;
}

std::string ascii_letters_of(const std::string &s) {
    std::string out;
    for (char c : s) {
        unsigned char u = static_cast<unsigned char>(c);
        if (u < 0x80 && std::isalpha(u))
            out.push_back(static_cast<char>(std::toupper(u)));
    }
    return out;
}

std::string digits_of(const std::string &s) {
    std::string out;
    for (char c : s)
        if (std::isdigit(static_cast<unsigned char>(c)))
            out.push_back(c);
    return out;
}

std::string strip_spaces(const std::string &s) {
    std::string out;
    for (char c : s)
        if (!is_ascii_space(c))
            out.push_back(c);
    return out;
}

std::string strip_punct(const std::string &s) {
    std::string out;
    for (char c : s) {
        unsigned char u = static_cast<unsigned char>(c);
        if (u < 0x80 && std::ispunct(u))
            continue;
        out.push_back(c);
    }
    return out;
}

std::string sorted_non_space(const std::string &s) {
    std::string out = strip_spaces(s);
    std::sort(out.begin(), out.end());
    return out;
}

std::string sorted_chars(std::string s) {
    std::sort(s.begin(), s.end());
    return s;
}

std::optional<long long> whole_number(const std::string &digits) {
    if (digits.empty() || digits.size() > 18)
        return std::nullopt;
    long long v = 0;
    for (char c : digits)
        v = v * 10 + (c - '0');
    return v;
}

// Spelling variants of a value under diacritic folding: the plain fold and
// the umlaut-expanded fold, both uppercased.
std::vector<std::string> fold_variants(const std::string &s) {
    std::vector<std::string> out;
    out.push_back(textnorm::to_upper_ascii(textnorm::fold_diacritics(s)));
    std::string exp = textnorm::to_upper_ascii(textnorm::fold_diacritics_expanded(s));
    if (exp != out.front())
        out.push_back(exp);
    return out;
}

// Drops every 'E' directly following A/O/U: the usual ASCII contraction of
// German umlaut expansions (MUELLER -> MULLER).
std::string contract_umlaut_e(const std::string &ascii_upper_letters) {
    std::string out;
    for (char c : ascii_upper_letters) {
        if (c == 'E' && !out.empty() &&
            (out.back() == 'A' || out.back() == 'O' || out.back() == 'U'))
            continue;
        out.push_back(c);
    }
    return out;
}

bool is_numeric_field(Field f) {
    return f == Field::Volume || f == Field::StartPage || f == Field::EndPage ||
           f == Field::Issue || f == Field::PubYear;
}

bool is_author_field(Field f) {
    return f == Field::AuthorLast || f == Field::FirstInitial || f == Field::SecondInitial;
}

// --- per-code evidence -------------------------------------------------------

// G: the observed value equals another field of the target record.
std::optional<IacCode> g_code_for(Field assessed) {
    switch (assessed) {
        case Field::Issue:
            return IacCode::G1;
        case Field::StartPage:
            return IacCode::G2;
        case Field::EndPage:
            return IacCode::G3;
        case Field::Volume:
            return IacCode::G4;
        case Field::AuthorLast:
            return IacCode::G5;
        case Field::FirstInitial:
            return IacCode::G6;
        case Field::SecondInitial:
            return IacCode::G7;
        default:
            return std::nullopt;
    }
}

bool g_fires(const std::string &expected, const std::string &observed, Field field,
             const AssessContext &ctx) {
    if (ctx.target == nullptr)
        return false;
    const TargetArticle &t = *ctx.target;
    if (is_numeric_field(field) && field != Field::PubYear) {
        const std::string obs = digits_of(observed);
        const std::string exp = digits_of(expected);
        if (obs.empty())
            return false;
        const std::pair<Field, const std::string *> donors[] = {
            {Field::Issue, &t.issue},
            {Field::StartPage, &t.start_page},
            {Field::EndPage, &t.end_page},
            {Field::Volume, &t.volume},
        };
        for (const auto &[donor_field, value] : donors) {
            if (donor_field == field)
                continue;
            const std::string donor = digits_of(*value);
            if (!donor.empty() && donor == obs && donor != exp)
                return true;
        }
        return false;
    }
    if (is_author_field(field)) {
        const std::string obs = letters_of(observed);
        const std::string exp = letters_of(expected);
        if (obs.empty())
            return false;
        const std::pair<Field, const std::string *> donors[] = {
            {Field::AuthorLast, &t.first_author_last},
            {Field::FirstInitial, &t.first_initial},
            {Field::SecondInitial, &t.second_initial},
        };
        for (const auto &[donor_field, value] : donors) {
            if (donor_field == field)
                continue;
            const std::string donor = letters_of(*value);
            if (!donor.empty() && donor == obs && donor != exp)
                return true;
        }
    }
    return false;
}

// M: parts of the author name migrated between surname and initials.
bool m_fires(const AssessContext &ctx) {
    if (ctx.target == nullptr || ctx.ref == nullptr)
        return false;
    const TargetArticle &t = *ctx.target;
    const CitedReference &r = *ctx.ref;
    const std::string exp_last_u = textnorm::to_upper_ascii(trim(t.first_author_last));
    const std::string obs_last_u = textnorm::to_upper_ascii(trim(r.first_author_last));
    const std::vector<std::string> et = name_tokens(exp_last_u);
    const std::vector<std::string> ot = name_tokens(obs_last_u);
    const std::string exp_init = letters_of(t.first_initial + t.second_initial);
    const std::string obs_init = letters_of(r.first_initial + r.second_initial);

    // (a) one surname token became an extra initial
    if (et.size() >= 2 && ot.size() + 1 == et.size()) {
        for (std::size_t k = 0; k < et.size(); ++k) {
            std::vector<std::string> kept;
            for (std::size_t i = 0; i < et.size(); ++i)
                if (i != k)
                    kept.push_back(et[i]);
            if (kept != ot)
                continue;
            const std::string &dropped = et[k];
            if (dropped.empty() || std::isalpha(static_cast<unsigned char>(dropped[0])) == 0)
                continue;
            if (sorted_chars(obs_init) == sorted_chars(exp_init + dropped[0]))
                return true;
        }
    }
    // (b) the initials were glued onto the surname
    if (obs_init.empty() && !exp_init.empty() &&
        letters_of(r.first_author_last) == letters_of(t.first_author_last) + exp_init)
        return true;
    return false;
}

// O: the reference names a different author of the same article.
bool o_fires(const AssessContext &ctx) {
    if (ctx.target == nullptr || ctx.ref == nullptr)
        return false;
    const TargetArticle &t = *ctx.target;
    const CitedReference &r = *ctx.ref;
    const std::string obs_last = letters_of(r.first_author_last);
    if (obs_last.empty())
        return false;
    const std::string obs_fi = letters_of(r.first_initial);
    for (std::size_t k = 1; k < t.all_authors.size(); ++k) {
        const Author &a = t.all_authors[k];
        if (letters_of(a.last) != obs_last)
            continue;
        const std::string ai = letters_of(a.initials);
        if (obs_fi.empty() || (!ai.empty() && obs_fi[0] == ai[0]))
            return true;
    }
    return false;
}

bool is_token_subsequence(const std::vector<std::string> &needle,
                          const std::vector<std::string> &hay) {
    std::size_t i = 0;
    for (const std::string &tok : hay) {
        if (i < needle.size() && needle[i] == tok)
            ++i;
    }
    return i == needle.size();
}

// I: every observed word equals or abbreviates (strict prefix) the matching
// expected word, order preserved, at least one genuine abbreviation.
bool i_fires(const std::string &e_upper, const std::string &o_upper) {
    const std::vector<std::string> et = name_tokens(e_upper);
    const std::vector<std::string> ot = name_tokens(o_upper);
    if (ot.empty() || et.empty())
        return false;
    std::size_t i = 0;
    std::size_t prefixes = 0;
    for (const std::string &obs : ot) {
        bool placed = false;
        while (i < et.size()) {
            const std::string &exp = et[i];
            ++i;
            if (exp == obs) {
                placed = true;
                break;
            }
            if (obs.size() < exp.size() && exp.compare(0, obs.size(), obs) == 0) {
                placed = true;
                ++prefixes;
                break;
            }
        }
        if (!placed)
            return false;
    }
    return prefixes >= 1;
}

bool t_fires(const std::string &e_upper, const std::string &o_upper) {
    const std::string de = digits_of(e_upper);
    const std::string dd = digits_of(o_upper);
    if (de.empty() || dd.empty())
        return false;
    const auto ev = whole_number(de);
    const auto ov = whole_number(dd);
    if (ev && ov) {
        const long long diff = *ev > *ov ? *ev - *ov : *ov - *ev;
        if (diff == 1 || diff == 2)
            return true;
    }
    if (de.size() == dd.size()) {
        std::size_t mismatches = 0;
        int delta = 0;
        for (std::size_t i = 0; i < de.size(); ++i) {
            if (de[i] != dd[i]) {
                ++mismatches;
                delta = de[i] > dd[i] ? de[i] - dd[i] : dd[i] - de[i];
            }
        }
        if (mismatches == 1 && (delta == 1 || delta == 2))
            return true;
    }
    return false;
}

bool j_fires(const std::string &e_upper, const std::string &o_upper) {
    if (strip_spaces(e_upper) == strip_spaces(o_upper))
        return false;
    for (const std::string &t : name_tokens(e_upper)) {
        if (t.size() < 3)
            continue;
        for (const std::string &u : name_tokens(o_upper)) {
            if (u.size() >= t.size() + 2 && u.find(t) != std::string::npos)
                return true;
        }
    }
    return false;
}

bool q_fires(const std::string &e_trim, const std::string &o_trim) {
    if (ascii_letters_of(e_trim) == ascii_letters_of(o_trim))
        return false;
    const std::vector<std::string> ev = fold_variants(e_trim);
    const std::vector<std::string> ov = fold_variants(o_trim);
    for (const std::string &a : ev)
        for (const std::string &b : ov)
            if (a == b)
                return true;
    return contract_umlaut_e(ascii_letters_of(e_trim)) ==
           contract_umlaut_e(ascii_letters_of(o_trim));
}

}  // namespace

std::vector<IacCode> classify_field(const std::string &expected, const std::string &observed,
                                    Field field, const AssessContext &ctx) {
    const std::string e_trim = trim(expected);
    const std::string o_trim = trim(observed);
    const std::string e_upper = textnorm::to_upper_ascii(e_trim);
    const std::string o_upper = textnorm::to_upper_ascii(o_trim);
    if (e_upper == o_upper)
        return {};

    std::vector<IacCode> codes;

    if (g_fires(e_upper, o_upper, field, ctx))
        if (auto g = g_code_for(field))
            codes.push_back(*g);
    if (is_author_field(field) && m_fires(ctx))
        codes.push_back(IacCode::M);
    if (is_author_field(field) && o_fires(ctx))
        codes.push_back(IacCode::O);

    // E: value omitted entirely, or some words of it dropped
    if (o_upper.empty()) {
        codes.push_back(IacCode::E);
    } else {
        const std::vector<std::string> et = name_tokens(e_upper);
        const std::vector<std::string> ot = name_tokens(o_upper);
        if (!ot.empty() && ot.size() < et.size() && is_token_subsequence(ot, et))
            codes.push_back(IacCode::E);
    }

    if (!o_upper.empty() && o_upper.size() < e_upper.size() &&
        e_upper.compare(0, o_upper.size(), o_upper) == 0)
        codes.push_back(IacCode::F);

    if (field == Field::Volume || field == Field::StartPage || field == Field::Issue) {
        const std::string de = digits_of(e_upper);
        const std::string dd = digits_of(o_upper);
        if (!de.empty() && dd.size() > de.size() && dd.compare(0, de.size(), de) == 0)
            codes.push_back(IacCode::S);
    }

    if (strip_spaces(e_upper) != strip_spaces(o_upper) &&
        sorted_non_space(e_upper) == sorted_non_space(o_upper))
        codes.push_back(IacCode::H);

    if ((field == Field::PubYear || field == Field::Volume || field == Field::StartPage ||
         field == Field::Issue) &&
        t_fires(e_upper, o_upper))
        codes.push_back(IacCode::T);

    if (field == Field::PubName && i_fires(e_upper, o_upper))
        codes.push_back(IacCode::I);

    if (field == Field::FirstInitial || field == Field::SecondInitial) {
        const std::string le = ascii_letters_of(e_upper);
        const std::string lo = ascii_letters_of(o_upper);
        if ((le.size() == 1 && lo.size() >= 2 && le[0] == lo[0]) ||
            (lo.size() == 1 && le.size() >= 2 && lo[0] == le[0]))
            codes.push_back(IacCode::U);
    }

    if (strip_spaces(e_upper) == strip_spaces(o_upper))
        codes.push_back(IacCode::K);

    if (q_fires(e_trim, o_trim))
        codes.push_back(IacCode::Q);

    if (strip_punct(e_upper) != e_upper || strip_punct(o_upper) != o_upper)
        if (strip_punct(e_upper) == strip_punct(o_upper))
            codes.push_back(IacCode::R);

    if ((field == Field::PubName || field == Field::AuthorLast) && !e_upper.empty() &&
        o_upper.size() > e_upper.size() && o_upper.find(e_upper) != std::string::npos)
        codes.push_back(IacCode::N);

    if ((field == Field::AuthorLast || field == Field::PubName) && j_fires(e_upper, o_upper))
        codes.push_back(IacCode::J);

    if (codes.empty() && metrics::levenshtein(e_upper, o_upper) <= 2)
        codes.push_back(IacCode::B);
    if (codes.empty())
        codes.push_back(IacCode::D);
    return codes;
}

std::vector<IacAnnotation> annotate_pair(const CitedReference &ref, const TargetArticle &target) {
    std::vector<IacAnnotation> out;
    AssessContext ctx{&target, &ref};
    auto assess = [&](Field field, const std::string &expected, const std::string &observed) {
        if (textnorm::to_upper_ascii(trim(expected)) == textnorm::to_upper_ascii(trim(observed)))
            return;
        IacAnnotation ann;
        ann.ref_id = ref.ref_id;
        ann.field = field;
        ann.expected = expected;
        ann.observed = observed;
        ann.codes = classify_field(expected, observed, field, ctx);
        out.push_back(std::move(ann));
    };

    assess(Field::AuthorLast, target.first_author_last, ref.first_author_last);
    assess(Field::FirstInitial, target.first_initial, ref.first_initial);
    assess(Field::SecondInitial, target.second_initial, ref.second_initial);
    assess(Field::PubYear, std::to_string(target.pub_year),
           ref.pub_year ? std::to_string(*ref.pub_year) : std::string());

    // The publication name is judged against the closest member of the pool
    // of accepted spellings (the full name plus every abbreviation).
    {
        std::vector<std::string> pool;
        if (!target.pub_name_full.empty())
            pool.push_back(target.pub_name_full);
        for (const std::string &a : target.pub_name_abbrevs)
            if (!a.empty())
                pool.push_back(a);
        if (pool.empty())
            pool.push_back(target.pub_name_full);
        const std::string obs_u = textnorm::to_upper_ascii(trim(ref.pub_name));
        const std::string *best = &pool.front();
        std::size_t best_d = SIZE_MAX;
        for (const std::string &cand : pool) {
            const std::size_t d =
                metrics::levenshtein(textnorm::to_upper_ascii(trim(cand)), obs_u);
            if (d < best_d) {
                best_d = d;
                best = &cand;
            }
        }
        assess(Field::PubName, *best, ref.pub_name);
    }

    assess(Field::Volume, target.volume, ref.volume);
    // A reference that simply omits the issue is normal citation practice,
    // not an inaccuracy; only a conflicting issue counts.
    if (!trim(ref.issue).empty())
        assess(Field::Issue, target.issue, ref.issue);
    assess(Field::StartPage, target.start_page, ref.start_page);
    return out;
}

MissedAnnotationResult annotate_missed(const std::vector<MatchRecord> &matches,
                                       const Corpus &corpus) {
    MissedAnnotationResult result;
    std::unordered_map<std::string, const TargetArticle *> targets;
    for (const TargetArticle &t : corpus.targets)
        targets.emplace(t.id, &t);
    std::unordered_map<std::string, const CitedReference *> refs;
    for (const CitedReference &r : corpus.refs)
        refs.emplace(r.ref_id, &r);
    std::unordered_map<std::string, const GroundTruthLink *> links;
    for (const GroundTruthLink &l : corpus.links)
        links.emplace(l.ref_id, &l);

    for (const MatchRecord &m : matches) {
        if (m.outcome != MatchOutcome::Missed)
            continue;
        const auto link_it = links.find(m.ref_id);
        const auto ref_it = refs.find(m.ref_id);
        if (link_it == links.end() || ref_it == refs.end()) {
            ++result.refs_skipped;
            continue;
        }
        const GroundTruthLink &link = *link_it->second;
        const std::string &truth_id = link.truly_cites ? link.true_target_id
                                                       : link.phantom_target_id;
        const auto target_it = targets.find(truth_id);
        if (truth_id.empty() || target_it == targets.end()) {
            ++result.refs_skipped;
            continue;
        }
        ++result.refs_assessed;
        std::vector<IacAnnotation> anns = annotate_pair(*ref_it->second, *target_it->second);
        result.annotations.insert(result.annotations.end(),
                                  std::make_move_iterator(anns.begin()),
                                  std::make_move_iterator(anns.end()));
    }
    return result;
}

InaccuracyStats single_vs_multi_inaccuracy_stats(const std::vector<IacAnnotation> &annotations) {
    std::map<std::string, std::size_t> per_ref;
    for (const IacAnnotation &a : annotations)
        ++per_ref[a.ref_id];
    InaccuracyStats stats;
    stats.refs_with_annotations = per_ref.size();
    for (const auto &[id, n] : per_ref) {
        (void)id;
        if (n == 1)
            ++stats.single_inaccuracy_refs;
        else
            ++stats.multi_inaccuracy_refs;
    }
    return stats;
}

// --- names and groupings -----------------------------------------------------

std::string to_string(IacCode c) {
    switch (c) {
        case IacCode::B:
            return "B";
        case IacCode::D:
            return "D";
        case IacCode::E:
            return "E";
        case IacCode::F:
            return "F";
        case IacCode::G1:
            return "G1";
        case IacCode::G2:
            return "G2";
        case IacCode::G3:
            return "G3";
        case IacCode::G4:
            return "G4";
        case IacCode::G5:
            return "G5";
        case IacCode::G6:
            return "G6";
        case IacCode::G7:
            return "G7";
        case IacCode::H:
            return "H";
        case IacCode::I:
            return "I";
        case IacCode::J:
            return "J";
        case IacCode::K:
            return "K";
        case IacCode::M:
            return "M";
        case IacCode::N:
            return "N";
        case IacCode::O:
            return "O";
        case IacCode::Q:
            return "Q";
        case IacCode::R:
            return "R";
        case IacCode::S:
            return "S";
        case IacCode::T:
            return "T";
        case IacCode::U:
            return "U";
    }
    return "D";
}

std::optional<IacCode> iac_from_string(const std::string &s) {
    for (IacCode c : all_iac_codes())
        if (to_string(c) == s)
            return c;
    return std::nullopt;
}

std::string base_code(IacCode c) {
    const std::string s = to_string(c);
    return s.substr(0, 1);
}

std::vector<IacCode> all_iac_codes() {
    return {IacCode::G1, IacCode::G2, IacCode::G3, IacCode::G4, IacCode::G5, IacCode::G6,
            IacCode::G7, IacCode::M,  IacCode::O,  IacCode::E,  IacCode::F,  IacCode::S,
            IacCode::H,  IacCode::T,  IacCode::I,  IacCode::U,  IacCode::K,  IacCode::Q,
            IacCode::R,  IacCode::N,  IacCode::J,  IacCode::B,  IacCode::D};
}

std::string to_string(Subcategory s) {
    switch (s) {
        case Subcategory::SpellingVariations:
            return "spelling_variations";
        case Subcategory::CompletelyIncorrect:
            return "completely_incorrect";
        case Subcategory::MissingDataValues:
            return "missing_data_values";
        case Subcategory::DisarrangedDataValues:
            return "disarranged_data_values";
        case Subcategory::AbbreviatedDataValues:
            return "abbreviated_data_values";
        case Subcategory::IncorrectInterpretation:
            return "incorrect_interpretation";
        case Subcategory::AddedDataValues:
            return "added_data_values";
        case Subcategory::OtherVariations:
            return "other_variations";
    }
    return "other_variations";
}

Subcategory subcategory_of(IacCode c) {
    switch (c) {
        case IacCode::B:
        case IacCode::Q:
            return Subcategory::SpellingVariations;
        case IacCode::D:
            return Subcategory::CompletelyIncorrect;
        case IacCode::E:
        case IacCode::F:
            return Subcategory::MissingDataValues;
        case IacCode::G1:
        case IacCode::G2:
        case IacCode::G3:
        case IacCode::G4:
        case IacCode::G5:
        case IacCode::G6:
        case IacCode::G7:
        case IacCode::H:
        case IacCode::O:
            return Subcategory::DisarrangedDataValues;
        case IacCode::I:
        case IacCode::U:
            return Subcategory::AbbreviatedDataValues;
        case IacCode::M:
            return Subcategory::IncorrectInterpretation;
        case IacCode::N:
        case IacCode::S:
        case IacCode::J:
            return Subcategory::AddedDataValues;
        case IacCode::K:
        case IacCode::R:
        case IacCode::T:
            return Subcategory::OtherVariations;
    }
    return Subcategory::OtherVariations;
}

int subcategory_size(Subcategory s) {
    switch (s) {
        case Subcategory::SpellingVariations:
            return 2;
        case Subcategory::CompletelyIncorrect:
            return 1;
        case Subcategory::MissingDataValues:
            return 2;
        case Subcategory::DisarrangedDataValues:
            return 3;
        case Subcategory::AbbreviatedDataValues:
            return 2;
        case Subcategory::IncorrectInterpretation:
            return 1;
        case Subcategory::AddedDataValues:
            return 3;
        case Subcategory::OtherVariations:
            return 3;
    }
    return 1;
}

std::vector<Subcategory> all_subcategories() {
    return {Subcategory::SpellingVariations,    Subcategory::CompletelyIncorrect,
            Subcategory::MissingDataValues,     Subcategory::DisarrangedDataValues,
            Subcategory::AbbreviatedDataValues, Subcategory::IncorrectInterpretation,
            Subcategory::AddedDataValues,       Subcategory::OtherVariations};
}

}  // namespace citmatch::taxonomy
