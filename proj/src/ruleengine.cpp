#include "citmatch/ruleengine.hpp"

#include <algorithm>
#include <charconv>
#include <thread>

#include "citmatch/errors.hpp"

namespace citmatch::engine {

const Field kMatchFields[8] = {
    Field::AuthorLast, Field::FirstInitial, Field::PubYear, Field::PubName,
    Field::Volume,     Field::Issue,        Field::StartPage, Field::Doi,
};

std::string to_string(FieldTest t) {
    switch (t) {
        case FieldTest::Exact:
            return "exact";
        case FieldTest::ExactOptional:
            return "exact_optional";
        case FieldTest::Fuzzy:
            return "fuzzy";
        case FieldTest::SoundexEqual:
            return "soundex";
        case FieldTest::YearDelta:
            return "year_delta";
        case FieldTest::PageInRange:
            return "page_in_range";
        case FieldTest::NumericDelta:
            return "numeric_delta";
        case FieldTest::DigitsFuzzy:
            return "digits_fuzzy";
        case FieldTest::Omit:
            return "omit";
        case FieldTest::SwappedWith:
            return "swapped_with";
    }
    return "omit";
}

std::string to_string(AmbiguityPolicy p) {
    switch (p) {
        case AmbiguityPolicy::MostCited:
            return "most_cited";
        case AmbiguityPolicy::KeepAmbiguous:
            return "keep_ambiguous";
        case AmbiguityPolicy::Fail:
            return "fail";
    }
    return "fail";
}

std::string to_string(FuzzyNamePool p) {
    switch (p) {
        case FuzzyNamePool::FullNames:
            return "full";
        case FuzzyNamePool::Abbrevs:
            return "abbrevs";
        case FuzzyNamePool::All:
            return "all";
    }
    return "all";
}

const FieldPredicate *MatchRule::predicate_for(Field f) const {
    for (const FieldPredicate &p : predicates)
        if (p.field == f)
            return &p;
    return nullptr;
}

void validate_profile(const CascadeProfile &profile) {
    if (!profile.norm.valid())
        throw ConfigError(profile.name +
                          ": drop_non_alpha and drop_non_alnum are mutually exclusive");
    if (profile.rules.empty())
        throw ConfigError(profile.name + ": cascade has no rules");
    if (profile.year_window.empty())
        throw ConfigError(profile.name + ": empty year window");

    for (std::size_t ri = 0; ri < profile.rules.size(); ++ri) {
        const MatchRule &rule = profile.rules[ri];
        std::set<Field> seen;
        for (const FieldPredicate &p : rule.predicates) {
            if (!seen.insert(p.field).second)
                throw ConfigError(profile.name + ": rule " + std::to_string(ri) + " (" +
                                  rule.label + ") has two predicates for field " +
                                  citmatch::to_string(p.field));
            bool known = false;
            for (Field f : kMatchFields)
                known = known || f == p.field;
            if (!known)
                throw ConfigError(profile.name + ": rule " + std::to_string(ri) +
                                  " predicate on non-matchable field " +
                                  citmatch::to_string(p.field));
            if (p.test == FieldTest::YearDelta) {
                for (int d : p.year_deltas)
                    if (profile.year_window.find(d) == profile.year_window.end())
                        throw ConfigError(profile.name + ": rule " + std::to_string(ri) +
                                          " year delta " + std::to_string(d) +
                                          " outside the profile year window");
            }
            if (p.test == FieldTest::Exact && p.field == Field::PubYear &&
                profile.year_window.find(0) == profile.year_window.end())
                throw ConfigError(profile.name + ": exact year rule but 0 not in year window");
            if (p.test == FieldTest::Fuzzy && p.threshold.value < 0)
                throw ConfigError(profile.name + ": negative fuzzy threshold");
            if (p.test == FieldTest::SwappedWith && p.other_field == p.field)
                throw ConfigError(profile.name + ": swapped_with itself on field " +
                                  citmatch::to_string(p.field));
        }
    }

    // Rule 0 must be the all-exact anchor: every matchable field present and
    // tested exactly (issue and DOI may be exact_optional: they only count
    // when both sides carry a value).
    const MatchRule &first = profile.rules.front();
    for (Field f : kMatchFields) {
        const FieldPredicate *p = first.predicate_for(f);
        if (p == nullptr)
            throw ConfigError(profile.name + ": rule 0 does not cover field " +
                              citmatch::to_string(f));
        const bool optional_ok = (f == Field::Issue || f == Field::Doi) &&
                                 p->test == FieldTest::ExactOptional;
        if (p->test != FieldTest::Exact && !optional_ok)
            throw ConfigError(profile.name + ": rule 0 predicate on " + citmatch::to_string(f) +
                              " must be exact");
    }
}

namespace {

std::string lower_ascii(const std::string &s) {
    std::string out = s;
    for (char &c : out)
        if (c >= 'A' && c <= 'Z')
            c = static_cast<char>(c + ('a' - 'A'));
    return out;
}

std::string strip_spaces(const std::string &s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s)
        if (c != ' ' && c != '\t' && c != '\n' && c != '\r' && c != '\f' && c != '\v')
            out.push_back(c);
    return out;
}

void sort_unique(std::vector<std::string> &v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

bool intersects(const std::vector<std::string> &a, const std::vector<std::string> &b) {
    for (const std::string &x : a)
        for (const std::string &y : b)
            if (x == y)
                return true;
    return false;
}

std::vector<std::string> soundex_codes_of(const std::vector<std::string> &variants) {
    std::vector<std::string> codes;
    for (const std::string &v : variants)
        if (auto code = metrics::soundex(v))
            codes.push_back(*code);
    sort_unique(codes);
    return codes;
}

std::string initials_key(const std::string &first, const std::string &second,
                         const textnorm::NormProfile &norm) {
    const std::string f = textnorm::normalize_text(first, norm);
    const std::string s = textnorm::normalize_text(second, norm);
    auto [rf, rs] = textnorm::reduce_initials(f, s, norm);
    return rf + rs;
}

bool parse_ll(const std::string &s, long long &out) {
    if (s.empty() || s.size() > 18)
        return false;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
}

const std::string &ref_field(const NormalizedRef &r, Field f) {
    static const std::string empty;
    switch (f) {
        case Field::Volume:
            return r.volume;
        case Field::Issue:
            return r.issue;
        case Field::StartPage:
            return r.start_page;
        case Field::Doi:
            return r.doi_key;
        default:
            return empty;
    }
}

const std::string &target_field(const NormalizedTarget &t, Field f) {
    static const std::string empty;
    switch (f) {
        case Field::Volume:
            return t.volume;
        case Field::Issue:
            return t.issue;
        case Field::StartPage:
            return t.start_page;
        case Field::EndPage:
            return t.end_page;
        case Field::Doi:
            return t.doi_key;
        default:
            return empty;
    }
}

bool ref_side_empty(const FieldPredicate &p, const NormalizedRef &ref) {
    switch (p.field) {
        case Field::AuthorLast:
            return ref.author_variants.empty() || ref.author_variants.front().empty();
        case Field::FirstInitial:
            return ref.initials_key.empty();
        case Field::PubYear:
            return !ref.year.has_value();
        case Field::PubName:
            return ref.name_variants.empty() || ref.name_variants.front().empty();
        default:
            return ref_field(ref, p.field).empty();
    }
}

bool target_side_empty(const FieldPredicate &p, const NormalizedTarget &t) {
    switch (p.field) {
        case Field::AuthorLast:
            return t.author_variants.empty() || t.author_variants.front().empty();
        case Field::FirstInitial:
            return t.initials_key.empty();
        case Field::PubYear:
            return false;
        case Field::PubName:
            return t.exact_name_keys.empty();
        default:
            return target_field(t, p.field).empty();
    }
}

bool exact_match(const FieldPredicate &p, const NormalizedRef &ref, const NormalizedTarget &t) {
    switch (p.field) {
        case Field::AuthorLast:
            return intersects(ref.author_variants, t.author_variants);
        case Field::FirstInitial:
            return ref.initials_key == t.initials_key;
        case Field::PubYear:
            return ref.year.has_value() && *ref.year == t.year;
        case Field::PubName:
            return intersects(ref.name_variants, t.exact_name_keys);
        case Field::Doi:
            return !ref.doi_key.empty() && ref.doi_key == t.doi_key;
        default:
            return ref_field(ref, p.field) == target_field(t, p.field);
    }
}

std::size_t clamped_allowed(const FieldPredicate &p, const std::string &a,
                            const std::string &b) {
    std::size_t allowed = metrics::allowed_edits(p.threshold, a, b);
    if (p.threshold.kind == metrics::ThresholdKind::Proportional) {
        allowed = std::max(allowed, p.floor_edits);
        allowed = std::min(allowed, p.cap_edits);
    }
    return allowed;
}

bool fuzzy_pair_ok(const FieldPredicate &p, const std::string &a, const std::string &b) {
    if (a.empty() || b.empty())
        return false;
    return metrics::distance(p.metric, a, b) <= clamped_allowed(p, a, b);
}

bool fuzzy_match(const FieldPredicate &p, const NormalizedRef &ref, const NormalizedTarget &t,
                 const CascadeProfile &profile) {
    switch (p.field) {
        case Field::AuthorLast: {
            for (const std::string &a : ref.author_variants)
                for (const std::string &b : t.author_variants)
                    if (fuzzy_pair_ok(p, a, b))
                        return true;
            return false;
        }
        case Field::PubName: {
            const std::vector<std::string> *pools[2] = {nullptr, nullptr};
            switch (profile.fuzzy_names) {
                case FuzzyNamePool::FullNames:
                    pools[0] = &t.fuzzy_full_names;
                    break;
                case FuzzyNamePool::Abbrevs:
                    pools[0] = &t.fuzzy_abbrev_names;
                    break;
                case FuzzyNamePool::All:
                    pools[0] = &t.fuzzy_full_names;
                    pools[1] = &t.fuzzy_abbrev_names;
                    break;
            }
            for (const std::vector<std::string> *pool : pools) {
                if (pool == nullptr)
                    continue;
                for (const std::string &a : ref.name_variants)
                    for (const std::string &b : *pool)
                        if (fuzzy_pair_ok(p, a, b))
                            return true;
            }
            return false;
        }
        case Field::FirstInitial:
            return fuzzy_pair_ok(p, ref.initials_key, t.initials_key);
        default:
            return fuzzy_pair_ok(p, ref_field(ref, p.field), target_field(t, p.field));
    }
}

}  // namespace

NormalizedTarget normalize_target(const TargetArticle &t, const CascadeProfile &profile) {
    const textnorm::NormProfile &norm = profile.norm;
    NormalizedTarget out;
    out.src = &t;
    out.author_variants = textnorm::normalize_text_variants(t.first_author_last, norm);
    out.soundex_codes = soundex_codes_of(out.author_variants);
    out.initials_key = initials_key(t.first_initial, t.second_initial, norm);
    out.year = t.pub_year;
    for (const std::string &v : textnorm::normalize_text_variants(t.pub_name_full, norm)) {
        out.exact_name_keys.push_back(v);
        out.fuzzy_full_names.push_back(v);
    }
    for (const std::string &abbrev : t.pub_name_abbrevs)
        for (const std::string &v : textnorm::normalize_text_variants(abbrev, norm)) {
            out.exact_name_keys.push_back(v);
            out.fuzzy_abbrev_names.push_back(v);
        }
    if (out.fuzzy_abbrev_names.empty())
        out.fuzzy_abbrev_names = out.fuzzy_full_names;  // no abbreviated form known
    sort_unique(out.exact_name_keys);
    sort_unique(out.fuzzy_full_names);
    sort_unique(out.fuzzy_abbrev_names);
    out.volume = textnorm::normalize_number(t.volume, norm);
    out.issue = textnorm::normalize_number(t.issue, norm);
    out.start_page = textnorm::normalize_number(t.start_page, norm);
    out.end_page = textnorm::normalize_number(t.end_page, norm);
    out.doi_key = lower_ascii(strip_spaces(t.doi));
    return out;
}

NormalizedRef normalize_ref(const CitedReference &r, const CascadeProfile &profile) {
    const textnorm::NormProfile &norm = profile.norm;
    NormalizedRef out;
    out.src = &r;
    out.author_variants = textnorm::normalize_text_variants(r.first_author_last, norm);
    out.soundex_codes = soundex_codes_of(out.author_variants);
    out.initials_key = initials_key(r.first_initial, r.second_initial, norm);
    out.year = r.pub_year;
    out.name_variants = textnorm::normalize_text_variants(r.pub_name, norm);
    out.volume = textnorm::normalize_number(r.volume, norm);
    out.issue = textnorm::normalize_number(r.issue, norm);
    out.start_page = textnorm::normalize_number(r.start_page, norm);
    out.doi_key = lower_ascii(strip_spaces(r.doi));
    return out;
}

TargetIndex build_index(const std::vector<TargetArticle> &targets,
                        const CascadeProfile &profile) {
    validate_profile(profile);
    TargetIndex index;
    index.profile_name_ = profile.name;
    index.targets_.reserve(targets.size());
    for (std::uint32_t i = 0; i < targets.size(); ++i) {
        NormalizedTarget nt = normalize_target(targets[i], profile);
        nt.ordinal = i;
        // a target published in year Y is retrievable under every ref year R
        // with Y - R in the window, i.e. under the keys Y - delta
        for (int delta : profile.year_window)
            index.by_year_[nt.year - delta].push_back(i);
        for (const std::string &code : nt.soundex_codes)
            index.by_soundex_[code].push_back(i);
        for (const std::string &key : nt.exact_name_keys)
            index.by_name_key_[key].push_back(i);
        index.targets_.push_back(std::move(nt));
    }
    return index;
}

std::vector<std::uint32_t> TargetIndex::retrieve(const NormalizedRef &ref) const {
    std::vector<std::uint32_t> out;
    if (ref.year.has_value()) {
        auto it = by_year_.find(*ref.year);
        if (it != by_year_.end())
            out = it->second;  // built in ordinal order, no duplicates possible
        return out;
    }
    // no year given: fall back to phonetic-author and pub-name blocks
    for (const std::string &code : ref.soundex_codes) {
        auto it = by_soundex_.find(code);
        if (it != by_soundex_.end())
            out.insert(out.end(), it->second.begin(), it->second.end());
    }
    for (const std::string &key : ref.name_variants) {
        auto it = by_name_key_.find(key);
        if (it != by_name_key_.end())
            out.insert(out.end(), it->second.begin(), it->second.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool predicate_satisfied(const FieldPredicate &p, const NormalizedRef &ref,
                         const NormalizedTarget &target, const CascadeProfile &profile) {
    switch (p.test) {
        case FieldTest::Omit:
            return true;
        case FieldTest::Exact:
            return exact_match(p, ref, target);
        case FieldTest::ExactOptional:
            if (ref_side_empty(p, ref) || target_side_empty(p, target))
                return true;
            return exact_match(p, ref, target);
        case FieldTest::Fuzzy:
            return fuzzy_match(p, ref, target, profile);
        case FieldTest::SoundexEqual:
            return !ref.soundex_codes.empty() &&
                   intersects(ref.soundex_codes, target.soundex_codes);
        case FieldTest::YearDelta:
            return ref.year.has_value() &&
                   p.year_deltas.find(target.year - *ref.year) != p.year_deltas.end();
        case FieldTest::PageInRange: {
            long long page = 0, lo = 0, hi = 0;
            if (!parse_ll(ref.start_page, page) || !parse_ll(target.start_page, lo) ||
                !parse_ll(target.end_page, hi))
                return false;
            return lo <= page && page <= hi;
        }
        case FieldTest::NumericDelta: {
            const std::string &a = ref_field(ref, p.field);
            const std::string &b = target_field(target, p.field);
            if (a.empty() || b.empty())
                return false;
            return metrics::numeric_deviation_ok(a, b, p.max_delta);
        }
        case FieldTest::DigitsFuzzy: {
            const std::string &a = ref_field(ref, p.field);
            const std::string &b = target_field(target, p.field);
            if (a.empty() || b.empty() || a.size() != b.size())
                return false;
            return metrics::damerau_levenshtein(a, b) <= p.max_edits;
        }
        case FieldTest::SwappedWith: {
            const std::string &a = ref_field(ref, p.field);
            const std::string &b = target_field(target, p.other_field);
            return !a.empty() && !b.empty() && a == b;
        }
    }
    return false;
}

bool rule_satisfied(const MatchRule &rule, const NormalizedRef &ref,
                    const NormalizedTarget &target, const CascadeProfile &profile) {
    for (const FieldPredicate &p : rule.predicates)
        if (!predicate_satisfied(p, ref, target, profile))
            return false;
    return true;
}

namespace {

MatchRecord resolve_candidates(const CitedReference &ref,
                               const std::vector<const NormalizedTarget *> &survivors,
                               int rule_index, const CascadeProfile &profile) {
    MatchRecord rec;
    rec.ref_id = ref.ref_id;
    for (const NormalizedTarget *t : survivors)
        rec.matched_targets.emplace_back(t->src->id, rule_index);
    std::sort(rec.matched_targets.begin(), rec.matched_targets.end());

    if (survivors.size() == 1) {
        rec.outcome = MatchOutcome::Matched;
        rec.selected_target = survivors.front()->src->id;
        return rec;
    }
    switch (profile.ambiguity) {
        case AmbiguityPolicy::MostCited: {
            const NormalizedTarget *best = survivors.front();
            for (const NormalizedTarget *t : survivors) {
                if (t->src->accumulated_citations > best->src->accumulated_citations ||
                    (t->src->accumulated_citations == best->src->accumulated_citations &&
                     t->src->id < best->src->id))
                    best = t;
            }
            rec.outcome = MatchOutcome::Matched;
            rec.selected_target = best->src->id;
            return rec;
        }
        case AmbiguityPolicy::KeepAmbiguous:
            rec.outcome = MatchOutcome::Ambiguous;
            return rec;
        case AmbiguityPolicy::Fail:
            rec.outcome = MatchOutcome::Missed;
            return rec;
    }
    rec.outcome = MatchOutcome::Missed;
    return rec;
}

MatchRecord match_normalized(const CitedReference &ref, const NormalizedRef &nref,
                             const std::vector<const NormalizedTarget *> &candidates,
                             const CascadeProfile &profile) {
    // the year window is a hard semantic filter, independent of any rule
    std::vector<const NormalizedTarget *> in_window;
    in_window.reserve(candidates.size());
    for (const NormalizedTarget *t : candidates) {
        if (nref.year.has_value() &&
            profile.year_window.find(t->year - *nref.year) == profile.year_window.end())
            continue;
        in_window.push_back(t);
    }

    std::vector<const NormalizedTarget *> survivors;
    for (std::size_t ri = 0; ri < profile.rules.size(); ++ri) {
        const MatchRule &rule = profile.rules[ri];
        if (rule.requires_doi && nref.doi_key.empty())
            continue;
        survivors.clear();
        for (const NormalizedTarget *t : in_window)
            if (rule_satisfied(rule, nref, *t, profile))
                survivors.push_back(t);
        if (!survivors.empty())
            return resolve_candidates(ref, survivors, static_cast<int>(ri), profile);
    }

    MatchRecord rec;
    rec.ref_id = ref.ref_id;
    rec.outcome = MatchOutcome::Missed;
    return rec;
}

}  // namespace

MatchRecord match_reference(const CitedReference &ref, const TargetIndex &index,
                            const CascadeProfile &profile) {
    const NormalizedRef nref = normalize_ref(ref, profile);
    std::vector<const NormalizedTarget *> candidates;
    for (std::uint32_t ordinal : index.retrieve(nref))
        candidates.push_back(&index.targets()[ordinal]);
    return match_normalized(ref, nref, candidates, profile);
}

MatchRecord match_reference_all_pairs(const CitedReference &ref,
                                      const std::vector<TargetArticle> &targets,
                                      const CascadeProfile &profile) {
    const NormalizedRef nref = normalize_ref(ref, profile);
    std::vector<NormalizedTarget> normalized;
    normalized.reserve(targets.size());
    for (std::uint32_t i = 0; i < targets.size(); ++i) {
        normalized.push_back(normalize_target(targets[i], profile));
        normalized.back().ordinal = i;
    }
    std::vector<const NormalizedTarget *> candidates;
    for (const NormalizedTarget &t : normalized)
        candidates.push_back(&t);
    return match_normalized(ref, nref, candidates, profile);
}

std::vector<MatchRecord> match_corpus(const std::vector<CitedReference> &refs,
                                      const TargetIndex &index, const CascadeProfile &profile,
                                      unsigned n_threads) {
    std::vector<MatchRecord> results(refs.size());
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < refs.size(); ++i)
            results[i] = match_reference(refs[i], index, profile);
        return results;
    }
    // results are written by reference index: output does not depend on the
    // thread count or interleaving
    const std::size_t total = refs.size();
    const unsigned workers = std::min<unsigned>(n_threads, total == 0 ? 1 : total);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (std::size_t i = w; i < total; i += workers)
                results[i] = match_reference(refs[i], index, profile);
        });
    }
    for (std::thread &t : pool)
        t.join();
    return results;
}

}  // namespace citmatch::engine
