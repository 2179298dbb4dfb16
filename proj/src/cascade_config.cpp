#include <charconv>
#include <fstream>
#include <sstream>

#include "citmatch/errors.hpp"
#include "citmatch/ruleengine.hpp"

// Cascade definition format (configs/*.cascade):
//
//   format citmatch-cascade 1
//   profile <name>
//   norm <flag...>
//   year_window <delta...>
//   ambiguity most_cited|keep_ambiguous|fail
//   fuzzy_names full|abbrevs|all
//
//   rule <label> [requires_doi]
//     <field> exact|exact_optional|omit|soundex|page_in_range
//     <field> fuzzy lev|damerau abs|prop <value> [floor <n>] [cap <n>]
//     <field> year_delta <d...>
//     <field> numeric_delta <n>
//     <field> digits_fuzzy <n>
//     <field> swapped_with <field>
//
// '#' starts a comment. A field without a predicate line is omitted from the
// rule; rule 0 must cover every field (DOI and issue may be exact_optional).

namespace citmatch::engine {

namespace {

// --- built-in profiles -------------------------------------------------------

// Strict resolution in the style of classic citation indexes: one all-exact
// key, same-year only, diacritics and punctuation significant, ambiguity
// fails the reference.
const char *const kStrictCascade =
    R"(# strict: single all-exact key, same year only, ambiguity fails the ref
format citmatch-cascade 1
profile strict
norm strip_non_numeric uppercase
year_window 0
ambiguity fail
fuzzy_names all

rule exact_all
  author_last exact
  first_initial exact
  pub_year exact
  pub_name exact
  volume exact
  start_page exact
  issue exact_optional
  doi exact_optional
)";

// Tolerant cascade, variant 1: first initial only, letters-only keys, fuzzy
// publication names measured against the full journal name, year +-1,
// phonetic author fallback, ambiguity resolved towards the most cited target.
const char *const kCwtsCascade =
    R"(# cwts-style cascade: rules ordered by decreasing count of exact predicates,
# ties broken by judged tolerance width (narrower first). The DOI identity
# rule is pinned right after the all-exact anchor on purpose: a shared DOI is
# stronger evidence than any field heuristic.
format citmatch-cascade 1
profile cwts
norm strip_diacritics drop_non_alpha keep_first_initial strip_non_numeric uppercase
year_window -1 0 1
ambiguity most_cited
fuzzy_names full

rule exact_all
  author_last exact
  first_initial exact
  pub_year exact
  pub_name exact
  volume exact
  start_page exact
  issue exact_optional
  doi exact_optional

rule doi_identity requires_doi
  doi exact
  pub_year year_delta -1 0 1

rule fuzzy_name
  author_last exact
  first_initial exact
  pub_year exact
  pub_name fuzzy lev prop 0.2 floor 1 cap 5
  volume exact
  start_page exact

rule year_tolerance
  author_last exact
  first_initial exact
  pub_year year_delta -1 0 1
  pub_name fuzzy lev prop 0.2 floor 1 cap 5
  volume exact
  start_page exact

rule no_pub_name
  author_last exact
  first_initial exact
  pub_year year_delta -1 0 1
  volume exact
  start_page exact

rule page_in_span
  author_last exact
  first_initial exact
  pub_year year_delta -1 0 1
  pub_name fuzzy lev prop 0.2 floor 1 cap 5
  volume exact
  start_page page_in_range

rule issue_as_volume
  author_last exact
  first_initial exact
  pub_year year_delta -1 0 1
  pub_name fuzzy lev prop 0.2 floor 1 cap 5
  volume swapped_with issue
  start_page exact

rule no_volume
  author_last exact
  first_initial exact
  pub_year year_delta -1 0 1
  pub_name fuzzy lev prop 0.2 floor 1 cap 5
  start_page exact

rule soundex_author
  author_last soundex
  first_initial exact
  pub_year year_delta -1 0 1
  pub_name fuzzy lev prop 0.2 floor 1 cap 5
  volume exact
  start_page exact

rule no_initial
  author_last exact
  pub_year year_delta -1 0 1
  pub_name fuzzy lev prop 0.2 floor 1 cap 5
  volume exact
  start_page exact

rule volume_page_swapped
  author_last exact
  first_initial exact
  pub_year year_delta -1 0 1
  pub_name fuzzy lev prop 0.2 floor 1 cap 5
  volume swapped_with start_page
  start_page swapped_with volume

rule soundex_loose
  author_last soundex
  pub_year year_delta -1 0 1
  volume exact
  start_page exact
)";

// Tolerant cascade, variant 2: both initials, alphanumeric keys, Damerau
// distances, abbreviation-oriented fuzzy names, numeric deviations on volume
// and page, year window {0,+1}, ambiguous candidate sets are kept.
const char *const kIfqCascade =
    R"(# ifq-style cascade: Damerau-based tolerances applied one field at a time,
# numeric deviations for volume/page, year may be cited one year early.
# Ambiguous matches are stored, not resolved.
format citmatch-cascade 1
profile ifq
norm strip_diacritics drop_non_alnum strip_non_numeric uppercase
year_window 0 1
ambiguity keep_ambiguous
fuzzy_names abbrevs

rule exact_all
  author_last exact
  first_initial exact
  pub_year exact
  pub_name exact
  volume exact
  start_page exact
  issue exact_optional
  doi exact_optional

rule doi_identity requires_doi
  doi exact
  pub_year year_delta 0 1

rule next_year_exact
  author_last exact
  first_initial exact
  pub_year year_delta 1
  pub_name exact
  volume exact
  start_page exact
  issue exact_optional
  doi exact_optional

rule author_edit
  author_last fuzzy damerau abs 1
  first_initial exact
  pub_year exact
  pub_name exact
  volume exact
  start_page exact

rule name_edit
  author_last exact
  first_initial exact
  pub_year exact
  pub_name fuzzy damerau prop 0.2 floor 1 cap 2
  volume exact
  start_page exact

rule volume_digits
  author_last exact
  first_initial exact
  pub_year exact
  pub_name exact
  volume digits_fuzzy 1
  start_page exact

rule page_digits
  author_last exact
  first_initial exact
  pub_year exact
  pub_name exact
  volume exact
  start_page digits_fuzzy 1

rule volume_delta
  author_last exact
  first_initial exact
  pub_year exact
  pub_name exact
  volume numeric_delta 2
  start_page exact

rule page_delta
  author_last exact
  first_initial exact
  pub_year exact
  pub_name exact
  volume exact
  start_page numeric_delta 10

rule volume_page_swapped
  author_last exact
  first_initial exact
  pub_year exact
  pub_name exact
  volume swapped_with start_page
  start_page swapped_with volume

rule no_initial
  author_last exact
  pub_year exact
  pub_name exact
  volume exact
  start_page exact

rule combined_loose
  author_last fuzzy damerau abs 1
  pub_year exact
  pub_name fuzzy damerau prop 0.2 floor 1 cap 2
  volume numeric_delta 2
  start_page numeric_delta 10
)";

struct Line {
    std::size_t number;
    std::vector<std::string> tokens;
};

std::vector<Line> tokenize(const std::string &text) {
    std::vector<Line> lines;
    std::istringstream in(text);
    std::string raw;
    std::size_t number = 0;
    while (std::getline(in, raw)) {
        ++number;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos)
            raw.erase(hash);
        std::istringstream ls(raw);
        Line line{number, {}};
        std::string tok;
        while (ls >> tok)
            line.tokens.push_back(tok);
        if (!line.tokens.empty())
            lines.push_back(std::move(line));
    }
    return lines;
}

[[noreturn]] void fail(const std::string &origin, std::size_t line, const std::string &msg) {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string &origin, std::size_t line, const std::string &s) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size())
            fail(origin, line, "bad number '" + s + "'");
        return v;
    } catch (const std::exception &) {
        fail(origin, line, "bad number '" + s + "'");
    }
}

long long parse_int(const std::string &origin, std::size_t line, const std::string &s) {
    long long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        fail(origin, line, "bad integer '" + s + "'");
    return v;
}

FieldPredicate parse_predicate(const std::string &origin, const Line &line) {
    const auto &t = line.tokens;
    FieldPredicate p;
    auto field = field_from_string(t[0]);
    if (!field)
        fail(origin, line.number, "unknown field '" + t[0] + "'");
    p.field = *field;
    if (t.size() < 2)
        fail(origin, line.number, "missing test for field " + t[0]);
    const std::string &test = t[1];
    auto want_args = [&](std::size_t n) {
        if (t.size() != 2 + n)
            fail(origin, line.number, test + " takes " + std::to_string(n) + " argument(s)");
    };
    if (test == "exact") {
        want_args(0);
        p.test = FieldTest::Exact;
    } else if (test == "exact_optional") {
        want_args(0);
        p.test = FieldTest::ExactOptional;
    } else if (test == "omit") {
        want_args(0);
        p.test = FieldTest::Omit;
    } else if (test == "soundex") {
        want_args(0);
        p.test = FieldTest::SoundexEqual;
    } else if (test == "page_in_range") {
        want_args(0);
        p.test = FieldTest::PageInRange;
    } else if (test == "fuzzy") {
        if (t.size() < 5)
            fail(origin, line.number, "fuzzy needs: <lev|damerau> <abs|prop> <value>");
        p.test = FieldTest::Fuzzy;
        if (t[2] == "lev")
            p.metric = metrics::MetricKind::Levenshtein;
        else if (t[2] == "damerau")
            p.metric = metrics::MetricKind::DamerauLevenshtein;
        else
            fail(origin, line.number, "unknown metric '" + t[2] + "'");
        if (t[3] == "abs")
            p.threshold.kind = metrics::ThresholdKind::Absolute;
        else if (t[3] == "prop")
            p.threshold.kind = metrics::ThresholdKind::Proportional;
        else
            fail(origin, line.number, "unknown threshold kind '" + t[3] + "'");
        p.threshold.value = parse_double(origin, line.number, t[4]);
        std::size_t i = 5;
        while (i < t.size()) {
            if (i + 1 >= t.size())
                fail(origin, line.number, "dangling fuzzy option '" + t[i] + "'");
            if (t[i] == "floor")
                p.floor_edits = static_cast<std::size_t>(parse_int(origin, line.number, t[i + 1]));
            else if (t[i] == "cap")
                p.cap_edits = static_cast<std::size_t>(parse_int(origin, line.number, t[i + 1]));
            else
                fail(origin, line.number, "unknown fuzzy option '" + t[i] + "'");
            i += 2;
        }
    } else if (test == "year_delta") {
        if (t.size() < 3)
            fail(origin, line.number, "year_delta needs at least one delta");
        p.test = FieldTest::YearDelta;
        for (std::size_t i = 2; i < t.size(); ++i)
            p.year_deltas.insert(static_cast<int>(parse_int(origin, line.number, t[i])));
    } else if (test == "numeric_delta") {
        want_args(1);
        p.test = FieldTest::NumericDelta;
        p.max_delta = parse_int(origin, line.number, t[2]);
    } else if (test == "digits_fuzzy") {
        want_args(1);
        p.test = FieldTest::DigitsFuzzy;
        p.max_edits = static_cast<std::size_t>(parse_int(origin, line.number, t[2]));
    } else if (test == "swapped_with") {
        want_args(1);
        p.test = FieldTest::SwappedWith;
        auto other = field_from_string(t[2]);
        if (!other)
            fail(origin, line.number, "unknown field '" + t[2] + "'");
        p.other_field = *other;
    } else {
        fail(origin, line.number, "unknown test '" + test + "'");
    }
    return p;
}

}  // namespace

CascadeProfile parse_cascade(const std::string &text, const std::string &origin) {
    const std::vector<Line> lines = tokenize(text);
    if (lines.empty())
        throw ConfigError(origin + ": empty cascade definition");
    const Line &head = lines.front();
    if (head.tokens.size() != 3 || head.tokens[0] != "format" ||
        head.tokens[1] != "citmatch-cascade")
        fail(origin, head.number, "first directive must be 'format citmatch-cascade 1'");
    if (head.tokens[2] != "1")
        fail(origin, head.number, "unsupported cascade format version " + head.tokens[2]);

    CascadeProfile profile;
    bool in_rule = false;
    bool saw_ambiguity = false;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const Line &line = lines[li];
        const std::string &kw = line.tokens[0];
        if (kw == "profile") {
            if (line.tokens.size() != 2)
                fail(origin, line.number, "profile takes one name");
            profile.name = line.tokens[1];
        } else if (kw == "norm") {
            for (std::size_t i = 1; i < line.tokens.size(); ++i) {
                const std::string &flag = line.tokens[i];
                if (flag == "strip_diacritics")
                    profile.norm.strip_diacritics = true;
                else if (flag == "drop_non_alpha")
                    profile.norm.drop_non_alpha_from_text = true;
                else if (flag == "drop_non_alnum")
                    profile.norm.drop_non_alnum_from_text = true;
                else if (flag == "keep_first_initial")
                    profile.norm.keep_first_initial_only = true;
                else if (flag == "strip_non_numeric")
                    profile.norm.strip_non_numeric_from_numbers = true;
                else if (flag == "uppercase")
                    profile.norm.uppercase = true;
                else
                    fail(origin, line.number, "unknown norm flag '" + flag + "'");
            }
        } else if (kw == "year_window") {
            if (line.tokens.size() < 2)
                fail(origin, line.number, "year_window needs at least one delta");
            for (std::size_t i = 1; i < line.tokens.size(); ++i)
                profile.year_window.insert(
                    static_cast<int>(parse_int(origin, line.number, line.tokens[i])));
        } else if (kw == "ambiguity") {
            if (line.tokens.size() != 2)
                fail(origin, line.number, "ambiguity takes one policy");
            saw_ambiguity = true;
            if (line.tokens[1] == "most_cited")
                profile.ambiguity = AmbiguityPolicy::MostCited;
            else if (line.tokens[1] == "keep_ambiguous")
                profile.ambiguity = AmbiguityPolicy::KeepAmbiguous;
            else if (line.tokens[1] == "fail")
                profile.ambiguity = AmbiguityPolicy::Fail;
            else
                fail(origin, line.number, "unknown ambiguity policy '" + line.tokens[1] + "'");
        } else if (kw == "fuzzy_names") {
            if (line.tokens.size() != 2)
                fail(origin, line.number, "fuzzy_names takes one pool");
            if (line.tokens[1] == "full")
                profile.fuzzy_names = FuzzyNamePool::FullNames;
            else if (line.tokens[1] == "abbrevs")
                profile.fuzzy_names = FuzzyNamePool::Abbrevs;
            else if (line.tokens[1] == "all")
                profile.fuzzy_names = FuzzyNamePool::All;
            else
                fail(origin, line.number, "unknown fuzzy_names pool '" + line.tokens[1] + "'");
        } else if (kw == "rule") {
            if (line.tokens.size() < 2)
                fail(origin, line.number, "rule needs a label");
            MatchRule rule;
            rule.label = line.tokens[1];
            for (std::size_t i = 2; i < line.tokens.size(); ++i) {
                if (line.tokens[i] == "requires_doi")
                    rule.requires_doi = true;
                else
                    fail(origin, line.number, "unknown rule option '" + line.tokens[i] + "'");
            }
            profile.rules.push_back(std::move(rule));
            in_rule = true;
        } else if (field_from_string(kw).has_value()) {
            if (!in_rule)
                fail(origin, line.number, "field predicate outside a rule block");
            profile.rules.back().predicates.push_back(parse_predicate(origin, line));
        } else {
            fail(origin, line.number, "unknown directive '" + kw + "'");
        }
    }
    if (profile.name.empty())
        throw ConfigError(origin + ": missing 'profile' directive");
    if (!saw_ambiguity)
        throw ConfigError(origin + ": missing 'ambiguity' directive");
    validate_profile(profile);
    return profile;
}

CascadeProfile load_cascade_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open cascade file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_cascade(buf.str(), path);
}

std::string format_cascade(const CascadeProfile &profile) {
    std::ostringstream out;
    out << "format citmatch-cascade 1\n";
    out << "profile " << profile.name << "\n";
    out << "norm";
    if (profile.norm.strip_diacritics)
        out << " strip_diacritics";
    if (profile.norm.drop_non_alpha_from_text)
        out << " drop_non_alpha";
    if (profile.norm.drop_non_alnum_from_text)
        out << " drop_non_alnum";
    if (profile.norm.keep_first_initial_only)
        out << " keep_first_initial";
    if (profile.norm.strip_non_numeric_from_numbers)
        out << " strip_non_numeric";
    if (profile.norm.uppercase)
        out << " uppercase";
    out << "\n";
    out << "year_window";
    for (int d : profile.year_window)
        out << " " << d;
    out << "\n";
    out << "ambiguity " << to_string(profile.ambiguity) << "\n";
    out << "fuzzy_names " << to_string(profile.fuzzy_names) << "\n";
    for (const MatchRule &rule : profile.rules) {
        out << "\nrule " << rule.label;
        if (rule.requires_doi)
            out << " requires_doi";
        out << "\n";
        for (const FieldPredicate &p : rule.predicates) {
            out << "  " << citmatch::to_string(p.field) << " " << to_string(p.test);
            switch (p.test) {
                case FieldTest::Fuzzy:
                    out << (p.metric == metrics::MetricKind::Levenshtein ? " lev" : " damerau")
                        << (p.threshold.kind == metrics::ThresholdKind::Absolute ? " abs"
                                                                                 : " prop")
                        << " " << p.threshold.value;
                    if (p.floor_edits != 0)
                        out << " floor " << p.floor_edits;
                    if (p.cap_edits != SIZE_MAX)
                        out << " cap " << p.cap_edits;
                    break;
                case FieldTest::YearDelta:
                    for (int d : p.year_deltas)
                        out << " " << d;
                    break;
                case FieldTest::NumericDelta:
                    out << " " << p.max_delta;
                    break;
                case FieldTest::DigitsFuzzy:
                    out << " " << p.max_edits;
                    break;
                case FieldTest::SwappedWith:
                    out << " " << citmatch::to_string(p.other_field);
                    break;
                default:
                    break;
            }
            out << "\n";
        }
    }
    return out.str();
}

std::vector<std::string> builtin_profile_names() { return {"strict", "cwts", "ifq"}; }

std::string builtin_profile_text(const std::string &name) {
    if (name == "strict")
        return kStrictCascade;
    if (name == "cwts")
        return kCwtsCascade;
    if (name == "ifq")
        return kIfqCascade;
    throw UnknownProfileError(name);
}

CascadeProfile builtin_profile(const std::string &name) {
    return parse_cascade(builtin_profile_text(name), "builtin:" + name);
}

}  // namespace citmatch::engine
