#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "citmatch/corpusforge.hpp"
#include "citmatch/errors.hpp"
#include "citmatch/strmetrics.hpp"
#include "citmatch/textnorm.hpp"

namespace citmatch::forge {

namespace {

// --- fixtures ----------------------------------------------------------------
// The surname pools are engineered so corruptions cannot collide: any two
// surnames (within and across pools) are at least 3 edits apart after
// diacritic folding, share no spelling variant, and are no anagrams of each
// other. fixtures_self_check() enforces this.

struct FixtureAuthor {
    const char *last;
    const char *initials;
};

const FixtureAuthor kFirstAuthors[] = {
    // decorated names (fold / expansion material)
    {"Köster", "H"}, {"Altenmüller", "E"}, {"Schäfer", "M"}, {"Großmann", "K"},
    {"Jürgens", "D"}, {"Bäumler", "R"}, {"Vörös", "L"}, {"Løvgren", "P"},
    {"Ørsted", "C"}, {"Çelik", "A"}, {"Agüero", "S"}, {"Fürst", "W"},
    {"Björklund", "N"}, {"Sæther", "O"}, {"Mühlbauer", "G"}, {"Pöschl", "F"},
    {"Kärkkäinen", "T"}, {"Lönnrot", "E"}, {"Nuñez", "V"}, {"Gómez-Arias", "J"},
    {"Ibañez", "M"}, {"Łukasiewicz", "P"}, {"Šimůnek", "J"}, {"Ångström", "B"},
    {"Þorsteinsson", "G"}, {"Dvořák", "A"}, {"Çağlar", "H"}, {"Hüttner", "S"},
    {"Grün", "B"}, {"Søndergaard", "M"},
    // near-miss pairs used as phantom decoys (>= 3 edits apart regardless)
    {"Holland", "T"}, {"Hollstein", "B"}, {"Albrecht", "F"}, {"Albrow", "K"},
    {"Markell", "P"}, {"Markman", "A"}, {"Thompson", "R"}, {"Thomalla", "E"},
    {"Schmidt", "L"}, {"Schmieder", "J"}, {"Offenbacher", "S"}, {"Offe", "C"},
    {"Willems", "H"}, {"Williamson", "G"},
    // compound and particle names
    {"Garcia-Elias", "M"}, {"De Castell", "S"}, {"Van Driel", "J"},
    {"De la Cruz", "R"}, {"Phillips-Howard", "P"}, {"Ben-Ari", "E"},
    {"Di Stefano", "G"}, {"Al-Rashid", "N"}, {"Vásquez-Torres", "L"},
    {"O'Connor", "D"}, {"Mac Lane", "S"}, {"San Martín", "J"},
    // plain fillers
    {"Arduengo", "A"}, {"Vobruba", "G"}, {"Lichtman", "D"}, {"Pagden", "A"},
    {"Raghunathan", "R"}, {"Shanmugasundaram", "M"}, {"Heimcke", "J"},
    {"Neumeister", "M"}, {"Hofmann", "T"}, {"Brauninger", "T"},
    {"Nasstrom", "S"}, {"Giessler", "A"}, {"Pant", "H"}, {"Wetherell", "M"},
    {"Oyserman", "D"}, {"Kitayama", "S"}, {"Greenfield", "P"}, {"Tversky", "A"},
    {"Kahneman", "D"}, {"Luhmann", "N"}, {"Granovetter", "M"},
    {"Esping-Andersen", "G"}, {"Beck", "U"}, {"Bourdieu", "P"},
    {"Foucault", "M"}, {"Giddens", "A"}, {"Habermas", "J"}, {"Latour", "B"},
    {"Sassen", "S"}, {"Castells", "M"}, {"Zuckerman", "H"}, {"Merton", "R"},
    {"Simonton", "D"}, {"Csikszentmihalyi", "M"},
};

// Disjoint from the first-author pool (the "different author of the same
// work" transform draws from here).
const FixtureAuthor kCoAuthors[] = {
    {"Weinberger", "A"}, {"Fontana", "L"}, {"Okazaki", "T"}, {"Delgado", "M"},
    {"Matsumoto", "K"}, {"Ricoeur", "P"}, {"Svensson", "E"}, {"Tanaka", "H"},
    {"Ferreira", "J"}, {"Novotny", "P"}, {"Lindgren", "S"}, {"Whitfield", "R"},
    {"Morgenstern", "B"}, {"Ballard", "C"}, {"Kowalski", "D"}, {"Petridis", "N"},
    {"Paredes", "R"}, {"Ihlenfeld", "U"}, {"Rousseau", "F"}, {"Vandenberg", "W"},
    {"Takahashi", "M"}, {"Ellington", "G"}, {"Marchetti", "V"}, {"Dubois", "C"},
    {"Yamamoto", "S"}, {"Fitzgerald", "K"}, {"Okafor", "C"}, {"Moreau", "D"},
    {"Quispe", "A"}, {"Almeida", "F"}, {"Johansson", "M"}, {"Vargas", "L"},
    {"Haraway", "D"}, {"Obrist", "H"},
};

// Names glued onto a surname by the conjoint-names transform; never members
// of either author pool.
const char *const kGlueNames[] = {"Goetz", "Webb", "Cole"};

// Expansion of a single initial to a full first name, one per letter.
const char *const kExpansionNames[26] = {
    "Anton",   "Bernd",  "Carl",   "Detlef", "Ernst",  "Friedrich", "Georg",
    "Heinz",   "Ingrid", "Johann", "Klaus",  "Ludwig", "Marion",    "Norbert",
    "Otto",    "Peter",  "Quentin", "Rainer", "Sofia",  "Thomas",    "Ulrich",
    "Volker",  "Werner", "Xaver",  "Yvonne", "Zacharias",
};

struct FixtureJournal {
    const char *full;
    std::array<const char *, 2> abbrevs;  // nullptr-padded
    Domain domain;
};

const FixtureJournal kJournals[] = {
    {"Heteroatom Chemistry", {"HETEROATOM CHEM", nullptr}, Domain::NaturalSciences},
    {"Hand Clinics", {"HAND CLIN", nullptr}, Domain::NaturalSciences},
    {"Deutsche Medizinische Wochenschrift",
     {"DEUT MED WOCHENSCHR", "DTSCH MED WOCHENSCHR"},
     Domain::NaturalSciences},
    {"Chemie in unserer Zeit", {"CHEM UNSERER ZEIT", "CHEM UNSERER Z"},
     Domain::NaturalSciences},
    {"Journal of Travel Medicine", {"J TRAVEL MED", nullptr}, Domain::NaturalSciences},
    {"Current Opinion in Neurobiology", {"CURR OPIN NEUROBIOL", nullptr},
     Domain::NaturalSciences},
    {"British Journal of Psychiatry", {"BRIT J PSYCHIAT", "BR J PSYCHIATRY"},
     Domain::NaturalSciences},
    {"Journal of Clinical Periodontology", {"J CLIN PERIODONTOL", nullptr},
     Domain::NaturalSciences},
    {"Der Orthopäde", {"ORTHOPADE", nullptr}, Domain::NaturalSciences},
    {"Nucleic Acids Research", {"NUCLEIC ACIDS RES", nullptr}, Domain::NaturalSciences},
    {"Journal of Experimental Biology", {"J EXP BIOL", nullptr}, Domain::NaturalSciences},
    {"Computer Networks and ISDN Systems", {"COMPUT NETW ISDN SYST", nullptr},
     Domain::NaturalSciences},
    {"Angewandte Chemie International Edition",
     {"ANGEW CHEM INT EDIT", "ANGEW CHEM INT ED"},
     Domain::NaturalSciences},
    {"Journal of Organic Chemistry", {"J ORG CHEM", nullptr}, Domain::NaturalSciences},
    {"Archives of Internal Medicine", {"ARCH INTERN MED", nullptr},
     Domain::NaturalSciences},
    {"Knochenersatzmaterialien und Wachstumsfaktoren", {nullptr, nullptr},
     Domain::NaturalSciences},
    {"Berliner Journal für Soziologie", {"BERL J SOZIOL", nullptr},
     Domain::SocialSciences},
    {"Journal of Curriculum Studies", {"J CURRICULUM STUD", nullptr},
     Domain::SocialSciences},
    {"Political Theory", {"POLIT THEORY", nullptr}, Domain::SocialSciences},
    {"Politische Vierteljahresschrift", {"POLIT VIERTELJAHR", nullptr},
     Domain::SocialSciences},
    {"Zeitschrift für Pädagogik", {"Z PADAGOGIK", nullptr}, Domain::SocialSciences},
    {"Studies in Higher Education", {"STUD HIGH EDUC", nullptr}, Domain::SocialSciences},
    {"European Sociological Review", {"EUR SOCIOL REV", nullptr}, Domain::SocialSciences},
    {"Kölner Zeitschrift für Soziologie und Sozialpsychologie",
     {"KOLNER Z SOZIOL SOZPSYCHOL", "KZFSS"},
     Domain::SocialSciences},
    {"Soziale Welt", {"SOZ WELT", nullptr}, Domain::SocialSciences},
    {"American Journal of Sociology", {"AM J SOCIOL", nullptr}, Domain::SocialSciences},
    {"Theory and Society", {"THEOR SOC", nullptr}, Domain::SocialSciences},
    {"Leviathan", {nullptr, nullptr}, Domain::SocialSciences},
};

const char *const kTitleWords[] = {
    "adaptive",  "methods",   "analysis",    "evidence",   "networks",  "dynamics",
    "learning",  "policy",    "systems",     "clinical",   "survey",    "theory",
    "models",    "practice",  "outcomes",    "review",     "effects",   "patterns",
    "growth",    "selection", "structure",   "measurement", "design",   "evaluation",
    "response",  "variation", "stability",   "transfer",   "context",   "change",
};

constexpr int kFirstAuthorCount = static_cast<int>(std::size(kFirstAuthors));
constexpr int kCoAuthorCount = static_cast<int>(std::size(kCoAuthors));
constexpr int kJournalCount = static_cast<int>(std::size(kJournals));

// --- deterministic randomness --------------------------------------------------
// All draws are modulo reductions of mt19937_64 words; probabilities are
// compared against integer thresholds so no floating-point state is involved.

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    int below(int n) {
        if (n <= 1)
            return 0;
        return static_cast<int>(eng_() % static_cast<std::uint64_t>(n));
    }

    bool chance(double p) {
        if (p <= 0.0)
            return false;
        if (p >= 1.0)
            return true;
        const auto threshold = static_cast<std::uint64_t>(std::llround(p * 1e6));
        return eng_() % 1000000u < threshold;
    }

private:
    std::mt19937_64 eng_;
};

std::string idfmt(const char *fmt, int n) {
    char buf[32];
    std::snprintf(buf, sizeof buf, fmt, n);
    return buf;
}

std::string upper_key(const std::string &s) {
    std::string folded = textnorm::to_upper_ascii(textnorm::fold_diacritics(s));
    std::string out;
    for (char c : folded) {
        unsigned char u = static_cast<unsigned char>(c);
        if (u >= 0x80 || std::isalnum(u))
            out.push_back(c);
    }
    return out;
}

std::string upper_key_expanded(const std::string &s) {
    std::string folded = textnorm::to_upper_ascii(textnorm::fold_diacritics_expanded(s));
    std::string out;
    for (char c : folded) {
        unsigned char u = static_cast<unsigned char>(c);
        if (u >= 0x80 || std::isalnum(u))
            out.push_back(c);
    }
    return out;
}

void check_rate(double v, const std::string &name) {
    if (!(v >= 0.0 && v <= 1.0))
        throw ConfigError(name + " must lie in [0, 1]");
}

void validate_plan(const InjectionPlan &plan) {
    static const std::set<std::string> known = {"B", "D", "E", "F", "G", "H", "I", "J", "K",
                                                "M", "N", "O", "Q", "R", "S", "T", "U"};
    for (const auto &[code, rate] : plan.per_code_rates) {
        if (known.find(code) == known.end())
            throw ConfigError("unknown inaccuracy code in plan rates: " + code);
        check_rate(rate, "rate for code " + code);
    }
    check_rate(plan.multi_inaccuracy_rate, "multi_inaccuracy_rate");
    check_rate(plan.phantom_rate, "phantom_rate");
    check_rate(plan.duplicate_target_rate, "duplicate_target_rate");
    check_rate(plan.generator.ref_doi_probability, "ref_doi_probability");
    check_rate(plan.generator.ref_issue_probability, "ref_issue_probability");
    if (plan.n_targets < 0 || plan.n_refs < 0)
        throw ConfigError("n_targets / n_refs must be non-negative");
}

}  // namespace

// --- plan JSON ----------------------------------------------------------------

InjectionPlan plan_from_json(const std::string &json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("plan is not valid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ConfigError("plan must be a JSON object");

    static const std::set<std::string> allowed = {
        "seed",         "n_targets",   "n_refs",
        "rates",        "multi_inaccuracy_rate", "phantom_rate",
        "duplicate_target_rate", "generator"};
    for (const auto &item : j.items())
        if (allowed.find(item.key()) == allowed.end())
            throw ConfigError("unknown plan key: " + item.key());

    InjectionPlan plan;
    try {
        if (j.contains("seed"))
            plan.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("n_targets"))
            plan.n_targets = j.at("n_targets").get<int>();
        if (j.contains("n_refs"))
            plan.n_refs = j.at("n_refs").get<int>();
        if (j.contains("rates")) {
            if (!j.at("rates").is_object())
                throw ConfigError("plan rates must be an object");
            for (const auto &item : j.at("rates").items())
                plan.per_code_rates[item.key()] = item.value().get<double>();
        }
        if (j.contains("multi_inaccuracy_rate"))
            plan.multi_inaccuracy_rate = j.at("multi_inaccuracy_rate").get<double>();
        if (j.contains("phantom_rate"))
            plan.phantom_rate = j.at("phantom_rate").get<double>();
        if (j.contains("duplicate_target_rate"))
            plan.duplicate_target_rate = j.at("duplicate_target_rate").get<double>();
        if (j.contains("generator")) {
            const auto &g = j.at("generator");
            if (!g.is_object())
                throw ConfigError("plan generator must be an object");
            for (const auto &item : g.items()) {
                if (item.key() == "ref_doi_probability")
                    plan.generator.ref_doi_probability = item.value().get<double>();
                else if (item.key() == "ref_issue_probability")
                    plan.generator.ref_issue_probability = item.value().get<double>();
                else
                    throw ConfigError("unknown generator key: " + item.key());
            }
        }
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("malformed plan value: ") + e.what());
    }
    validate_plan(plan);
    return plan;
}

std::string plan_to_json(const InjectionPlan &plan) {
    nlohmann::json j;
    j["seed"] = plan.seed;
    j["n_targets"] = plan.n_targets;
    j["n_refs"] = plan.n_refs;
    j["rates"] = nlohmann::json::object();
    for (const auto &[code, rate] : plan.per_code_rates)
        j["rates"][code] = rate;
    j["multi_inaccuracy_rate"] = plan.multi_inaccuracy_rate;
    j["phantom_rate"] = plan.phantom_rate;
    j["duplicate_target_rate"] = plan.duplicate_target_rate;
    j["generator"] = {{"ref_doi_probability", plan.generator.ref_doi_probability},
                      {"ref_issue_probability", plan.generator.ref_issue_probability}};
    return j.dump(2) + "\n";
}

// --- generation ----------------------------------------------------------------

Corpus generate_clean(int n_targets, int n_refs, std::uint64_t seed,
                      const GeneratorOptions &options) {
    if (n_targets < 1)
        throw ConfigError("n_targets must be at least 1");
    if (n_refs < 0)
        throw ConfigError("n_refs must be non-negative");
    check_rate(options.ref_doi_probability, "ref_doi_probability");
    check_rate(options.ref_issue_probability, "ref_issue_probability");
    const int capacity = kFirstAuthorCount * kJournalCount;
    if (n_targets > (capacity * 3) / 5)
        throw ConfigError("n_targets exceeds the distinct (author, journal) capacity of " +
                          std::to_string((capacity * 3) / 5));

    Rng rng(seed);
    Corpus corpus;
    corpus.targets.reserve(static_cast<std::size_t>(n_targets));

    std::set<std::pair<int, int>> used_pairs;
    for (int i = 0; i < n_targets; ++i) {
        int ai = 0;
        int ji = 0;
        do {
            ai = rng.below(kFirstAuthorCount);
            ji = rng.below(kJournalCount);
        } while (!used_pairs.insert({ai, ji}).second);

        const FixtureAuthor &fa = kFirstAuthors[ai];
        const FixtureJournal &fj = kJournals[ji];

        TargetArticle t;
        t.id = idfmt("T%04d", i + 1);
        t.first_author_last = fa.last;
        const std::string inits = fa.initials;
        t.first_initial = inits.substr(0, 1);
        t.second_initial = inits.size() > 1 ? inits.substr(1, 1) : "";
        t.all_authors.push_back({fa.last, inits});
        const int n_co = rng.below(5);
        std::set<int> co_used;
        for (int c = 0; c < n_co; ++c) {
            int ci = rng.below(kCoAuthorCount);
            if (!co_used.insert(ci).second)
                continue;
            t.all_authors.push_back({kCoAuthors[ci].last, kCoAuthors[ci].initials});
        }
        t.pub_year = 1992 + rng.below(21);
        t.pub_name_full = fj.full;
        for (const char *a : fj.abbrevs)
            if (a != nullptr)
                t.pub_name_abbrevs.emplace_back(a);
        t.domain = fj.domain;
        t.volume = std::to_string(1 + rng.below(199));
        const int sp = 1 + rng.below(949);
        t.start_page = std::to_string(sp);
        t.end_page = std::to_string(sp + 4 + rng.below(46));
        t.issue = rng.chance(0.6) ? std::to_string(1 + rng.below(12)) : "";
        if (rng.chance(0.55))
            t.doi = "10." + std::to_string(1000 + rng.below(9000)) + "/cm." +
                    std::to_string(t.pub_year) + "." + idfmt("%05d", i + 1);
        const int n_words = 4 + rng.below(4);
        std::string title;
        for (int w = 0; w < n_words; ++w) {
            if (!title.empty())
                title.push_back(' ');
            title += kTitleWords[rng.below(static_cast<int>(std::size(kTitleWords)))];
        }
        t.article_title = title;
        t.accumulated_citations = rng.below(401);
        corpus.targets.push_back(std::move(t));
    }

    const int n_sources = std::max(1, n_refs / 25);
    corpus.refs.reserve(static_cast<std::size_t>(n_refs));
    corpus.links.reserve(static_cast<std::size_t>(n_refs));
    for (int r = 0; r < n_refs; ++r) {
        const TargetArticle &t = corpus.targets[static_cast<std::size_t>(rng.below(n_targets))];
        CitedReference cr;
        cr.ref_id = idfmt("R%06d", r + 1);
        cr.source_article_id = idfmt("S%04d", 1 + rng.below(n_sources));
        cr.first_author_last = t.first_author_last;
        cr.first_initial = t.first_initial;
        cr.second_initial = t.second_initial;
        cr.pub_year = t.pub_year;
        cr.pub_name = t.pub_name_abbrevs.empty() ? t.pub_name_full : t.pub_name_abbrevs.front();
        cr.volume = t.volume;
        cr.start_page = t.start_page;
        cr.issue =
            (!t.issue.empty() && rng.chance(options.ref_issue_probability)) ? t.issue : "";
        cr.doi = (!t.doi.empty() && rng.chance(options.ref_doi_probability)) ? t.doi : "";
        corpus.links.push_back({cr.ref_id, t.id, true, ""});
        corpus.refs.push_back(std::move(cr));
    }
    return corpus;
}

// --- typed corruption ------------------------------------------------------------

namespace {

using taxonomy::IacCode;

struct InjectorState {
    Rng &rng;
    CitedReference &ref;
    const TargetArticle &target;
    std::set<Field> touched;
    std::vector<InjectionLogRow> *log;
};

constexpr int kMaxTries = 48;

std::string ref_value(const CitedReference &r, Field f) {
    switch (f) {
        case Field::AuthorLast:
            return r.first_author_last;
        case Field::FirstInitial:
            return r.first_initial;
        case Field::SecondInitial:
            return r.second_initial;
        case Field::PubYear:
            return r.pub_year ? std::to_string(*r.pub_year) : "";
        case Field::PubName:
            return r.pub_name;
        case Field::Volume:
            return r.volume;
        case Field::Issue:
            return r.issue;
        case Field::StartPage:
            return r.start_page;
        case Field::Doi:
            return r.doi;
        default:
            return "";
    }
}

void set_ref_value(CitedReference &r, Field f, const std::string &v) {
    switch (f) {
        case Field::AuthorLast:
            r.first_author_last = v;
            break;
        case Field::FirstInitial:
            r.first_initial = v;
            break;
        case Field::SecondInitial:
            r.second_initial = v;
            break;
        case Field::PubYear:
            if (v.empty())
                r.pub_year.reset();
            else
                r.pub_year = std::stoi(v);
            break;
        case Field::PubName:
            r.pub_name = v;
            break;
        case Field::Volume:
            r.volume = v;
            break;
        case Field::Issue:
            r.issue = v;
            break;
        case Field::StartPage:
            r.start_page = v;
            break;
        case Field::Doi:
            r.doi = v;
            break;
        default:
            break;
    }
}

bool untouched(const InjectorState &st, Field f) { return st.touched.find(f) == st.touched.end(); }

// Checks how the corrupted field would be classified against the true target
// (same assessment the evaluation later runs).
bool candidate_classifies(const InjectorState &st, const CitedReference &candidate, Field field,
                          IacCode want, bool exclusively) {
    for (const taxonomy::IacAnnotation &ann : taxonomy::annotate_pair(candidate, st.target)) {
        if (ann.field != field)
            continue;
        const bool has = std::find(ann.codes.begin(), ann.codes.end(), want) != ann.codes.end();
        if (exclusively)
            return has && ann.codes.size() == 1;
        return has;
    }
    return false;
}

void commit(InjectorState &st, Field field, IacCode code, const std::string &original,
            const std::string &corrupted) {
    set_ref_value(st.ref, field, corrupted);
    st.touched.insert(field);
    st.log->push_back({st.ref.ref_id, field, code, original, corrupted, true});
}

std::string digits_only(const std::string &s) {
    std::string out;
    for (char c : s)
        if (std::isdigit(static_cast<unsigned char>(c)))
            out.push_back(c);
    return out;
}

std::vector<std::string> ws_tokens(const std::string &s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) {
                out.push_back(cur);
                cur.clear();
            }
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty())
        out.push_back(cur);
    return out;
}

std::string join_tokens(const std::vector<std::string> &tokens) {
    std::string out;
    for (const std::string &t : tokens) {
        if (!out.empty())
            out.push_back(' ');
        out += t;
    }
    return out;
}

// Splits a surname at spaces, hyphens and apostrophes, remembering each
// token's byte span so tokens can be removed from the original string.
std::vector<std::pair<std::size_t, std::size_t>> surname_token_spans(const std::string &s) {
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    std::size_t begin = std::string::npos;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        const bool sep = c == ' ' || c == '-' || c == '\'';
        if (sep) {
            if (begin != std::string::npos) {
                spans.emplace_back(begin, i);
                begin = std::string::npos;
            }
        } else if (begin == std::string::npos) {
            begin = i;
        }
    }
    if (begin != std::string::npos)
        spans.emplace_back(begin, s.size());
    return spans;
}

bool surname_in_pools(const std::string &candidate) {
    const std::string key = textnorm::to_upper_ascii(candidate);
    for (const FixtureAuthor &a : kFirstAuthors)
        if (textnorm::to_upper_ascii(a.last) == key)
            return true;
    for (const FixtureAuthor &a : kCoAuthors)
        if (textnorm::to_upper_ascii(a.last) == key)
            return true;
    return false;
}

// B: one interior letter replaced.
bool apply_b(InjectorState &st) {
    if (!untouched(st, Field::AuthorLast))
        return false;
    const std::string original = st.ref.first_author_last;
    std::vector<std::size_t> letter_pos;
    for (std::size_t i = 0; i < original.size(); ++i)
        if (std::isalpha(static_cast<unsigned char>(original[i])))
            letter_pos.push_back(i);
    if (letter_pos.size() < 3)
        return false;
    for (int attempt = 0; attempt < kMaxTries; ++attempt) {
        const std::size_t pos =
            letter_pos[1 + static_cast<std::size_t>(st.rng.below(
                               static_cast<int>(letter_pos.size()) - 2))];
        const char old_c = original[pos];
        const bool lower = std::islower(static_cast<unsigned char>(old_c)) != 0;
        const char new_c = static_cast<char>((lower ? 'a' : 'A') + st.rng.below(26));
        if (new_c == old_c)
            continue;
        std::string corrupted = original;
        corrupted[pos] = new_c;
        if (surname_in_pools(corrupted))
            continue;
        CitedReference cand = st.ref;
        cand.first_author_last = corrupted;
        if (!candidate_classifies(st, cand, Field::AuthorLast, IacCode::B, true))
            continue;
        commit(st, Field::AuthorLast, IacCode::B, original, corrupted);
        return true;
    }
    return false;
}

// D: the value replaced by something unrelated.
bool apply_d(InjectorState &st) {
    const Field fields[] = {Field::AuthorLast, Field::PubName, Field::Volume, Field::StartPage};
    const int start = st.rng.below(4);
    for (int off = 0; off < 4; ++off) {
        const Field field = fields[(start + off) % 4];
        if (!untouched(st, field))
            continue;
        const std::string original = ref_value(st.ref, field);
        if (original.empty())
            continue;
        for (int attempt = 0; attempt < kMaxTries; ++attempt) {
            std::string corrupted;
            if (field == Field::AuthorLast) {
                corrupted = kFirstAuthors[st.rng.below(kFirstAuthorCount)].last;
            } else if (field == Field::PubName) {
                const FixtureJournal &j = kJournals[st.rng.below(kJournalCount)];
                std::vector<std::string> keys{j.full};
                for (const char *a : j.abbrevs)
                    if (a != nullptr)
                        keys.emplace_back(a);
                corrupted = keys[static_cast<std::size_t>(
                    st.rng.below(static_cast<int>(keys.size())))];
            } else {
                corrupted = std::to_string(1 + st.rng.below(9999));
            }
            if (textnorm::to_upper_ascii(corrupted) == textnorm::to_upper_ascii(original))
                continue;
            CitedReference cand = st.ref;
            set_ref_value(cand, field, corrupted);
            if (!candidate_classifies(st, cand, field, IacCode::D, true))
                continue;
            commit(st, field, IacCode::D, original, corrupted);
            return true;
        }
    }
    return false;
}

// E: a value (or one of its words) omitted.
bool apply_e(InjectorState &st) {
    struct Option {
        Field field;
        std::string corrupted;
    };
    std::vector<Option> options;
    if (untouched(st, Field::SecondInitial) && !st.ref.second_initial.empty())
        options.push_back({Field::SecondInitial, ""});
    if (untouched(st, Field::PubYear) && st.ref.pub_year)
        options.push_back({Field::PubYear, ""});
    if (untouched(st, Field::Volume) && !st.ref.volume.empty())
        options.push_back({Field::Volume, ""});
    if (untouched(st, Field::StartPage) && !st.ref.start_page.empty())
        options.push_back({Field::StartPage, ""});
    if (untouched(st, Field::PubName)) {
        const std::vector<std::string> tokens = ws_tokens(st.ref.pub_name);
        if (tokens.size() >= 2) {
            // drop a non-final word so the remainder is not a plain prefix
            std::vector<std::string> kept = tokens;
            kept.erase(kept.begin() +
                       st.rng.below(static_cast<int>(tokens.size()) - 1));
            options.push_back({Field::PubName, join_tokens(kept)});
        }
    }
    while (!options.empty()) {
        const int pick = st.rng.below(static_cast<int>(options.size()));
        const Option opt = options[static_cast<std::size_t>(pick)];
        options.erase(options.begin() + pick);
        CitedReference cand = st.ref;
        set_ref_value(cand, opt.field, opt.corrupted);
        if (!candidate_classifies(st, cand, opt.field, IacCode::E, false))
            continue;
        const std::string original = ref_value(st.ref, opt.field);
        commit(st, opt.field, IacCode::E, original, opt.corrupted);
        return true;
    }
    return false;
}

// F: trailing part of the value cropped.
bool apply_f(InjectorState &st) {
    struct Option {
        Field field;
        std::string corrupted;
    };
    std::vector<Option> options;
    for (Field field : {Field::Volume, Field::StartPage}) {
        if (!untouched(st, field))
            continue;
        const std::string v = ref_value(st.ref, field);
        if (digits_only(v).size() == v.size() && v.size() >= 2)
            options.push_back(
                {field, v.substr(0, 1 + static_cast<std::size_t>(
                                        st.rng.below(static_cast<int>(v.size()) - 1)))});
    }
    if (untouched(st, Field::PubName)) {
        const std::vector<std::string> tokens = ws_tokens(st.ref.pub_name);
        if (tokens.size() >= 2) {
            std::vector<std::string> kept(tokens.begin(), tokens.end() - 1);
            options.push_back({Field::PubName, join_tokens(kept)});
        }
    }
    while (!options.empty()) {
        const int pick = st.rng.below(static_cast<int>(options.size()));
        const Option opt = options[static_cast<std::size_t>(pick)];
        options.erase(options.begin() + pick);
        CitedReference cand = st.ref;
        set_ref_value(cand, opt.field, opt.corrupted);
        if (!candidate_classifies(st, cand, opt.field, IacCode::F, false))
            continue;
        commit(st, opt.field, IacCode::F, ref_value(st.ref, opt.field), opt.corrupted);
        return true;
    }
    return false;
}

IacCode g_code_of(Field f) {
    switch (f) {
        case Field::Issue:
            return IacCode::G1;
        case Field::StartPage:
            return IacCode::G2;
        case Field::Volume:
            return IacCode::G4;
        default:
            return IacCode::G4;
    }
}

// G: two numeric fields swapped; logs one row per side.
bool apply_g(InjectorState &st) {
    const std::pair<Field, Field> pairs[] = {{Field::Volume, Field::Issue},
                                             {Field::Volume, Field::StartPage},
                                             {Field::StartPage, Field::Issue}};
    for (const auto &[fa, fb] : pairs) {
        if (!untouched(st, fa) || !untouched(st, fb))
            continue;
        const std::string va = ref_value(st.ref, fa);
        const std::string vb = ref_value(st.ref, fb);
        if (va.empty() || vb.empty() || digits_only(va) == digits_only(vb))
            continue;
        CitedReference cand = st.ref;
        set_ref_value(cand, fa, vb);
        set_ref_value(cand, fb, va);
        if (!candidate_classifies(st, cand, fa, g_code_of(fa), false) ||
            !candidate_classifies(st, cand, fb, g_code_of(fb), false))
            continue;
        commit(st, fa, g_code_of(fa), va, vb);
        commit(st, fb, g_code_of(fb), vb, va);
        return true;
    }
    return false;
}

// H: two adjacent digits transposed.
bool apply_h(InjectorState &st) {
    struct Option {
        Field field;
        std::string value;
        std::size_t min_pos;  // first swappable index (year protects its millennium digit)
    };
    std::vector<Option> options;
    for (Field field : {Field::Volume, Field::StartPage, Field::Issue, Field::PubYear}) {
        if (!untouched(st, field))
            continue;
        const std::string v = ref_value(st.ref, field);
        if (v.size() < 2 || digits_only(v).size() != v.size())
            continue;
        options.push_back({field, v, field == Field::PubYear ? std::size_t{1} : std::size_t{0}});
    }
    while (!options.empty()) {
        const int pick = st.rng.below(static_cast<int>(options.size()));
        const Option opt = options[static_cast<std::size_t>(pick)];
        options.erase(options.begin() + pick);
        std::vector<std::size_t> swappable;
        for (std::size_t i = opt.min_pos; i + 1 < opt.value.size(); ++i)
            if (opt.value[i] != opt.value[i + 1])
                swappable.push_back(i);
        if (swappable.empty())
            continue;
        std::string corrupted = opt.value;
        const std::size_t i =
            swappable[static_cast<std::size_t>(st.rng.below(static_cast<int>(swappable.size())))];
        std::swap(corrupted[i], corrupted[i + 1]);
        if (opt.field == Field::Volume && corrupted[0] == '0')
            continue;
        CitedReference cand = st.ref;
        set_ref_value(cand, opt.field, corrupted);
        if (!candidate_classifies(st, cand, opt.field, IacCode::H, false))
            continue;
        commit(st, opt.field, IacCode::H, opt.value, corrupted);
        return true;
    }
    return false;
}

// I: one word of the publication name abbreviated to a prefix.
bool apply_i(InjectorState &st) {
    if (!untouched(st, Field::PubName))
        return false;
    const std::string original = st.ref.pub_name;
    const std::vector<std::string> tokens = ws_tokens(original);
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < tokens.size(); ++i)
        if (tokens[i].size() >= 5)
            eligible.push_back(i);
    if (eligible.empty())
        for (std::size_t i = 0; i < tokens.size(); ++i)
            if (tokens[i].size() >= 4)
                eligible.push_back(i);
    if (eligible.empty())
        return false;
    for (int attempt = 0; attempt < kMaxTries; ++attempt) {
        const std::size_t ti =
            eligible[static_cast<std::size_t>(st.rng.below(static_cast<int>(eligible.size())))];
        const std::string &tok = tokens[ti];
        const std::size_t cut =
            2 + static_cast<std::size_t>(st.rng.below(static_cast<int>(tok.size()) - 2));
        std::vector<std::string> out = tokens;
        out[ti] = tok.substr(0, cut);
        const std::string corrupted = join_tokens(out);
        CitedReference cand = st.ref;
        cand.pub_name = corrupted;
        if (!candidate_classifies(st, cand, Field::PubName, IacCode::I, false))
            continue;
        commit(st, Field::PubName, IacCode::I, original, corrupted);
        return true;
    }
    return false;
}

// J: a second name glued onto the author.
bool apply_j(InjectorState &st) {
    if (!untouched(st, Field::AuthorLast) || st.ref.first_author_last.empty())
        return false;
    const std::string original = st.ref.first_author_last;
    for (int attempt = 0; attempt < kMaxTries; ++attempt) {
        const std::string glue = kGlueNames[st.rng.below(3)];
        const std::string corrupted = glue + original;
        CitedReference cand = st.ref;
        cand.first_author_last = corrupted;
        if (!candidate_classifies(st, cand, Field::AuthorLast, IacCode::J, false))
            continue;
        commit(st, Field::AuthorLast, IacCode::J, original, corrupted);
        return true;
    }
    return false;
}

// K: spacing changed, nothing else.
bool apply_k(InjectorState &st) {
    for (Field field : {Field::AuthorLast, Field::PubName}) {
        if (!untouched(st, field))
            continue;
        const std::string original = ref_value(st.ref, field);
        if (original.empty())
            continue;
        std::string corrupted;
        std::vector<std::size_t> spaces;
        for (std::size_t i = 0; i < original.size(); ++i)
            if (original[i] == ' ')
                spaces.push_back(i);
        if (!spaces.empty()) {
            const std::size_t cut =
                spaces[static_cast<std::size_t>(st.rng.below(static_cast<int>(spaces.size())))];
            corrupted = original.substr(0, cut) + original.substr(cut + 1);
        } else {
            std::vector<std::size_t> insertable;
            for (std::size_t i = 1; i < original.size(); ++i) {
                const unsigned char a = static_cast<unsigned char>(original[i - 1]);
                const unsigned char b = static_cast<unsigned char>(original[i]);
                if (a < 0x80 && b < 0x80 && std::isalnum(a) && std::isalnum(b))
                    insertable.push_back(i);
            }
            if (insertable.empty())
                continue;
            const std::size_t at = insertable[static_cast<std::size_t>(
                st.rng.below(static_cast<int>(insertable.size())))];
            corrupted = original.substr(0, at) + " " + original.substr(at);
        }
        CitedReference cand = st.ref;
        set_ref_value(cand, field, corrupted);
        if (!candidate_classifies(st, cand, field, IacCode::K, false))
            continue;
        commit(st, field, IacCode::K, original, corrupted);
        return true;
    }
    return false;
}

// M: name parts migrate between surname and initials.
bool apply_m(InjectorState &st) {
    if (!untouched(st, Field::AuthorLast) || !untouched(st, Field::FirstInitial) ||
        !untouched(st, Field::SecondInitial))
        return false;
    const std::string last = st.ref.first_author_last;
    const auto spans = surname_token_spans(last);

    // (a) first surname token becomes an extra initial
    if (spans.size() >= 2 && st.ref.second_initial.empty() &&
        st.target.second_initial.empty()) {
        const auto [b, e] = spans.front();
        const char head = last[b];
        if (std::isalpha(static_cast<unsigned char>(head)) != 0) {
            std::string new_last = last.substr(spans[1].first);
            std::string new_si(1, static_cast<char>(std::toupper(static_cast<unsigned char>(head))));
            (void)e;
            CitedReference cand = st.ref;
            cand.first_author_last = new_last;
            cand.second_initial = new_si;
            if (candidate_classifies(st, cand, Field::AuthorLast, IacCode::M, false)) {
                commit(st, Field::AuthorLast, IacCode::M, last, new_last);
                commit(st, Field::SecondInitial, IacCode::M, "", new_si);
                return true;
            }
        }
    }

    // (b) initials glued onto a one-token surname
    if (spans.size() == 1 && !(st.ref.first_initial + st.ref.second_initial).empty()) {
        const std::string glued = last + st.ref.first_initial + st.ref.second_initial;
        CitedReference cand = st.ref;
        cand.first_author_last = glued;
        cand.first_initial.clear();
        cand.second_initial.clear();
        if (candidate_classifies(st, cand, Field::AuthorLast, IacCode::M, false)) {
            const std::string old_fi = st.ref.first_initial;
            const std::string old_si = st.ref.second_initial;
            commit(st, Field::AuthorLast, IacCode::M, last, glued);
            if (!old_fi.empty())
                commit(st, Field::FirstInitial, IacCode::M, old_fi, "");
            if (!old_si.empty())
                commit(st, Field::SecondInitial, IacCode::M, old_si, "");
            return true;
        }
    }
    return false;
}

// N: extra words wrapped around the publication name.
bool apply_n(InjectorState &st) {
    if (!untouched(st, Field::PubName) || st.ref.pub_name.empty())
        return false;
    const std::string original = st.ref.pub_name;
    const std::string variants[] = {"IN PRESS " + original, original + " SUPPL",
                                    original + " PT 2"};
    const int start = st.rng.below(3);
    for (int off = 0; off < 3; ++off) {
        const std::string &corrupted = variants[(start + off) % 3];
        CitedReference cand = st.ref;
        cand.pub_name = corrupted;
        if (!candidate_classifies(st, cand, Field::PubName, IacCode::N, false))
            continue;
        commit(st, Field::PubName, IacCode::N, original, corrupted);
        return true;
    }
    return false;
}

// O: the reference names a co-author instead of the first author.
bool apply_o(InjectorState &st) {
    if (!untouched(st, Field::AuthorLast) || !untouched(st, Field::FirstInitial) ||
        !untouched(st, Field::SecondInitial))
        return false;
    if (st.target.all_authors.size() < 2)
        return false;
    const Author &a = st.target.all_authors[static_cast<std::size_t>(
        1 + st.rng.below(static_cast<int>(st.target.all_authors.size()) - 1))];
    CitedReference cand = st.ref;
    cand.first_author_last = a.last;
    cand.first_initial = a.initials.empty() ? "" : a.initials.substr(0, 1);
    cand.second_initial = a.initials.size() > 1 ? a.initials.substr(1, 1) : "";
    if (!candidate_classifies(st, cand, Field::AuthorLast, IacCode::O, false))
        return false;
    for (Field field : {Field::AuthorLast, Field::FirstInitial, Field::SecondInitial}) {
        const std::string before = ref_value(st.ref, field);
        const std::string after = ref_value(cand, field);
        if (before != after)
            commit(st, field, IacCode::O, before, after);
        else
            st.touched.insert(field);
    }
    return true;
}

// Q: decorated letters replaced by a folded spelling.
bool apply_q(InjectorState &st) {
    for (Field field : {Field::AuthorLast, Field::PubName}) {
        if (!untouched(st, field))
            continue;
        const std::string original = ref_value(st.ref, field);
        if (!textnorm::has_diacritics(original))
            continue;
        const std::string folded = st.rng.below(2) == 0
                                       ? textnorm::fold_diacritics(original)
                                       : textnorm::fold_diacritics_expanded(original);
        if (folded == original)
            continue;
        CitedReference cand = st.ref;
        set_ref_value(cand, field, folded);
        if (!candidate_classifies(st, cand, field, IacCode::Q, false))
            continue;
        commit(st, field, IacCode::Q, original, folded);
        return true;
    }
    return false;
}

// R: punctuation-only difference.
bool apply_r(InjectorState &st) {
    const int start = st.rng.below(3);
    for (int off = 0; off < 3; ++off) {
        const int option = (start + off) % 3;
        if (option == 0 && untouched(st, Field::FirstInitial) &&
            !st.ref.first_initial.empty()) {
            const std::string original = st.ref.first_initial;
            std::string corrupted;
            if (original.find('.') == std::string::npos) {
                corrupted = original + ".";
            } else {
                for (char c : original)
                    if (c != '.')
                        corrupted.push_back(c);
            }
            CitedReference cand = st.ref;
            cand.first_initial = corrupted;
            if (candidate_classifies(st, cand, Field::FirstInitial, IacCode::R, false)) {
                commit(st, Field::FirstInitial, IacCode::R, original, corrupted);
                return true;
            }
        } else if (option == 1 && untouched(st, Field::AuthorLast)) {
            const std::string original = st.ref.first_author_last;
            std::string corrupted;
            bool had_punct = false;
            for (char c : original) {
                const unsigned char u = static_cast<unsigned char>(c);
                if (u < 0x80 && std::ispunct(u)) {
                    had_punct = true;
                    continue;
                }
                corrupted.push_back(c);
            }
            if (!had_punct)
                continue;
            CitedReference cand = st.ref;
            cand.first_author_last = corrupted;
            if (candidate_classifies(st, cand, Field::AuthorLast, IacCode::R, false)) {
                commit(st, Field::AuthorLast, IacCode::R, original, corrupted);
                return true;
            }
        } else if (option == 2 && untouched(st, Field::PubName) && !st.ref.pub_name.empty()) {
            const std::string original = st.ref.pub_name;
            const std::string corrupted = original + ".";
            CitedReference cand = st.ref;
            cand.pub_name = corrupted;
            if (candidate_classifies(st, cand, Field::PubName, IacCode::R, false)) {
                commit(st, Field::PubName, IacCode::R, original, corrupted);
                return true;
            }
        }
    }
    return false;
}

// S: extra digits appended.
bool apply_s(InjectorState &st) {
    std::vector<Field> fields;
    for (Field field : {Field::Volume, Field::StartPage, Field::Issue}) {
        const std::string v = ref_value(st.ref, field);
        if (untouched(st, field) && !v.empty() && digits_only(v).size() == v.size())
            fields.push_back(field);
    }
    while (!fields.empty()) {
        const int pick = st.rng.below(static_cast<int>(fields.size()));
        const Field field = fields[static_cast<std::size_t>(pick)];
        fields.erase(fields.begin() + pick);
        const std::string original = ref_value(st.ref, field);
        for (int attempt = 0; attempt < kMaxTries; ++attempt) {
            std::string corrupted = original;
            const int extra = 1 + st.rng.below(2);
            for (int i = 0; i < extra; ++i)
                corrupted.push_back(static_cast<char>('0' + st.rng.below(10)));
            CitedReference cand = st.ref;
            set_ref_value(cand, field, corrupted);
            if (!candidate_classifies(st, cand, field, IacCode::S, false))
                continue;
            commit(st, field, IacCode::S, original, corrupted);
            return true;
        }
    }
    return false;
}

// T: the number drifts by 1 or 2 (whole value or a single digit).
bool apply_t(InjectorState &st) {
    std::vector<Field> fields;
    for (Field field : {Field::PubYear, Field::Volume, Field::StartPage, Field::Issue}) {
        const std::string v = ref_value(st.ref, field);
        if (untouched(st, field) && !v.empty() && digits_only(v).size() == v.size() &&
            v.size() <= 18)
            fields.push_back(field);
    }
    while (!fields.empty()) {
        const int pick = st.rng.below(static_cast<int>(fields.size()));
        const Field field = fields[static_cast<std::size_t>(pick)];
        fields.erase(fields.begin() + pick);
        const std::string original = ref_value(st.ref, field);
        for (int attempt = 0; attempt < kMaxTries; ++attempt) {
            std::string corrupted;
            if (st.rng.below(2) == 0) {
                const long long delta =
                    (1 + st.rng.below(2)) * (st.rng.below(2) == 0 ? 1 : -1);
                const long long v = std::stoll(original) + delta;
                if (v < 1)
                    continue;
                if (field == Field::PubYear && (v < 1400 || v > 2200))
                    continue;
                corrupted = std::to_string(v);
            } else {
                corrupted = original;
                const std::size_t lo = field == Field::PubYear && corrupted.size() == 4 ? 2 : 0;
                const std::size_t pos =
                    lo + static_cast<std::size_t>(
                             st.rng.below(static_cast<int>(corrupted.size() - lo)));
                const int delta = (1 + st.rng.below(2)) * (st.rng.below(2) == 0 ? 1 : -1);
                const int digit = corrupted[pos] - '0' + delta;
                if (digit < 0 || digit > 9)
                    continue;
                corrupted[pos] = static_cast<char>('0' + digit);
                if (corrupted.size() > 1 && corrupted[0] == '0')
                    continue;
                if (corrupted == original)
                    continue;
            }
            CitedReference cand = st.ref;
            set_ref_value(cand, field, corrupted);
            if (!candidate_classifies(st, cand, field, IacCode::T, false))
                continue;
            commit(st, field, IacCode::T, original, corrupted);
            return true;
        }
    }
    return false;
}

// U: the initial expanded to a full first name.
bool apply_u(InjectorState &st) {
    if (!untouched(st, Field::FirstInitial))
        return false;
    const std::string original = st.ref.first_initial;
    std::string letters;
    for (char c : original)
        if (std::isalpha(static_cast<unsigned char>(c)))
            letters.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (letters.size() != 1)
        return false;
    const std::string corrupted = kExpansionNames[letters[0] - 'A'];
    CitedReference cand = st.ref;
    cand.first_initial = corrupted;
    if (!candidate_classifies(st, cand, Field::FirstInitial, IacCode::U, false))
        return false;
    commit(st, Field::FirstInitial, IacCode::U, original, corrupted);
    return true;
}

struct CodeSpec {
    const char *code;
    IacCode log_code;       // representative code for skip rows
    Field skip_field;       // representative field for skip rows
    bool (*apply)(InjectorState &);
};

const CodeSpec kCodeSpecs[] = {
    {"B", IacCode::B, Field::AuthorLast, apply_b},
    {"D", IacCode::D, Field::AuthorLast, apply_d},
    {"E", IacCode::E, Field::SecondInitial, apply_e},
    {"F", IacCode::F, Field::Volume, apply_f},
    {"G", IacCode::G4, Field::Volume, apply_g},
    {"H", IacCode::H, Field::StartPage, apply_h},
    {"I", IacCode::I, Field::PubName, apply_i},
    {"J", IacCode::J, Field::AuthorLast, apply_j},
    {"K", IacCode::K, Field::AuthorLast, apply_k},
    {"M", IacCode::M, Field::AuthorLast, apply_m},
    {"N", IacCode::N, Field::PubName, apply_n},
    {"O", IacCode::O, Field::AuthorLast, apply_o},
    {"Q", IacCode::Q, Field::AuthorLast, apply_q},
    {"R", IacCode::R, Field::FirstInitial, apply_r},
    {"S", IacCode::S, Field::Volume, apply_s},
    {"T", IacCode::T, Field::PubYear, apply_t},
    {"U", IacCode::U, Field::FirstInitial, apply_u},
};

}  // namespace

InjectionResult inject(const Corpus &corpus, const InjectionPlan &plan) {
    validate_plan(plan);

    std::unordered_map<std::string, const GroundTruthLink *> links;
    for (const GroundTruthLink &l : corpus.links)
        links.emplace(l.ref_id, &l);
    std::unordered_map<std::string, const TargetArticle *> targets;
    for (const TargetArticle &t : corpus.targets)
        targets.emplace(t.id, &t);

    InjectionResult result;
    result.refs = corpus.refs;
    Rng rng(plan.seed);

    for (CitedReference &ref : result.refs) {
        const auto link_it = links.find(ref.ref_id);
        if (link_it == links.end() || !link_it->second->truly_cites)
            continue;
        const auto target_it = targets.find(link_it->second->true_target_id);
        if (target_it == targets.end())
            continue;

        std::vector<const CodeSpec *> drawn;
        for (const CodeSpec &spec : kCodeSpecs) {
            const auto rate_it = plan.per_code_rates.find(spec.code);
            const double rate = rate_it == plan.per_code_rates.end() ? 0.0 : rate_it->second;
            if (rng.chance(rate))
                drawn.push_back(&spec);
        }
        if (drawn.size() >= 2 && !rng.chance(plan.multi_inaccuracy_rate)) {
            const CodeSpec *keep = drawn[static_cast<std::size_t>(
                rng.below(static_cast<int>(drawn.size())))];
            drawn = {keep};
        }
        if (drawn.empty())
            continue;

        InjectorState st{rng, ref, *target_it->second, {}, &result.log};
        for (const CodeSpec *spec : drawn) {
            if (!spec->apply(st))
                result.log.push_back(
                    {ref.ref_id, spec->skip_field, spec->log_code, "", "", false});
        }
    }
    return result;
}

PhantomResult inject_phantoms(const Corpus &corpus, const InjectionPlan &plan) {
    validate_plan(plan);
    PhantomResult result;
    result.refs = corpus.refs;
    result.links = corpus.links;

    const long long want =
        std::llround(plan.phantom_rate * static_cast<double>(corpus.refs.size()));
    if (want <= 0 || corpus.targets.size() < 2)
        return result;

    // Best decoy for each target: shared surname prefix and cross-domain
    // confusion score, ties to the earliest target.
    const std::size_t nt = corpus.targets.size();
    std::vector<std::string> prefix(nt);
    for (std::size_t i = 0; i < nt; ++i) {
        const std::string key = upper_key(corpus.targets[i].first_author_last);
        prefix[i] = key.substr(0, 4);
    }
    std::vector<std::size_t> best(nt, SIZE_MAX);
    std::vector<int> best_score(nt, -1);
    for (std::size_t a = 0; a < nt; ++a) {
        for (std::size_t p = 0; p < nt; ++p) {
            if (p == a)
                continue;
            int score = 0;
            if (prefix[a].size() == 4 && prefix[a] == prefix[p])
                score += 4;
            if (corpus.targets[a].domain != corpus.targets[p].domain)
                score += 2;
            if (corpus.targets[a].volume == corpus.targets[p].volume)
                score += 1;
            if (corpus.targets[a].pub_year == corpus.targets[p].pub_year)
                score += 1;
            if (score > best_score[a]) {
                best_score[a] = score;
                best[a] = p;
            }
        }
    }

    std::unordered_map<std::string, std::size_t> target_index;
    for (std::size_t i = 0; i < nt; ++i)
        target_index.emplace(corpus.targets[i].id, i);
    std::unordered_map<std::string, std::size_t> link_index;
    for (std::size_t i = 0; i < result.links.size(); ++i)
        link_index.emplace(result.links[i].ref_id, i);

    struct Candidate {
        int score;
        std::size_t ref_idx;
        const std::string *ref_id;
    };
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < result.refs.size(); ++i) {
        const auto li = link_index.find(result.refs[i].ref_id);
        if (li == link_index.end())
            continue;
        const GroundTruthLink &link = result.links[li->second];
        if (!link.truly_cites)
            continue;
        const auto ti = target_index.find(link.true_target_id);
        if (ti == target_index.end() || best[ti->second] == SIZE_MAX)
            continue;
        candidates.push_back({best_score[ti->second], i, &result.refs[i].ref_id});
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate &a, const Candidate &b) {
        if (a.score != b.score)
            return a.score > b.score;
        return *a.ref_id < *b.ref_id;
    });
    const std::size_t take =
        std::min(candidates.size(), static_cast<std::size_t>(want));

    for (std::size_t c = 0; c < take; ++c) {
        CitedReference &ref = result.refs[candidates[c].ref_idx];
        GroundTruthLink &link = result.links[link_index.at(ref.ref_id)];
        const std::size_t orig_idx = target_index.at(link.true_target_id);
        const TargetArticle &phantom = corpus.targets[best[orig_idx]];

        result.log.push_back({ref.ref_id, link.true_target_id, phantom.id});
        ref.first_author_last = phantom.first_author_last;
        ref.first_initial = phantom.first_initial;
        ref.second_initial = phantom.second_initial;
        ref.pub_year = phantom.pub_year;
        ref.pub_name = phantom.pub_name_abbrevs.empty() ? phantom.pub_name_full
                                                        : phantom.pub_name_abbrevs.front();
        ref.volume = phantom.volume;
        ref.start_page = phantom.start_page;
        ref.issue.clear();
        ref.doi.clear();
        link.true_target_id.clear();
        link.truly_cites = false;
        link.phantom_target_id = phantom.id;
    }
    return result;
}

DuplicateResult inject_duplicates(const std::vector<TargetArticle> &targets,
                                  const InjectionPlan &plan) {
    validate_plan(plan);
    DuplicateResult result;
    result.targets = targets;
    const long long want =
        std::llround(plan.duplicate_target_rate * static_cast<double>(targets.size()));
    if (want <= 0 || targets.empty())
        return result;

    Rng rng(plan.seed);
    std::set<std::size_t> chosen;
    const std::size_t limit = std::min(static_cast<std::size_t>(want), targets.size());
    int attempts = 0;
    while (chosen.size() < limit && attempts < static_cast<int>(limit) * 64 + 64) {
        chosen.insert(static_cast<std::size_t>(rng.below(static_cast<int>(targets.size()))));
        ++attempts;
    }

    int counter = 0;
    for (std::size_t idx : chosen) {
        TargetArticle dup = targets[idx];
        dup.id = idfmt("D%04d", ++counter);
        dup.accumulated_citations = dup.accumulated_citations >= 2
                                        ? dup.accumulated_citations / 2
                                        : dup.accumulated_citations + 50;
        result.log.push_back({targets[idx].id, dup.id});
        result.targets.push_back(std::move(dup));
    }
    return result;
}

bool fixtures_self_check(std::string *problem) {
    auto fail = [&](const std::string &msg) {
        if (problem != nullptr)
            *problem = msg;
        return false;
    };

    struct NameKeys {
        std::string display;
        std::string plain;
        std::string expanded;
    };
    std::vector<NameKeys> names;
    for (const FixtureAuthor &a : kFirstAuthors)
        names.push_back({a.last, upper_key(a.last), upper_key_expanded(a.last)});
    for (const FixtureAuthor &a : kCoAuthors)
        names.push_back({a.last, upper_key(a.last), upper_key_expanded(a.last)});

    for (std::size_t i = 0; i < names.size(); ++i) {
        for (std::size_t j = i + 1; j < names.size(); ++j) {
            const NameKeys &a = names[i];
            const NameKeys &b = names[j];
            for (const std::string &x : {a.plain, a.expanded})
                for (const std::string &y : {b.plain, b.expanded})
                    if (x == y)
                        return fail("surnames share a spelling variant: " + a.display +
                                    " vs " + b.display);
            const std::size_t d = metrics::levenshtein(a.plain, b.plain);
            if (d < 3)
                return fail("surnames too close (" + std::to_string(d) + " edits): " +
                            a.display + " vs " + b.display);
            std::string sa = a.plain;
            std::string sb = b.plain;
            std::sort(sa.begin(), sa.end());
            std::sort(sb.begin(), sb.end());
            if (sa == sb)
                return fail("surnames are anagrams: " + a.display + " vs " + b.display);
        }
    }

    for (const char *glue : kGlueNames) {
        const std::string key = upper_key(glue);
        for (const NameKeys &n : names)
            if (n.plain == key || n.expanded == key)
                return fail(std::string("glue name collides with a surname: ") + glue);
    }

    for (int i = 0; i < 26; ++i) {
        const std::string name = kExpansionNames[i];
        if (name.empty() ||
            std::toupper(static_cast<unsigned char>(name[0])) != 'A' + i)
            return fail("expansion name for letter " + std::string(1, char('A' + i)) +
                        " is wrong: " + name);
    }

    std::vector<std::vector<std::string>> journal_keys;
    for (const FixtureJournal &j : kJournals) {
        std::vector<std::string> keys{upper_key(j.full)};
        for (const char *a : j.abbrevs)
            if (a != nullptr)
                keys.push_back(upper_key(a));
        journal_keys.push_back(std::move(keys));
    }
    for (std::size_t i = 0; i < journal_keys.size(); ++i) {
        for (std::size_t k = 0; k < journal_keys[i].size(); ++k)
            for (std::size_t l = k + 1; l < journal_keys[i].size(); ++l)
                if (journal_keys[i][k] == journal_keys[i][l])
                    return fail(std::string("journal lists a duplicate key: ") +
                                kJournals[i].full);
        for (std::size_t j = i + 1; j < journal_keys.size(); ++j) {
            for (const std::string &x : journal_keys[i]) {
                for (const std::string &y : journal_keys[j]) {
                    const std::size_t d = metrics::levenshtein(x, y);
                    if (d < 3)
                        return fail("journal keys too close (" + std::to_string(d) +
                                    " edits): " + std::string(kJournals[i].full) + " vs " +
                                    kJournals[j].full);
                }
            }
        }
    }
    return true;
}

}  // namespace citmatch::forge
