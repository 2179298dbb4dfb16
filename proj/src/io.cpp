#include <cctype>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "citmatch/errors.hpp"
#include "citmatch/io.hpp"

namespace citmatch::io {

namespace {

using nlohmann::json;

// --- atomic plain-text plumbing ------------------------------------------------

void atomic_write_text(const std::string &path, const std::string &content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot open for writing: " + tmp);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out)
            throw IoError("short write: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw IoError("cannot rename " + tmp + " to " + path);
    }
}

std::vector<std::string> read_lines(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open for reading: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

// --- JSON field helpers (throw std::runtime_error; callers turn that into
// a ParseIssue carrying the line number) -----------------------------------------

void check_keys(const json &j, const std::set<std::string> &allowed) {
    for (const auto &item : j.items())
        if (allowed.find(item.key()) == allowed.end())
            throw std::runtime_error("unknown key: " + item.key());
}

std::string req_string(const json &j, const char *key) {
    if (!j.contains(key))
        throw std::runtime_error(std::string("missing key: ") + key);
    if (!j.at(key).is_string())
        throw std::runtime_error(std::string(key) + " must be a string");
    return j.at(key).get<std::string>();
}

std::string opt_string(const json &j, const char *key) {
    if (!j.contains(key) || j.at(key).is_null())
        return "";
    if (!j.at(key).is_string())
        throw std::runtime_error(std::string(key) + " must be a string");
    return j.at(key).get<std::string>();
}

long long req_int(const json &j, const char *key) {
    if (!j.contains(key))
        throw std::runtime_error(std::string("missing key: ") + key);
    if (!j.at(key).is_number_integer())
        throw std::runtime_error(std::string(key) + " must be an integer");
    return j.at(key).get<long long>();
}

long long opt_int(const json &j, const char *key, long long fallback) {
    if (!j.contains(key) || j.at(key).is_null())
        return fallback;
    if (!j.at(key).is_number_integer())
        throw std::runtime_error(std::string(key) + " must be an integer");
    return j.at(key).get<long long>();
}

bool opt_bool(const json &j, const char *key, bool fallback) {
    if (!j.contains(key) || j.at(key).is_null())
        return fallback;
    if (!j.at(key).is_boolean())
        throw std::runtime_error(std::string(key) + " must be a boolean");
    return j.at(key).get<bool>();
}

// --- JSONL framework -------------------------------------------------------------

std::string header_line(const char *format) {
    json h;
    h["format"] = format;
    h["version"] = 1;
    return h.dump();
}

template <typename T, typename ParseFn>
std::vector<T> read_jsonl(const std::string &path, const char *format, ParseFn parse) {
    const std::vector<std::string> lines = read_lines(path);
    std::vector<ParseIssue> issues;

    std::size_t first = 0;
    while (first < lines.size() && lines[first].empty())
        ++first;
    if (first == lines.size()) {
        issues.push_back({1, std::string("missing header (expected format ") + format + ")"});
        throw CorpusParseError(path, std::move(issues));
    }
    try {
        const json h = json::parse(lines[first]);
        if (!h.is_object() || opt_string(h, "format") != format)
            throw std::runtime_error(std::string("header format must be \"") + format + "\"");
        if (opt_int(h, "version", 0) != 1)
            throw std::runtime_error("unsupported version (expected 1)");
    } catch (const std::exception &e) {
        issues.push_back({first + 1, std::string("bad header: ") + e.what()});
        throw CorpusParseError(path, std::move(issues));
    }

    std::vector<T> records;
    for (std::size_t i = first + 1; i < lines.size(); ++i) {
        if (lines[i].empty())
            continue;
        try {
            const json j = json::parse(lines[i]);
            if (!j.is_object())
                throw std::runtime_error("record must be a JSON object");
            records.push_back(parse(j));
        } catch (const std::exception &e) {
            issues.push_back({i + 1, e.what()});
        }
    }
    if (!issues.empty())
        throw CorpusParseError(path, std::move(issues));
    return records;
}

template <typename T, typename DumpFn>
void write_jsonl(const std::string &path, const char *format, const std::vector<T> &records,
                 DumpFn dump) {
    std::string content = header_line(format);
    content.push_back('\n');
    for (const T &r : records) {
        content += dump(r).dump();
        content.push_back('\n');
    }
    atomic_write_text(path, content);
}

// --- record codecs -----------------------------------------------------------------

json target_to_json(const TargetArticle &t) {
    json j;
    j["id"] = t.id;
    j["first_author_last"] = t.first_author_last;
    j["first_initial"] = t.first_initial;
    j["second_initial"] = t.second_initial;
    json authors = json::array();
    for (const Author &a : t.all_authors)
        authors.push_back({{"last", a.last}, {"initials", a.initials}});
    j["all_authors"] = std::move(authors);
    j["pub_year"] = t.pub_year;
    j["pub_name_full"] = t.pub_name_full;
    j["pub_name_abbrevs"] = t.pub_name_abbrevs;
    j["volume"] = t.volume;
    j["issue"] = t.issue;
    j["start_page"] = t.start_page;
    j["end_page"] = t.end_page;
    j["doi"] = t.doi;
    j["article_title"] = t.article_title;
    j["domain"] = to_string(t.domain);
    j["accumulated_citations"] = t.accumulated_citations;
    return j;
}

TargetArticle target_from_json(const json &j) {
    check_keys(j, {"id", "first_author_last", "first_initial", "second_initial", "all_authors",
                   "pub_year", "pub_name_full", "pub_name_abbrevs", "volume", "issue",
                   "start_page", "end_page", "doi", "article_title", "domain",
                   "accumulated_citations"});
    TargetArticle t;
    t.id = req_string(j, "id");
    t.first_author_last = req_string(j, "first_author_last");
    t.first_initial = opt_string(j, "first_initial");
    t.second_initial = opt_string(j, "second_initial");
    if (j.contains("all_authors")) {
        if (!j.at("all_authors").is_array())
            throw std::runtime_error("all_authors must be an array");
        for (const json &a : j.at("all_authors")) {
            if (!a.is_object())
                throw std::runtime_error("all_authors entries must be objects");
            check_keys(a, {"last", "initials"});
            t.all_authors.push_back({req_string(a, "last"), opt_string(a, "initials")});
        }
    }
    t.pub_year = static_cast<int>(req_int(j, "pub_year"));
    t.pub_name_full = req_string(j, "pub_name_full");
    if (j.contains("pub_name_abbrevs")) {
        if (!j.at("pub_name_abbrevs").is_array())
            throw std::runtime_error("pub_name_abbrevs must be an array");
        for (const json &a : j.at("pub_name_abbrevs")) {
            if (!a.is_string())
                throw std::runtime_error("pub_name_abbrevs entries must be strings");
            t.pub_name_abbrevs.push_back(a.get<std::string>());
        }
    }
    t.volume = opt_string(j, "volume");
    t.issue = opt_string(j, "issue");
    t.start_page = opt_string(j, "start_page");
    t.end_page = opt_string(j, "end_page");
    t.doi = opt_string(j, "doi");
    t.article_title = opt_string(j, "article_title");
    const std::string domain = opt_string(j, "domain");
    if (!domain.empty()) {
        const auto d = domain_from_string(domain);
        if (!d)
            throw std::runtime_error("unknown domain: " + domain);
        t.domain = *d;
    }
    t.accumulated_citations = opt_int(j, "accumulated_citations", 0);
    return t;
}

json ref_to_json(const CitedReference &r) {
    json j;
    j["ref_id"] = r.ref_id;
    j["source_article_id"] = r.source_article_id;
    j["first_author_last"] = r.first_author_last;
    j["first_initial"] = r.first_initial;
    j["second_initial"] = r.second_initial;
    if (r.pub_year)
        j["pub_year"] = *r.pub_year;
    else
        j["pub_year"] = nullptr;
    j["pub_name"] = r.pub_name;
    j["volume"] = r.volume;
    j["issue"] = r.issue;
    j["start_page"] = r.start_page;
    j["doi"] = r.doi;
    return j;
}

CitedReference ref_from_json(const json &j) {
    if (j.contains("compact")) {
        check_keys(j, {"ref_id", "source_article_id", "compact"});
        CitedReference r = parse_compact_reference(req_string(j, "compact"));
        r.ref_id = req_string(j, "ref_id");
        r.source_article_id = opt_string(j, "source_article_id");
        return r;
    }
    check_keys(j, {"ref_id", "source_article_id", "first_author_last", "first_initial",
                   "second_initial", "pub_year", "pub_name", "volume", "issue", "start_page",
                   "doi"});
    CitedReference r;
    r.ref_id = req_string(j, "ref_id");
    r.source_article_id = opt_string(j, "source_article_id");
    r.first_author_last = opt_string(j, "first_author_last");
    r.first_initial = opt_string(j, "first_initial");
    r.second_initial = opt_string(j, "second_initial");
    if (j.contains("pub_year") && !j.at("pub_year").is_null()) {
        if (!j.at("pub_year").is_number_integer())
            throw std::runtime_error("pub_year must be an integer or null");
        r.pub_year = j.at("pub_year").get<int>();
    }
    r.pub_name = opt_string(j, "pub_name");
    r.volume = opt_string(j, "volume");
    r.issue = opt_string(j, "issue");
    r.start_page = opt_string(j, "start_page");
    r.doi = opt_string(j, "doi");
    return r;
}

json link_to_json(const GroundTruthLink &l) {
    json j;
    j["ref_id"] = l.ref_id;
    j["true_target_id"] = l.true_target_id;
    j["truly_cites"] = l.truly_cites;
    j["phantom_target_id"] = l.phantom_target_id;
    return j;
}

GroundTruthLink link_from_json(const json &j) {
    check_keys(j, {"ref_id", "true_target_id", "truly_cites", "phantom_target_id"});
    GroundTruthLink l;
    l.ref_id = req_string(j, "ref_id");
    l.true_target_id = opt_string(j, "true_target_id");
    l.truly_cites = opt_bool(j, "truly_cites", true);
    l.phantom_target_id = opt_string(j, "phantom_target_id");
    return l;
}

json match_to_json(const MatchRecord &m) {
    json j;
    j["ref_id"] = m.ref_id;
    j["outcome"] = to_string(m.outcome);
    json cands = json::array();
    for (const MatchedTarget &mt : m.matched_targets)
        cands.push_back({{"target", mt.first}, {"rule", mt.second}});
    j["matched_targets"] = std::move(cands);
    j["selected_target"] = m.selected_target;
    return j;
}

MatchRecord match_from_json(const json &j) {
    check_keys(j, {"ref_id", "outcome", "matched_targets", "selected_target"});
    MatchRecord m;
    m.ref_id = req_string(j, "ref_id");
    const std::string outcome = req_string(j, "outcome");
    const auto o = match_outcome_from_string(outcome);
    if (!o)
        throw std::runtime_error("unknown outcome: " + outcome);
    m.outcome = *o;
    if (j.contains("matched_targets")) {
        if (!j.at("matched_targets").is_array())
            throw std::runtime_error("matched_targets must be an array");
        for (const json &c : j.at("matched_targets")) {
            if (!c.is_object())
                throw std::runtime_error("matched_targets entries must be objects");
            check_keys(c, {"target", "rule"});
            m.matched_targets.emplace_back(req_string(c, "target"),
                                           static_cast<int>(opt_int(c, "rule", -1)));
        }
    }
    m.selected_target = opt_string(j, "selected_target");
    return m;
}

// --- TSV plumbing ---------------------------------------------------------------

std::string escape_tsv(const std::string &s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '\\':
                out += "\\\\";
                break;
            case '\t':
                out += "\\t";
                break;
            case '\n':
                out += "\\n";
                break;
            default:
                out.push_back(c);
        }
    }
    return out;
}

std::string unescape_tsv(const std::string &s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '\\' || i + 1 == s.size()) {
            out.push_back(s[i]);
            continue;
        }
        ++i;
        switch (s[i]) {
            case '\\':
                out.push_back('\\');
                break;
            case 't':
                out.push_back('\t');
                break;
            case 'n':
                out.push_back('\n');
                break;
            default:
                out.push_back('\\');
                out.push_back(s[i]);
        }
    }
    return out;
}

std::vector<std::string> split_tsv(const std::string &line) {
    std::vector<std::string> cols;
    std::string cur;
    for (char c : line) {
        if (c == '\t') {
            cols.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    cols.push_back(cur);
    return cols;
}

// Reads a TSV export: checks the "#citmatch-<name> v1" first line, skips
// other '#' lines, hands data rows to `parse` (which may throw).
template <typename T, typename ParseFn>
std::vector<T> read_tsv(const std::string &path, const std::string &header, ParseFn parse) {
    const std::vector<std::string> lines = read_lines(path);
    std::vector<ParseIssue> issues;
    if (lines.empty() || lines[0] != header) {
        issues.push_back({1, "missing header (expected \"" + header + "\")"});
        throw CorpusParseError(path, std::move(issues));
    }
    std::vector<T> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::string &line = lines[i];
        if (line.empty() || line[0] == '#')
            continue;
        try {
            rows.push_back(parse(split_tsv(line)));
        } catch (const std::exception &e) {
            issues.push_back({i + 1, e.what()});
        }
    }
    if (!issues.empty())
        throw CorpusParseError(path, std::move(issues));
    return rows;
}

const char *kInjectionHeader = "#citmatch-injection-log v1";
const char *kPhantomHeader = "#citmatch-phantom-log v1";
const char *kDuplicateHeader = "#citmatch-duplicate-log v1";
const char *kAnnotationsHeader = "#citmatch-annotations v1";
const char *kExcludeHeader = "# citmatch-exclude v1";

}  // namespace

// --- JSONL entry points ------------------------------------------------------------

void write_targets(const std::string &path, const std::vector<TargetArticle> &targets) {
    write_jsonl(path, "citmatch-targets", targets, target_to_json);
}

std::vector<TargetArticle> read_targets(const std::string &path) {
    return read_jsonl<TargetArticle>(path, "citmatch-targets", target_from_json);
}

void write_refs(const std::string &path, const std::vector<CitedReference> &refs) {
    write_jsonl(path, "citmatch-refs", refs, ref_to_json);
}

std::vector<CitedReference> read_refs(const std::string &path) {
    return read_jsonl<CitedReference>(path, "citmatch-refs", ref_from_json);
}

void write_links(const std::string &path, const std::vector<GroundTruthLink> &links) {
    write_jsonl(path, "citmatch-links", links, link_to_json);
}

std::vector<GroundTruthLink> read_links(const std::string &path) {
    return read_jsonl<GroundTruthLink>(path, "citmatch-links", link_from_json);
}

void write_matches(const std::string &path, const std::vector<MatchRecord> &matches) {
    write_jsonl(path, "citmatch-matches", matches, match_to_json);
}

std::vector<MatchRecord> read_matches(const std::string &path) {
    return read_jsonl<MatchRecord>(path, "citmatch-matches", match_from_json);
}

// --- compact cited-reference strings --------------------------------------------

namespace {

std::string trim_copy(const std::string &s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(b, e - b);
}

bool all_digits(const std::string &s) {
    if (s.empty())
        return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return false;
    return true;
}

// "DQ" / "D.Q." -> per-letter units with attached periods; "Thomas" stays whole.
bool looks_like_initials(const std::string &token) {
    std::string letters;
    for (char c : token) {
        if (c == '.')
            continue;
        if (!std::isalpha(static_cast<unsigned char>(c)))
            return false;
        if (!std::isupper(static_cast<unsigned char>(c)))
            return false;
        letters.push_back(c);
    }
    return !letters.empty() && letters.size() <= 3;
}

void split_initials(const std::string &token, std::string &first, std::string &second) {
    std::vector<std::string> units;
    for (char c : token) {
        if (c == '.' && !units.empty())
            units.back().push_back('.');
        else
            units.push_back(std::string(1, c));
    }
    if (!units.empty())
        first = units[0];
    if (units.size() > 1)
        second = units[1];
}

}  // namespace

CitedReference parse_compact_reference(const std::string &compact) {
    CitedReference r;
    std::vector<std::string> segments;
    {
        std::string cur;
        for (char c : compact) {
            if (c == ',') {
                segments.push_back(trim_copy(cur));
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        segments.push_back(trim_copy(cur));
    }
    if (segments.empty())
        return r;

    // author block
    {
        const std::string &block = segments[0];
        std::vector<std::string> tokens;
        std::string cur;
        for (char c : block) {
            if (std::isspace(static_cast<unsigned char>(c))) {
                if (!cur.empty()) {
                    tokens.push_back(cur);
                    cur.clear();
                }
            } else {
                cur.push_back(c);
            }
        }
        if (!cur.empty())
            tokens.push_back(cur);
        if (tokens.size() == 1) {
            r.first_author_last = tokens[0];
        } else if (tokens.size() > 1) {
            std::string last;
            for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
                if (!last.empty())
                    last.push_back(' ');
                last += tokens[i];
            }
            r.first_author_last = last;
            const std::string &tail = tokens.back();
            if (looks_like_initials(tail))
                split_initials(tail, r.first_initial, r.second_initial);
            else
                r.first_initial = tail;  // a spelled-out forename
        }
    }

    for (std::size_t i = 1; i < segments.size(); ++i) {
        const std::string &seg = segments[i];
        if (seg.empty())
            continue;
        if (!r.pub_year && all_digits(seg) && seg.size() == 4) {
            r.pub_year = std::stoi(seg);
            continue;
        }
        if (seg.size() >= 2 && (seg[0] == 'V' || seg[0] == 'v') && all_digits(seg.substr(1))) {
            r.volume = seg.substr(1);
            continue;
        }
        if (seg.size() >= 2 && (seg[0] == 'P' || seg[0] == 'p') && all_digits(seg.substr(1))) {
            r.start_page = seg.substr(1);
            continue;
        }
        if (seg.size() >= 4) {
            std::string head = seg.substr(0, 4);
            for (char &c : head)
                c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            if (head == "DOI ") {
                r.doi = trim_copy(seg.substr(4));
                continue;
            }
        }
        if (r.pub_name.empty())
            r.pub_name = seg;
        else
            r.pub_name += " " + seg;
    }
    return r;
}

// --- TSV entry points ---------------------------------------------------------------

void write_injection_log(const std::string &path,
                         const std::vector<forge::InjectionLogRow> &log) {
    std::string content = kInjectionHeader;
    content += "\n#ref_id\tfield\tcode\toriginal\tcorrupted\tapplied\n";
    for (const forge::InjectionLogRow &row : log) {
        content += escape_tsv(row.ref_id);
        content += '\t';
        content += to_string(row.field);
        content += '\t';
        content += taxonomy::to_string(row.code);
        content += '\t';
        content += escape_tsv(row.original);
        content += '\t';
        content += escape_tsv(row.corrupted);
        content += '\t';
        content += row.applied ? '1' : '0';
        content += '\n';
    }
    atomic_write_text(path, content);
}

std::vector<forge::InjectionLogRow> read_injection_log(const std::string &path) {
    return read_tsv<forge::InjectionLogRow>(
        path, kInjectionHeader, [](const std::vector<std::string> &cols) {
            if (cols.size() != 6)
                throw std::runtime_error("expected 6 columns, got " +
                                         std::to_string(cols.size()));
            forge::InjectionLogRow row;
            row.ref_id = unescape_tsv(cols[0]);
            const auto field = field_from_string(cols[1]);
            if (!field)
                throw std::runtime_error("unknown field: " + cols[1]);
            row.field = *field;
            const auto code = taxonomy::iac_from_string(cols[2]);
            if (!code)
                throw std::runtime_error("unknown code: " + cols[2]);
            row.code = *code;
            row.original = unescape_tsv(cols[3]);
            row.corrupted = unescape_tsv(cols[4]);
            if (cols[5] != "0" && cols[5] != "1")
                throw std::runtime_error("applied must be 0 or 1");
            row.applied = cols[5] == "1";
            return row;
        });
}

void write_phantom_log(const std::string &path, const std::vector<forge::PhantomLogRow> &log) {
    std::string content = kPhantomHeader;
    content += "\n#ref_id\toriginal_target_id\tphantom_target_id\n";
    for (const forge::PhantomLogRow &row : log) {
        content += escape_tsv(row.ref_id);
        content += '\t';
        content += escape_tsv(row.original_target_id);
        content += '\t';
        content += escape_tsv(row.phantom_target_id);
        content += '\n';
    }
    atomic_write_text(path, content);
}

void write_duplicate_log(const std::string &path,
                         const std::vector<forge::DuplicateLogRow> &log) {
    std::string content = kDuplicateHeader;
    content += "\n#original_target_id\tduplicate_target_id\n";
    for (const forge::DuplicateLogRow &row : log) {
        content += escape_tsv(row.original_target_id);
        content += '\t';
        content += escape_tsv(row.duplicate_target_id);
        content += '\n';
    }
    atomic_write_text(path, content);
}

void write_annotations(const std::string &path,
                       const std::vector<taxonomy::IacAnnotation> &annotations) {
    std::string content = kAnnotationsHeader;
    content += "\n#ref_id\tfield\texpected\tobserved\tcodes\n";
    for (const taxonomy::IacAnnotation &ann : annotations) {
        content += escape_tsv(ann.ref_id);
        content += '\t';
        content += to_string(ann.field);
        content += '\t';
        content += escape_tsv(ann.expected);
        content += '\t';
        content += escape_tsv(ann.observed);
        content += '\t';
        std::string codes;
        for (taxonomy::IacCode c : ann.codes) {
            if (!codes.empty())
                codes.push_back(',');
            codes += taxonomy::to_string(c);
        }
        content += codes;
        content += '\n';
    }
    atomic_write_text(path, content);
}

std::vector<taxonomy::IacAnnotation> read_annotations(const std::string &path) {
    return read_tsv<taxonomy::IacAnnotation>(
        path, kAnnotationsHeader, [](const std::vector<std::string> &cols) {
            if (cols.size() != 5)
                throw std::runtime_error("expected 5 columns, got " +
                                         std::to_string(cols.size()));
            taxonomy::IacAnnotation ann;
            ann.ref_id = unescape_tsv(cols[0]);
            const auto field = field_from_string(cols[1]);
            if (!field)
                throw std::runtime_error("unknown field: " + cols[1]);
            ann.field = *field;
            ann.expected = unescape_tsv(cols[2]);
            ann.observed = unescape_tsv(cols[3]);
            if (!cols[4].empty()) {
                std::string cur;
                std::vector<std::string> parts;
                for (char c : cols[4]) {
                    if (c == ',') {
                        parts.push_back(cur);
                        cur.clear();
                    } else {
                        cur.push_back(c);
                    }
                }
                parts.push_back(cur);
                for (const std::string &p : parts) {
                    const auto code = taxonomy::iac_from_string(p);
                    if (!code)
                        throw std::runtime_error("unknown code: " + p);
                    ann.codes.push_back(*code);
                }
            }
            return ann;
        });
}

// --- exclusion lists -----------------------------------------------------------------

eval::ExclusionList read_exclusion_list(const std::string &path) {
    const std::vector<std::string> lines = read_lines(path);
    std::vector<ParseIssue> issues;
    if (lines.empty() || trim_copy(lines[0]) != kExcludeHeader) {
        issues.push_back({1, std::string("missing header (expected \"") + kExcludeHeader +
                                 "\")"});
        throw CorpusParseError(path, std::move(issues));
    }
    eval::ExclusionList list;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::string line = lines[i];
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim_copy(line);
        if (line.empty())
            continue;
        std::istringstream in(line);
        std::string kind;
        std::string id;
        std::string extra;
        in >> kind >> id;
        if (id.empty() || (in >> extra)) {
            issues.push_back({i + 1, "expected \"ref <id>\" or \"target <id>\""});
            continue;
        }
        if (kind == "ref")
            list.ref_ids.insert(id);
        else if (kind == "target")
            list.target_ids.insert(id);
        else
            issues.push_back({i + 1, "unknown exclusion kind: " + kind});
    }
    if (!issues.empty())
        throw CorpusParseError(path, std::move(issues));
    return list;
}

void write_exclusion_list(const std::string &path, const eval::ExclusionList &list) {
    std::string content = kExcludeHeader;
    content += '\n';
    for (const std::string &id : list.ref_ids)
        content += "ref " + id + "\n";
    for (const std::string &id : list.target_ids)
        content += "target " + id + "\n";
    atomic_write_text(path, content);
}

void write_text_file(const std::string &path, const std::string &content) {
    atomic_write_text(path, content);
}

std::string read_text_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open for reading: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace citmatch::io
