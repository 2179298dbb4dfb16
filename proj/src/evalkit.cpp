#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <unordered_map>

#include "citmatch/errors.hpp"
#include "citmatch/evalkit.hpp"

namespace citmatch::eval {

std::string to_string(ScoreMode m) {
    switch (m) {
        case ScoreMode::Technical:
            return "technical";
        case ScoreMode::Empirical:
            return "empirical";
        case ScoreMode::EmpiricalBestCaseAmbiguous:
            return "empirical_best_case";
    }
    return "technical";
}

std::optional<ScoreMode> score_mode_from_string(const std::string &s) {
    if (s == "technical")
        return ScoreMode::Technical;
    if (s == "empirical")
        return ScoreMode::Empirical;
    if (s == "empirical_best_case")
        return ScoreMode::EmpiricalBestCaseAmbiguous;
    return std::nullopt;
}

ConfusionCounts count_links(const std::vector<MatchRecord> &matches,
                            const std::vector<GroundTruthLink> &links, ScoreMode mode,
                            const ExclusionList &exclusions) {
    std::unordered_map<std::string, const GroundTruthLink *> truth;
    truth.reserve(links.size());
    for (const GroundTruthLink &l : links)
        if (!truth.emplace(l.ref_id, &l).second)
            throw EvalError("duplicate ground-truth link for ref " + l.ref_id);

    ConfusionCounts counts;
    for (const MatchRecord &rec : matches) {
        if (exclusions.ref_ids.count(rec.ref_id) != 0) {
            ++counts.refs_excluded;
            continue;
        }
        const auto it = truth.find(rec.ref_id);
        if (it == truth.end())
            throw EvalError("no ground-truth link for ref " + rec.ref_id);
        const GroundTruthLink &link = *it->second;

        std::string truth_id;
        if (link.truly_cites)
            truth_id = link.true_target_id;
        else if (mode == ScoreMode::Technical)
            truth_id = link.phantom_target_id;
        if (!truth_id.empty() && exclusions.target_ids.count(truth_id) != 0)
            truth_id.clear();

        std::vector<std::string> stored;
        if (rec.outcome == MatchOutcome::Matched) {
            stored.push_back(rec.selected_target);
        } else if (rec.outcome == MatchOutcome::Ambiguous) {
            for (const MatchedTarget &mt : rec.matched_targets)
                stored.push_back(mt.first);
        }
        stored.erase(std::remove_if(stored.begin(), stored.end(),
                                    [&](const std::string &id) {
                                        return id.empty() ||
                                               exclusions.target_ids.count(id) != 0;
                                    }),
                     stored.end());
        std::sort(stored.begin(), stored.end());
        stored.erase(std::unique(stored.begin(), stored.end()), stored.end());

        ++counts.refs_scored;
        const bool has_truth = !truth_id.empty();
        const bool hit =
            has_truth && std::binary_search(stored.begin(), stored.end(), truth_id);
        if (hit)
            ++counts.correct;
        if (has_truth && !hit)
            ++counts.missed;

        long long wrong = static_cast<long long>(stored.size()) - (hit ? 1 : 0);
        if (mode == ScoreMode::EmpiricalBestCaseAmbiguous &&
            rec.outcome == MatchOutcome::Ambiguous)
            wrong = 0;
        counts.incorrect += wrong;

        if (rec.outcome == MatchOutcome::Ambiguous) {
            ++counts.ambiguous_records;
            if (hit)
                ++counts.ambiguous_containing_correct;
        }
        if (rec.outcome == MatchOutcome::Matched && rec.matched_targets.size() > 1 &&
            has_truth && rec.selected_target == truth_id)
            ++counts.ambiguous_resolved_correct;
    }
    return counts;
}

ScoreReport score_from_counts(const ConfusionCounts &counts, ScoreMode mode) {
    ScoreReport report;
    report.mode = mode;
    report.counts = counts;
    const long long c = counts.correct;
    if (c + counts.incorrect > 0)
        report.precision = 100.0 * static_cast<double>(c) /
                           static_cast<double>(c + counts.incorrect);
    if (c + counts.missed > 0)
        report.recall =
            100.0 * static_cast<double>(c) / static_cast<double>(c + counts.missed);
    if (2 * c + counts.incorrect + counts.missed > 0)
        report.f1 = 100.0 * static_cast<double>(2 * c) /
                    static_cast<double>(2 * c + counts.incorrect + counts.missed);
    return report;
}

ScoreReport score(const std::vector<MatchRecord> &matches,
                  const std::vector<GroundTruthLink> &links, ScoreMode mode,
                  const ExclusionList &exclusions) {
    return score_from_counts(count_links(matches, links, mode, exclusions), mode);
}

Proportions proportions(const ConfusionCounts &counts) {
    Proportions p;
    if (counts.correct + counts.missed > 0)
        p.missed_of_attempted = 100.0 * static_cast<double>(counts.missed) /
                                static_cast<double>(counts.correct + counts.missed);
    if (counts.correct + counts.incorrect > 0)
        p.incorrect_of_matched = 100.0 * static_cast<double>(counts.incorrect) /
                                 static_cast<double>(counts.correct + counts.incorrect);
    return p;
}

std::string format_percent(long long num, long long den) {
    if (den == 0)
        return "n/a";
    // hundredths of a percent, rounded half up on integers
    const long long scaled = (10000 * num + den / 2) / den;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%lld.%02lld", scaled / 100, scaled % 100);
    return buf;
}

std::string format_percent(double percent) {
    const long long scaled = std::llround(percent * 100.0);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%lld.%02lld", scaled / 100,
                  scaled % 100 < 0 ? -(scaled % 100) : scaled % 100);
    return buf;
}

std::string format_percent(const std::optional<double> &percent) {
    return percent ? format_percent(*percent) : "n/a";
}

std::map<std::string, long long> iac_frequency_table(
    const std::vector<taxonomy::IacAnnotation> &annotations) {
    std::map<std::string, long long> table;
    for (const taxonomy::IacAnnotation &ann : annotations)
        for (taxonomy::IacCode code : ann.codes)
            ++table[taxonomy::base_code(code)];
    return table;
}

std::map<std::string, long long> iac_frequency_table(
    const std::vector<taxonomy::IacCode> &codes) {
    std::map<std::string, long long> table;
    for (taxonomy::IacCode code : codes)
        ++table[taxonomy::base_code(code)];
    return table;
}

std::map<taxonomy::Subcategory, double> subcategory_shares(
    const std::map<std::string, long long> &code_frequencies) {
    std::map<taxonomy::Subcategory, double> weighted;
    for (const auto &[code, count] : code_frequencies) {
        if (count <= 0)
            continue;
        auto iac = taxonomy::iac_from_string(code);
        if (!iac && code == "G")
            iac = taxonomy::IacCode::G1;  // frequency tables carry the collapsed base code
        if (!iac)
            throw EvalError("unknown inaccuracy code in frequency table: " + code);
        const taxonomy::Subcategory sub = taxonomy::subcategory_of(*iac);
        weighted[sub] += static_cast<double>(count) /
                         static_cast<double>(taxonomy::subcategory_size(sub));
    }
    double total = 0.0;
    for (const auto &[sub, w] : weighted)
        total += w;
    std::map<taxonomy::Subcategory, double> shares;
    if (total <= 0.0)
        return shares;
    for (const auto &[sub, w] : weighted)
        shares[sub] = w / total;
    return shares;
}

// --- profile comparison --------------------------------------------------------

ProfileComparison compare_profiles(const Corpus &corpus, const std::vector<ProfileRun> &runs,
                                   const ExclusionList &exclusions) {
    ProfileComparison cmp;
    cmp.rows.reserve(runs.size());
    for (const ProfileRun &run : runs) {
        ProfileComparisonRow row;
        row.profile_name = run.profile_name;
        row.technical = score(run.matches, corpus.links, ScoreMode::Technical, exclusions);
        row.empirical = score(run.matches, corpus.links, ScoreMode::Empirical, exclusions);
        row.empirical_best_case =
            score(run.matches, corpus.links, ScoreMode::EmpiricalBestCaseAmbiguous, exclusions);
        row.technical_proportions = proportions(row.technical.counts);

        const taxonomy::MissedAnnotationResult missed =
            taxonomy::annotate_missed(run.matches, corpus);
        row.missed_iac_frequencies = iac_frequency_table(missed.annotations);
        row.missed_refs_skipped = missed.refs_skipped;
        for (const MatchRecord &rec : run.matches)
            if (rec.outcome == MatchOutcome::Missed &&
                exclusions.ref_ids.count(rec.ref_id) == 0)
                row.missed_ref_ids.insert(rec.ref_id);
        cmp.rows.push_back(std::move(row));
    }
    for (std::size_t a = 0; a < cmp.rows.size(); ++a) {
        for (std::size_t b = a + 1; b < cmp.rows.size(); ++b) {
            const auto &sa = cmp.rows[a].missed_ref_ids;
            const auto &sb = cmp.rows[b].missed_ref_ids;
            long long overlap = 0;
            for (const std::string &id : sa)
                if (sb.count(id) != 0)
                    ++overlap;
            cmp.missed_overlap[{cmp.rows[a].profile_name, cmp.rows[b].profile_name}] =
                overlap;
        }
    }
    return cmp;
}

namespace {

void append_report_line(std::ostringstream &out, const char *label, const ScoreReport &r) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "  %-20s C=%-7lld I=%-6lld M=%-6lld precision=%-7s recall=%-7s f1=%s\n",
                  label, r.counts.correct, r.counts.incorrect, r.counts.missed,
                  format_percent(r.precision).c_str(), format_percent(r.recall).c_str(),
                  format_percent(r.f1).c_str());
    out << buf;
}

std::string frequencies_line(const std::map<std::string, long long> &freq) {
    // highest count first, alphabetical among equals
    std::vector<std::pair<std::string, long long>> items(freq.begin(), freq.end());
    std::sort(items.begin(), items.end(), [](const auto &a, const auto &b) {
        if (a.second != b.second)
            return a.second > b.second;
        return a.first < b.first;
    });
    std::string line;
    for (const auto &[code, count] : items) {
        if (!line.empty())
            line += "  ";
        line += code + ":" + std::to_string(count);
    }
    return line.empty() ? "(none)" : line;
}

void append_tsv_report(std::ostringstream &out, const std::string &profile,
                       const ScoreReport &r) {
    out << profile << '\t' << to_string(r.mode) << '\t' << r.counts.correct << '\t'
        << r.counts.incorrect << '\t' << r.counts.missed << '\t'
        << r.counts.ambiguous_records << '\t' << r.counts.refs_scored << '\t'
        << r.counts.refs_excluded << '\t' << format_percent(r.precision) << '\t'
        << format_percent(r.recall) << '\t' << format_percent(r.f1) << '\n';
}

const char *kTsvHeader =
    "profile\tmode\tcorrect\tincorrect\tmissed\tambiguous\trefs_scored\trefs_excluded"
    "\tprecision\trecall\tf1\n";

}  // namespace

std::string render_comparison_table(const ProfileComparison &cmp) {
    std::ostringstream out;
    out << "== profile comparison ==\n";
    for (const ProfileComparisonRow &row : cmp.rows) {
        out << "\nprofile: " << row.profile_name << "\n";
        append_report_line(out, "technical", row.technical);
        append_report_line(out, "empirical", row.empirical);
        append_report_line(out, "empirical best-case", row.empirical_best_case);
        out << "  missed of attempted  "
            << format_percent(row.technical_proportions.missed_of_attempted) << "\n";
        out << "  incorrect of matched "
            << format_percent(row.technical_proportions.incorrect_of_matched) << "\n";
        out << "  missed breakdown     " << frequencies_line(row.missed_iac_frequencies)
            << "\n";
        if (row.missed_refs_skipped > 0)
            out << "  missed refs skipped  " << row.missed_refs_skipped << "\n";
    }
    if (!cmp.missed_overlap.empty()) {
        out << "\nmissed-set overlap:\n";
        for (const auto &[pair, count] : cmp.missed_overlap)
            out << "  " << pair.first << " & " << pair.second << ": " << count << "\n";
    }
    return out.str();
}

std::string render_comparison_tsv(const ProfileComparison &cmp) {
    std::ostringstream out;
    out << kTsvHeader;
    for (const ProfileComparisonRow &row : cmp.rows) {
        append_tsv_report(out, row.profile_name, row.technical);
        append_tsv_report(out, row.profile_name, row.empirical);
        append_tsv_report(out, row.profile_name, row.empirical_best_case);
    }
    return out.str();
}

std::string render_score_table(const std::string &title,
                               const std::vector<ScoreReport> &reports) {
    std::ostringstream out;
    out << "== " << title << " ==\n";
    for (const ScoreReport &r : reports)
        append_report_line(out, to_string(r.mode).c_str(), r);
    return out.str();
}

std::string render_score_tsv(const std::vector<ScoreReport> &reports) {
    std::ostringstream out;
    out << kTsvHeader;
    for (const ScoreReport &r : reports)
        append_tsv_report(out, "-", r);
    return out.str();
}

}  // namespace citmatch::eval
