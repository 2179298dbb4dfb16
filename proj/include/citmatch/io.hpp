#ifndef CITMATCH_IO_HPP
#define CITMATCH_IO_HPP

#include <string>
#include <vector>

#include "citmatch/corpusforge.hpp"
#include "citmatch/evalkit.hpp"
#include "citmatch/model.hpp"
#include "citmatch/taxonomy.hpp"

// File formats.
//
// Record files are JSON Lines with a leading header object, e.g.
//   {"format":"citmatch-targets","version":1}
//   {"id":"T0001","first_author_last":"Köster", ...}
// Readers verify the header, collect every malformed line with its line
// number into a CorpusParseError, and never drop records silently.
// Tabular exports (injection logs, annotations) are TSV with a
// "#citmatch-... v1" comment header. All writers write to "<path>.tmp" and
// rename, so a crashed run never leaves a half-written file behind.

namespace citmatch::io {

// --- JSONL record files -----------------------------------------------------

void write_targets(const std::string &path, const std::vector<TargetArticle> &targets);
std::vector<TargetArticle> read_targets(const std::string &path);

void write_refs(const std::string &path, const std::vector<CitedReference> &refs);
// Rows may alternatively carry {"ref_id":..,"source_article_id":..,"compact":"..."}
// with a WoS-style compact cited-reference string; see parse_compact_reference.
std::vector<CitedReference> read_refs(const std::string &path);

void write_links(const std::string &path, const std::vector<GroundTruthLink> &links);
std::vector<GroundTruthLink> read_links(const std::string &path);

void write_matches(const std::string &path, const std::vector<MatchRecord> &matches);
std::vector<MatchRecord> read_matches(const std::string &path);

// --- compact cited-reference strings ----------------------------------------

// Parses "AUTHOR XY, 1998, PUB NAME, V14, P266, DOI 10.1002/hc.10139" style
// strings: a leading author block, an optional 4-digit year token, the
// publication name, then optional V / P / DOI tokens. Multi-token author
// blocks put the final token in the initials slot (split per letter,
// attached periods preserved); full forenames land whole in first_initial.
CitedReference parse_compact_reference(const std::string &compact);

// --- TSV exports --------------------------------------------------------------

void write_injection_log(const std::string &path,
                         const std::vector<forge::InjectionLogRow> &log);
std::vector<forge::InjectionLogRow> read_injection_log(const std::string &path);

void write_phantom_log(const std::string &path, const std::vector<forge::PhantomLogRow> &log);
void write_duplicate_log(const std::string &path, const std::vector<forge::DuplicateLogRow> &log);

void write_annotations(const std::string &path,
                       const std::vector<taxonomy::IacAnnotation> &annotations);
std::vector<taxonomy::IacAnnotation> read_annotations(const std::string &path);

// --- misc ----------------------------------------------------------------------

// Exclusion list: "# citmatch-exclude v1" header, then "ref <id>" /
// "target <id>" lines; '#' starts a comment.
eval::ExclusionList read_exclusion_list(const std::string &path);
void write_exclusion_list(const std::string &path, const eval::ExclusionList &list);

// Plain-text helpers (atomic rename like everything else).
void write_text_file(const std::string &path, const std::string &content);
std::string read_text_file(const std::string &path);

}  // namespace citmatch::io

#endif  // CITMATCH_IO_HPP
