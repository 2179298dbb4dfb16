#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "citmatch/corpusforge.hpp"
#include "citmatch/errors.hpp"
#include "citmatch/io.hpp"

using namespace citmatch;
namespace fs = std::filesystem;

namespace {

// Every test writes into its own file under the system temp dir and removes
// it afterwards (atomic writers never leave a partial .tmp either way).
class TempFile {
  public:
    explicit TempFile(const std::string &name)
        : path_((fs::temp_directory_path() / ("citmatch_io_" + name)).string()) {
        std::error_code ec;
        fs::remove(path_, ec);
    }
    ~TempFile() {
        std::error_code ec;
        fs::remove(path_, ec);
        fs::remove(path_ + ".tmp", ec);
    }
    const std::string &str() const { return path_; }

  private:
    std::string path_;
};

void write_raw(const std::string &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    REQUIRE(out.good());
    out << content;
}

}  // namespace

TEST_CASE("target records survive a JSONL round trip") {
    // the fixture pools carry diacritics, hyphens and empty optionals
    const Corpus corpus = forge::generate_clean(400, 0, 6);
    TempFile file("targets.jsonl");
    io::write_targets(file.str(), corpus.targets);
    CHECK_FALSE(fs::exists(file.str() + ".tmp"));

    const auto back = io::read_targets(file.str());
    CHECK(back == corpus.targets);

    const std::string text = io::read_text_file(file.str());
    CHECK(text.rfind("{\"format\":\"citmatch-targets\",\"version\":1}\n", 0) == 0);
}

TEST_CASE("refs, links and matches survive their round trips") {
    Corpus corpus = forge::generate_clean(30, 80, 14);
    // pick up a year-less reference and a phantom-shaped link on the way
    corpus.refs[5].pub_year.reset();
    corpus.refs[7].doi.clear();
    corpus.links[9] = {corpus.links[9].ref_id, "", false, "T0003"};

    TempFile refs_file("refs.jsonl");
    io::write_refs(refs_file.str(), corpus.refs);
    CHECK(io::read_refs(refs_file.str()) == corpus.refs);

    TempFile links_file("links.jsonl");
    io::write_links(links_file.str(), corpus.links);
    CHECK(io::read_links(links_file.str()) == corpus.links);

    const std::vector<MatchRecord> matches = {
        {"R000001", MatchOutcome::Matched, {{"T0001", 0}}, "T0001"},
        {"R000002", MatchOutcome::Ambiguous, {{"T0001", 3}, {"T0002", 3}}, ""},
        {"R000003", MatchOutcome::Missed, {}, ""},
    };
    TempFile matches_file("matches.jsonl");
    io::write_matches(matches_file.str(), matches);
    CHECK(io::read_matches(matches_file.str()) == matches);
}

TEST_CASE("jsonl readers verify the header") {
    TempFile file("header.jsonl");

    write_raw(file.str(), "");
    try {
        io::read_targets(file.str());
        FAIL("expected CorpusParseError for an empty file");
    } catch (const CorpusParseError &e) {
        CHECK(e.path() == file.str());
        REQUIRE(e.issues().size() == 1);
        CHECK(e.issues()[0].line == 1);
        CHECK(e.issues()[0].message.find("missing header") != std::string::npos);
    }

    // a links header is not a targets header
    write_raw(file.str(), "{\"format\":\"citmatch-links\",\"version\":1}\n");
    try {
        io::read_targets(file.str());
        FAIL("expected CorpusParseError for the wrong format");
    } catch (const CorpusParseError &e) {
        REQUIRE(e.issues().size() == 1);
        CHECK(e.issues()[0].message.find("bad header") != std::string::npos);
    }

    write_raw(file.str(), "{\"format\":\"citmatch-targets\",\"version\":2}\n");
    try {
        io::read_targets(file.str());
        FAIL("expected CorpusParseError for the wrong version");
    } catch (const CorpusParseError &e) {
        REQUIRE(e.issues().size() == 1);
        CHECK(e.issues()[0].message.find("version") != std::string::npos);
    }

    // leading blank lines before the header are tolerated
    write_raw(file.str(), "\n\n{\"format\":\"citmatch-links\",\"version\":1}\n"
                          "{\"ref_id\":\"R1\",\"true_target_id\":\"T1\"}\n");
    const auto links = io::read_links(file.str());
    REQUIRE(links.size() == 1);
    CHECK(links[0].ref_id == "R1");
    CHECK(links[0].truly_cites);  // defaults apply
}

TEST_CASE("malformed lines are collected with their line numbers") {
    TempFile file("broken.jsonl");
    write_raw(file.str(),
              "{\"format\":\"citmatch-links\",\"version\":1}\n"
              "{\"ref_id\":\"R1\",\"true_target_id\":\"T1\"}\n"
              "{oops\n"
              "\n"
              "{\"ref_id\":\"R2\",\"bogus\":1}\n"
              "{\"true_target_id\":\"T9\"}\n");
    try {
        io::read_links(file.str());
        FAIL("expected CorpusParseError");
    } catch (const CorpusParseError &e) {
        REQUIRE(e.issues().size() == 3);
        CHECK(e.issues()[0].line == 3);  // broken JSON
        CHECK(e.issues()[1].line == 5);  // unknown key (the blank line 4 is fine)
        CHECK(e.issues()[1].message.find("bogus") != std::string::npos);
        CHECK(e.issues()[2].line == 6);  // missing ref_id
        CHECK(e.issues()[2].message.find("ref_id") != std::string::npos);
    }
}

TEST_CASE("refs accept nulls and compact rows") {
    TempFile file("refs_mixed.jsonl");
    write_raw(file.str(),
              "{\"format\":\"citmatch-refs\",\"version\":1}\n"
              "{\"ref_id\":\"R1\",\"pub_year\":null,\"pub_name\":\"X\"}\n"
              "{\"ref_id\":\"R2\",\"pub_name\":\"Y\"}\n"
              "{\"ref_id\":\"R3\",\"source_article_id\":\"S1\",\"compact\":"
              "\"ALTENMULLER E, 1998, HETEROATOM CHEM, V14, P266, DOI 10.1002/hc.10139\"}\n");
    const auto refs = io::read_refs(file.str());
    REQUIRE(refs.size() == 3);
    CHECK_FALSE(refs[0].pub_year.has_value());
    CHECK_FALSE(refs[1].pub_year.has_value());

    const CitedReference &c = refs[2];
    CHECK(c.ref_id == "R3");
    CHECK(c.source_article_id == "S1");
    CHECK(c.first_author_last == "ALTENMULLER");
    CHECK(c.first_initial == "E");
    CHECK(c.second_initial.empty());
    REQUIRE(c.pub_year.has_value());
    CHECK(*c.pub_year == 1998);
    CHECK(c.pub_name == "HETEROATOM CHEM");
    CHECK(c.volume == "14");
    CHECK(c.start_page == "266");
    CHECK(c.doi == "10.1002/hc.10139");
}

TEST_CASE("compact cited-reference strings parse the WoS shapes") {
    auto r = io::parse_compact_reference("SHI DQ, 2003, CHEM J CHINESE U, V24, P1064");
    CHECK(r.first_author_last == "SHI");
    CHECK(r.first_initial == "D");
    CHECK(r.second_initial == "Q");
    REQUIRE(r.pub_year.has_value());
    CHECK(*r.pub_year == 2003);
    CHECK(r.pub_name == "CHEM J CHINESE U");
    CHECK(r.volume == "24");
    CHECK(r.start_page == "1064");
    CHECK(r.doi.empty());

    // dotted initials keep their periods, split one letter per slot
    r = io::parse_compact_reference("GARCIA-ELIAS M.A., 1998, J HAND SURG");
    CHECK(r.first_author_last == "GARCIA-ELIAS");
    CHECK(r.first_initial == "M.");
    CHECK(r.second_initial == "A.");

    // a spelled-out forename lands whole in the first slot
    r = io::parse_compact_reference("Altenmuller Thomas, 1999, MUSIC PERCEPT");
    CHECK(r.first_author_last == "Altenmuller");
    CHECK(r.first_initial == "Thomas");
    CHECK(r.second_initial.empty());

    // multi-token surnames keep everything but the trailing initials block
    r = io::parse_compact_reference("VAN DER BERG J, 2001, ACTA PHYS");
    CHECK(r.first_author_last == "VAN DER BERG");
    CHECK(r.first_initial == "J");

    // four upper-case letters are no longer an initials block
    r = io::parse_compact_reference("SMITH ABCD, 2001, ACTA PHYS");
    CHECK(r.first_author_last == "SMITH");
    CHECK(r.first_initial == "ABCD");

    // corporate author, no year, lower-case v/p markers
    r = io::parse_compact_reference("UNESCO, WORLD REPORT, v3, p12");
    CHECK(r.first_author_last == "UNESCO");
    CHECK(r.first_initial.empty());
    CHECK_FALSE(r.pub_year.has_value());
    CHECK(r.pub_name == "WORLD REPORT");
    CHECK(r.volume == "3");
    CHECK(r.start_page == "12");

    // only the first 4-digit segment is the year, later ones join the name;
    // a malformed V token is kept as name text instead of being dropped
    r = io::parse_compact_reference("SMITH J, 2001, 1999, PROC, V14A");
    REQUIRE(r.pub_year.has_value());
    CHECK(*r.pub_year == 2001);
    CHECK(r.pub_name == "1999 PROC V14A");
    CHECK(r.volume.empty());
}

TEST_CASE("injection logs round trip through the TSV escaping") {
    std::vector<forge::InjectionLogRow> log;
    log.push_back({"R000001", Field::Volume, taxonomy::IacCode::S, "14", "149", true});
    log.push_back({"R000002", Field::AuthorLast, taxonomy::IacCode::B, "a\tb", "line1\nline2",
                   true});
    log.push_back({"R0\\03", Field::PubYear, taxonomy::IacCode::T, "", "", false});

    TempFile file("inject.tsv");
    io::write_injection_log(file.str(), log);
    CHECK(io::read_injection_log(file.str()) == log);

    const std::string text = io::read_text_file(file.str());
    CHECK(text.rfind("#citmatch-injection-log v1\n"
                     "#ref_id\tfield\tcode\toriginal\tcorrupted\tapplied\n"
                     "R000001\tvolume\tS\t14\t149\t1\n"
                     "R000002\tauthor_last\tB\ta\\tb\tline1\\nline2\t1\n"
                     "R0\\\\03\tpub_year\tT\t\t\t0\n",
                     0) == 0);
}

TEST_CASE("broken injection logs report each bad row") {
    TempFile file("inject_bad.tsv");

    write_raw(file.str(), "#something-else v1\n");
    try {
        io::read_injection_log(file.str());
        FAIL("expected CorpusParseError for the wrong header");
    } catch (const CorpusParseError &e) {
        REQUIRE(e.issues().size() == 1);
        CHECK(e.issues()[0].line == 1);
    }

    write_raw(file.str(),
              "#citmatch-injection-log v1\n"
              "# free-form comment\n"
              "R1\tvolume\tS\t1\t12\t1\n"
              "R2\tvolume\tS\t1\t12\n"
              "R3\tnot_a_field\tS\t1\t12\t0\n"
              "R4\tvolume\tZZ\t1\t12\t0\n"
              "R5\tvolume\tS\t1\t12\t2\n");
    try {
        io::read_injection_log(file.str());
        FAIL("expected CorpusParseError for the bad rows");
    } catch (const CorpusParseError &e) {
        REQUIRE(e.issues().size() == 4);
        CHECK(e.issues()[0].line == 4);  // column count
        CHECK(e.issues()[1].line == 5);  // unknown field
        CHECK(e.issues()[2].line == 6);  // unknown code
        CHECK(e.issues()[3].line == 7);  // applied flag out of range
    }
}

TEST_CASE("phantom and duplicate logs write their fixed layouts") {
    TempFile phantom_file("phantom.tsv");
    io::write_phantom_log(phantom_file.str(),
                          {{"R000004", "T0002", "T0017"}, {"R000009", "T0011", "T0003"}});
    CHECK(io::read_text_file(phantom_file.str()) ==
          "#citmatch-phantom-log v1\n"
          "#ref_id\toriginal_target_id\tphantom_target_id\n"
          "R000004\tT0002\tT0017\n"
          "R000009\tT0011\tT0003\n");

    TempFile dup_file("dup.tsv");
    io::write_duplicate_log(dup_file.str(), {{"T0001", "D0001"}});
    CHECK(io::read_text_file(dup_file.str()) ==
          "#citmatch-duplicate-log v1\n"
          "#original_target_id\tduplicate_target_id\n"
          "T0001\tD0001\n");
}

TEST_CASE("annotations round trip with their code lists") {
    std::vector<taxonomy::IacAnnotation> anns;
    anns.push_back({"R000001", Field::Volume, "14", "37",
                    {taxonomy::IacCode::G4, taxonomy::IacCode::B}});
    anns.push_back({"R000002", Field::AuthorLast, "Dvořák", "Dvorak",
                    {taxonomy::IacCode::Q}});
    anns.push_back({"R000003", Field::Issue, "3", "", {}});  // no codes at all

    TempFile file("annotations.tsv");
    io::write_annotations(file.str(), anns);
    CHECK(io::read_annotations(file.str()) == anns);

    const std::string text = io::read_text_file(file.str());
    CHECK(text.find("R000001\tvolume\t14\t37\tG4,B\n") != std::string::npos);
    CHECK(text.find("R000003\tissue\t3\t\t\n") != std::string::npos);

    write_raw(file.str(), "#citmatch-annotations v1\nR1\tvolume\t1\t2\tG9\n");
    CHECK_THROWS_AS(io::read_annotations(file.str()), CorpusParseError);
}

TEST_CASE("exclusion lists parse the verification workflow format") {
    TempFile file("exclude.txt");
    eval::ExclusionList list;
    list.ref_ids = {"R000001", "R000042"};
    list.target_ids = {"T0009"};
    io::write_exclusion_list(file.str(), list);
    CHECK(io::read_text_file(file.str()) == "# citmatch-exclude v1\n"
                                            "ref R000001\n"
                                            "ref R000042\n"
                                            "target T0009\n");

    write_raw(file.str(),
              "# citmatch-exclude v1\n"
              "\n"
              "# manually verified duplicates\n"
              "ref R000001   # checked 2024-02-01\n"
              "target T0009\n"
              "ref R000042\n");
    const auto back = io::read_exclusion_list(file.str());
    CHECK(back.ref_ids == list.ref_ids);
    CHECK(back.target_ids == list.target_ids);

    write_raw(file.str(), "ref R000001\n");
    try {
        io::read_exclusion_list(file.str());
        FAIL("expected CorpusParseError for the missing header");
    } catch (const CorpusParseError &e) {
        REQUIRE(e.issues().size() == 1);
        CHECK(e.issues()[0].line == 1);
    }

    write_raw(file.str(),
              "# citmatch-exclude v1\n"
              "article T0001\n"
              "ref\n"
              "ref R1 R2\n");
    try {
        io::read_exclusion_list(file.str());
        FAIL("expected CorpusParseError for the bad lines");
    } catch (const CorpusParseError &e) {
        REQUIRE(e.issues().size() == 3);
        CHECK(e.issues()[0].line == 2);
        CHECK(e.issues()[0].message.find("article") != std::string::npos);
        CHECK(e.issues()[1].line == 3);
        CHECK(e.issues()[2].line == 4);
    }
}

TEST_CASE("plain text helpers write atomically") {
    TempFile file("note.txt");
    io::write_text_file(file.str(), "hello\nworld\n");
    CHECK(io::read_text_file(file.str()) == "hello\nworld\n");
    CHECK_FALSE(fs::exists(file.str() + ".tmp"));

    CHECK_THROWS_AS(io::read_text_file(file.str() + ".does-not-exist"), IoError);
    // a directory cannot be opened as the temp file target
    CHECK_THROWS_AS(io::write_text_file(fs::temp_directory_path().string(), "x"), IoError);
}

TEST_CASE("match records tolerate missing rule numbers") {
    TempFile file("matches_norule.jsonl");
    write_raw(file.str(),
              "{\"format\":\"citmatch-matches\",\"version\":1}\n"
              "{\"ref_id\":\"R1\",\"outcome\":\"ambiguous\","
              "\"matched_targets\":[{\"target\":\"T1\"}],\"selected_target\":\"\"}\n");
    const auto matches = io::read_matches(file.str());
    REQUIRE(matches.size() == 1);
    REQUIRE(matches[0].matched_targets.size() == 1);
    CHECK(matches[0].matched_targets[0].first == "T1");
    CHECK(matches[0].matched_targets[0].second == -1);

    write_raw(file.str(),
              "{\"format\":\"citmatch-matches\",\"version\":1}\n"
              "{\"ref_id\":\"R1\",\"outcome\":\"resolved\",\"selected_target\":\"\"}\n");
    try {
        io::read_matches(file.str());
        FAIL("expected CorpusParseError for the unknown outcome");
    } catch (const CorpusParseError &e) {
        REQUIRE(e.issues().size() == 1);
        CHECK(e.issues()[0].message.find("resolved") != std::string::npos);
    }
}
