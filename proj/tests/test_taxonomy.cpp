#include <doctest.h>

#include <map>
#include <set>
#include <string>
#include <vector>

#include "citmatch/taxonomy.hpp"
#include "support/builders.hpp"

using namespace citmatch;
using taxonomy::AssessContext;
using taxonomy::IacCode;

namespace {

std::vector<std::string> names(const std::vector<IacCode> &codes) {
    std::vector<std::string> out;
    for (IacCode c : codes)
        out.push_back(taxonomy::to_string(c));
    return out;
}

std::vector<std::string> classify(const std::string &expected, const std::string &observed,
                                  Field field, const AssessContext &ctx = {}) {
    return names(taxonomy::classify_field(expected, observed, field, ctx));
}

using Strings = std::vector<std::string>;

}  // namespace

TEST_CASE("code bookkeeping") {
    const auto codes = taxonomy::all_iac_codes();
    CHECK(codes.size() == 23);  // 17 base codes, G expanded into 7
    CHECK(codes.front() == IacCode::G1);

    std::set<std::string> bases;
    for (IacCode c : codes) {
        CHECK(taxonomy::iac_from_string(taxonomy::to_string(c)) == c);
        bases.insert(taxonomy::base_code(c));
    }
    CHECK(bases.size() == 17);
    CHECK(taxonomy::base_code(IacCode::G4) == "G");
    CHECK(taxonomy::base_code(IacCode::Q) == "Q");
    CHECK_FALSE(taxonomy::iac_from_string("G8").has_value());
    CHECK_FALSE(taxonomy::iac_from_string("b").has_value());
}

TEST_CASE("subcategory sizes agree with the code grouping") {
    std::map<taxonomy::Subcategory, std::set<std::string>> members;
    for (IacCode c : taxonomy::all_iac_codes())
        members[taxonomy::subcategory_of(c)].insert(taxonomy::base_code(c));
    int total = 0;
    for (taxonomy::Subcategory s : taxonomy::all_subcategories()) {
        CHECK(taxonomy::subcategory_size(s) == static_cast<int>(members[s].size()));
        total += taxonomy::subcategory_size(s);
    }
    CHECK(total == 17);
    CHECK(taxonomy::subcategory_of(IacCode::B) == taxonomy::Subcategory::SpellingVariations);
    CHECK(taxonomy::subcategory_of(IacCode::Q) == taxonomy::Subcategory::SpellingVariations);
    CHECK(taxonomy::subcategory_of(IacCode::G2) ==
          taxonomy::Subcategory::DisarrangedDataValues);
    CHECK(taxonomy::subcategory_of(IacCode::M) ==
          taxonomy::Subcategory::IncorrectInterpretation);
}

TEST_CASE("equal values carry no codes") {
    CHECK(classify("Smith", "Smith", Field::AuthorLast).empty());
    CHECK(classify("Smith", "  SMITH ", Field::AuthorLast).empty());
    CHECK(classify("", "", Field::Issue).empty());
}

TEST_CASE("B: a small edit with no better explanation") {
    CHECK(classify("Arduengo", "Aduengo", Field::AuthorLast) == Strings{"B"});
    CHECK(classify("Fontana", "Fontane", Field::AuthorLast) == Strings{"B"});
    // a two-letter botch is still B; three edits are not
    CHECK(classify("Hollstein", "Holstain", Field::AuthorLast) == Strings{"B"});
    CHECK(classify("Hollstein", "Xyzlstein", Field::AuthorLast) == Strings{"D"});
}

TEST_CASE("D: completely different value") {
    CHECK(classify("Journal of Curriculum Studies", "Studies in Higher Education",
                   Field::PubName) == Strings{"D"});
    CHECK(classify("Okazaki", "Hollstein", Field::AuthorLast) == Strings{"D"});
}

TEST_CASE("E: omitted values and omitted words") {
    CHECK(classify("14", "", Field::Volume) == Strings{"E"});
    CHECK(classify("Q", "", Field::SecondInitial) == Strings{"E"});
    CHECK(classify("HETEROATOM CHEMISTRY LETTERS", "HETEROATOM LETTERS", Field::PubName) ==
          Strings{"E"});
    // dropping the LAST word also leaves a cropped value
    CHECK(classify("HETEROATOM CHEMISTRY", "HETEROATOM", Field::PubName) == Strings{"E", "F"});
}

TEST_CASE("F: cropped values") {
    CHECK(classify("827", "82", Field::StartPage) == Strings{"F"});
    CHECK(classify("1998", "19", Field::PubYear) == Strings{"F"});
    // "G." cited as "G": the crop ate exactly the punctuation
    CHECK(classify("G.", "G", Field::FirstInitial) == Strings{"F", "R"});
}

TEST_CASE("G: value interchanged with another field of the same record") {
    TargetArticle t = builders::basic_target();
    t.volume = "37";
    t.issue = "52";
    const CitedReference r = builders::ref_for(t);
    const AssessContext ctx{&t, &r};

    CHECK(classify("37", "52", Field::Volume, ctx) == Strings{"G4"});
    CHECK(classify("52", "37", Field::Issue, ctx) == Strings{"G1"});
    CHECK(classify("266", "37", Field::StartPage, ctx) == Strings{"G2"});
    // without record context the same pair is a two-edit slip; a value with
    // no resemblance at all is the only thing left for D
    CHECK(classify("37", "52", Field::Volume) == Strings{"B"});
    CHECK(classify("37", "942", Field::Volume) == Strings{"D"});

    // initials swapped with each other
    TargetArticle shi = builders::basic_target();
    shi.first_author_last = "Shi";
    shi.first_initial = "D";
    shi.second_initial = "Q";
    const CitedReference sr = builders::ref_for(shi);
    const AssessContext sctx{&shi, &sr};
    CHECK(classify("D", "Q", Field::FirstInitial, sctx) == Strings{"G6"});
    CHECK(classify("Q", "D", Field::SecondInitial, sctx) == Strings{"G7"});
}

TEST_CASE("H: jumbled characters") {
    CHECK(classify("654", "564", Field::StartPage) == Strings{"H"});
    CHECK(classify("Thomas", "Tohmas", Field::AuthorLast) == Strings{"H"});
    // H needs the exact character multiset; a stray extra digit demotes it
    CHECK(classify("654", "5644", Field::StartPage) == Strings{"B"});
}

TEST_CASE("I: abbreviated words") {
    CHECK(classify("JOURNAL OF HETEROATOM CHEMISTRY", "J HETEROATOM CHEM", Field::PubName) ==
          Strings{"I"});
    // when the abbreviation is also a byte prefix, the crop reading stays
    CHECK(classify("HETEROATOM CHEMISTRY", "HETEROATOM CHEM", Field::PubName) ==
          Strings{"F", "I"});
    // word order must be preserved
    CHECK(classify("JOURNAL OF HETEROATOM CHEMISTRY", "CHEM J", Field::PubName) ==
          Strings{"D"});
}

TEST_CASE("J: conjoint names") {
    CHECK(classify("Giessler", "GoetzGiessler", Field::AuthorLast) == Strings{"N", "J"});
    CHECK(classify("HETEROATOM CHEMISTRY", "WEBBHETEROATOM CHEMISTRY", Field::PubName) ==
          Strings{"N", "J"});
}

TEST_CASE("K: spacing only") {
    CHECK(classify("De Castell", "DeCastell", Field::AuthorLast) == Strings{"K"});
    CHECK(classify("Heteroatom", "Hetero atom", Field::PubName) == Strings{"K"});
    // K is an explanation, so the B fallback must never accompany it
    for (const auto &pair : {std::pair<const char *, const char *>{"De Castell", "DeCastell"},
                             {"van der Berg", "vanderBerg"},
                             {"Na gy", "Nagy"}}) {
        const auto got = classify(pair.first, pair.second, Field::AuthorLast);
        CHECK(got == Strings{"K"});
    }
}

TEST_CASE("M: name parts shifted into the initials") {
    TargetArticle t = builders::basic_target();
    t.first_author_last = "Garcia-Elias";
    t.first_initial = "M";
    t.second_initial = "";
    t.all_authors = {{"Garcia-Elias", "M"}};
    CitedReference r = builders::ref_for(t);
    r.first_author_last = "Elias";
    r.first_initial = "M";
    r.second_initial = "G";

    const auto anns = taxonomy::annotate_pair(r, t);
    REQUIRE(anns.size() == 2);
    CHECK(anns[0].field == Field::AuthorLast);
    CHECK(names(anns[0].codes) == Strings{"M", "E"});
    CHECK(anns[1].field == Field::SecondInitial);
    CHECK(names(anns[1].codes) == Strings{"M"});
}

TEST_CASE("M: initials glued onto the surname") {
    TargetArticle t = builders::basic_target();
    t.first_author_last = "Okazaki";
    t.first_initial = "T";
    t.second_initial = "";
    t.all_authors = {{"Okazaki", "T"}};
    CitedReference r = builders::ref_for(t);
    r.first_author_last = "OkazakiT";
    r.first_initial = "";
    r.second_initial = "";

    const auto anns = taxonomy::annotate_pair(r, t);
    REQUIRE(anns.size() == 2);
    CHECK(anns[0].field == Field::AuthorLast);
    CHECK(names(anns[0].codes) == Strings{"M", "N"});
    CHECK(anns[1].field == Field::FirstInitial);
    CHECK(names(anns[1].codes) == Strings{"M", "E"});
}

TEST_CASE("N: added information") {
    CHECK(classify("Heteroatom Chemistry", "IN PRESS Heteroatom Chemistry", Field::PubName) ==
          Strings{"N"});
    CHECK(classify("Heteroatom Chemistry", "Heteroatom Chemistry PT 2", Field::PubName) ==
          Strings{"N"});
}

TEST_CASE("O: a different author of the same article") {
    const TargetArticle t = builders::basic_target();  // Altenmüller E; Fontana L; Okazaki T
    CitedReference r = builders::ref_for(t);
    r.first_author_last = "Fontana";
    r.first_initial = "L";
    const AssessContext ctx{&t, &r};

    CHECK(classify("Altenmüller", "Fontana", Field::AuthorLast, ctx) == Strings{"O"});
    CHECK(classify("E", "L", Field::FirstInitial, ctx) == Strings{"O"});

    // an unrelated surname stays a plain mismatch
    r.first_author_last = "Hollstein";
    const AssessContext ctx2{&t, &r};
    CHECK(classify("Altenmüller", "Hollstein", Field::AuthorLast, ctx2) == Strings{"D"});

    // an initial contradicting the co-author's rules O out
    r.first_author_last = "Fontana";
    r.first_initial = "Z";
    const AssessContext ctx3{&t, &r};
    CHECK(classify("Altenmüller", "Fontana", Field::AuthorLast, ctx3) == Strings{"D"});
}

TEST_CASE("Q: diacritic spelling variations") {
    CHECK(classify("Altenmüller", "Altenmueller", Field::AuthorLast) == Strings{"Q"});
    CHECK(classify("Altenmüller", "Altenmuller", Field::AuthorLast) == Strings{"Q"});
    CHECK(classify("ALTENMUELLER", "ALTENMULLER", Field::AuthorLast) == Strings{"Q"});
    CHECK(classify("Dvořák", "Dvorak", Field::AuthorLast) == Strings{"Q"});
    CHECK(classify("Løvgren", "Lovgren", Field::AuthorLast) == Strings{"Q"});
    // same letters, so not Q: just a misspelling
    CHECK(classify("Dvorak", "Dvorban", Field::AuthorLast) == Strings{"B"});
}

TEST_CASE("R: punctuation differences") {
    CHECK(classify("O'Brien", "OBrien", Field::AuthorLast) == Strings{"R"});
    CHECK(classify("Heteroatom Chem.", "Heteroatom Chem", Field::PubName) ==
          Strings{"F", "R"});
    CHECK(classify("J-P", "JP", Field::FirstInitial) == Strings{"R"});
}

TEST_CASE("S: padded digits") {
    CHECK(classify("14", "149", Field::Volume) == Strings{"S"});
    CHECK(classify("266", "26681", Field::StartPage) == Strings{"S"});
    // prepended digits are not padding: the insert reads as a typo
    CHECK(classify("14", "914", Field::Volume) == Strings{"B"});
}

TEST_CASE("T: numeric deviations") {
    CHECK(classify("1998", "1997", Field::PubYear) == Strings{"T"});
    CHECK(classify("1998", "2000", Field::PubYear) == Strings{"T"});
    CHECK(classify("266", "246", Field::StartPage) == Strings{"T"});  // one digit, off by two
    // a single digit three or more steps off reads as a typo instead
    CHECK(classify("1998", "1995", Field::PubYear) == Strings{"B"});
    CHECK(classify("266", "236", Field::StartPage) == Strings{"B"});
}

TEST_CASE("U: initials and full first names") {
    CHECK(classify("T", "Thomas", Field::FirstInitial) == Strings{"U"});
    CHECK(classify("Thomas", "T", Field::FirstInitial) == Strings{"F", "U"});
    CHECK(classify("T", "Walter", Field::FirstInitial) == Strings{"D"});
}

TEST_CASE("annotate_pair judges the reference against the nearest accepted spelling") {
    const TargetArticle t = builders::basic_target();
    CitedReference r = builders::ref_for(t);
    r.pub_name = "HETEROATOM CHE";

    const auto anns = taxonomy::annotate_pair(r, t);
    REQUIRE(anns.size() == 1);
    CHECK(anns[0].field == Field::PubName);
    CHECK(anns[0].expected == "HETEROATOM CHEM");  // the abbreviation, not the full name
    CHECK(names(anns[0].codes) == Strings{"F", "I"});
}

TEST_CASE("annotate_pair field coverage and the issue exemption") {
    const TargetArticle t = builders::basic_target();

    CitedReference verbatim = builders::ref_for(t);
    CHECK(taxonomy::annotate_pair(verbatim, t).empty());

    CitedReference no_issue = builders::ref_for(t);
    no_issue.issue.clear();  // not citing the issue is normal practice
    CHECK(taxonomy::annotate_pair(no_issue, t).empty());

    CitedReference wrong_issue = builders::ref_for(t);
    wrong_issue.issue = "4";
    auto anns = taxonomy::annotate_pair(wrong_issue, t);
    REQUIRE(anns.size() == 1);
    CHECK(anns[0].field == Field::Issue);
    CHECK(names(anns[0].codes) == Strings{"T"});

    CitedReference no_year = builders::ref_for(t);
    no_year.pub_year.reset();
    anns = taxonomy::annotate_pair(no_year, t);
    REQUIRE(anns.size() == 1);
    CHECK(anns[0].field == Field::PubYear);
    CHECK(names(anns[0].codes) == Strings{"E"});
}

TEST_CASE("annotate_missed walks only missed refs with an in-corpus truth") {
    Corpus c;
    c.targets.push_back(builders::basic_target("T0001"));
    c.targets.push_back(builders::basic_target("T0002"));

    CitedReference r1 = builders::ref_for(c.targets[0], "R000001");
    r1.volume = "149";  // padded
    CitedReference r2 = builders::ref_for(c.targets[0], "R000002");
    r2.first_author_last = "Nobody";  // cites a work outside the corpus
    CitedReference r3 = builders::ref_for(c.targets[1], "R000003");
    CitedReference r4 = builders::ref_for(c.targets[1], "R000004");
    r4.start_page = "270";  // phantom: only resembles T0002
    c.refs = {r1, r2, r3, r4};
    c.links = {{"R000001", "T0001", true, ""},
               {"R000002", "", true, ""},
               {"R000003", "T0002", true, ""},
               {"R000004", "", false, "T0002"}};

    std::vector<MatchRecord> matches;
    matches.push_back({"R000001", MatchOutcome::Missed, {}, ""});
    matches.push_back({"R000002", MatchOutcome::Missed, {}, ""});
    matches.push_back({"R000003", MatchOutcome::Matched, {{"T0002", 0}}, "T0002"});
    matches.push_back({"R000004", MatchOutcome::Missed, {}, ""});

    const auto result = taxonomy::annotate_missed(matches, c);
    CHECK(result.refs_assessed == 2);  // R000001 and the phantom R000004
    CHECK(result.refs_skipped == 1);   // R000002 has nothing to compare against
    REQUIRE(result.annotations.size() == 2);
    CHECK(result.annotations[0].ref_id == "R000001");
    CHECK(names(result.annotations[0].codes) == Strings{"S"});
    CHECK(result.annotations[1].ref_id == "R000004");
    CHECK(result.annotations[1].field == Field::StartPage);

    const auto stats = taxonomy::single_vs_multi_inaccuracy_stats(result.annotations);
    CHECK(stats.refs_with_annotations == 2);
    CHECK(stats.single_inaccuracy_refs == 2);
    CHECK(stats.multi_inaccuracy_refs == 0);
}
