#include <doctest.h>

#include <random>
#include <string>

#include "citmatch/strmetrics.hpp"
#include "support/oracles.hpp"

using namespace citmatch;

namespace {

std::string random_word(std::mt19937 &rng, int max_len, int alphabet) {
    std::uniform_int_distribution<int> len_dist(0, max_len);
    std::uniform_int_distribution<int> chr(0, alphabet - 1);
    std::string s;
    const int len = len_dist(rng);
    for (int i = 0; i < len; ++i)
        s.push_back(static_cast<char>('a' + chr(rng)));
    return s;
}

}  // namespace

TEST_CASE("levenshtein basics") {
    CHECK(metrics::levenshtein("", "") == 0);
    CHECK(metrics::levenshtein("abc", "") == 3);
    CHECK(metrics::levenshtein("", "abc") == 3);
    CHECK(metrics::levenshtein("kitten", "sitting") == 3);
    CHECK(metrics::levenshtein("Arduengo", "Aduengo") == 1);
    CHECK(metrics::levenshtein("flaw", "lawn") == 2);
    // decorated letters count as one edit, not one per byte
    CHECK(metrics::levenshtein("Müller", "Muller") == 1);
    CHECK(metrics::levenshtein("Großmann", "Grossmann") == 2);
}

TEST_CASE("damerau handles transpositions, including edits inside them") {
    CHECK(metrics::damerau_levenshtein("ab", "ba") == 1);
    CHECK(metrics::damerau_levenshtein("abcdef", "abdcef") == 1);
    CHECK(metrics::damerau_levenshtein("654", "564") == 1);
    // the unrestricted variant scores this 2 (swap + insert); the cheaper
    // "optimal string alignment" walk would say 3
    CHECK(metrics::damerau_levenshtein("CA", "ABC") == 2);
    CHECK(metrics::damerau_levenshtein("Thomas", "Tohmas") == 1);
}

TEST_CASE("damerau never exceeds levenshtein") {
    std::mt19937 rng(99);
    for (int i = 0; i < 4000; ++i) {
        const std::string a = random_word(rng, 20, 6);
        const std::string b = random_word(rng, 20, 6);
        CHECK(metrics::damerau_levenshtein(a, b) <= metrics::levenshtein(a, b));
    }
}

TEST_CASE("both metrics agree with naive full-matrix oracles") {
    std::mt19937 rng(20240301);
    for (int i = 0; i < 10000; ++i) {
        // small alphabets force plenty of repeats and transposition chances
        const int alphabet = 1 + static_cast<int>(rng() % 8);
        const std::string a = random_word(rng, 32, alphabet);
        const std::string b = random_word(rng, 32, alphabet);
        CAPTURE(a);
        CAPTURE(b);
        CHECK(metrics::levenshtein(a, b) == oracles::naive_levenshtein(a, b));
        CHECK(metrics::damerau_levenshtein(a, b) == oracles::naive_damerau(a, b));
    }
}

TEST_CASE("metric axioms (identity, symmetry, triangle inequality)") {
    std::mt19937 rng(4242);
    for (int i = 0; i < 3000; ++i) {
        const std::string a = random_word(rng, 12, 4);
        const std::string b = random_word(rng, 12, 4);
        const std::string c = random_word(rng, 12, 4);
        for (auto *metric : {&metrics::levenshtein, &metrics::damerau_levenshtein}) {
            const std::size_t ab = metric(a, b);
            const std::size_t ba = metric(b, a);
            const std::size_t bc = metric(b, c);
            const std::size_t ac = metric(a, c);
            CHECK(metric(a, a) == 0);
            CHECK(ab == ba);
            if (!a.empty() || !b.empty())
                CHECK((ab == 0) == (a == b));
            CAPTURE(a);
            CAPTURE(b);
            CAPTURE(c);
            CHECK(ac <= ab + bc);  // OSA would fail this; the real metric must not
        }
    }
}

TEST_CASE("soundex pins") {
    CHECK(metrics::soundex("Robert") == "R163");
    CHECK(metrics::soundex("Rupert") == "R163");
    CHECK(metrics::soundex("ASHCRAFT") == "A261");   // H transparent
    CHECK(metrics::soundex("Ashcroft") == "A261");
    CHECK(metrics::soundex("Tymczak") == "T522");    // adjacent same-class letters collapse
    CHECK(metrics::soundex("Pfister") == "P236");    // first letter's class collapses Pf
    CHECK(metrics::soundex("Honeyman") == "H555");
    CHECK(metrics::soundex("HOLLSTEIN") == "H423");
    CHECK(metrics::soundex("HOLLAND") == "H453");
    CHECK(metrics::soundex("ALTENMUELLER") == "A435");
    CHECK(metrics::soundex("ALTENMULLER") == "A435");  // both umlaut spellings collide
    CHECK(metrics::soundex("R") == "R000");
    CHECK(metrics::soundex("r") == "R000");
    CHECK(metrics::soundex("O'Brien") == "O165");
}

TEST_CASE("soundex has nothing to encode") {
    CHECK_FALSE(metrics::soundex("").has_value());
    CHECK_FALSE(metrics::soundex("123").has_value());
    CHECK_FALSE(metrics::soundex("   '").has_value());
}

TEST_CASE("soundex is stable under case") {
    std::mt19937 rng(5);
    for (int i = 0; i < 500; ++i) {
        std::string s = random_word(rng, 12, 26);
        std::string upper = s;
        for (char &c : upper)
            c = static_cast<char>(c - 'a' + 'A');
        CHECK(metrics::soundex(s) == metrics::soundex(upper));
    }
}

TEST_CASE("numeric deviation") {
    CHECK(metrics::numeric_deviation_ok("251", "261", 10));
    CHECK_FALSE(metrics::numeric_deviation_ok("251", "262", 10));
    CHECK(metrics::numeric_deviation_ok("14", "14", 0));
    CHECK(metrics::numeric_deviation_ok("005", "5", 0));  // numeric, not textual
    CHECK_FALSE(metrics::numeric_deviation_ok("", "5", 10));
    CHECK_FALSE(metrics::numeric_deviation_ok("5", "", 10));
    CHECK_FALSE(metrics::numeric_deviation_ok("14", "15", -1));
    // beyond 18 digits only exact equality passes
    const std::string big(25, '9');
    CHECK(metrics::numeric_deviation_ok(big, big, 0));
    CHECK_FALSE(metrics::numeric_deviation_ok(big, big.substr(0, 24), 1000));
    CHECK(metrics::numeric_deviation_ok("12a", "12a", 5));  // non-digits: only a==b passes
    CHECK_FALSE(metrics::numeric_deviation_ok("12a", "12b", 5));
    CHECK_FALSE(metrics::numeric_deviation_ok("12a", "13a", 0));
}

TEST_CASE("thresholds: absolute and proportional with epsilon guard") {
    metrics::MetricThreshold abs1{metrics::ThresholdKind::Absolute, 1.0};
    CHECK(metrics::allowed_edits(abs1, "whatever", "else") == 1);

    metrics::MetricThreshold prop{metrics::ThresholdKind::Proportional, 0.2};
    CHECK(metrics::allowed_edits(prop, "123456789012345", "") == 3);  // 0.2*15 == 3 exactly
    CHECK(metrics::allowed_edits(prop, "1234567890123456", "") == 4);
    CHECK(metrics::allowed_edits(prop, "abcde", "x") == 1);
    CHECK(metrics::allowed_edits(prop, "", "") == 0);
    // lengths are code points: five decorated letters -> ceil(0.2*5) == 1
    CHECK(metrics::allowed_edits(prop, "ußäöü", "") == 1);

    CHECK(metrics::within_threshold("Arduengo", "Aduengo", metrics::MetricKind::Levenshtein,
                                    abs1));
    CHECK_FALSE(metrics::within_threshold("Arduengo", "Fontana",
                                          metrics::MetricKind::Levenshtein, abs1));
}
