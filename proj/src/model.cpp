#include "citmatch/model.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <tuple>
#include <unordered_set>

namespace citmatch {

std::string to_string(Domain d) {
    return d == Domain::NaturalSciences ? "natural_sciences" : "social_sciences";
}

std::optional<Domain> domain_from_string(const std::string &s) {
    if (s == "natural_sciences")
        return Domain::NaturalSciences;
    if (s == "social_sciences")
        return Domain::SocialSciences;
    return std::nullopt;
}

std::string to_string(MatchOutcome o) {
    switch (o) {
        case MatchOutcome::Matched:
            return "matched";
        case MatchOutcome::Ambiguous:
            return "ambiguous";
        case MatchOutcome::Missed:
            return "missed";
    }
    return "missed";
}

std::optional<MatchOutcome> match_outcome_from_string(const std::string &s) {
    if (s == "matched")
        return MatchOutcome::Matched;
    if (s == "ambiguous")
        return MatchOutcome::Ambiguous;
    if (s == "missed")
        return MatchOutcome::Missed;
    return std::nullopt;
}

std::string to_string(Field f) {
    switch (f) {
        case Field::AuthorLast:
            return "author_last";
        case Field::FirstInitial:
            return "first_initial";
        case Field::SecondInitial:
            return "second_initial";
        case Field::PubYear:
            return "pub_year";
        case Field::PubName:
            return "pub_name";
        case Field::Volume:
            return "volume";
        case Field::Issue:
            return "issue";
        case Field::StartPage:
            return "start_page";
        case Field::EndPage:
            return "end_page";
        case Field::Doi:
            return "doi";
    }
    return "author_last";
}

std::optional<Field> field_from_string(const std::string &s) {
    if (s == "author_last")
        return Field::AuthorLast;
    if (s == "first_initial")
        return Field::FirstInitial;
    if (s == "second_initial")
        return Field::SecondInitial;
    if (s == "pub_year")
        return Field::PubYear;
    if (s == "pub_name")
        return Field::PubName;
    if (s == "volume")
        return Field::Volume;
    if (s == "issue")
        return Field::Issue;
    if (s == "start_page")
        return Field::StartPage;
    if (s == "end_page")
        return Field::EndPage;
    if (s == "doi")
        return Field::Doi;
    return std::nullopt;
}

std::string to_string(ViolationKind k) {
    switch (k) {
        case ViolationKind::DuplicateTargetId:
            return "duplicate_target_id";
        case ViolationKind::DuplicateRefId:
            return "duplicate_ref_id";
        case ViolationKind::DuplicateLink:
            return "duplicate_link";
        case ViolationKind::EmptyId:
            return "empty_id";
        case ViolationKind::YearOutOfRange:
            return "year_out_of_range";
        case ViolationKind::PageOrder:
            return "page_order";
        case ViolationKind::DanglingLinkRef:
            return "dangling_link_ref";
        case ViolationKind::DanglingLinkTarget:
            return "dangling_link_target";
        case ViolationKind::LinkShape:
            return "link_shape";
    }
    return "link_shape";
}

namespace {

bool all_digits(const std::string &s) {
    if (s.empty())
        return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

long long digits_value(const std::string &s) {
    long long v = 0;
    std::from_chars(s.data(), s.data() + s.size(), v);
    return v;
}

}  // namespace

ValidationReport validate_corpus(const Corpus &corpus) {
    ValidationReport report;
    auto add = [&](ViolationKind kind, const std::string &subject, std::string message) {
        report.violations.push_back({kind, subject, std::move(message)});
    };

    std::unordered_set<std::string> target_ids;
    for (const TargetArticle &t : corpus.targets) {
        if (t.id.empty())
            add(ViolationKind::EmptyId, t.id, "target with empty id");
        else if (!target_ids.insert(t.id).second)
            add(ViolationKind::DuplicateTargetId, t.id, "target id appears more than once");
        if (t.pub_year < 1400 || t.pub_year > 2200)
            add(ViolationKind::YearOutOfRange, t.id,
                "target pub_year " + std::to_string(t.pub_year) + " outside 1400..2200");
        if (all_digits(t.start_page) && all_digits(t.end_page) && t.start_page.size() <= 18 &&
            t.end_page.size() <= 18 && digits_value(t.start_page) > digits_value(t.end_page))
            add(ViolationKind::PageOrder, t.id,
                "target start_page " + t.start_page + " > end_page " + t.end_page);
    }

    std::unordered_set<std::string> ref_ids;
    for (const CitedReference &r : corpus.refs) {
        if (r.ref_id.empty())
            add(ViolationKind::EmptyId, r.ref_id, "reference with empty ref_id");
        else if (!ref_ids.insert(r.ref_id).second)
            add(ViolationKind::DuplicateRefId, r.ref_id, "ref_id appears more than once");
        if (r.pub_year && (*r.pub_year < 1400 || *r.pub_year > 2200))
            add(ViolationKind::YearOutOfRange, r.ref_id,
                "reference pub_year " + std::to_string(*r.pub_year) + " outside 1400..2200");
    }

    std::unordered_set<std::string> linked_refs;
    for (const GroundTruthLink &l : corpus.links) {
        if (!linked_refs.insert(l.ref_id).second)
            add(ViolationKind::DuplicateLink, l.ref_id, "more than one link for ref");
        if (ref_ids.find(l.ref_id) == ref_ids.end())
            add(ViolationKind::DanglingLinkRef, l.ref_id, "link for unknown ref_id");
        if (!l.true_target_id.empty() && target_ids.find(l.true_target_id) == target_ids.end())
            add(ViolationKind::DanglingLinkTarget, l.ref_id,
                "link names unknown target " + l.true_target_id);
        if (l.truly_cites && !l.phantom_target_id.empty())
            add(ViolationKind::LinkShape, l.ref_id, "truly_cites link carries a phantom target");
        if (!l.truly_cites && l.phantom_target_id.empty())
            add(ViolationKind::LinkShape, l.ref_id, "phantom link without phantom_target_id");
        if (!l.phantom_target_id.empty() &&
            target_ids.find(l.phantom_target_id) == target_ids.end())
            add(ViolationKind::DanglingLinkTarget, l.ref_id,
                "link names unknown phantom target " + l.phantom_target_id);
    }

    std::sort(report.violations.begin(), report.violations.end(),
              [](const Violation &a, const Violation &b) {
                  return std::tie(a.kind, a.subject_id, a.message) <
                         std::tie(b.kind, b.subject_id, b.message);
              });
    return report;
}

}  // namespace citmatch
