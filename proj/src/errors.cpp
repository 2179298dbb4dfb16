#include "citmatch/errors.hpp"

namespace citmatch {

namespace {

std::string summarize(const std::string &path, const std::vector<ParseIssue> &issues) {
    std::string msg = path + ": " + std::to_string(issues.size()) + " malformed line(s)";
    const std::size_t shown = issues.size() < 5 ? issues.size() : 5;
    for (std::size_t i = 0; i < shown; ++i)
        msg += "\n  line " + std::to_string(issues[i].line) + ": " + issues[i].message;
    if (issues.size() > shown)
        msg += "\n  ...";
    return msg;
}

}  // namespace

CorpusParseError::CorpusParseError(const std::string &path, std::vector<ParseIssue> issues)
    : std::runtime_error(summarize(path, issues)), path_(path), issues_(std::move(issues)) {}

}  // namespace citmatch
