#ifndef CITMATCH_ERRORS_HPP
#define CITMATCH_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace citmatch {

// Bad cascade definition / profile invariant breach.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string &what) : std::runtime_error(what) {}
};

class UnknownProfileError : public std::runtime_error {
  public:
    explicit UnknownProfileError(const std::string &name)
        : std::runtime_error("unknown matching profile: " + name), name_(name) {}
    const std::string &name() const { return name_; }

  private:
    std::string name_;
};

// One malformed line in a data file.
struct ParseIssue {
    std::size_t line = 0;
    std::string message;
};

// Collected parse failures for a whole file; nothing is silently dropped.
class CorpusParseError : public std::runtime_error {
  public:
    CorpusParseError(const std::string &path, std::vector<ParseIssue> issues);
    const std::string &path() const { return path_; }
    const std::vector<ParseIssue> &issues() const { return issues_; }

  private:
    std::string path_;
    std::vector<ParseIssue> issues_;
};

class IoError : public std::runtime_error {
  public:
    explicit IoError(const std::string &what) : std::runtime_error(what) {}
};

// Scoring input inconsistency (e.g. a match record without a truth link).
class EvalError : public std::runtime_error {
  public:
    explicit EvalError(const std::string &what) : std::runtime_error(what) {}
};

}  // namespace citmatch

#endif  // CITMATCH_ERRORS_HPP
