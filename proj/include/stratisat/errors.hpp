#ifndef STRATISAT_ERRORS_HPP
#define STRATISAT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace stratisat {

// Violation of a structural invariant (bad quantifier body, empty
// enumeration, sort mismatch in an atom, ...).
class WellFormednessError : public std::logic_error {
public:
    explicit WellFormednessError(const std::string& what) : std::logic_error(what) {}
};

// Evaluation over an interpretation that misses a free variable or holds
// an out-of-range value.
class EvalError : public std::runtime_error {
public:
    explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

// A stage ran out of its configured budget. Deliberately distinct from any
// sat/unsat answer: callers must surface it, never convert it silently.
class ResourceLimitError : public std::runtime_error {
public:
    ResourceLimitError(std::string stage, std::string detail)
        : std::runtime_error(stage + ": " + detail), stage_(std::move(stage)), detail_(std::move(detail)) {}

    const std::string& stage() const { return stage_; }
    const std::string& detail() const { return detail_; }

private:
    std::string stage_;
    std::string detail_;
};

// Internal consistency failure (e.g. a sat answer that fails re-verification).
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

} // namespace stratisat

#endif
