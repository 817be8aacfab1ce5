#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace misoagp {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A raw coordinate lies outside its dimension's bounds.
class BoundsError : public Error {
public:
    BoundsError(std::size_t dimension, const std::string& what) : Error(what), dimension_(dimension) {}
    std::size_t dimension() const noexcept { return dimension_; }

private:
    std::size_t dimension_;
};

/// Cholesky of K + noise*I failed even after jitter escalation.
class IllConditionedKernel : public Error {
public:
    using Error::Error;
};

/// Posterior variance came out negative beyond round-off tolerance.
class NumericalInstability : public Error {
public:
    using Error::Error;
};

/// An objective handed to the inner optimizer returned a non-finite value.
class EvaluationError : public Error {
public:
    EvaluationError(const std::string& what, Eigen::VectorXd point) : Error(what), point_(std::move(point)) {}
    const Eigen::VectorXd& point() const noexcept { return point_; }

private:
    Eigen::VectorXd point_;
};

class EmptyAugmentedSet : public Error {
public:
    using Error::Error;
};

class ProposalFailure : public Error {
public:
    using Error::Error;
};

class UndefinedIncumbent : public Error {
public:
    using Error::Error;
};

/// A source query failed. `output` carries whatever the evaluator emitted.
class SourceEvaluationError : public Error {
public:
    SourceEvaluationError(const std::string& what, std::string output = {})
        : Error(what), output_(std::move(output)) {}
    const std::string& output() const noexcept { return output_; }

private:
    std::string output_;
};

/// Configuration failed validation; every violation is listed.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<std::string> violations)
        : Error(join(violations)), violations_(std::move(violations)) {}
    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out = "invalid configuration:";
        for (const auto& s : v) out += "\n  - " + s;
        return out;
    }
    std::vector<std::string> violations_;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

}  // namespace misoagp
