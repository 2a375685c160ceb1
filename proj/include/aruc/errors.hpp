#pragma once

#include <stdexcept>
#include <string>

namespace aruc {

// Instance document could not be parsed (missing/mistyped field).
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// A structurally valid document violates a model invariant.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Unknown builtin or named entity.
struct LookupError : std::runtime_error {
    explicit LookupError(const std::string& what) : std::runtime_error(what) {}
};

// Operation not defined for the given configuration (e.g. wrong norm order).
struct UnsupportedError : std::runtime_error {
    explicit UnsupportedError(const std::string& what) : std::runtime_error(what) {}
};

// Problem is malformed (dimension mismatch and the like).
struct DimensionError : std::invalid_argument {
    explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

// Solver hit an explicit resource cap (pivots, nodes, refinement rounds).
struct ResourceLimitError : std::runtime_error {
    explicit ResourceLimitError(const std::string& what) : std::runtime_error(what) {}
};

// API used in a state it does not allow (e.g. slackness check on non-optimal solve).
struct StateError : std::logic_error {
    explicit StateError(const std::string& what) : std::logic_error(what) {}
};

// A mathematical identity that must hold at optimality failed beyond tolerance.
// Never swallowed: callers either fix the cause or surface it to the user.
struct InternalConsistencyError : std::runtime_error {
    explicit InternalConsistencyError(const std::string& what) : std::runtime_error(what) {}
};

// Dispatch problem has no feasible point (e.g. realized load above residual capacity).
struct InfeasibleError : std::runtime_error {
    explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace aruc
