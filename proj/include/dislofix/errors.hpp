#pragma once

#include <stdexcept>
#include <string>

#include "dislofix/rational.hpp"

namespace dislofix {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input-file corruption: wrong table dimensions, negative entries, missing
// point values for a formula metric.
struct MalformedTable : Error {
    using Error::Error;
};

// Caller bug: point index outside the space.
struct UnknownPoint : Error {
    using Error::Error;
};

// Invalid construction upstream: a subset with no members.
struct EmptySubset : Error {
    using Error::Error;
};

// Subsets or families bound to different spaces were mixed in one call.
struct MixedSpaces : Error {
    using Error::Error;
};

// A comparison function failed its sampled validity check. Carries the
// first grid point at which monotonicity or phi(t) < t broke.
struct InvalidPhi : Error {
    InvalidPhi(const std::string& msg, Rat witness_t)
        : Error(msg), witness(std::move(witness_t)) {}
    Rat witness;
};

// Theorem conclusions are only claimed for certified instances.
struct NotCertified : Error {
    using Error::Error;
};

struct NoFixedPoint : Error {
    using Error::Error;
};

// Instance-file parse or schema failure; `where` names the offending field.
struct ParseError : Error {
    ParseError(const std::string& where_path, const std::string& msg)
        : Error(where_path + ": " + msg), where(where_path) {}
    std::string where;
};

}  // namespace dislofix
