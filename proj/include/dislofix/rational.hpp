#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace dislofix {

// All metric values, weights and phi outputs are exact rationals. Inputs
// arrive as "p/q" strings, so nothing in the pipeline ever rounds; the
// float arithmetic mode only relaxes comparisons (see DislocatedSpace).
using Rat = mpq_class;

// Parses "p", "-p", or "p/q" (q > 0 after sign normalization). Returns
// nullopt on malformed text or a zero denominator.
std::optional<Rat> parse_rational(const std::string& text);

// Canonical form: "p" when the denominator is 1, else "p/q" with q > 0.
std::string rational_to_string(const Rat& value);

inline Rat rat_abs(const Rat& value) { return value < 0 ? Rat(-value) : value; }

}  // namespace dislofix
