#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace jwb {

// Exact rational coefficient field. All arithmetic in the workbench is exact;
// cpp_rational keeps values in lowest terms automatically.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Canonical "p" or "p/q" form, lowest terms, q > 0.
std::string rat_to_string(const Rat& r);

// Parses "p" or "p/q" with optional leading '-'. Throws std::invalid_argument
// on malformed input or zero denominator.
Rat rat_from_string(const std::string& s);

}  // namespace jwb
