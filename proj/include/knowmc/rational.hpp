#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace knowmc {

// Exact rational arithmetic. Every probability, weight, and threshold in the
// engine flows through this type; doubles appear only in final reports.
using Rat = boost::multiprecision::cpp_rational;

// Parses "p/q", an integer "p", or a decimal such as "0.75" (exactly 3/4).
// A leading '-' is accepted. Throws std::invalid_argument on malformed input
// or a zero denominator.
Rat parse_rat(const std::string& text);

// Lowest-terms rendering: "p/q", or "p" alone when the denominator is 1.
std::string format_rat(const Rat& r);

double to_double(const Rat& r);

// Shortest decimal form with the given number of significant digits.
std::string format_double(double x, int digits);

}  // namespace knowmc
