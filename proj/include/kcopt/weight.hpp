#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace kcopt {

/// Exact rational weight. cpp_rational keeps the canonical form
/// (gcd-reduced, positive denominator) at all times.
using Weight = boost::multiprecision::cpp_rational;

/// Accepts an optional sign followed by digits with an optional decimal
/// fraction ("-1.25") or an explicit denominator ("7/2").
/// Throws FormatError on anything else.
Weight parse_weight(std::string_view text);

/// "p" when the denominator is 1, "p/q" otherwise.
std::string format_weight(const Weight& w);

}  // namespace kcopt
