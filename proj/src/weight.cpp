#include "kcopt/weight.hpp"

#include <cctype>

#include "kcopt/errors.hpp"

namespace kcopt {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit((unsigned char)c)) return false;
  return true;
}

}  // namespace

Weight parse_weight(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) throw FormatError("empty weight '" + std::string(text) + "'");

  using Int = boost::multiprecision::cpp_int;
  Weight value;
  if (size_t slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view num = s.substr(0, slash);
    std::string_view den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw FormatError("malformed rational '" + std::string(text) + "'");
    Int d{std::string(den)};
    if (d == 0) throw FormatError("zero denominator in '" + std::string(text) + "'");
    value = Weight(Int{std::string(num)}, d);
  } else if (size_t dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view ip = s.substr(0, dot);
    std::string_view fp = s.substr(dot + 1);
    if (!all_digits(ip) || !all_digits(fp))
      throw FormatError("malformed decimal '" + std::string(text) + "'");
    Int scale = 1;
    for (size_t i = 0; i < fp.size(); ++i) scale *= 10;
    value = Weight(Int{std::string(ip)} * scale + Int{std::string(fp)}, scale);
  } else {
    if (!all_digits(s))
      throw FormatError("malformed weight '" + std::string(text) + "'");
    value = Weight(Int{std::string(s)});
  }
  return negative ? Weight(-value) : value;
}

std::string format_weight(const Weight& w) {
  if (denominator(w) == 1) return numerator(w).str();
  return numerator(w).str() + "/" + denominator(w).str();
}

}  // namespace kcopt
