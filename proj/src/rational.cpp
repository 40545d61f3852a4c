#include <knowmc/rational.hpp>

#include <cctype>
#include <cstdio>
#include <stdexcept>

namespace knowmc {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rat parse_rat(const std::string& text) {
  std::string s = text;
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s = s.substr(1);
  }
  if (s.empty()) throw std::invalid_argument("empty rational literal: '" + text + "'");

  Rat value;
  auto slash = s.find('/');
  auto dot = s.find('.');
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw std::invalid_argument("malformed rational literal: '" + text + "'");
    boost::multiprecision::cpp_int d(den);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    value = Rat(boost::multiprecision::cpp_int(num), d);
  } else if (dot != std::string::npos) {
    std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
    if (!all_digits(whole) || !all_digits(frac))
      throw std::invalid_argument("malformed decimal literal: '" + text + "'");
    boost::multiprecision::cpp_int scale = 1;
    for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
    value = Rat(boost::multiprecision::cpp_int(whole) * scale +
                    boost::multiprecision::cpp_int(frac),
                scale);
  } else {
    if (!all_digits(s)) throw std::invalid_argument("malformed numeric literal: '" + text + "'");
    value = Rat(boost::multiprecision::cpp_int(s));
  }
  return neg ? -value : value;
}

std::string format_rat(const Rat& r) {
  std::string num = numerator(r).str();
  if (denominator(r) == 1) return num;
  return num + "/" + denominator(r).str();
}

double to_double(const Rat& r) { return r.convert_to<double>(); }

std::string format_double(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

}  // namespace knowmc
