#include "causevo/rational.hpp"

#include <cctype>
#include <cmath>

#include "causevo/error.hpp"

namespace causevo {

namespace {

BigInt parse_integer(std::string_view s, std::string_view whole) {
  if (s.empty()) throw InputError("malformed rational '" + std::string(whole) + "'");
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw InputError("malformed rational '" + std::string(whole) + "'");
    }
  }
  // A leading zero would make cpp_int read the digits as octal.
  while (s.size() > 1 && s.front() == '0') s.remove_prefix(1);
  return BigInt(std::string(s));
}

BigInt pow10(long n) {
  BigInt r = 1;
  for (long i = 0; i < n; ++i) r *= 10;
  return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw InputError("empty rational");

  bool negative = false;
  if (s.front() == '-' || s.front() == '+') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(s.substr(0, slash), text);
    BigInt den = parse_integer(s.substr(slash + 1), text);
    if (den == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    value = Rational(num, den);
  } else {
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
      std::string_view exp_text = s.substr(e + 1);
      bool exp_negative = false;
      if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
        exp_negative = exp_text.front() == '-';
        exp_text.remove_prefix(1);
      }
      BigInt mag = parse_integer(exp_text, text);
      if (mag > 4000) throw InputError("exponent out of range in '" + std::string(text) + "'");
      exponent = mag.convert_to<long>();
      if (exp_negative) exponent = -exponent;
      s = s.substr(0, e);
    }
    std::string digits;
    long frac_digits = 0;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
      std::string_view int_part = s.substr(0, dot);
      std::string_view frac_part = s.substr(dot + 1);
      if (int_part.empty() && frac_part.empty()) {
        throw InputError("malformed rational '" + std::string(text) + "'");
      }
      digits = std::string(int_part) + std::string(frac_part);
      frac_digits = static_cast<long>(frac_part.size());
    } else {
      digits = std::string(s);
    }
    BigInt mantissa = parse_integer(digits, text);
    long shift = exponent - frac_digits;
    if (shift >= 0) {
      value = Rational(mantissa * pow10(shift));
    } else {
      value = Rational(mantissa, pow10(-shift));
    }
  }
  return negative ? Rational(-value) : value;
}

std::string format_rational(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational rational_from_double(double v) {
  if (!std::isfinite(v)) throw InputError("non-finite weight");
  int exp = 0;
  double mant = std::frexp(v, &exp);
  // 53 bits of mantissa become an exact integer.
  double scaled = std::ldexp(mant, 53);
  BigInt m(static_cast<long long>(scaled));
  exp -= 53;
  if (exp >= 0) {
    return Rational(m << exp);
  }
  BigInt den = 1;
  den <<= -exp;
  return Rational(m, den);
}

}  // namespace causevo
