#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <string>
#include <vector>

#include "errors.hpp"

namespace minslope {

using Rational = mpq_class;

inline double to_double(const Rational& q) { return q.get_d(); }

// Exact value of a double; every finite double is a dyadic rational.
inline Rational from_double(double x) {
  if (!std::isfinite(x)) throw InputError("non-finite value");
  Rational q(x);
  q.canonicalize();
  return q;
}

// Accepts "3", "-1/2", "0.3", "2.5e-1". Decimals are read exactly, so "0.3" is 3/10.
inline Rational parse_rational(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw InputError("empty number");

  if (auto slash = s.find('/'); slash != std::string::npos) {
    Rational num = parse_rational(s.substr(0, slash));
    Rational den = parse_rational(s.substr(slash + 1));
    if (den == 0) throw InputError("zero denominator in '" + raw + "'");
    Rational q = num / den;
    q.canonicalize();
    return q;
  }

  std::size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
  std::string digits;
  long exp10 = 0;
  bool seen_dot = false, any = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits += c;
      any = true;
      if (seen_dot) --exp10;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else if (c == 'e' || c == 'E') {
      try {
        std::size_t used = 0;
        exp10 += std::stol(s.substr(i + 1), &used);
        if (used != s.size() - i - 1) throw InputError("bad exponent");
      } catch (const std::logic_error&) {
        throw InputError("cannot parse number '" + raw + "'");
      }
      break;
    } else {
      throw InputError("cannot parse number '" + raw + "'");
    }
  }
  if (!any) throw InputError("cannot parse number '" + raw + "'");

  mpz_class mant(digits, 10);
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  Rational q = exp10 < 0 ? Rational(mant, ten_pow) : Rational(mant * ten_pow);
  q.canonicalize();
  return neg ? Rational(-q) : q;
}

inline std::vector<Rational> parse_rational_list(const std::string& s, char sep = ',') {
  std::vector<Rational> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(parse_rational(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(parse_rational(cur));
  return out;
}

inline Rational rpow(const Rational& x, unsigned k) {
  Rational r = 1;
  for (unsigned i = 0; i < k; ++i) r *= x;
  return r;
}

inline mpz_class binom(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace minslope
