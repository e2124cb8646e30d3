#pragma once

#include <gmpxx.h>

#include <cctype>
#include <compare>
#include <string>
#include <string_view>

#include "l0/error.hpp"

namespace l0 {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p/q", "-p/q" or an integer string into a canonical rational.
inline Rational parse_rational(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw InputError("empty rational literal");
  std::size_t slash = s.find('/');
  auto valid_int = [](std::string_view part) {
    std::size_t i = 0;
    if (!part.empty() && (part[0] == '-' || part[0] == '+')) i = 1;
    if (i >= part.size()) return false;
    for (; i < part.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(part[i]))) return false;
    }
    return true;
  };
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+') {
    throw InputError("malformed rational literal '" + std::string(text) + "'");
  }
  if (num[0] == '+') num.erase(0, 1);
  Integer d(den);
  if (d == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
  Rational r(Integer(num), d);
  r.canonicalize();
  return r;
}

/// Canonical text form: "p/q" in lowest terms, or an integer string.
inline std::string to_string(const Rational& r) {
  Rational c = r;
  c.canonicalize();
  return c.get_str();
}

inline std::strong_ordering compare(const Rational& a, const Rational& b) {
  int c = cmp(a, b);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

inline Rational floor_div(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return Rational(q);
}

inline Integer binomial(unsigned long n, unsigned long k) {
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

/// Gaussian rational a + b·i.
struct Complex {
  Rational re;
  Rational im;

  Complex() = default;
  Complex(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}

  Complex conj() const { return {re, -im}; }
  Rational norm2() const { return re * re + im * im; }
  bool is_real() const { return im == 0; }

  friend Complex operator+(const Complex& a, const Complex& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend Complex operator-(const Complex& a, const Complex& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Complex operator/(const Complex& a, const Complex& b) {
    Rational d = b.norm2();
    if (d == 0) throw InputError("complex division by zero");
    Complex n = a * b.conj();
    return {n.re / d, n.im / d};
  }
  friend bool operator==(const Complex& a, const Complex& b) {
    return a.re == b.re && a.im == b.im;
  }
};

/// "re", or "re+imi" / "re-imi" with canonical rational parts.
inline std::string to_string(const Complex& z) {
  if (z.im == 0) return to_string(z.re);
  std::string out = to_string(z.re);
  if (sgn(z.im) >= 0) out += "+";
  return out + to_string(z.im) + "i";
}

inline Complex parse_complex(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw InputError("empty complex literal");
  if (s.back() != 'i') return Complex(parse_rational(s));
  std::string body = s.substr(0, s.size() - 1);
  // split at the last sign that is not the leading one
  std::size_t split = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if (body[i] == '+' || body[i] == '-') {
      split = i;
      break;
    }
  }
  auto imag = [](std::string part) {
    if (part.empty() || part == "+") return Rational(1);
    if (part == "-") return Rational(-1);
    return parse_rational(part);
  };
  if (split == std::string::npos) return Complex(0, imag(body));
  return Complex(parse_rational(body.substr(0, split)), imag(body.substr(split)));
}

}  // namespace l0
