#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace homog {

// Exact scalar backend. mpq_class keeps values reduced with positive
// denominator, which is exactly the canonical form we need.
using Rational = mpq_class;
using cplx = std::complex<double>;

/// mpq_class(n, d) does not reduce; this does.
inline Rational ratio(long n, long d) {
  Rational q(n, d);
  q.canonicalize();
  return q;
}

inline double to_double(const Rational& q) { return q.get_d(); }
inline double to_double(double x) { return x; }

inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Rising factorial (x)_p = x(x+1)...(x+p-1); (x)_0 = 1.
inline Rational pochhammer(const Rational& x, unsigned p) {
  Rational r(1);
  for (unsigned i = 0; i < p; ++i) r *= Rational(x + long(i));
  return r;
}

inline double pochhammer(double x, unsigned p) {
  double r = 1.0;
  for (unsigned i = 0; i < p; ++i) r *= x + double(i);
  return r;
}

template <class S>
S factorial(unsigned n) {
  return pochhammer(S(1), n);
}

/// Integer binomial coefficient, exact for the ranges used here (l <= 62).
inline std::uint64_t binomial_u64(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Generalized binomial binom(x, k) = (x-k+1)_k / k!.
inline Rational gen_binomial(const Rational& x, unsigned k) {
  return Rational(pochhammer(Rational(x - long(k) + 1), k) / factorial<Rational>(k));
}

inline double gen_binomial(double x, unsigned k) {
  double r = 1.0;
  for (unsigned i = 1; i <= k; ++i) r *= (x - double(k) + double(i)) / double(i);
  return r;
}

/// Parses "p/q", integers, and finite decimals ("1.5" -> 3/2).
/// Returns nullopt when the token is not an exact rational literal.
inline std::optional<Rational> parse_rational(const std::string& s) {
  if (s.empty()) return std::nullopt;
  auto digits = [](const std::string& t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!digits(num) || !digits(den)) return std::nullopt;
    mpz_class d{den};
    if (d == 0) return std::nullopt;
    Rational q{mpz_class{num}, d};
    q.canonicalize();
    return q;
  }
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
    if (head.empty() || head == "-" || head == "+") head += "0";
    if (!digits(head) || tail.empty() || !digits("0" + tail)) return std::nullopt;
    Rational q{mpz_class{head}};
    Rational frac{mpz_class{tail}};
    mpz_class den{1};
    for (std::size_t i = 0; i < tail.size(); ++i) den *= 10;
    frac /= Rational(den);
    if (s[0] == '-') frac = -frac;
    q += frac;
    q.canonicalize();
    return q;
  }
  if (!digits(s)) return std::nullopt;
  Rational q{mpz_class(s)};
  q.canonicalize();
  return q;
}

inline Rational rational_or_throw(const std::string& s) {
  auto q = parse_rational(s);
  if (!q) throw std::invalid_argument("not a rational literal: " + s);
  return *q;
}

}  // namespace homog
