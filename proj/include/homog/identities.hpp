#pragma once

#include "homog/rational.hpp"

namespace homog {

// The two combinatorial identities behind the block matrices of the
// multiplication and inclusion operators. Both are checked with exact
// rational arithmetic; no tolerance is involved.

/// sum_{i=j+1}^{l} (j+1)_{i-j} C(l,i) / ((x+2j)_{2i-2j-1} (x+2i)_{l-i})
///   == (l-j) C(l,j) / (x+2j)_{l-j},  for 0 <= j < l.
inline bool check_identity1(const Rational& lambda, unsigned j, unsigned l) {
  if (j >= l) throw std::invalid_argument("check_identity1 requires j < l");
  Rational lhs(0);
  for (unsigned i = j + 1; i <= l; ++i) {
    Rational term = pochhammer(Rational(int(j) + 1), i - j) *
                    Rational(mpz_class(binomial_u64(l, i)));
    term /= pochhammer(lambda + 2 * int(j), 2 * (i - j) - 1);
    term /= pochhammer(lambda + 2 * int(i), l - i);
    lhs += term;
  }
  Rational rhs = Rational(int(l - j)) * Rational(mpz_class(binomial_u64(l, j))) /
                 pochhammer(lambda + 2 * int(j), l - j);
  return lhs == rhs;
}

/// sum_{i=j}^{l} (j+1)_{i-j} C(l,i) / ((x+2j)_{2i-2j} (x+2i+1)_{l-i})
///   == C(l,j) / (x+2j)_{l-j},  for 0 <= j <= l.
inline bool check_identity2(const Rational& lambda, unsigned j, unsigned l) {
  if (j > l) throw std::invalid_argument("check_identity2 requires j <= l");
  Rational lhs(0);
  for (unsigned i = j; i <= l; ++i) {
    Rational term = pochhammer(Rational(int(j) + 1), i - j) *
                    Rational(mpz_class(binomial_u64(l, i)));
    term /= pochhammer(lambda + 2 * int(j), 2 * (i - j));
    term /= pochhammer(lambda + 2 * int(i) + 1, l - i);
    lhs += term;
  }
  Rational rhs =
      Rational(mpz_class(binomial_u64(l, j))) / pochhammer(lambda + 2 * int(j), l - j);
  return lhs == rhs;
}

}  // namespace homog
