#pragma once

#include <vector>

#include "homog/rational.hpp"

namespace homog {

/// Defect parameters of the weighted multiplication operator.
/// mu_prime is stored through its reciprocals: the extremal weights make
/// some 1/mu'_k vanish, and the reciprocal list is what the formulas use.
template <class S>
struct DefectParams {
  std::vector<S> mu_prime_inv;    // length n
  std::vector<S> mu_doubleprime;  // length n
  bool generic = false;           // all entries strictly positive and lambda > 1

  std::vector<S> mu_prime() const {
    std::vector<S> r;
    r.reserve(mu_prime_inv.size());
    for (const S& v : mu_prime_inv) r.push_back(S(1) / v);
    return r;
  }
};

/// 1/mu'_k = ((l+2k-1)/(l+2k)) / mu_k - ((k+1)/(l+2k))^2 / mu_{k+1}, last
/// entry without the second term; mu''_0 = mu_0 and
/// mu''_{k+1} = mu_{k+1} - (k+1)^2 mu_k / ((l+2k-1)(l+2k)).
template <class S>
DefectParams<S> defect_parameters(const S& lambda, const std::vector<S>& mu) {
  const int n = int(mu.size());
  DefectParams<S> out;
  out.mu_prime_inv.resize(n);
  out.mu_doubleprime.resize(n);
  for (int k = 0; k < n; ++k) {
    S l2k = lambda + S(2 * k);
    S v = (l2k - S(1)) / l2k / mu[k];
    if (k + 1 < n) {
      S q = S(k + 1) / l2k;
      v -= q * q / mu[k + 1];
    }
    out.mu_prime_inv[k] = v;
  }
  out.mu_doubleprime[0] = mu[0];
  for (int k = 0; k + 1 < n; ++k) {
    S l2k = lambda + S(2 * k);
    out.mu_doubleprime[k + 1] = mu[k + 1] - S((k + 1) * (k + 1)) * mu[k] / ((l2k - S(1)) * l2k);
  }
  out.generic = lambda > S(1);
  for (int k = 0; k < n && out.generic; ++k)
    if (!(out.mu_prime_inv[k] > S(0)) || !(out.mu_doubleprime[k] > S(0))) out.generic = false;
  return out;
}

}  // namespace homog
