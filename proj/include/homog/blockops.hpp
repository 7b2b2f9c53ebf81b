#pragma once

#include <optional>
#include <sstream>

#include "homog/linalg.hpp"
#include "homog/spaces.hpp"

namespace homog {

/// Minimal dense matrix, used for the exact backend.
template <class S>
struct DenseMat {
  int rows = 0, cols = 0;
  std::vector<S> a;

  DenseMat() = default;
  DenseMat(int r, int c) : rows(r), cols(c), a(std::size_t(r) * std::size_t(c), S(0)) {}
  S& operator()(int r, int c) { return a[std::size_t(r) * cols + c]; }
  const S& operator()(int r, int c) const { return a[std::size_t(r) * cols + c]; }

  static DenseMat identity(int n) {
    DenseMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = S(1);
    return m;
  }
  DenseMat operator*(const DenseMat& o) const {
    DenseMat r(rows, o.cols);
    for (int i = 0; i < rows; ++i)
      for (int k = 0; k < cols; ++k) {
        const S& v = (*this)(i, k);
        if (v == S(0)) continue;
        for (int j = 0; j < o.cols; ++j) r(i, j) += v * o(k, j);
      }
    return r;
  }
  DenseMat operator+(const DenseMat& o) const {
    DenseMat r = *this;
    for (std::size_t i = 0; i < a.size(); ++i) r.a[i] += o.a[i];
    return r;
  }
  DenseMat operator-(const DenseMat& o) const {
    DenseMat r = *this;
    for (std::size_t i = 0; i < a.size(); ++i) r.a[i] -= o.a[i];
    return r;
  }
};

/// Block operator between weighted spaces, stored in the monomial basis.
/// Block (i, j) maps block j of the domain into block i of the codomain;
/// the mu-weights live in the Gram diagonals, not in the entries, so all
/// entries are rational functions of lambda.
template <class S>
struct BlockOp {
  SpaceDesc<S> dom, cod;
  std::vector<DenseMat<S>> blocks;  // cod.n * dom.n, row-major over blocks

  BlockOp() = default;
  BlockOp(SpaceDesc<S> d, SpaceDesc<S> c) : dom(std::move(d)), cod(std::move(c)) {
    blocks.assign(std::size_t(cod.n) * dom.n, DenseMat<S>(cod.N + 1, dom.N + 1));
  }
  DenseMat<S>& block(int i, int j) { return blocks[std::size_t(i) * dom.n + j]; }
  const DenseMat<S>& block(int i, int j) const { return blocks[std::size_t(i) * dom.n + j]; }

  bool block_is_zero(int i, int j) const {
    for (const S& v : block(i, j).a)
      if (!(v == S(0))) return false;
    return true;
  }

  BlockOp operator*(const BlockOp& o) const {
    BlockOp r(o.dom, cod);
    for (int i = 0; i < cod.n; ++i)
      for (int j = 0; j < o.dom.n; ++j) {
        DenseMat<S> acc(cod.N + 1, o.dom.N + 1);
        for (int k = 0; k < dom.n; ++k) acc = acc + block(i, k) * o.block(k, j);
        r.block(i, j) = std::move(acc);
      }
    return r;
  }
  BlockOp operator+(const BlockOp& o) const {
    BlockOp r = *this;
    for (std::size_t i = 0; i < blocks.size(); ++i) r.blocks[i] = r.blocks[i] + o.blocks[i];
    return r;
  }
  BlockOp operator-(const BlockOp& o) const {
    BlockOp r = *this;
    for (std::size_t i = 0; i < blocks.size(); ++i) r.blocks[i] = r.blocks[i] - o.blocks[i];
    return r;
  }

  static BlockOp identity(const SpaceDesc<S>& sp) {
    BlockOp r(sp, sp);
    for (int i = 0; i < sp.n; ++i) r.block(i, i) = DenseMat<S>::identity(sp.N + 1);
    return r;
  }
};

using BlockOpQ = BlockOp<Rational>;
using BlockOpD = BlockOp<double>;

/// Adjoint with respect to the weighted Gram inner products of the domain
/// and codomain. Exact in the rational backend.
template <class S>
BlockOp<S> weighted_adjoint(const BlockOp<S>& x) {
  BlockOp<S> r(x.cod, x.dom);
  for (int j = 0; j < x.dom.n; ++j) {
    std::vector<S> gd(std::size_t(x.dom.N) + 1);
    for (int d = 0; d <= x.dom.N; ++d) gd[std::size_t(d)] = gram_entry(x.dom, j, d);
    for (int i = 0; i < x.cod.n; ++i) {
      const DenseMat<S>& b = x.block(i, j);
      DenseMat<S>& t = r.block(j, i);
      for (int rrow = 0; rrow <= x.dom.N; ++rrow)
        for (int ccol = 0; ccol <= x.cod.N; ++ccol) {
          if (b(ccol, rrow) == S(0)) continue;
          t(rrow, ccol) = S(b(ccol, rrow) * gram_entry(x.cod, i, ccol) / gd[std::size_t(rrow)]);
        }
    }
  }
  return r;
}

/// k-fold differentiation in the monomial basis: integer entries d!/(d-k)!.
template <class S>
DenseMat<S> derivative_matrix(unsigned k, int N) {
  DenseMat<S> m(N + 1, N + 1);
  for (int d = int(k); d <= N; ++d) {
    S v(1);
    for (int t = 0; t < int(k); ++t) v *= S(d - t);
    m(d - int(k), d) = v;
  }
  return m;
}

/// Single-block d^k as a BlockOp between scalar spaces.
template <class S>
BlockOp<S> derivative_block(const S& lambda_from, const S& lambda_to, unsigned k, int N) {
  BlockOp<S> r(SpaceDesc<S>::unit(lambda_from, 1, N), SpaceDesc<S>::unit(lambda_to, 1, N));
  r.block(0, 0) = derivative_matrix<S>(k, N);
  return r;
}

/// Adjoint of d^m : H^(s_from) -> H^(s_to) against unweighted Grams, as an
/// explicit single diagonal: entry (e+m, e) = (s_from)_{e+m} / (s_to)_e.
template <class S>
DenseMat<S> derivative_adjoint_matrix(const S& s_from, const S& s_to, unsigned m, int N) {
  DenseMat<S> r(N + 1, N + 1);
  for (int e = 0; e + int(m) <= N; ++e)
    r(e + int(m), e) =
        S(pochhammer(s_from, unsigned(e + int(m))) / pochhammer(s_to, unsigned(e)));
  return r;
}

/// Multiplication by the coordinate function on a single block.
template <class S>
BlockOp<S> weighted_shift(const S& lambda, int N) {
  BlockOp<S> r(SpaceDesc<S>::unit(lambda, 1, N), SpaceDesc<S>::unit(lambda, 1, N));
  for (int d = 0; d < N; ++d) r.block(0, 0)(d + 1, d) = S(1);
  return r;
}

/// The block matrix of the multiplication operator: diagonal blocks are
/// coordinate shifts, block (i, j) for i > j is
///   -(j+1)_{i-j} / (lambda+2j)_{2i-2j-1} * d^{i-j-1}.
template <class S>
BlockOp<S> build_A(const S& lambda, const std::vector<S>& mu, int N) {
  SpaceDesc<S> sp(lambda, mu, N);
  BlockOp<S> r(sp, sp);
  for (int i = 0; i < sp.n; ++i) {
    for (int d = 0; d < N; ++d) r.block(i, i)(d + 1, d) = S(1);
    for (int j = 0; j < i; ++j) {
      S scal = S(-pochhammer(S(j + 1), unsigned(i - j)) /
                 pochhammer(sp.block_lambda(j), unsigned(2 * (i - j) - 1)));
      DenseMat<S> dm = derivative_matrix<S>(unsigned(i - j - 1), N);
      for (auto& v : dm.a) v *= scal;
      r.block(i, j) = std::move(dm);
    }
  }
  return r;
}

/// The block matrix of the inclusion into the lambda+1 scale: block (i, j)
/// for i >= j is (j+1)_{i-j} / (lambda+2j)_{2i-2j} * d^{i-j}. The codomain
/// carries the target weights. The lambda-1 side inclusion is the same
/// constructor invoked with (lambda-1, mu'', mu).
template <class S>
BlockOp<S> build_Bplus(const S& lambda, const std::vector<S>& mu,
                       const std::vector<S>& mu_target, int N) {
  SpaceDesc<S> d(lambda, mu, N), c(S(lambda + S(1)), mu_target, N);
  BlockOp<S> r(d, c);
  for (int i = 0; i < c.n; ++i)
    for (int j = 0; j <= i && j < d.n; ++j) {
      S scal = S(pochhammer(S(j + 1), unsigned(i - j)) /
                 pochhammer(d.block_lambda(j), unsigned(2 * (i - j))));
      DenseMat<S> dm = derivative_matrix<S>(unsigned(i - j), N);
      for (auto& v : dm.a) v *= scal;
      r.block(i, j) = std::move(dm);
    }
  return r;
}

/// The middle operator: block (j, k) is x-scalar times the adjoint of
/// d^{k-j+1}, zero for j > k+1. Requires generic parameters.
template <class S>
BlockOp<S> build_C(const S& lambda, const std::vector<S>& mu, int N) {
  auto dp = defect_parameters(lambda, mu);
  if (!dp.generic) throw std::domain_error("build_C: non-generic parameters");
  const int n = int(mu.size());
  SpaceDesc<S> d(S(lambda + S(1)), dp.mu_prime(), N);
  SpaceDesc<S> c(S(lambda - S(1)), dp.mu_doubleprime, N);
  BlockOp<S> r(d, c);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j <= k; ++j) {
      // c_jk = -(j+1)_{k-j} / (lambda+2j-1)_{2k-2j+1} (d^{k-j+1})*
      S scal = S(-pochhammer(S(j + 1), unsigned(k - j)) /
                 pochhammer(S(lambda + S(2 * j - 1)), unsigned(2 * (k - j) + 1)));
      scal = S(scal * dp.mu_doubleprime[std::size_t(j)] * dp.mu_prime_inv[std::size_t(k)]);
      DenseMat<S> m = derivative_adjoint_matrix<S>(S(lambda + S(2 * j - 1)),
                                                   S(lambda + S(2 * k + 1)),
                                                   unsigned(k - j + 1), N);
      for (auto& v : m.a) v *= scal;
      r.block(j, k) = std::move(m);
    }
    if (k + 1 < n) {
      S scal = S(S(k + 1) / S(lambda + S(2 * k - 1)));
      scal = S(scal * mu[std::size_t(k)] * dp.mu_prime_inv[std::size_t(k)]);
      DenseMat<S> m(N + 1, N + 1);
      for (int e = 0; e <= N; ++e) m(e, e) = scal;
      r.block(k + 1, k) = std::move(m);
    }
  }
  return r;
}

/// Scalar constants of the middle operator in the orthonormal scaling,
/// x_{jk} as displayed: block (j,k) of the orthonormal C is x_jk (d^{k-j+1})*.
inline double middle_x(double lambda, const std::vector<double>& mu, int j, int k) {
  auto dp = defect_parameters(lambda, mu);
  std::vector<double> mup = dp.mu_prime();
  if (j > k + 1) return 0.0;
  if (j == k + 1)
    return (k + 1) * mu[std::size_t(k)] /
           (std::sqrt(mup[std::size_t(k)] * dp.mu_doubleprime[std::size_t(k + 1)]) *
            (lambda + 2 * k - 1));
  return -std::sqrt(dp.mu_doubleprime[std::size_t(j)]) * pochhammer(double(j + 1), unsigned(k - j)) /
         (std::sqrt(mup[std::size_t(k)]) * pochhammer(lambda + 2 * j - 1, unsigned(2 * (k - j) + 1)));
}

/// y_jk = x_jk sqrt((lambda+2j-1)_{2k-2j+2}).
inline double middle_y(double lambda, const std::vector<double>& mu, int j, int k) {
  if (j > k + 1) return 0.0;
  return middle_x(lambda, mu, j, k) *
         std::sqrt(pochhammer(lambda + 2 * j - 1, unsigned(2 * (k - j) + 2)));
}

/// Flattened matrix in the orthonormal basis of the weighted spaces.
/// Index = block * (N+1) + degree. Entry scaling is done in logs so large
/// truncations do not overflow.
inline Mtx to_orthonormal(const BlockOpD& x) {
  Mtx m = Mtx::Zero(x.cod.dim(), x.dom.dim());
  std::vector<double> lgc(std::size_t(x.cod.dim())), lgd(std::size_t(x.dom.dim()));
  for (int i = 0; i < x.cod.n; ++i)
    for (int r = 0; r <= x.cod.N; ++r)
      lgc[std::size_t(x.cod.flat(i, r))] = log_gram_entry(x.cod, i, r);
  for (int j = 0; j < x.dom.n; ++j)
    for (int c = 0; c <= x.dom.N; ++c)
      lgd[std::size_t(x.dom.flat(j, c))] = log_gram_entry(x.dom, j, c);
  for (int i = 0; i < x.cod.n; ++i)
    for (int j = 0; j < x.dom.n; ++j) {
      const DenseMat<double>& b = x.block(i, j);
      for (int r = 0; r <= x.cod.N; ++r)
        for (int c = 0; c <= x.dom.N; ++c) {
          double v = b(r, c);
          if (v == 0.0) continue;
          int R = x.cod.flat(i, r), C = x.dom.flat(j, c);
          m(R, C) = v * std::exp(0.5 * (lgc[std::size_t(R)] - lgd[std::size_t(C)]));
        }
    }
  return m;
}

inline BlockOpD to_double_op(const BlockOpQ& x) {
  std::vector<double> md, mc;
  for (const auto& v : x.dom.mu) md.push_back(to_double(v));
  for (const auto& v : x.cod.mu) mc.push_back(to_double(v));
  BlockOpD r(SpaceDescD(to_double(x.dom.lambda), md, x.dom.N),
             SpaceDescD(to_double(x.cod.lambda), mc, x.cod.N));
  for (std::size_t b = 0; b < x.blocks.size(); ++b)
    for (std::size_t i = 0; i < x.blocks[b].a.size(); ++i)
      r.blocks[b].a[i] = to_double(x.blocks[b].a[i]);
  return r;
}

/// Largest singular value of the flattened orthonormal matrix.
inline double operator_norm(const BlockOpD& x) { return spectral_norm(to_orthonormal(x)); }

/// Rows/columns of the flattened matrix with per-block degree <= interior.
inline Mtx interior_submatrix(const Mtx& m, int nrow, int Nrow, int ncol, int Ncol,
                              int interior) {
  int ri = std::min(interior, Nrow) + 1, ci = std::min(interior, Ncol) + 1;
  Mtx out(nrow * ri, ncol * ci);
  for (int i = 0; i < nrow; ++i)
    for (int j = 0; j < ncol; ++j)
      out.block(i * ri, j * ci, ri, ci) = m.block(i * (Nrow + 1), j * (Ncol + 1), ri, ci);
  return out;
}

struct ColumnReport {
  bool pass = true;
  int block = -1, degree = -1;  // first failing column
  std::string what() const {
    std::ostringstream os;
    os << "first failing column: block " << block << ", degree " << degree;
    return os.str();
  }
};

namespace detail {
/// Zero test of e on all columns with degree <= maxdeg.
template <class S>
ColumnReport columns_zero(const BlockOp<S>& e, int maxdeg) {
  maxdeg = std::min(maxdeg, e.dom.N);
  for (int j = 0; j < e.dom.n; ++j)
    for (int c = 0; c <= maxdeg; ++c)
      for (int i = 0; i < e.cod.n; ++i)
        for (int r = 0; r <= e.cod.N; ++r)
          if (!(e.block(i, j)(r, c) == S(0))) return ColumnReport{false, j, c};
  return ColumnReport{};
}
}  // namespace detail

/// Exact identity (B+)* B+ + A* A = I on columns of degree <= N-1.
template <class S>
ColumnReport check_defect_identity(const S& lambda, const std::vector<S>& mu, int N) {
  auto dp = defect_parameters(lambda, mu);
  if (!dp.generic) throw std::domain_error("check_defect_identity: non-generic parameters");
  BlockOp<S> A = build_A(lambda, mu, N);
  BlockOp<S> Bp = build_Bplus(lambda, mu, dp.mu_prime(), N);
  BlockOp<S> E = weighted_adjoint(Bp) * Bp + weighted_adjoint(A) * A - BlockOp<S>::identity(A.dom);
  return detail::columns_zero(E, N - 1);
}

/// Exact identity B- C = -A (B+)* on columns of degree <= N-n-1.
template <class S>
ColumnReport check_C_equation(const S& lambda, const std::vector<S>& mu, int N) {
  auto dp = defect_parameters(lambda, mu);
  if (!dp.generic) throw std::domain_error("check_C_equation: non-generic parameters");
  BlockOp<S> A = build_A(lambda, mu, N);
  BlockOp<S> Bp = build_Bplus(lambda, mu, dp.mu_prime(), N);
  BlockOp<S> Bm = build_Bplus(S(lambda - S(1)), dp.mu_doubleprime, mu, N);
  BlockOp<S> C = build_C(lambda, mu, N);
  BlockOp<S> E = Bm * C + A * weighted_adjoint(Bp);
  return detail::columns_zero(E, N - int(mu.size()) - 1);
}

/// Exact identity C B+ = -(B-)* A on columns of degree <= N-n-1; this is the
/// z = 0 instance of the product-formula master identity.
template <class S>
ColumnReport check_master_at_zero(const S& lambda, const std::vector<S>& mu, int N) {
  auto dp = defect_parameters(lambda, mu);
  if (!dp.generic) throw std::domain_error("check_master_at_zero: non-generic parameters");
  BlockOp<S> A = build_A(lambda, mu, N);
  BlockOp<S> Bp = build_Bplus(lambda, mu, dp.mu_prime(), N);
  BlockOp<S> Bm = build_Bplus(S(lambda - S(1)), dp.mu_doubleprime, mu, N);
  BlockOp<S> C = build_C(lambda, mu, N);
  BlockOp<S> E = C * Bp + weighted_adjoint(Bm) * A;
  return detail::columns_zero(E, N - int(mu.size()) - 1);
}

/// Doubling scan for a norm violation; returns the first truncation where
/// the norm exceeds 1 + margin, or nullopt up to maxN.
inline std::optional<int> contractivity_violation_scan(double lambda,
                                                       const std::vector<double>& mu,
                                                       double margin, int maxN) {
  for (int N = 8; N <= maxN; N *= 2) {
    if (operator_norm(build_A(lambda, mu, N)) > 1.0 + margin) return N;
  }
  return std::nullopt;
}

}  // namespace homog
