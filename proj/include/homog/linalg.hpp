#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <stdexcept>
#include <vector>

#include "homog/rational.hpp"

namespace homog {

using Mtx = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline double max_abs(const Mtx& m) { return m.cwiseAbs().maxCoeff(); }

/// Hermitian PSD square root by eigendecomposition. Eigenvalues in
/// [-clamp, 0) are clamped to zero; anything lower throws.
inline Mtx hermitian_sqrt_psd(const Mtx& x, double clamp = 1e-10) {
  Eigen::SelfAdjointEigenSolver<Mtx> es((x + x.adjoint().eval()) / 2.0);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  Eigen::VectorXd ev = es.eigenvalues();
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i) < -clamp) throw std::domain_error("hermitian_sqrt_psd: matrix not PSD");
    if (ev(i) < 0.0) ev(i) = 0.0;
  }
  return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
}

/// Largest singular value.
inline double spectral_norm(const Mtx& x) {
  Eigen::SelfAdjointEigenSolver<Mtx> es(x.adjoint() * x, Eigen::EigenvaluesOnly);
  double top = es.eigenvalues().maxCoeff();
  return top <= 0.0 ? 0.0 : std::sqrt(top);
}

inline std::vector<double> singular_values_sorted(const Mtx& x) {
  Eigen::JacobiSVD<Mtx> svd(x);
  std::vector<double> s(svd.singularValues().data(),
                        svd.singularValues().data() + svd.singularValues().size());
  std::sort(s.begin(), s.end(), std::greater<double>());
  return s;
}

/// Unitary polar factor U V^H of the SVD; sets *deficient when singular
/// values below rank_tol make the factor non-unique.
inline Mtx polar_unitary(const Mtx& x, double rank_tol = 1e-10, bool* deficient = nullptr) {
  Eigen::JacobiSVD<Mtx> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (deficient) {
    const auto& sv = svd.singularValues();
    *deficient = sv.size() == 0 || sv.minCoeff() < rank_tol * std::max(1.0, sv.maxCoeff());
  }
  return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace homog
