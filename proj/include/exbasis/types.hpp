#pragma once

#include <Eigen/Dense>
#include <complex>

namespace exbasis {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

/// Hermitian inner product with the convention <u,v> = sum_s u_s * conj(v_s).
Complex hermitian_inner(const CVec& u, const CVec& v);

inline bool is_finite(const CVec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) return false;
  }
  return true;
}

}  // namespace exbasis
