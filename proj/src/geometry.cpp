#include "exbasis/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace exbasis {

Complex hermitian_inner(const CVec& u, const CVec& v) {
  if (u.size() != v.size()) {
    throw std::invalid_argument("hermitian_inner: dimension mismatch (" +
                                std::to_string(u.size()) + " vs " +
                                std::to_string(v.size()) + ")");
  }
  Complex acc(0.0, 0.0);
  for (Eigen::Index s = 0; s < u.size(); ++s) acc += u[s] * std::conj(v[s]);
  return acc;
}

Frame::Frame(std::vector<CVec> vectors) : vectors_(std::move(vectors)) {
  if (vectors_.empty()) return;
  ambient_dim_ = static_cast<int>(vectors_.front().size());
  for (const auto& v : vectors_) {
    if (static_cast<int>(v.size()) != ambient_dim_) {
      throw std::invalid_argument("Frame: vectors of differing dimension");
    }
    if (!is_finite(v)) throw std::invalid_argument("Frame: non-finite entry");
  }
  if (size() > ambient_dim_) {
    throw std::invalid_argument("Frame: more vectors than ambient dimension");
  }
  if (gram_deviation() > kFrameOrthoTol) {
    throw std::invalid_argument("Frame: vectors are not orthonormal at 1e-10");
  }
}

CMat Frame::matrix() const {
  CMat m(ambient_dim_, size());
  for (int j = 0; j < size(); ++j) m.col(j) = vectors_[j];
  return m;
}

CVec Frame::embed(const CVec& coeffs) const {
  if (static_cast<int>(coeffs.size()) != size()) {
    throw std::invalid_argument("Frame::embed: coefficient count mismatch");
  }
  CVec out = CVec::Zero(ambient_dim_);
  for (int j = 0; j < size(); ++j) out += coeffs[j] * vectors_[j];
  return out;
}

CVec Frame::coefficients(const CVec& v) const {
  CVec out(size());
  for (int j = 0; j < size(); ++j) out[j] = hermitian_inner(v, vectors_[j]);
  return out;
}

double Frame::gram_deviation() const {
  double dev = 0.0;
  for (int i = 0; i < size(); ++i) {
    for (int j = 0; j <= i; ++j) {
      Complex g = hermitian_inner(vectors_[i], vectors_[j]);
      double target = (i == j) ? 1.0 : 0.0;
      dev = std::max(dev, std::abs(g - Complex(target, 0.0)));
    }
  }
  return dev;
}

Frame Frame::standard(int n) {
  std::vector<CVec> vs;
  vs.reserve(n);
  for (int j = 0; j < n; ++j) {
    CVec e = CVec::Zero(n);
    e[j] = 1.0;
    vs.push_back(std::move(e));
  }
  return Frame(std::move(vs));
}

UnitaryMatrix::UnitaryMatrix(CMat m) : entries(std::move(m)) {
  if (entries.rows() != entries.cols()) {
    throw std::invalid_argument("UnitaryMatrix: not square");
  }
  CMat residual = entries * entries.adjoint() - CMat::Identity(entries.rows(), entries.cols());
  if (residual.cwiseAbs().maxCoeff() > kUnitaryTol) {
    throw std::invalid_argument("UnitaryMatrix: U*U^H deviates from I beyond 1e-9");
  }
}

namespace {

// Subtracts the projection of w onto each unit vector in `basis`, twice.
void reorthogonalize(CVec& w, const std::vector<CVec>& basis) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const CVec& u : basis) {
      w -= hermitian_inner(w, u) * u;
    }
  }
}

}  // namespace

Frame gram_schmidt(const std::vector<CVec>& vectors, double rank_tol) {
  std::vector<CVec> out;
  out.reserve(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    CVec w = vectors[i];
    double input_norm = w.norm();
    if (!(input_norm > 0.0) || !is_finite(w)) {
      throw std::invalid_argument("gram_schmidt: zero or non-finite vector at index " +
                                  std::to_string(i));
    }
    reorthogonalize(w, out);
    double norm = w.norm();
    if (norm <= rank_tol * input_norm) {
      throw std::invalid_argument("gram_schmidt: rank deficiency at index " +
                                  std::to_string(i));
    }
    out.push_back(w / norm);
  }
  return Frame(std::move(out));
}

Frame orthocomplement(const Frame& frame, int ambient_dim) {
  if (frame.size() > 0 && frame.ambient_dim() != ambient_dim) {
    throw std::invalid_argument("orthocomplement: ambient dimension mismatch");
  }
  std::vector<CVec> accepted = frame.vectors();
  std::vector<CVec> complement;
  const int want = ambient_dim - frame.size();
  for (int slot = 0; slot < want; ++slot) {
    // Among the identity vectors, keep the one with the largest residual
    // after projecting out everything accepted so far (ties -> lowest index).
    double best_norm = -1.0;
    CVec best;
    for (int c = 0; c < ambient_dim; ++c) {
      CVec w = CVec::Zero(ambient_dim);
      w[c] = 1.0;
      reorthogonalize(w, accepted);
      double norm = w.norm();
      if (norm > best_norm) {
        best_norm = norm;
        best = w / norm;
      }
    }
    if (best_norm <= kFrameOrthoTol) {
      throw std::runtime_error("orthocomplement: failed to complete the frame");
    }
    accepted.push_back(best);
    complement.push_back(best);
  }
  return Frame(std::move(complement));
}

Frame frame_union(const Frame& a, const Frame& b) {
  std::vector<CVec> vs = a.vectors();
  vs.insert(vs.end(), b.vectors().begin(), b.vectors().end());
  return Frame(std::move(vs));
}

UnitaryMatrix change_of_basis(const Frame& a_basis, const Frame& e_basis) {
  if (a_basis.size() != a_basis.ambient_dim() || e_basis.size() != e_basis.ambient_dim() ||
      a_basis.ambient_dim() != e_basis.ambient_dim()) {
    throw std::invalid_argument("change_of_basis: both frames must be full bases of C^n");
  }
  const int n = a_basis.size();
  CMat b(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      b(j, k) = hermitian_inner(a_basis[j], e_basis[k]);
    }
  }
  return UnitaryMatrix(std::move(b));
}

double permutation_product_bound(const CMat& b) {
  const int n = static_cast<int>(b.rows());
  if (b.cols() != n) throw std::invalid_argument("permutation_product_bound: not square");
  if (n > 8) throw std::invalid_argument("permutation_product_bound: n > 8 unsupported");
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = 0.0;
  do {
    double prod = 1.0;
    for (int j = 0; j < n; ++j) prod *= std::abs(b(j, perm[j]));
    best = std::max(best, prod);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace exbasis
