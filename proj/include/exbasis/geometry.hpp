#pragma once

#include <vector>

#include "exbasis/types.hpp"

namespace exbasis {

inline constexpr double kFrameOrthoTol = 1e-10;
inline constexpr double kUnitaryTol = 1e-9;

/// Ordered list of pairwise Hermitian-orthonormal vectors in C^n, k <= n.
/// Construction validates the Gram matrix against the identity at 1e-10.
class Frame {
 public:
  Frame() = default;
  explicit Frame(std::vector<CVec> vectors);

  int size() const { return static_cast<int>(vectors_.size()); }
  int ambient_dim() const { return ambient_dim_; }
  bool empty() const { return vectors_.empty(); }
  const CVec& operator[](int i) const { return vectors_.at(i); }
  const std::vector<CVec>& vectors() const { return vectors_; }

  /// n x k matrix whose columns are the frame vectors.
  CMat matrix() const;

  /// Coefficients -> ambient vector: sum_j coeffs[j] * vectors[j].
  CVec embed(const CVec& coeffs) const;

  /// Hermitian coefficients of v in this frame: coeffs[j] = <v, f_j>.
  CVec coefficients(const CVec& v) const;

  /// Largest deviation |<f_i,f_j> - delta_ij|.
  double gram_deviation() const;

  static Frame standard(int n);

 private:
  std::vector<CVec> vectors_;
  int ambient_dim_ = 0;
};

/// n x n matrix validated against U * U^H = I entrywise at 1e-9.
struct UnitaryMatrix {
  CMat entries;
  explicit UnitaryMatrix(CMat m);
};

/// Twice-reorthogonalized Gram-Schmidt. The first output vector is parallel
/// to the first input. Throws on rank deficiency, naming the offending
/// zero-based input index.
Frame gram_schmidt(const std::vector<CVec>& vectors, double rank_tol = kFrameOrthoTol);

/// Orthonormal vectors spanning the Hermitian orthocomplement of the frame
/// in C^n. A full frame yields the empty frame. Coordinate-aligned inputs
/// produce coordinate-aligned complements.
Frame orthocomplement(const Frame& frame, int ambient_dim);

/// Concatenation of two frames (must remain orthonormal).
Frame frame_union(const Frame& a, const Frame& b);

/// Change-of-basis matrix between two full orthonormal bases of C^n:
/// entry (j,k) = <a_j, e_k>.
UnitaryMatrix change_of_basis(const Frame& a_basis, const Frame& e_basis);

/// max over permutations sigma of prod_j |b[j][sigma(j)]|, by exhaustive
/// search. For a unitary B this is >= 1/n!. Supported for n <= 8.
double permutation_product_bound(const CMat& b);

}  // namespace exbasis
