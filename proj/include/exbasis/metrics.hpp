#pragma once

#include "exbasis/extremal.hpp"

namespace exbasis {

/// E_D(z;X) = sum_j |<X, e_j>| / s_j over a minimal basis.
double E_metric(const ExtremalBasis& minimal, const CVec& X);

/// A_D(z;X) = sum_j |<X, a_j>| / m_j over a reordered maximal basis (or a
/// radius-sorted mixed basis). Construction-order maximal bases are refused.
double A_metric(const ExtremalBasis& basis, const CVec& X);

struct KernelProxies {
  double inv_s_product_sq = 0.0;  // 1 / s_D(z)^2
  double inv_m_product_sq = 0.0;  // 1 / m_D(z)^2
};

KernelProxies kernel_proxies(const ExtremalBasis& minimal, const ExtremalBasis& maximal);

/// |X| / d_D(q; X/|X|); the homogeneity d_D(z; cX) = d_D(z;X)/|c| is built in.
double inv_disc_direction(const Domain& domain, const CVec& q, const CVec& X,
                          const DiscOptions& opts = {});

/// Bounds from the proof of the A_D ~ E_D comparison: entries of the
/// change-of-basis matrix B (b_jk = <a_j, e_k>) and its inverse C, scaled by
/// the minimal radii, plus the exhaustive permutation product lower bound.
struct BasisMatrixAudit {
  double max_b_ratio = 0.0;        // max |b_jk| s_j / s_k
  double max_c_ratio = 0.0;        // max |c_jk| s_j / s_k for C = B^{-1}
  double permutation_bound = 0.0;  // max_sigma prod_j |b_{j sigma(j)}|
  double permutation_floor = 0.0;  // 1/n!
  bool permutation_ok = false;     // permutation_bound >= 1/n!
};

BasisMatrixAudit basis_matrix_audit(const ExtremalBasis& maximal_reordered,
                                    const ExtremalBasis& minimal);

}  // namespace exbasis
