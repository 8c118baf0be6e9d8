#include "exbasis/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace exbasis {

namespace {

void require_nonzero(const CVec& X, const char* who) {
  if (!(X.norm() > 0.0)) throw std::invalid_argument(std::string(who) + ": zero direction X");
}

bool radii_nondecreasing(const std::vector<double>& r, double tol = 1e-9) {
  for (std::size_t j = 0; j + 1 < r.size(); ++j) {
    if (r[j] > r[j + 1] + tol) return false;
  }
  return true;
}

}  // namespace

double E_metric(const ExtremalBasis& minimal, const CVec& X) {
  if (minimal.kind != BasisKind::Minimal) {
    throw std::invalid_argument("E_metric: basis kind must be minimal");
  }
  require_nonzero(X, "E_metric");
  double acc = 0.0;
  for (int j = 0; j < minimal.dimension(); ++j) {
    acc += std::abs(hermitian_inner(X, minimal.vectors[j])) / minimal.radii[j];
  }
  return acc;
}

double A_metric(const ExtremalBasis& basis, const CVec& X) {
  if (basis.kind == BasisKind::Maximal) {
    if (basis.ordering != BasisOrdering::Reordered) {
      throw std::invalid_argument("A_metric: maximal basis must be reordered first");
    }
  } else if (basis.kind == BasisKind::Mixed) {
    if (!radii_nondecreasing(basis.radii)) {
      throw std::invalid_argument("A_metric: mixed basis must be sorted by radius");
    }
  } else {
    throw std::invalid_argument("A_metric: basis kind must be maximal or mixed");
  }
  require_nonzero(X, "A_metric");
  double acc = 0.0;
  for (int j = 0; j < basis.dimension(); ++j) {
    acc += std::abs(hermitian_inner(X, basis.vectors[j])) / basis.radii[j];
  }
  return acc;
}

KernelProxies kernel_proxies(const ExtremalBasis& minimal, const ExtremalBasis& maximal) {
  if ((minimal.base_point - maximal.base_point).norm() > 1e-9) {
    throw std::invalid_argument("kernel_proxies: bases must share the base point");
  }
  double s_prod = 1.0, m_prod = 1.0;
  for (double s : minimal.radii) s_prod *= s;
  for (double m : maximal.radii) m_prod *= m;
  return KernelProxies{1.0 / (s_prod * s_prod), 1.0 / (m_prod * m_prod)};
}

double inv_disc_direction(const Domain& domain, const CVec& q, const CVec& X,
                          const DiscOptions& opts) {
  require_nonzero(X, "inv_disc_direction");
  double norm = X.norm();
  return norm / disc_distance(domain, q, X / norm, opts);
}

BasisMatrixAudit basis_matrix_audit(const ExtremalBasis& maximal_reordered,
                                    const ExtremalBasis& minimal) {
  if (maximal_reordered.dimension() != minimal.dimension()) {
    throw std::invalid_argument("basis_matrix_audit: dimension mismatch");
  }
  if ((maximal_reordered.base_point - minimal.base_point).norm() > 1e-9) {
    throw std::invalid_argument("basis_matrix_audit: bases must share the base point");
  }
  if (maximal_reordered.kind == BasisKind::Maximal &&
      maximal_reordered.ordering != BasisOrdering::Reordered) {
    throw std::invalid_argument("basis_matrix_audit: maximal basis must be reordered");
  }

  const int n = minimal.dimension();
  UnitaryMatrix b = change_of_basis(maximal_reordered.vectors, minimal.vectors);
  CMat c = b.entries.inverse();

  BasisMatrixAudit audit;
  const auto& s = minimal.radii;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      audit.max_b_ratio = std::max(audit.max_b_ratio, std::abs(b.entries(j, k)) * s[j] / s[k]);
      audit.max_c_ratio = std::max(audit.max_c_ratio, std::abs(c(j, k)) * s[j] / s[k]);
    }
  }
  audit.permutation_bound = permutation_product_bound(b.entries);
  double factorial = 1.0;
  for (int i = 2; i <= n; ++i) factorial *= i;
  audit.permutation_floor = 1.0 / factorial;
  audit.permutation_ok = audit.permutation_bound >= audit.permutation_floor - 1e-15;
  return audit;
}

}  // namespace exbasis
