#pragma once

#include <optional>
#include <string>
#include <vector>

#include "exbasis/distances.hpp"
#include "exbasis/domain.hpp"

namespace exbasis {

enum class BasisKind { Minimal, Maximal, Mixed };
enum class BasisOrdering { Construction, Reordered };

std::string to_string(BasisKind kind);

/// Orthonormal basis at a base point together with the extremal radii and
/// the boundary points p_j = q + radius_j * vector_j.
struct ExtremalBasis {
  CVec base_point;
  BasisKind kind = BasisKind::Minimal;
  int mixed_k = 0;  // number of nearest-point steps, meaningful for Mixed
  BasisOrdering ordering = BasisOrdering::Construction;
  Frame vectors;                // construction (or reordered) order
  std::vector<double> radii;    // s_1..s_n or m_1..m_n in the same order
  std::vector<CVec> boundary_points;

  int dimension() const { return vectors.size(); }
};

/// Construction settings. `step_starts` != 0 overrides the per-step sphere
/// search default; `objective_grid` is the phase-grid size used inside the
/// disc-distance objective during maximization (final radii are always
/// recomputed at full precision).
struct BasisOptions {
  std::uint64_t seed = 1;
  int step_starts = 0;
  double value_tol = 1e-10;
  double min_step_tol = 1e-4;  // nearest-point steps finish with alignment refinement
  double max_step_tol = 1e-6;
  int objective_grid = 64;
};

ExtremalBasis minimal_basis(const DomainPtr& domain, const CVec& q,
                            const BasisOptions& opts = {});
ExtremalBasis maximal_basis(const DomainPtr& domain, const CVec& q,
                            const BasisOptions& opts = {});

/// Steps 1..k take the nearest boundary point, steps k+1..n-1 maximize the
/// disc distance, the last step is forced. k = n-1 gives the minimal
/// construction, k = 1 the maximal one, k = 0 maximizes from the start.
ExtremalBasis mixed_basis(const DomainPtr& domain, const CVec& q, int k,
                          const BasisOptions& opts = {});

/// Keeps vector 1 and reverses vectors 2..n (with radii and boundary
/// points), so the radii become nondecreasing. Involution on a maximal basis.
ExtremalBasis reorder_maximal(const ExtremalBasis& basis);

/// Permutation of any basis whose radii are sorted nondecreasing (stable).
ExtremalBasis sort_by_radius(const ExtremalBasis& basis);

/// Entry (k,j), j > k (zero-based rows/cols, upper triangle): the normalized
/// tangency defect |sum_s dr/dz_s(p_k) * v_{j,s}| / |grad r(p_k)|. A zero
/// entry means vector j lies in the complex tangent space at p_k.
Eigen::MatrixXd tangency_residuals(const Domain& domain, const ExtremalBasis& basis);

/// Validation deviations for the structural invariants of a basis.
struct BasisAudit {
  double gram_deviation = 0.0;        // vs identity
  double boundary_deviation = 0.0;    // max |r(p_j)|
  double ordering_deviation = 0.0;    // violation of the kind's radius ordering
  double first_radius_deviation = 0.0;  // |radius_1 - d_D(q)| (minimal/maximal kinds)
};

BasisAudit audit_basis(const Domain& domain, const ExtremalBasis& basis,
                       std::optional<double> euclidean = std::nullopt);

}  // namespace exbasis
