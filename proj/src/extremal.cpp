#include "exbasis/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "exbasis/rng.hpp"

namespace exbasis {

std::string to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::Minimal: return "minimal";
    case BasisKind::Maximal: return "maximal";
    case BasisKind::Mixed: return "mixed";
  }
  return "unknown";
}

namespace {

struct StepChoice {
  CVec direction;
  double radius = 0.0;
  CVec boundary_point;
};

SphereOptions step_options(const BasisOptions& opts, std::uint64_t salt, double step_tol) {
  SphereOptions s;
  s.starts = opts.step_starts;
  s.value_tol = opts.value_tol;
  s.step_tol = step_tol;
  s.seed = mix_seed(opts.seed, salt);
  return s;
}

// Full-precision disc evaluation: rotate the direction by the binding phase
// so the boundary point q + t * direction actually lies on the boundary,
// then pin t with a final ray solve.
StepChoice finalize_disc_step(const Domain& domain, const CVec& q, const CVec& direction) {
  DiscDistance dd = disc_distance_full(domain, q, direction);
  CVec rotated = std::polar(1.0, dd.phase) * direction;
  double t = domain.ray_distance(q, rotated, dd.value);
  if (!std::isfinite(t)) throw std::runtime_error("basis construction: non-finite radius");
  return StepChoice{rotated, t, q + t * rotated};
}

StepChoice nearest_step(const Domain& domain, const CVec& q, const Frame& frame,
                        const SphereOptions& sphere_opts) {
  EuclideanDistance e = euclidean_distance_in(domain, q, frame, sphere_opts);
  double t = domain.ray_distance(q, e.direction, e.value);
  if (!std::isfinite(t)) throw std::runtime_error("basis construction: non-finite radius");
  return StepChoice{e.direction, t, q + t * e.direction};
}

StepChoice widest_step(const Domain& domain, const CVec& q, const Frame& frame,
                       const SphereOptions& sphere_opts, int objective_grid,
                       const std::vector<CVec>& extra_starts) {
  DiscOptions inner;
  inner.grid = objective_grid;
  inner.refine_all_minima = false;

  SphereOptProblem problem;
  problem.domain = &domain;
  problem.base = q;
  problem.frame = frame;
  problem.sense = OptSense::Maximize;
  problem.options = sphere_opts;
  problem.extra_starts = extra_starts;

  auto objective = [&](const CVec& a) { return disc_distance(domain, q, a, inner); };
  SphereResult r = optimize_over_sphere(problem, objective);
  if (!std::isfinite(r.value)) throw std::runtime_error("basis construction: optimizer failure");
  DiscOptions refine_opts = inner;
  refine_opts.refine_all_minima = true;
  CVec polished = widest_direction_refine(domain, q, frame, r.direction, refine_opts);
  return finalize_disc_step(domain, q, polished);
}

std::uint64_t step_salt(BasisKind kind, int k_min, int step, bool shared_first) {
  if (step == 0 && shared_first) return 0;  // step 1 shared between the kinds
  return mix_seed(static_cast<std::uint64_t>(kind) * 16 + static_cast<std::uint64_t>(k_min),
                  static_cast<std::uint64_t>(step) + 1);
}

ExtremalBasis construct(const DomainPtr& domain, const CVec& q, int k_min,
                        const BasisOptions& opts, BasisKind kind) {
  if (!domain) throw std::invalid_argument("basis construction: null domain");
  domain->require_interior(q);
  const int n = domain->dimension();

  // Reject base points so close to the boundary that slice conditioning
  // degrades. |r(q)| / (2 |grad r(q)|) estimates the boundary distance.
  double grad_norm = domain->complex_gradient(q).norm();
  double distance_estimate = (grad_norm > 0.0)
                                 ? -domain->defining_value(q) / (2.0 * grad_norm)
                                 : domain->scale();
  if (distance_estimate < 1e-6 * domain->scale()) {
    throw std::domain_error("basis construction: base point is closer to the boundary "
                            "than 1e-6 of the domain scale");
  }

  std::vector<CVec> vectors;
  std::vector<double> radii;
  std::vector<CVec> boundary;
  vectors.reserve(n);

  auto remaining_frame = [&]() {
    return orthocomplement(vectors.empty() ? Frame() : Frame(vectors), n);
  };

  auto run_step = [&](int j, const std::vector<CVec>& extra_starts) {
    Frame rest = remaining_frame();
    if (rest.size() == 1) {
      return finalize_disc_step(*domain, q, rest[0]);
    }
    std::uint64_t salt = step_salt(kind, k_min, j, k_min >= 1);
    if (j < k_min) {
      return nearest_step(*domain, q, rest, step_options(opts, salt, opts.min_step_tol));
    }
    return widest_step(*domain, q, rest, step_options(opts, salt, opts.max_step_tol),
                       opts.objective_grid, extra_starts);
  };

  for (int j = 0; j < n; ++j) {
    StepChoice choice = run_step(j, {});
    vectors.push_back(choice.direction);
    radii.push_back(choice.radius);
    boundary.push_back(choice.boundary_point);
  }

  // Monotonicity repair: a later step that beats an earlier one searched a
  // subspace of the earlier step's sphere, so the earlier optimizer missed
  // its optimum. Re-run it seeded with the later direction.
  const int min_end = (k_min == n - 1) ? n - 1 : k_min - 1;  // inclusive, may be -1
  for (int pass = 0; pass < 3; ++pass) {
    int offender = -1;
    for (int j = 0; j + 1 < n; ++j) {
      bool in_min_block = (j + 1 <= min_end);
      bool in_max_block = (j >= k_min);
      double tol = 1e-12 * std::max(radii[j], radii[j + 1]) + 1e-15;
      if (in_min_block && radii[j + 1] < radii[j] - tol) offender = j;
      if (in_max_block && radii[j + 1] > radii[j] + tol) offender = j;
      if (offender >= 0) break;
    }
    if (offender < 0) break;
    std::vector<CVec> hint = {vectors[offender + 1]};
    vectors.resize(offender);
    radii.resize(offender);
    boundary.resize(offender);
    for (int j = offender; j < n; ++j) {
      StepChoice choice = run_step(j, j == offender ? hint : std::vector<CVec>{});
      vectors.push_back(choice.direction);
      radii.push_back(choice.radius);
      boundary.push_back(choice.boundary_point);
    }
  }

  ExtremalBasis basis;
  basis.base_point = q;
  basis.kind = kind;
  basis.mixed_k = (kind == BasisKind::Mixed) ? k_min : 0;
  basis.ordering = BasisOrdering::Construction;
  basis.vectors = Frame(std::move(vectors));
  basis.radii = std::move(radii);
  basis.boundary_points = std::move(boundary);
  return basis;
}

}  // namespace

ExtremalBasis minimal_basis(const DomainPtr& domain, const CVec& q, const BasisOptions& opts) {
  return construct(domain, q, domain ? domain->dimension() - 1 : 0, opts, BasisKind::Minimal);
}

ExtremalBasis maximal_basis(const DomainPtr& domain, const CVec& q, const BasisOptions& opts) {
  return construct(domain, q, 1, opts, BasisKind::Maximal);
}

ExtremalBasis mixed_basis(const DomainPtr& domain, const CVec& q, int k,
                          const BasisOptions& opts) {
  if (!domain) throw std::invalid_argument("mixed_basis: null domain");
  if (k < 0 || k > domain->dimension() - 1) {
    throw std::invalid_argument("mixed_basis: k must lie in [0, n-1]");
  }
  return construct(domain, q, k, opts, BasisKind::Mixed);
}

ExtremalBasis reorder_maximal(const ExtremalBasis& basis) {
  if (basis.kind != BasisKind::Maximal) {
    throw std::invalid_argument("reorder_maximal: basis kind must be maximal");
  }
  const int n = basis.dimension();
  std::vector<CVec> vectors;
  std::vector<double> radii;
  std::vector<CVec> boundary;
  vectors.push_back(basis.vectors[0]);
  radii.push_back(basis.radii[0]);
  boundary.push_back(basis.boundary_points[0]);
  for (int j = n - 1; j >= 1; --j) {
    vectors.push_back(basis.vectors[j]);
    radii.push_back(basis.radii[j]);
    boundary.push_back(basis.boundary_points[j]);
  }
  ExtremalBasis out = basis;
  out.vectors = Frame(std::move(vectors));
  out.radii = std::move(radii);
  out.boundary_points = std::move(boundary);
  out.ordering = (basis.ordering == BasisOrdering::Construction) ? BasisOrdering::Reordered
                                                                 : BasisOrdering::Construction;
  return out;
}

ExtremalBasis sort_by_radius(const ExtremalBasis& basis) {
  const int n = basis.dimension();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return basis.radii[a] < basis.radii[b]; });
  std::vector<CVec> vectors;
  std::vector<double> radii;
  std::vector<CVec> boundary;
  for (int idx : order) {
    vectors.push_back(basis.vectors[idx]);
    radii.push_back(basis.radii[idx]);
    boundary.push_back(basis.boundary_points[idx]);
  }
  ExtremalBasis out = basis;
  out.vectors = Frame(std::move(vectors));
  out.radii = std::move(radii);
  out.boundary_points = std::move(boundary);
  out.ordering = BasisOrdering::Reordered;
  return out;
}

Eigen::MatrixXd tangency_residuals(const Domain& domain, const ExtremalBasis& basis) {
  const int n = basis.dimension();
  Eigen::MatrixXd residuals = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    CVec grad = domain.complex_gradient(basis.boundary_points[k]);
    double gn = grad.norm();
    if (!(gn > 1e-14)) {
      throw std::runtime_error("tangency_residuals: vanishing gradient at boundary point " +
                               std::to_string(k + 1));
    }
    for (int j = k + 1; j < n; ++j) {
      Complex pairing(0.0, 0.0);
      for (int s = 0; s < n; ++s) pairing += grad[s] * basis.vectors[j][s];
      residuals(k, j) = std::abs(pairing) / gn;
    }
  }
  return residuals;
}

BasisAudit audit_basis(const Domain& domain, const ExtremalBasis& basis,
                       std::optional<double> euclidean) {
  BasisAudit audit;
  audit.gram_deviation = basis.vectors.gram_deviation();
  for (const CVec& p : basis.boundary_points) {
    audit.boundary_deviation = std::max(audit.boundary_deviation,
                                        std::abs(domain.defining_value(p)));
  }
  const int n = basis.dimension();
  const auto& r = basis.radii;
  if (basis.ordering == BasisOrdering::Reordered) {
    for (int j = 0; j + 1 < n; ++j) {
      audit.ordering_deviation = std::max(audit.ordering_deviation, r[j] - r[j + 1]);
    }
  } else if (basis.kind == BasisKind::Minimal) {
    for (int j = 0; j + 1 < n; ++j) {
      audit.ordering_deviation = std::max(audit.ordering_deviation, r[j] - r[j + 1]);
    }
  } else if (basis.kind == BasisKind::Maximal) {
    for (int j = 1; j + 1 < n; ++j) {
      audit.ordering_deviation = std::max(audit.ordering_deviation, r[j + 1] - r[j]);
    }
  }
  if (euclidean && (basis.kind != BasisKind::Mixed || basis.mixed_k >= 1)) {
    audit.first_radius_deviation = std::abs(r[0] - *euclidean);
  }
  return audit;
}

}  // namespace exbasis
