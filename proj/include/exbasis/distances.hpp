#pragma once

#include <cstdint>
#include <functional>

#include "exbasis/domain.hpp"
#include "exbasis/geometry.hpp"

namespace exbasis {

enum class OptSense { Minimize, Maximize };

/// Settings for the multistart sphere search. starts = 0 picks the default
/// (64 for complex dimension <= 3, 256 above); the 2k coordinate axes are
/// always seeded first, so constant objectives resolve to the first axis.
struct SphereOptions {
  int starts = 0;
  double value_tol = 1e-10;
  double step_tol = 1e-8;
  std::uint64_t seed = 1;
  int max_sweeps = 40;
};

struct SphereOptProblem {
  const Domain* domain = nullptr;
  CVec base;
  Frame frame;  // complex subspace searched (ambient vectors)
  OptSense sense = OptSense::Maximize;
  SphereOptions options;
  std::vector<CVec> extra_starts;  // additional seed directions (ambient)
};

struct SphereResult {
  CVec direction;  // ambient unit vector in span(frame)
  double value = 0.0;
  int winner_start = -1;
  long evaluations = 0;
};

/// Multistart projected coordinate-wise golden-section search over the unit
/// sphere of span(frame), viewed as the real 2k-sphere. Deterministic for a
/// fixed seed; near-ties (1e-9) resolve to the lowest start index.
SphereResult optimize_over_sphere(const SphereOptProblem& problem,
                                  const std::function<double(const CVec&)>& objective);

struct DiscDistance {
  double value = 0.0;
  double phase = 0.0;  // alpha with q + value * e^{i alpha} * a on the boundary
};

/// Settings for the generic phase-grid disc distance evaluation.
struct DiscOptions {
  int grid = 256;
  double phase_tol = 1e-10;
  bool refine_all_minima = true;  // refine every grid-local minimum, not just the best
  bool allow_exact = true;        // use the closed form when the domain provides one
};

/// d_D(q; a) = sup{ r > 0 : q + r D a in D } = min over phases of the ray
/// distance along e^{i alpha} a. Also reports the binding phase.
DiscDistance disc_distance_full(const Domain& domain, const CVec& q, const CVec& a,
                                const DiscOptions& opts = {});

double disc_distance(const Domain& domain, const CVec& q, const CVec& a,
                     const DiscOptions& opts = {});

/// Pure phase-grid oracle (ignores closed forms): n-point grid plus
/// golden-section refinement of every local bracket.
double disc_distance_grid(const Domain& domain, const CVec& q, const CVec& a, int grid_points);

struct EuclideanDistance {
  double value = 0.0;
  CVec direction;  // real unit direction to a nearest boundary point
};

/// Euclidean boundary distance: minimum of the ray distance over the real
/// unit sphere of the frame's span (full space by default), refined by a
/// gradient-alignment iteration at the nearest point.
EuclideanDistance euclidean_distance(const Domain& domain, const CVec& q,
                                     const SphereOptions& opts = {});

EuclideanDistance euclidean_distance_in(const Domain& domain, const CVec& q,
                                        const Frame& frame, const SphereOptions& opts = {});

/// One gradient-alignment pass: starting from direction v0 in span(frame),
/// iterate v <- normalize(project(steepest ascent at the boundary hit)),
/// accepting only steps that shorten the ray. Converges to a direction whose
/// boundary point has its gradient aligned with the ray (a nearest point).
CVec nearest_direction_refine(const Domain& domain, const CVec& q, const Frame& frame,
                              const CVec& v0);

/// First-order refinement of a disc-distance maximizer: at a critical
/// direction the projected gradient at the binding boundary point is
/// complex-colinear with the direction. Iterates toward colinearity,
/// accepting only steps that grow the disc distance.
CVec widest_direction_refine(const Domain& domain, const CVec& q, const Frame& frame,
                             const CVec& a0, const DiscOptions& eval_opts = {});

}  // namespace exbasis
