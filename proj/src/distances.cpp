#include "exbasis/distances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "exbasis/rng.hpp"

namespace exbasis {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGoldenRatio = 0.6180339887498949;  // (sqrt(5)-1)/2

struct Probe {
  double x = 0.0;
  double f = 0.0;
};

// Golden-section minimization on [lo, hi]; returns the best evaluated point.
template <typename F>
Probe golden_min(F&& f, double lo, double hi, double tol, long& evals) {
  double a = lo, b = hi;
  double c = b - kGoldenRatio * (b - a);
  double d = a + kGoldenRatio * (b - a);
  double fc = f(c), fd = f(d);
  evals += 2;
  Probe best = (fc <= fd) ? Probe{c, fc} : Probe{d, fd};
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGoldenRatio * (b - a);
      fc = f(c);
      ++evals;
      if (fc < best.f) best = {c, fc};
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGoldenRatio * (b - a);
      fd = f(d);
      ++evals;
      if (fd < best.f) best = {d, fd};
    }
  }
  return best;
}

}  // namespace

// ---------------------------------------------------------------------------
// Disc distance

DiscDistance disc_distance_full(const Domain& domain, const CVec& q, const CVec& a,
                                const DiscOptions& opts) {
  domain.require_interior(q);
  double norm = a.norm();
  if (!(norm > 1e-14)) throw std::invalid_argument("disc_distance: zero direction");
  CVec unit = a / norm;

  if (opts.allow_exact) {
    if (auto exact = domain.disc_distance_exact(q, unit)) {
      return DiscDistance{exact->value, exact->phase};
    }
  }

  const int n_grid = std::max(8, opts.grid);
  std::vector<double> t(n_grid);
  double hint = 0.0;
  for (int i = 0; i < n_grid; ++i) {
    double alpha = 2.0 * kPi * i / n_grid;
    CVec dir = std::polar(1.0, alpha) * unit;
    t[i] = domain.ray_distance(q, dir, hint);
    hint = t[i];
  }

  double t_min = *std::min_element(t.begin(), t.end());
  double t_max = *std::max_element(t.begin(), t.end());
  if (t_max - t_min <= 1e-15 * t_max) {
    return DiscDistance{t_min, 0.0};  // phase-degenerate circle
  }

  // Indices of cyclic grid-local minima, cheapest first.
  std::vector<int> minima;
  for (int i = 0; i < n_grid; ++i) {
    double prev = t[(i + n_grid - 1) % n_grid];
    double next = t[(i + 1) % n_grid];
    if (t[i] <= prev && t[i] <= next && (t[i] < prev || t[i] < next)) minima.push_back(i);
  }
  if (minima.empty()) minima.push_back(static_cast<int>(std::min_element(t.begin(), t.end()) - t.begin()));
  std::sort(minima.begin(), minima.end(), [&](int l, int r) { return t[l] < t[r]; });
  std::size_t refine_count = opts.refine_all_minima ? std::min<std::size_t>(minima.size(), 6) : 1;

  const double h = 2.0 * kPi / n_grid;
  DiscDistance result{t[minima[0]], 2.0 * kPi * minima[0] / n_grid};
  long evals = 0;
  for (std::size_t m = 0; m < refine_count; ++m) {
    double center = 2.0 * kPi * minima[m] / n_grid;
    double local_hint = t[minima[m]];
    auto objective = [&](double alpha) {
      CVec dir = std::polar(1.0, alpha) * unit;
      double v = domain.ray_distance(q, dir, local_hint);
      local_hint = v;
      return v;
    };
    Probe refined = golden_min(objective, center - h, center + h, opts.phase_tol, evals);
    if (refined.f < result.value) {
      result.value = refined.f;
      result.phase = refined.x;
    }
  }
  if (result.phase < 0.0) result.phase += 2.0 * kPi;
  return result;
}

double disc_distance(const Domain& domain, const CVec& q, const CVec& a,
                     const DiscOptions& opts) {
  return disc_distance_full(domain, q, a, opts).value;
}

double disc_distance_grid(const Domain& domain, const CVec& q, const CVec& a, int grid_points) {
  DiscOptions opts;
  opts.grid = grid_points;
  opts.allow_exact = false;
  return disc_distance_full(domain, q, a, opts).value;
}

// ---------------------------------------------------------------------------
// Sphere optimization

namespace {

// Candidate on the unit sphere of span(frame), stored as real 2k coordinates.
struct SphereCoords {
  explicit SphereCoords(const Frame& frame) : frame_(&frame) {}

  CVec ambient(const RVec& x) const {
    const int k = frame_->size();
    CVec coeffs(k);
    for (int j = 0; j < k; ++j) coeffs[j] = Complex(x[2 * j], x[2 * j + 1]);
    return frame_->embed(coeffs);
  }

  const Frame* frame_;
};

struct StartOutcome {
  RVec x;
  double value = 0.0;  // internal sign (minimization)
};

struct MultistartSpec {
  const Frame* frame;
  OptSense sense;
  SphereOptions options;
  // Optional per-start local refinement (direction, value) -> (direction, value),
  // in internal minimization sign.
  std::function<StartOutcome(const StartOutcome&)> refine;
  const std::vector<CVec>* extra_starts = nullptr;  // ambient directions
};

SphereResult multistart_sphere(const MultistartSpec& spec,
                               const std::function<double(const CVec&)>& objective) {
  const Frame& frame = *spec.frame;
  if (frame.empty()) throw std::invalid_argument("optimize_over_sphere: empty frame");
  const int d = 2 * frame.size();
  const SphereOptions& opts = spec.options;
  const double sign = (spec.sense == OptSense::Maximize) ? -1.0 : 1.0;

  SphereCoords coords(frame);
  long evals = 0;
  auto f = [&](const RVec& x) {
    ++evals;
    return sign * objective(coords.ambient(x));
  };

  int n_random = opts.starts;
  if (n_random <= 0) n_random = (frame.size() <= 3) ? 64 : 256;

  std::vector<RVec> seeds;
  seeds.reserve(d + n_random);
  for (int i = 0; i < d; ++i) {
    RVec e = RVec::Zero(d);
    e[i] = 1.0;
    seeds.push_back(std::move(e));
  }
  if (spec.extra_starts) {
    for (const CVec& dir : *spec.extra_starts) {
      CVec coeffs = frame.coefficients(dir);
      RVec x(d);
      for (int j = 0; j < frame.size(); ++j) {
        x[2 * j] = coeffs[j].real();
        x[2 * j + 1] = coeffs[j].imag();
      }
      double nx = x.norm();
      if (nx > 1e-12) seeds.push_back(x / nx);
    }
  }
  std::mt19937_64 gen(opts.seed);
  for (int i = 0; i < n_random; ++i) seeds.push_back(random_real_unit(gen, d));

  std::vector<StartOutcome> outcomes;
  outcomes.reserve(seeds.size());

  for (const RVec& seed : seeds) {
    RVec x = seed;
    double fx = f(x);
    std::vector<double> span(d, kPi);

    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
      double sweep_start_value = fx;
      double max_move = 0.0;
      for (int i = 0; i < d; ++i) {
        // great-circle direction through x along coordinate i
        RVec u = RVec::Zero(d);
        u[i] = 1.0;
        u -= u.dot(x) * x;
        double un = u.norm();
        if (un < 1e-12) continue;
        u /= un;

        auto g = [&](double theta) {
          RVec xt = std::cos(theta) * x + std::sin(theta) * u;
          return f(xt);
        };

        double theta_best = 0.0;
        double g_best = fx;
        if (span[i] >= 1.0) {
          // coarse pass around the whole circle, then refine the best bracket
          const int coarse = 8;
          double step = 2.0 * kPi / coarse;
          double theta0 = 0.0, g0 = fx;
          for (int c = 1; c < coarse; ++c) {
            double theta = -kPi + step * c;
            double val = g(theta);
            if (val < g0) {
              g0 = val;
              theta0 = theta;
            }
          }
          Probe p = golden_min(g, theta0 - step, theta0 + step, opts.step_tol, evals);
          if (p.f < g_best) {
            theta_best = p.x;
            g_best = p.f;
          }
        } else {
          Probe p = golden_min(g, -span[i], span[i], opts.step_tol, evals);
          if (p.f < g_best) {
            theta_best = p.x;
            g_best = p.f;
          }
        }

        if (g_best < fx) {
          x = std::cos(theta_best) * x + std::sin(theta_best) * u;
          x.normalize();
          fx = g_best;
          max_move = std::max(max_move, std::abs(theta_best));
        }
        span[i] = std::clamp(4.0 * std::abs(theta_best) + 16.0 * opts.step_tol,
                             64.0 * opts.step_tol, kPi);
      }
      if (sweep_start_value - fx < opts.value_tol && max_move < opts.step_tol) break;
    }

    StartOutcome outcome{x, fx};
    if (spec.refine) outcome = spec.refine(outcome);
    outcomes.push_back(std::move(outcome));
  }

  double best = outcomes.front().value;
  for (const auto& o : outcomes) best = std::min(best, o.value);
  int winner = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].value <= best + 1e-9) {
      winner = static_cast<int>(i);
      break;
    }
  }

  SphereResult result;
  result.direction = coords.ambient(outcomes[winner].x);
  result.direction /= result.direction.norm();
  result.value = sign * outcomes[winner].value;
  result.winner_start = winner;
  result.evaluations = evals;
  return result;
}

}  // namespace

SphereResult optimize_over_sphere(const SphereOptProblem& problem,
                                  const std::function<double(const CVec&)>& objective) {
  if (problem.domain) problem.domain->require_interior(problem.base);
  MultistartSpec spec{&problem.frame, problem.sense, problem.options, nullptr,
                      problem.extra_starts.empty() ? nullptr : &problem.extra_starts};
  return multistart_sphere(spec, objective);
}

// ---------------------------------------------------------------------------
// Euclidean distance

CVec nearest_direction_refine(const Domain& domain, const CVec& q, const Frame& frame,
                              const CVec& v0) {
  CMat fm = frame.matrix();
  auto project = [&](const CVec& g) { return CVec(fm * (fm.adjoint() * g)); };

  CVec v = project(v0);
  double vn = v.norm();
  if (!(vn > 1e-14)) throw std::invalid_argument("nearest_direction_refine: zero direction");
  v /= vn;
  double t = domain.ray_distance(q, v);

  auto aligned_dir = [&](const CVec& dir, double dist) -> CVec {
    CVec grad = domain.complex_gradient(q + dist * dir);
    CVec g = project(2.0 * grad.conjugate());
    double gn = g.norm();
    if (!(gn > 1e-14)) return dir;
    return CVec(g / gn);
  };

  // Monotone phase: accept damped steps toward the aligned direction only
  // while they shorten the ray.
  for (int it = 0; it < 60; ++it) {
    CVec target = aligned_dir(v, t);
    if ((target - v).norm() < 1e-14) break;
    double lambda = 1.0;
    bool accepted = false;
    while (lambda >= 1e-4) {
      CVec v_try = v + lambda * (target - v);
      double n_try = v_try.norm();
      if (!(n_try > 1e-14)) break;
      v_try /= n_try;
      double t_try = domain.ray_distance(q, v_try, t);
      if (t_try < t) {
        v = v_try;
        t = t_try;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) break;
  }

  // Alignment polish: fixed-point steps ranked by the alignment residual,
  // which keeps improving below the resolution of the ray comparisons. The
  // value guard keeps the iteration pinned to this minimum rather than
  // drifting to some other critical point.
  const double guard = t * (1.0 + 1e-11);
  CVec best_v = v;
  double best_misalign = (aligned_dir(v, t) - v).norm();
  CVec cur = v;
  double cur_t = t;
  double last_delta = std::numeric_limits<double>::max();
  for (int it = 0; it < 40; ++it) {
    CVec target = aligned_dir(cur, cur_t);
    double delta = (target - cur).norm();
    if (delta < best_misalign) {
      best_misalign = delta;
      best_v = cur;
    }
    if (delta < 1e-13 || delta > last_delta) break;
    last_delta = delta;
    double next_t = domain.ray_distance(q, target, cur_t);
    if (next_t > guard) break;
    cur = target;
    cur_t = next_t;
  }
  return best_v;
}

CVec widest_direction_refine(const Domain& domain, const CVec& q, const Frame& frame,
                             const CVec& a0, const DiscOptions& eval_opts) {
  CMat fm = frame.matrix();
  auto project = [&](const CVec& g) { return CVec(fm * (fm.adjoint() * g)); };

  CVec a = project(a0);
  double an = a.norm();
  if (!(an > 1e-14)) throw std::invalid_argument("widest_direction_refine: zero direction");
  a /= an;
  DiscDistance dd = disc_distance_full(domain, q, a, eval_opts);

  // The critical-point condition: with u = e^{i phase} a the binding touch
  // direction, project(2 conj grad r(p)) is a complex multiple of u.
  auto colinear_target = [&](const CVec& dir, const DiscDistance& d) -> CVec {
    CVec u = std::polar(1.0, d.phase) * dir;
    CVec g = project(2.0 * domain.complex_gradient(q + d.value * u).conjugate());
    double gn = g.norm();
    if (!(gn > 1e-14)) return dir;
    Complex inner = hermitian_inner(g, u);
    if (!(std::abs(inner) > 1e-14 * gn)) return dir;
    CVec u_new = g * (std::conj(inner) / std::abs(inner)) / gn;
    return CVec(std::polar(1.0, -d.phase) * u_new);
  };

  for (int it = 0; it < 40; ++it) {
    CVec target = colinear_target(a, dd);
    if ((target - a).norm() < 1e-14) break;
    double lambda = 1.0;
    bool accepted = false;
    while (lambda >= 1e-4) {
      CVec a_try = a + lambda * (target - a);
      double n_try = a_try.norm();
      if (!(n_try > 1e-14)) break;
      a_try /= n_try;
      DiscDistance dd_try = disc_distance_full(domain, q, a_try, eval_opts);
      if (dd_try.value > dd.value) {
        a = a_try;
        dd = dd_try;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) break;
  }

  // Continue on the colinearity residual once value comparisons saturate.
  // The value guard keeps the iteration pinned to this maximum rather than
  // drifting to some other critical point.
  const double guard = dd.value * (1.0 - 1e-11);
  CVec best = a;
  CVec cur = a;
  DiscDistance cur_dd = dd;
  double best_residual = (colinear_target(cur, cur_dd) - cur).norm();
  double last_delta = std::numeric_limits<double>::max();
  for (int it = 0; it < 40; ++it) {
    CVec target = colinear_target(cur, cur_dd);
    double delta = (target - cur).norm();
    if (delta < best_residual) {
      best_residual = delta;
      best = cur;
    }
    if (delta < 1e-13 || delta > last_delta) break;
    last_delta = delta;
    CVec next = target / target.norm();
    DiscDistance next_dd = disc_distance_full(domain, q, next, eval_opts);
    if (next_dd.value < guard) break;
    cur = next;
    cur_dd = next_dd;
  }
  return best;
}

EuclideanDistance euclidean_distance_in(const Domain& domain, const CVec& q,
                                        const Frame& frame, const SphereOptions& opts) {
  domain.require_interior(q);
  auto objective = [&](const CVec& v) { return domain.ray_distance(q, v); };

  MultistartSpec spec{&frame, OptSense::Minimize, opts, nullptr};
  SphereCoords coords(frame);
  spec.refine = [&](const StartOutcome& o) {
    CVec dir = coords.ambient(o.x);
    dir /= dir.norm();
    CVec refined = nearest_direction_refine(domain, q, frame, dir);
    double value = domain.ray_distance(q, refined, o.value);
    CVec coeffs = frame.coefficients(refined);
    RVec x(2 * frame.size());
    for (int j = 0; j < frame.size(); ++j) {
      x[2 * j] = coeffs[j].real();
      x[2 * j + 1] = coeffs[j].imag();
    }
    x.normalize();
    return StartOutcome{x, value};
  };

  SphereResult r = multistart_sphere(spec, objective);
  return EuclideanDistance{r.value, r.direction};
}

EuclideanDistance euclidean_distance(const Domain& domain, const CVec& q,
                                     const SphereOptions& opts) {
  return euclidean_distance_in(domain, q, Frame::standard(domain.dimension()), opts);
}

}  // namespace exbasis
