#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "exbasis/extremal.hpp"

namespace exbasis {

/// Parameters of the C^3 domain {x1^2 + b1 y1^2 + x2^2 + b2 y2^2 + |z3|^2 < 1}
/// and the base point q = (0, 0, delta). Requires 0 < beta2 < beta1 < 1.
struct CounterexampleParams {
  double beta1 = 0.75;
  double beta2 = 0.25;
  double delta = 0.1;

  CounterexampleParams() = default;
  CounterexampleParams(double b1, double b2, double d);
};

/// D in C^3 and the centered C^2 section D_0 = {x1^2+b1 y1^2+x2^2+b2 y2^2 < 1}.
struct CounterexampleDomains {
  DomainPtr big;      // D in C^3
  DomainPtr section;  // D_0 in C^2
};

CounterexampleDomains make_domains(const CounterexampleParams& params);

/// R(b) = max over phases of rho(e^{i alpha} b), in closed form A + |C|.
/// Satisfies d_{D_0}(0; b/|b|) = 1/sqrt(R(b/|b|)).
double R_value(const CVec& b, const CounterexampleParams& params);

/// Membership of b in the tangency set T, decided two ways: from the two
/// defining equations of T and from its explicit three-branch
/// characterization. Residuals are normalized by |b|^2 resp. |b|.
struct TMembership {
  bool by_equations = false;
  bool by_characterization = false;
  double equation_residual = 0.0;
  double characterization_residual = 0.0;
};

TMembership in_T(const CVec& b, const CounterexampleParams& params, double tol = 1e-9);

struct CounterexampleReport {
  CounterexampleParams params;
  std::uint64_t seed = 1;
  double residual_threshold = 1e-3;

  double m1 = 0.0;          // Euclidean distance of q in D (expected 1 - delta)
  CVec a1;                  // nearest direction (expected (0,0,1) up to phase)
  CVec maximizer;           // disc-distance maximizer over the unit sphere of C^2
  double max_disc_value = 0.0;
  double R_of_maximizer = 0.0;
  double R_of_bstar = 0.0;  // R((1, i)/sqrt(2)), the paper's witness direction
  TMembership maximizer_in_T;
  ExtremalBasis maximal;    // maximal basis of D at q
  Eigen::MatrixXd residuals;
  double residual_23 = 0.0;  // tangency residual of vector 3 at boundary point 2
  bool property_star_fails = false;
  std::string verdict;
};

CounterexampleReport run_counterexample(const CounterexampleParams& params,
                                        const BasisOptions& opts = {},
                                        double residual_threshold = 1e-3);

struct LemmaDisagreement {
  CVec b;
  TMembership membership;
};

struct LemmaScanResult {
  long samples = 0;
  long agreements = 0;
  long within_margin_band = 0;  // skipped: too close to the tolerance boundary
  std::vector<LemmaDisagreement> disagreements;
};

/// Draws `samples` random unit vectors plus structured near-branch
/// perturbations; the two membership tests must agree whenever both
/// residual margins exceed 10x the tolerance.
LemmaScanResult lemma_equivalence_scan(const CounterexampleParams& params, long samples,
                                       std::uint64_t seed, double tol = 1e-9,
                                       long structured = 1000);

}  // namespace exbasis
