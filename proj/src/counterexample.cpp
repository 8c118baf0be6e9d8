#include "exbasis/counterexample.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "exbasis/rng.hpp"

namespace exbasis {

CounterexampleParams::CounterexampleParams(double b1, double b2, double d)
    : beta1(b1), beta2(b2), delta(d) {
  if (!(0.0 < beta2 && beta2 < beta1 && beta1 < 1.0)) {
    throw std::invalid_argument("CounterexampleParams: need 0 < beta2 < beta1 < 1");
  }
  if (!(0.0 < delta && delta < 1.0)) {
    throw std::invalid_argument("CounterexampleParams: need 0 < delta < 1");
  }
}

CounterexampleDomains make_domains(const CounterexampleParams& params) {
  CounterexampleParams checked(params.beta1, params.beta2, params.delta);
  RVec px(3), py(3);
  px << 1.0, 1.0, 1.0;
  py << checked.beta1, checked.beta2, 1.0;
  RVec sx(2), sy(2);
  sx << 1.0, 1.0;
  sy << checked.beta1, checked.beta2;
  return CounterexampleDomains{
      std::make_shared<DiagonalQuadric>(px, py, 1.0),
      std::make_shared<DiagonalQuadric>(sx, sy, 1.0),
  };
}

double R_value(const CVec& b, const CounterexampleParams& params) {
  if (b.size() != 2) throw std::invalid_argument("R_value: b must lie in C^2");
  if (!(b.norm() > 0.0)) throw std::invalid_argument("R_value: zero vector");
  double a = 0.5 * (1.0 + params.beta1) * std::norm(b[0]) +
             0.5 * (1.0 + params.beta2) * std::norm(b[1]);
  Complex c = 0.5 * (1.0 - params.beta1) * b[0] * b[0] +
              0.5 * (1.0 - params.beta2) * b[1] * b[1];
  return a + std::abs(c);
}

TMembership in_T(const CVec& b, const CounterexampleParams& params, double tol) {
  if (b.size() != 2) throw std::invalid_argument("in_T: b must lie in C^2");
  double norm = b.norm();
  if (!(norm > 0.0)) throw std::invalid_argument("in_T: zero vector");
  if (!(tol > 0.0)) throw std::invalid_argument("in_T: tolerance must be positive");

  double x1 = b[0].real(), y1 = b[0].imag();
  double x2 = b[1].real(), y2 = b[1].imag();

  // defining equations: (beta1-beta2) Im b1 Im b2 = 0 and
  // (1-beta1) Im b1 Re b2 = (1-beta2) Im b2 Re b1
  double eq1 = (params.beta1 - params.beta2) * y1 * y2;
  double eq2 = (1.0 - params.beta1) * y1 * x2 - (1.0 - params.beta2) * y2 * x1;
  double eq_residual = std::max(std::abs(eq1), std::abs(eq2)) / (norm * norm);

  // characterization: b1 = 0 or b2 = 0 or Im b1 = Im b2 = 0
  double branch1 = std::abs(b[0]) / norm;
  double branch2 = std::abs(b[1]) / norm;
  double branch3 = std::max(std::abs(y1), std::abs(y2)) / norm;
  double char_residual = std::min({branch1, branch2, branch3});

  TMembership out;
  out.equation_residual = eq_residual;
  out.characterization_residual = char_residual;
  out.by_equations = eq_residual <= tol;
  out.by_characterization = char_residual <= tol;
  return out;
}

CounterexampleReport run_counterexample(const CounterexampleParams& params,
                                        const BasisOptions& opts,
                                        double residual_threshold) {
  CounterexampleParams checked(params.beta1, params.beta2, params.delta);
  CounterexampleDomains domains = make_domains(checked);

  CounterexampleReport report;
  report.params = checked;
  report.seed = opts.seed;
  report.residual_threshold = residual_threshold;

  CVec q = CVec::Zero(3);
  q[2] = checked.delta;

  SphereOptions euclid_opts;
  euclid_opts.seed = mix_seed(opts.seed, 7001);
  EuclideanDistance nearest = euclidean_distance(*domains.big, q, euclid_opts);
  report.m1 = nearest.value;
  report.a1 = nearest.direction;

  SphereOptProblem problem;
  problem.domain = domains.section.get();
  problem.base = CVec::Zero(2);
  problem.frame = Frame::standard(2);
  problem.sense = OptSense::Maximize;
  problem.options.seed = mix_seed(opts.seed, 7002);
  problem.options.starts = opts.step_starts;
  auto objective = [&](const CVec& a) { return disc_distance(*domains.section, CVec::Zero(2), a); };
  SphereResult max_result = optimize_over_sphere(problem, objective);
  report.maximizer = max_result.direction;
  report.max_disc_value = max_result.value;
  report.R_of_maximizer = R_value(report.maximizer, checked);

  CVec b_star(2);
  b_star << Complex(1.0 / std::sqrt(2.0), 0.0), Complex(0.0, 1.0 / std::sqrt(2.0));
  report.R_of_bstar = R_value(b_star, checked);

  report.maximizer_in_T = in_T(report.maximizer, checked);

  report.maximal = maximal_basis(domains.big, q, opts);
  report.residuals = tangency_residuals(*domains.big, report.maximal);
  report.residual_23 = report.residuals(1, 2);
  report.property_star_fails = report.residual_23 > residual_threshold;
  report.verdict = report.property_star_fails ? "PROPERTY_STAR_FAILS" : "PROPERTY_STAR_HOLDS";
  return report;
}

LemmaScanResult lemma_equivalence_scan(const CounterexampleParams& params, long samples,
                                       std::uint64_t seed, double tol, long structured) {
  CounterexampleParams checked(params.beta1, params.beta2, params.delta);
  if (samples < 1) throw std::invalid_argument("lemma_equivalence_scan: samples must be >= 1");

  LemmaScanResult result;
  std::mt19937_64 gen(mix_seed(seed, 9001));
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  auto classify = [&](const CVec& b) {
    TMembership m = in_T(b, checked, tol);
    ++result.samples;
    if (m.by_equations == m.by_characterization) {
      ++result.agreements;
      return;
    }
    double eq_margin = std::abs(m.equation_residual - tol);
    double char_margin = std::abs(m.characterization_residual - tol);
    if (eq_margin > 10.0 * tol && char_margin > 10.0 * tol) {
      result.disagreements.push_back({b, m});
    } else {
      ++result.within_margin_band;
    }
  };

  for (long i = 0; i < samples; ++i) classify(random_complex_unit(gen, 2));

  // structured samples near the three branches of T, with perturbation
  // magnitudes straddling the tolerance band
  for (long i = 0; i < structured; ++i) {
    double magnitude = std::pow(10.0, -16.0 + 14.0 * uniform(gen));
    CVec noise = magnitude * random_complex_unit(gen, 2);
    CVec b(2);
    switch (i % 3) {
      case 0:  // b1 = 0
        b << Complex(0.0, 0.0), std::polar(1.0, 2.0 * std::numbers::pi * uniform(gen));
        break;
      case 1:  // b2 = 0
        b << std::polar(1.0, 2.0 * std::numbers::pi * uniform(gen)), Complex(0.0, 0.0);
        break;
      default: {  // real branch
        double theta = 2.0 * std::numbers::pi * uniform(gen);
        b << Complex(std::cos(theta), 0.0), Complex(std::sin(theta), 0.0);
        break;
      }
    }
    b += noise;
    b /= b.norm();
    classify(b);
  }
  return result;
}

}  // namespace exbasis
