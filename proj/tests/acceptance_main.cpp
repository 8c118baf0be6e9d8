// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.
//
// Criteria 3-7, 9 and 10 are evaluated from a single full validation run with
// the default configuration; criteria 1, 2 and the standalone halves of 8 run
// directly against the library.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "exbasis/counterexample.hpp"
#include "exbasis/harness.hpp"
#include "exbasis/metrics.hpp"

using namespace exbasis;

namespace {

int failures = 0;

void report(int criterion, const std::string& label, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion, label.c_str(),
              detail.c_str());
  if (!pass) ++failures;
}

const CheckRecord* find_check(const ValidationReport& r, const std::string& name) {
  for (const CheckRecord& c : r.checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

// Collects pass/fail over a list of check names; details show the worst one.
bool checks_pass(const ValidationReport& r, const std::vector<std::string>& names,
                 std::string& detail) {
  bool ok = true;
  detail.clear();
  for (const std::string& name : names) {
    const CheckRecord* c = find_check(r, name);
    if (!c) {
      ok = false;
      detail += name + " missing; ";
      continue;
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s stat=%.3g thr=%.3g n=%ld; ", c->name.c_str(), c->stat,
                  c->threshold, c->samples);
    if (!c->pass) {
      ok = false;
      detail += buf;
    } else if (detail.empty()) {
      detail = buf;
    }
  }
  if (ok && detail.empty()) detail = "all pass";
  return ok;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
  // --- criterion 1: counterexample reproduction -----------------------------
  {
    auto t0 = std::chrono::steady_clock::now();
    CounterexampleParams params(0.75, 0.25, 0.1);
    BasisOptions opts;
    opts.seed = 17;
    CounterexampleReport rep = run_counterexample(params, opts, 1e-3);

    bool m1_ok = std::abs(rep.m1 - 0.9) <= 1e-10;
    CVec e3 = CVec::Zero(3);
    e3[2] = 1.0;
    bool a1_ok = 1.0 - std::abs(hermitian_inner(rep.a1, e3)) <= 1e-8;

    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> uniform(0.0, 2.0 * 3.14159265358979);
    double branch_dev = 0.0;
    for (int i = 0; i < 1000; ++i) {
      CVec b(2);
      switch (i % 3) {
        case 0:
          b = CVec(2);
          b << std::polar(1.0, uniform(rng)), Complex(0, 0);
          break;
        case 1:
          b = CVec(2);
          b << Complex(0, 0), std::polar(1.0, uniform(rng));
          break;
        default: {
          double t = uniform(rng);
          b = CVec(2);
          b << Complex(std::cos(t), 0), Complex(std::sin(t), 0);
        }
      }
      branch_dev = std::max(branch_dev, std::abs(R_value(b, params) - 1.0));
    }
    bool branches_ok = branch_dev <= 1e-9;
    bool bstar_ok = rep.R_of_bstar < 1.0 - 1e-3;
    bool maximizer_ok = rep.R_of_maximizer <= 0.875 + 1e-6;
    bool not_in_t = !rep.maximizer_in_T.by_equations &&
                    !rep.maximizer_in_T.by_characterization &&
                    rep.maximizer_in_T.equation_residual > 1e-3 &&
                    rep.maximizer_in_T.characterization_residual > 1e-3;
    bool residual_ok = rep.residual_23 > 1e-3 && rep.verdict == "PROPERTY_STAR_FAILS";
    double elapsed = seconds_since(t0);
    bool time_ok = elapsed < 10.0;

    char detail[240];
    std::snprintf(detail, sizeof(detail),
                  "m1=%.12f R(b*)=%.6f R(a^)=%.6f res23=%.4f branch_dev=%.2g %.1fs",
                  rep.m1, rep.R_of_bstar, rep.R_of_maximizer, rep.residual_23, branch_dev,
                  elapsed);
    report(1, "counterexample reproduction",
           m1_ok && a1_ok && branches_ok && bstar_ok && maximizer_ok && not_in_t &&
               residual_ok && time_ok,
           detail);
  }

  // --- criterion 2: Lemma equivalence ---------------------------------------
  {
    auto t0 = std::chrono::steady_clock::now();
    CounterexampleParams params(0.75, 0.25, 0.1);
    LemmaScanResult scan = lemma_equivalence_scan(params, 100000, 29, 1e-9, 1000);
    double elapsed = seconds_since(t0);
    char detail[160];
    std::snprintf(detail, sizeof(detail), "samples=%ld hard_disagreements=%zu %.1fs",
                  scan.samples, scan.disagreements.size(), elapsed);
    report(2, "Lemma 1 equivalence scan", scan.disagreements.empty() && elapsed < 10.0, detail);
  }

  // --- criteria 3-10: full validation run with the default config -----------
  auto t0 = std::chrono::steady_clock::now();
  SuiteConfig config;  // defaults
  ValidationReport full = run_validation(config);
  double full_elapsed = seconds_since(t0);

  std::string detail;
  {
    bool ok = checks_pass(full, {"tangency_minimal.n2", "tangency_minimal.n3"}, detail);
    const CheckRecord* c2 = find_check(full, "tangency_minimal.n2");
    bool counts_ok = c2 && c2->samples >= 50 * 5;
    report(3, "minimal-basis tangency residuals <= 1e-6", ok && counts_ok, detail);
  }
  {
    bool ok = checks_pass(full,
                          {"prop1_ratio.n2", "prop1_ratio.n3", "prop1_ball.n2", "prop1_ball.n3"},
                          detail);
    report(4, "m_j ~ s_j with ratio <= 20, = 1 on balls", ok, detail);
  }
  {
    bool ok = checks_pass(full,
                          {"prop2_metric_ratio.n2", "prop2_metric_ratio.n3",
                           "prop2_permutation.n2", "prop2_permutation.n3", "prop2_b_ratio.n2",
                           "prop2_b_ratio.n3"},
                          detail);
    report(5, "A_D ~ E_D with matrix bounds", ok, detail);
  }
  {
    bool ok = checks_pass(full,
                          {"disc_vs_e_ratio.n2", "disc_vs_e_ratio.n3", "disc_vs_e_ball.n2",
                           "disc_vs_e_ball.n3"},
                          detail);
    report(6, "E_D ~ 1/d_D equivalence", ok, detail);
  }
  {
    bool ok = checks_pass(full,
                          {"mixed_ratio.n2", "mixed_ratio.n3", "mixed_min_reproduction.n2",
                           "mixed_min_reproduction.n3"},
                          detail);
    report(7, "mixed bases keep the comparability bounds", ok, detail);
  }
  {
    bool ok = checks_pass(full, {"oracle_disc_rel", "oracle_ray_abs"}, detail);
    const CheckRecord* c = find_check(full, "oracle_disc_rel");
    bool counts_ok = c && c->samples >= 1000;
    report(8, "closed forms match the grid/bisection oracles", ok && counts_ok, detail);
  }
  {
    bool ok = checks_pass(full,
                          {"structural_orthonormality.n2", "structural_orthonormality.n3",
                           "structural_boundary.n2", "structural_boundary.n3",
                           "structural_ordering.n2", "structural_ordering.n3",
                           "structural_first_radius.n2", "structural_first_radius.n3"},
                          detail);
    report(9, "structural invariants of every basis", ok, detail);
  }
  {
    char buf[120];
    std::snprintf(buf, sizeof(buf), "runtime=%.1fs (< 300s), verdict=%s", full_elapsed,
                  full.all_pass ? "pass" : "fail");
    report(10, "full validate run under the time budget", full.all_pass && full_elapsed < 300.0,
           buf);
  }

  if (failures > 0) {
    std::printf("%d criterion(s) FAILED\n", failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
