#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "exbasis/counterexample.hpp"
#include "exbasis/metrics.hpp"

namespace exbasis {

/// Configuration of the randomized validation suites. Thresholds default to
/// 20 for the comparability ratios at n <= 3 and 50 at n >= 4; they are
/// empirical regression guards standing in for the dimension-only constants.
struct SuiteConfig {
  std::vector<int> dimensions = {2, 3};
  int domains_per_dim = 50;
  int points_per_domain = 5;
  int directions_per_point = 20;
  std::uint64_t seed = 20100101;

  // construction / optimizer settings used inside the suites
  int step_starts = 8;
  double value_tol = 1e-10;
  double min_step_tol = 1e-4;
  double max_step_tol = 1e-5;
  int objective_grid = 32;

  long lemma_samples = 100000;
  long lemma_structured = 1000;
  int oracle_samples = 1000;
  int branch_samples = 1000;
  int ball_domains_per_dim = 3;
  int counterexample_family_samples = 20;
  int mixed_directions = 5;

  CounterexampleParams counterexample_params;
  double in_T_tol = 1e-9;

  std::map<std::string, double> thresholds;  // overrides of the defaults

  double threshold(const std::string& name, int dim = 0) const;
};

SuiteConfig config_from_json(const std::string& text);
SuiteConfig config_from_json_file(const std::string& path);
std::string config_to_json(const SuiteConfig& config);

enum class CheckSense { MaxAtMost, MinAtLeast };

struct CheckRecord {
  std::string name;
  long samples = 0;
  long rejected = 0;
  double stat = 0.0;  // max over samples (MaxAtMost) or min (MinAtLeast)
  double p50 = 0.0, p90 = 0.0, p99 = 0.0;
  double threshold = 0.0;
  CheckSense sense = CheckSense::MaxAtMost;
  bool pass = false;
  std::string note;
};

struct SampleRow {
  std::string check;
  int dimension = 0;
  int domain_index = -1;
  int point_index = -1;
  int sample_index = 0;
  double value = 0.0;
};

struct ValidationReport {
  std::string version;
  std::vector<CheckRecord> checks;
  std::vector<SampleRow> rows;
  SuiteConfig config;
  double runtime_seconds = 0.0;
  int threads = 1;
  bool all_pass = false;
};

/// DiagonalQuadric with log-uniform coefficients in [0.05, 20] under a random
/// unitary rotation, or GeneralizedEllipsoid with exponents in {1,2,3};
/// picked uniformly. Deterministic for a fixed generator state.
DomainPtr random_domain(int n, std::mt19937_64& rng);

/// Haar-like random unitary (Gram-Schmidt of a Gaussian matrix).
CMat random_unitary(int n, std::mt19937_64& rng);

ValidationReport run_validation(const SuiteConfig& config);

std::string report_to_json(const ValidationReport& report, bool include_runtime = true);
std::string report_to_csv(const ValidationReport& report);

}  // namespace exbasis
