#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "exbasis/counterexample.hpp"
#include "exbasis/harness.hpp"
#include "exbasis/metrics.hpp"
#include "exbasis/version.hpp"

namespace {

using exbasis::Complex;
using exbasis::CVec;
using ordered_json = nlohmann::ordered_json;

// Parses one complex literal: "1.5", "2i", "1+2i", "-0.5-0.25i", "i", "-i".
Complex parse_complex(std::string token) {
  std::erase(token, ' ');
  if (token.empty()) throw CLI::ValidationError("empty complex component");

  auto parse_real = [](const std::string& s) -> double {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    std::size_t used = 0;
    double value = std::stod(s, &used);
    if (used != s.size()) throw CLI::ValidationError("bad numeric literal: " + s);
    return value;
  };

  // split at the last +/- that is not a leading sign or an exponent sign
  std::size_t split = std::string::npos;
  for (std::size_t i = 1; i < token.size(); ++i) {
    char c = token[i];
    if ((c == '+' || c == '-') && token[i - 1] != 'e' && token[i - 1] != 'E') split = i;
  }

  bool has_i = token.back() == 'i' || token.back() == 'I';
  if (!has_i) {
    if (split != std::string::npos) throw CLI::ValidationError("bad complex literal: " + token);
    return Complex(parse_real(token), 0.0);
  }
  std::string body = token.substr(0, token.size() - 1);
  if (split == std::string::npos) return Complex(0.0, parse_real(body));
  return Complex(parse_real(token.substr(0, split)), parse_real(body.substr(split)));
}

CVec parse_complex_csv(const std::string& text) {
  std::vector<Complex> entries;
  std::string token;
  std::stringstream ss(text);
  while (std::getline(ss, token, ',')) entries.push_back(parse_complex(token));
  if (entries.empty()) throw CLI::ValidationError("empty vector");
  CVec v(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) v[i] = entries[i];
  return v;
}

ordered_json vector_to_json(const CVec& v) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(ordered_json::array({v[i].real(), v[i].imag()}));
  }
  return out;
}

ordered_json matrix_to_json(const Eigen::MatrixXd& m) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(row);
  }
  return out;
}

ordered_json basis_to_json(const exbasis::Domain& domain, const exbasis::ExtremalBasis& basis,
                           const exbasis::BasisOptions& opts) {
  ordered_json j;
  j["kind"] = exbasis::to_string(basis.kind);
  if (basis.kind == exbasis::BasisKind::Mixed) j["k"] = basis.mixed_k;
  j["ordering"] = (basis.ordering == exbasis::BasisOrdering::Construction) ? "construction"
                                                                           : "reordered";
  j["radii"] = basis.radii;
  ordered_json vectors = ordered_json::array();
  ordered_json boundary = ordered_json::array();
  for (int i = 0; i < basis.dimension(); ++i) {
    vectors.push_back(vector_to_json(basis.vectors[i]));
    boundary.push_back(vector_to_json(basis.boundary_points[i]));
  }
  j["vectors"] = vectors;
  j["boundary_points"] = boundary;
  j["tangency_residuals"] = matrix_to_json(exbasis::tangency_residuals(domain, basis));
  j["settings"] = {{"seed", opts.seed},
                   {"step_starts", opts.step_starts},
                   {"value_tol", opts.value_tol},
                   {"min_step_tol", opts.min_step_tol},
                   {"max_step_tol", opts.max_step_tol},
                   {"objective_grid", opts.objective_grid}};
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"extremal bases, directional boundary distances, and validation "
               "suites for convex domains in C^n"};
  app.set_version_flag("--version", std::string(exbasis::kVersion));
  std::uint64_t seed = 1;
  app.add_option("--seed", seed, "global random seed");

  // distance
  auto* distance_cmd = app.add_subcommand("distance", "ray, disc, and Euclidean distances");
  std::string distance_domain, distance_point, distance_direction;
  distance_cmd->add_option("--domain", distance_domain, "domain JSON file")->required();
  distance_cmd->add_option("--point", distance_point, "base point (csv of complex)")->required();
  distance_cmd->add_option("--direction", distance_direction, "direction (csv of complex)")
      ->required();

  // basis
  auto* basis_cmd = app.add_subcommand("basis", "construct an extremal basis");
  std::string basis_domain, basis_point, basis_kind = "minimal";
  basis_cmd->add_option("--domain", basis_domain, "domain JSON file")->required();
  basis_cmd->add_option("--point", basis_point, "base point (csv of complex)")->required();
  basis_cmd->add_option("--kind", basis_kind, "minimal | maximal | mixed:<k>");

  // counterexample
  auto* ce_cmd = app.add_subcommand("counterexample",
                                    "reproduce the failure of property (*) for maximal bases");
  double beta1 = 0.75, beta2 = 0.25, delta = 0.1, ce_threshold = 1e-3;
  long scan = 0;
  ce_cmd->add_option("--beta1", beta1, "coefficient of y1^2 (0 < beta2 < beta1 < 1)");
  ce_cmd->add_option("--beta2", beta2, "coefficient of y2^2");
  ce_cmd->add_option("--delta", delta, "base point height (0 < delta < 1)");
  ce_cmd->add_option("--threshold", ce_threshold, "tangency residual threshold");
  ce_cmd->add_option("--scan", scan, "run the Lemma equivalence scan with K samples");

  // validate
  auto* validate_cmd = app.add_subcommand("validate", "run the randomized validation suites");
  std::string config_path, out_dir;
  validate_cmd->add_option("--config", config_path, "suite config JSON file");
  validate_cmd->add_option("--out", out_dir, "directory for report.json and samples.csv");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*distance_cmd) {
      auto domain = exbasis::domain_from_json_file(distance_domain);
      CVec q = parse_complex_csv(distance_point);
      CVec dir = parse_complex_csv(distance_direction);
      exbasis::SphereOptions opts;
      opts.seed = seed;
      auto euclid = exbasis::euclidean_distance(*domain, q, opts);
      ordered_json j;
      j["domain_kind"] = domain->kind();
      j["point"] = vector_to_json(q);
      j["direction"] = vector_to_json(dir / dir.norm());
      j["ray_distance"] = domain->ray_distance(q, dir);
      j["disc_distance"] = exbasis::disc_distance(*domain, q, dir / dir.norm());
      j["euclidean_distance"] = euclid.value;
      j["euclidean_direction"] = vector_to_json(euclid.direction);
      std::cout << j.dump(2) << "\n";
      return 0;
    }

    if (*basis_cmd) {
      auto domain = exbasis::domain_from_json_file(basis_domain);
      CVec q = parse_complex_csv(basis_point);
      exbasis::BasisOptions opts;
      opts.seed = seed;
      exbasis::ExtremalBasis basis;
      if (basis_kind == "minimal") {
        basis = exbasis::minimal_basis(domain, q, opts);
      } else if (basis_kind == "maximal") {
        basis = exbasis::maximal_basis(domain, q, opts);
      } else if (basis_kind.rfind("mixed:", 0) == 0) {
        int k = std::stoi(basis_kind.substr(6));
        basis = exbasis::mixed_basis(domain, q, k, opts);
      } else {
        std::cerr << "unknown basis kind: " << basis_kind << "\n";
        return 2;
      }
      std::cout << basis_to_json(*domain, basis, opts).dump(2) << "\n";
      return 0;
    }

    if (*ce_cmd) {
      exbasis::CounterexampleParams params(beta1, beta2, delta);
      if (scan > 0) {
        auto result = exbasis::lemma_equivalence_scan(params, scan, seed);
        ordered_json j;
        j["samples"] = result.samples;
        j["agreements"] = result.agreements;
        j["within_margin_band"] = result.within_margin_band;
        j["hard_disagreements"] = result.disagreements.size();
        std::cout << j.dump(2) << "\n";
        return result.disagreements.empty() ? 0 : 1;
      }
      exbasis::BasisOptions opts;
      opts.seed = seed;
      auto report = exbasis::run_counterexample(params, opts, ce_threshold);
      ordered_json j;
      j["settings"] = {{"beta1", beta1}, {"beta2", beta2}, {"delta", delta},
                       {"seed", seed},   {"threshold", ce_threshold}};
      j["m1"] = report.m1;
      j["a1"] = vector_to_json(report.a1);
      j["maximizer"] = vector_to_json(report.maximizer);
      j["max_disc_value"] = report.max_disc_value;
      j["R_of_maximizer"] = report.R_of_maximizer;
      j["R_of_bstar"] = report.R_of_bstar;
      j["maximizer_in_T"] = {
          {"by_equations", report.maximizer_in_T.by_equations},
          {"by_characterization", report.maximizer_in_T.by_characterization},
          {"equation_residual", report.maximizer_in_T.equation_residual},
          {"characterization_residual", report.maximizer_in_T.characterization_residual}};
      j["maximal_basis_radii"] = report.maximal.radii;
      j["tangency_residuals"] = matrix_to_json(report.residuals);
      j["residual_23"] = report.residual_23;
      j["verdict"] = report.verdict;
      std::cout << j.dump(2) << "\n";
      return 0;
    }

    if (*validate_cmd) {
      exbasis::SuiteConfig config;
      if (!config_path.empty()) config = exbasis::config_from_json_file(config_path);
      if (validate_cmd->count("--seed") || app.count("--seed")) config.seed = seed;
      auto report = exbasis::run_validation(config);
      std::string json_text = exbasis::report_to_json(report);
      if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::ofstream(out_dir + "/report.json") << json_text << "\n";
        std::ofstream(out_dir + "/samples.csv") << exbasis::report_to_csv(report);
      }
      std::cout << json_text << "\n";
      return report.all_pass ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  std::cout << app.help() << "\n";
  return 0;
}
