#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "mmdrl/herding.hpp"
#include "mmdrl/learners.hpp"

namespace mmdrl::experiments {

/// Everything an experiment run needs. Read from a JSON document whose
/// top-level keys match the field names; missing keys keep the defaults.
struct ExperimentConfig {
  std::string experiment = "run";
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  // Explicit seed list; when empty, seeds are seed, seed+1, ..., seed+num_seeds-1.
  std::vector<std::uint64_t> seeds;
  int num_seeds = 30;

  // chain-eval
  std::vector<int> chain_lengths = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};
  std::vector<std::string> methods = {"gaussian-mmdrl", "unrectified-mmdrl", "qrdrl"};
  std::string gaussian_kernel = "gaussian_mix:h=8,10,12";
  std::string unrectified_kernel = "unrectified:alpha=1";
  LearnerConfig learner;
  int mc_rollouts = 10000;
  int max_moment_order = 4;
  int horizon = kDefaultHorizon;
  std::vector<int> fidelity_lengths = {2};
  double fidelity_tolerance = 0.1;
  std::vector<int> directional_lengths = {5, 10, 15};

  // contraction / counterexample
  int contraction_instances = 100;
  std::vector<int> contraction_chain_lengths = {2, 3, 4, 5, 6};
  int max_atoms = 8;
  double contraction_tolerance = 1e-9;
  std::vector<double> counterexample_gammas = {0.8, 0.9};
  std::vector<double> counterexample_alphas = {0.25, 0.5, 0.75, 1.0};
  double counterexample_sigma = 0.1;
  double violation_margin = 1e-8;

  // herding
  std::vector<int> herding_sizes = {4, 8, 16, 32, 64, 128};
  int herding_target_atoms = 200;
  std::string herding_kernel = "gaussian:h=1";
  DescentOptions descent;
  double descent_slope_min = -0.65;
  double descent_slope_max = -0.45;
  double greedy_slope_max = -0.8;

  // properties
  int metric_instances = 500;
  int lemma_instances = 200;
  int gradient_instances = 100;

  std::vector<std::uint64_t> seed_list() const;
  void validate() const;

  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& doc);

  // 16 hex digits of FNV-1a over the canonical JSON form.
  std::string hash() const;
};

// ---------------------------------------------------------------- chain-eval

struct ChainRow {
  int chain_length;
  std::uint64_t seed;
  std::string method;
  int moment_order;
  double estimate;
  double oracle;
  std::string status;  // ok | degenerate | diverged
};

struct ChainReport {
  std::vector<ChainRow> rows;
  // Worst |first moment - expected return| over the fidelity lengths.
  double fidelity_worst_error = 0.0;
  bool fidelity_checked = false;
  bool fidelity_pass = true;
  // Mean absolute central-moment error (orders 2..max) over the directional lengths.
  double gaussian_mae = 0.0;
  double qrdrl_mae = 0.0;
  bool directional_checked = false;
  bool directional_pass = true;
  double slowest_cell_seconds = 0.0;

  bool pass() const { return fidelity_pass && directional_pass; }
};

ChainReport run_chain_experiment(const ExperimentConfig& cfg);
void write_chain_csv(std::ostream& out, const ChainReport& report, const ExperimentConfig& cfg);

// ---------------------------------------------------- contraction certificates

struct CertificateRow {
  std::string suite;  // contraction | non-contraction | zero-discount
  int instance;
  std::string kernel;
  int chain_length;
  double gamma;
  double order;       // alpha* for contraction rows, alpha for non-contraction rows
  double mmd_before;  // MMD_inf(mu, nu)
  double mmd_after;   // MMD_inf(T mu, T nu)
  double ratio;
  double bound;       // gamma^(alpha*/2) or gamma^alpha
  bool pass;
};

struct CertificateReport {
  std::vector<CertificateRow> rows;
  int violations = 0;  // rows that failed their check
  bool pass() const { return violations == 0; }
};

// Random-instance contraction checks under unrectified kernels, the
// zero-discount edge case, and the counterexample checks.
CertificateReport run_contraction_suite(const ExperimentConfig& cfg);
// Only the counterexample (non-contraction) checks.
CertificateReport run_counterexample_suite(const ExperimentConfig& cfg);
void write_certificate_csv(std::ostream& out, const CertificateReport& report,
                           const ExperimentConfig& cfg);

// ------------------------------------------------------------------- herding

struct HerdingReport {
  struct Row {
    int n;
    double mmd;
    std::string method;
  };
  std::vector<Row> rows;
  RateFit descent;
  RateFit greedy;
  bool descent_pass = false;
  bool greedy_pass = false;
  bool pass() const { return descent_pass && greedy_pass; }
};

HerdingReport run_herding_experiment(const ExperimentConfig& cfg);
void write_herding_csv(std::ostream& out, const HerdingReport& report, const ExperimentConfig& cfg);

// ---------------------------------------------------------------- properties

struct PropertyResult {
  std::string property;
  std::string kernel;
  int instances = 0;
  int violations = 0;
  // Largest observed error, or for separation checks the smallest observed MMD.
  double worst = 0.0;
  double tolerance = 0.0;
  bool pass() const { return violations == 0; }
};

struct PropertyReport {
  std::vector<PropertyResult> results;
  bool pass() const;
  // Results whose property name matches exactly.
  std::vector<PropertyResult> select(const std::string& property) const;
};

PropertyReport run_property_suite(const ExperimentConfig& cfg);
void write_property_csv(std::ostream& out, const PropertyReport& report,
                        const ExperimentConfig& cfg);

// ---------------------------------------------------------------- runner

/// Runs `kind` (chain-eval, contraction, counterexample, herding,
/// properties), writes <out_dir>/<experiment>/<kind>.csv plus summary.txt,
/// and returns whether every certification passed.
bool run_and_write(const std::string& kind, const ExperimentConfig& cfg, std::ostream& log);

}  // namespace mmdrl::experiments
