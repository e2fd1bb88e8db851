#include "mmdrl/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "mmdrl/bellman.hpp"
#include "mmdrl/errors.hpp"
#include "mmdrl/mmd.hpp"
#include "mmdrl/parallel.hpp"
#include "random_instances.hpp"

namespace mmdrl::experiments {
namespace {

using nlohmann::json;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (auto k : keys) h = splitmix64(h ^ splitmix64(k));
  return h;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

// Short form for human-readable summaries; CSVs keep full precision.
std::string brief(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream out;
  out << std::setprecision(6) << v;
  return out.str();
}

const char* pass_word(bool pass) { return pass ? "pass" : "fail"; }

struct ChainMethod {
  std::string name;
  LearnerKind kind;
  Kernel kernel;
};

ChainMethod resolve_method(const std::string& name, const ExperimentConfig& cfg) {
  if (name == "gaussian-mmdrl") {
    return {name, LearnerKind::kMmdrl, Kernel::parse(cfg.gaussian_kernel)};
  }
  if (name == "unrectified-mmdrl") {
    return {name, LearnerKind::kMmdrl, Kernel::parse(cfg.unrectified_kernel)};
  }
  if (name == "qrdrl") return {name, LearnerKind::kQrdrl, Kernel::parse(cfg.gaussian_kernel)};
  throw DomainError("unknown chain method '" + name + "'");
}

json learner_to_json(const LearnerConfig& l) {
  return json{{"num_particles", l.num_particles},
              {"lr_exponent", l.lr_exponent},
              {"init_mean", l.init_mean},
              {"init_std", l.init_std},
              {"episodes_per_iter", l.episodes_per_iter},
              {"num_iters", l.num_iters},
              {"max_episode_steps", l.max_episode_steps},
              {"scaling", l.scaling == GradientScaling::kPerParticle ? "per_particle" : "objective"}};
}

LearnerConfig learner_from_json(const json& doc) {
  static const std::set<std::string> known = {"num_particles",     "lr_exponent", "init_mean",
                                              "init_std",          "episodes_per_iter",
                                              "num_iters",         "max_episode_steps", "scaling"};
  for (const auto& [key, _] : doc.items()) {
    if (!known.contains(key)) throw DomainError("unknown learner config key '" + key + "'");
  }
  LearnerConfig l;
  l.num_particles = doc.value("num_particles", l.num_particles);
  l.lr_exponent = doc.value("lr_exponent", l.lr_exponent);
  l.init_mean = doc.value("init_mean", l.init_mean);
  l.init_std = doc.value("init_std", l.init_std);
  l.episodes_per_iter = doc.value("episodes_per_iter", l.episodes_per_iter);
  l.num_iters = doc.value("num_iters", l.num_iters);
  l.max_episode_steps = doc.value("max_episode_steps", l.max_episode_steps);
  const auto scaling = doc.value("scaling", std::string("per_particle"));
  if (scaling == "per_particle") {
    l.scaling = GradientScaling::kPerParticle;
  } else if (scaling == "objective") {
    l.scaling = GradientScaling::kObjective;
  } else {
    throw DomainError("learner scaling must be 'per_particle' or 'objective'");
  }
  return l;
}

}  // namespace

// ------------------------------------------------------------------ config

std::vector<std::uint64_t> ExperimentConfig::seed_list() const {
  if (!seeds.empty()) return seeds;
  std::vector<std::uint64_t> out;
  for (int i = 0; i < num_seeds; ++i) out.push_back(seed + static_cast<std::uint64_t>(i));
  return out;
}

void ExperimentConfig::validate() const {
  if (seed_list().empty()) throw DomainError("config must provide at least one seed");
  if (experiment.empty()) throw DomainError("experiment name must not be empty");
  for (int k : chain_lengths) {
    if (k < 1) throw DomainError("chain lengths must be positive");
  }
  for (const auto& m : methods) resolve_method(m, *this);
  learner.validate();
  if (mc_rollouts < 1) throw DomainError("need at least one Monte Carlo rollout");
  if (max_moment_order < 1) throw DomainError("max moment order must be positive");
  if (contraction_instances < 0 || max_atoms < 1) throw DomainError("invalid contraction sizes");
  for (int k : contraction_chain_lengths) {
    if (k < 2) throw DomainError("contraction chains need length >= 2");
  }
  Kernel::parse(herding_kernel);
  if (herding_target_atoms < 1) throw DomainError("herding target needs atoms");
}

json ExperimentConfig::to_json() const {
  return json{{"experiment", experiment},
              {"out_dir", out_dir},
              {"seed", seed},
              {"seeds", seeds},
              {"num_seeds", num_seeds},
              {"chain_lengths", chain_lengths},
              {"methods", methods},
              {"gaussian_kernel", gaussian_kernel},
              {"unrectified_kernel", unrectified_kernel},
              {"learner", learner_to_json(learner)},
              {"mc_rollouts", mc_rollouts},
              {"max_moment_order", max_moment_order},
              {"horizon", horizon},
              {"fidelity_lengths", fidelity_lengths},
              {"fidelity_tolerance", fidelity_tolerance},
              {"directional_lengths", directional_lengths},
              {"contraction_instances", contraction_instances},
              {"contraction_chain_lengths", contraction_chain_lengths},
              {"max_atoms", max_atoms},
              {"contraction_tolerance", contraction_tolerance},
              {"counterexample_gammas", counterexample_gammas},
              {"counterexample_alphas", counterexample_alphas},
              {"counterexample_sigma", counterexample_sigma},
              {"violation_margin", violation_margin},
              {"herding_sizes", herding_sizes},
              {"herding_target_atoms", herding_target_atoms},
              {"herding_kernel", herding_kernel},
              {"descent",
               {{"max_steps", descent.max_steps},
                {"learning_rate", descent.learning_rate},
                {"restarts", descent.restarts},
                {"growth", descent.growth}}},
              {"descent_slope_min", descent_slope_min},
              {"descent_slope_max", descent_slope_max},
              {"greedy_slope_max", greedy_slope_max},
              {"metric_instances", metric_instances},
              {"lemma_instances", lemma_instances},
              {"gradient_instances", gradient_instances}};
}

ExperimentConfig ExperimentConfig::from_json(const json& doc) {
  if (!doc.is_object()) throw DomainError("experiment config must be a JSON object");
  ExperimentConfig cfg;
  const json defaults = cfg.to_json();
  for (const auto& [key, _] : doc.items()) {
    if (!defaults.contains(key)) throw DomainError("unknown config key '" + key + "'");
  }
  try {
    auto get = [&](const char* key, auto& field) {
      if (doc.contains(key)) field = doc.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("experiment", cfg.experiment);
    get("out_dir", cfg.out_dir);
    get("seed", cfg.seed);
    get("seeds", cfg.seeds);
    get("num_seeds", cfg.num_seeds);
    get("chain_lengths", cfg.chain_lengths);
    get("methods", cfg.methods);
    get("gaussian_kernel", cfg.gaussian_kernel);
    get("unrectified_kernel", cfg.unrectified_kernel);
    if (doc.contains("learner")) cfg.learner = learner_from_json(doc.at("learner"));
    get("mc_rollouts", cfg.mc_rollouts);
    get("max_moment_order", cfg.max_moment_order);
    get("horizon", cfg.horizon);
    get("fidelity_lengths", cfg.fidelity_lengths);
    get("fidelity_tolerance", cfg.fidelity_tolerance);
    get("directional_lengths", cfg.directional_lengths);
    get("contraction_instances", cfg.contraction_instances);
    get("contraction_chain_lengths", cfg.contraction_chain_lengths);
    get("max_atoms", cfg.max_atoms);
    get("contraction_tolerance", cfg.contraction_tolerance);
    get("counterexample_gammas", cfg.counterexample_gammas);
    get("counterexample_alphas", cfg.counterexample_alphas);
    get("counterexample_sigma", cfg.counterexample_sigma);
    get("violation_margin", cfg.violation_margin);
    get("herding_sizes", cfg.herding_sizes);
    get("herding_target_atoms", cfg.herding_target_atoms);
    get("herding_kernel", cfg.herding_kernel);
    if (doc.contains("descent")) {
      const auto& d = doc.at("descent");
      cfg.descent.max_steps = d.value("max_steps", cfg.descent.max_steps);
      cfg.descent.learning_rate = d.value("learning_rate", cfg.descent.learning_rate);
      cfg.descent.restarts = d.value("restarts", cfg.descent.restarts);
      cfg.descent.growth = d.value("growth", cfg.descent.growth);
    }
    get("descent_slope_min", cfg.descent_slope_min);
    get("descent_slope_max", cfg.descent_slope_max);
    get("greedy_slope_max", cfg.greedy_slope_max);
    get("metric_instances", cfg.metric_instances);
    get("lemma_instances", cfg.lemma_instances);
    get("gradient_instances", cfg.gradient_instances);
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed experiment config: ") + e.what());
  }
  return cfg;
}

std::string ExperimentConfig::hash() const {
  auto doc = to_json();
  doc.erase("out_dir");  // where results land does not change them
  const std::string text = doc.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

// --------------------------------------------------------------- chain-eval

ChainReport run_chain_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto seeds = cfg.seed_list();
  std::vector<ChainMethod> methods;
  for (const auto& m : cfg.methods) methods.push_back(resolve_method(m, cfg));

  // Monte Carlo oracle per (K, seed), shared by all methods.
  struct OracleCell {
    int length;
    std::uint64_t seed;
    std::vector<double> moments;
    double expected_return = 0.0;
  };
  std::vector<OracleCell> oracles;
  for (int k : cfg.chain_lengths) {
    for (auto s : seeds) oracles.push_back({k, s, {}, 0.0});
  }
  parallel_for(oracles.size(), [&](std::size_t i) {
    auto& cell = oracles[i];
    if (cell.length < 2) {
      cell.moments.assign(static_cast<std::size_t>(cfg.max_moment_order), 0.0);
      return;
    }
    const auto mdp = build_chain(cell.length);
    const auto policy = Policy::constant(cell.length, 2, kForward);
    Rng rng = make_rng({cell.seed, static_cast<std::uint64_t>(cell.length), 0x6d63ULL});
    cell.moments = mc_rollout_moments(mdp, policy, 0, cfg.mc_rollouts, cfg.max_moment_order,
                                      cfg.horizon, rng, kForward);
    cell.expected_return = expected_returns(mdp, policy).at(0, kForward);
  });
  std::map<std::pair<int, std::uint64_t>, const OracleCell*> oracle_index;
  for (const auto& o : oracles) oracle_index[{o.length, o.seed}] = &o;

  struct Cell {
    int length;
    std::uint64_t seed;
    std::size_t method;
    std::vector<double> moments;
    std::string status = "ok";
    double seconds = 0.0;
  };
  std::vector<Cell> cells;
  for (int k : cfg.chain_lengths) {
    for (auto s : seeds) {
      for (std::size_t m = 0; m < methods.size(); ++m) cells.push_back({k, s, m, {}, "ok", 0.0});
    }
  }
  parallel_for(cells.size(), [&](std::size_t i) {
    auto& cell = cells[i];
    if (cell.length < 2) {
      cell.moments.assign(static_cast<std::size_t>(cfg.max_moment_order), 0.0);
      cell.status = "degenerate";
      return;
    }
    const auto start = std::chrono::steady_clock::now();
    const auto& method = methods[cell.method];
    const auto mdp = build_chain(cell.length);
    const auto policy = Policy::constant(cell.length, 2, kForward);
    LearnerConfig learner = cfg.learner;
    learner.kernel = method.kernel;
    learner.seed = derive_seed({cell.seed, static_cast<std::uint64_t>(cell.length), cell.method});
    try {
      const auto theta = run_policy_evaluation(mdp, policy, method.kind, learner);
      const auto measure = theta.at(0, kForward).measure();
      for (int order = 1; order <= cfg.max_moment_order; ++order) {
        cell.moments.push_back(moment(measure, order, true));
      }
    } catch (const DivergenceError&) {
      cell.status = "diverged";
      cell.moments.assign(static_cast<std::size_t>(cfg.max_moment_order), std::nan(""));
    }
    cell.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });

  ChainReport report;
  double gaussian_sum = 0.0, qr_sum = 0.0;
  int gaussian_count = 0, qr_count = 0;
  const std::set<int> fidelity(cfg.fidelity_lengths.begin(), cfg.fidelity_lengths.end());
  const std::set<int> directional(cfg.directional_lengths.begin(), cfg.directional_lengths.end());
  for (const auto& cell : cells) {
    report.slowest_cell_seconds = std::max(report.slowest_cell_seconds, cell.seconds);
    const auto* oracle = oracle_index.at({cell.length, cell.seed});
    const auto& name = methods[cell.method].name;
    for (int order = 1; order <= cfg.max_moment_order; ++order) {
      const auto idx = static_cast<std::size_t>(order - 1);
      report.rows.push_back(ChainRow{cell.length, cell.seed, name, order, cell.moments[idx],
                                     oracle->moments[idx], cell.status});
    }
    if (cell.length >= 2 && fidelity.contains(cell.length)) {
      report.fidelity_checked = true;
      const double err = std::abs(cell.moments[0] - oracle->expected_return);
      if (!(err <= cfg.fidelity_tolerance)) report.fidelity_pass = false;
      if (std::isnan(err)) {
        report.fidelity_worst_error = std::numeric_limits<double>::infinity();
      } else {
        report.fidelity_worst_error = std::max(report.fidelity_worst_error, err);
      }
    }
    if (cell.length >= 2 && directional.contains(cell.length) &&
        (name == "gaussian-mmdrl" || name == "qrdrl")) {
      for (int order = 2; order <= cfg.max_moment_order; ++order) {
        const auto idx = static_cast<std::size_t>(order - 1);
        const double err = std::abs(cell.moments[idx] - oracle->moments[idx]);
        if (name == "gaussian-mmdrl") {
          gaussian_sum += err;
          ++gaussian_count;
        } else {
          qr_sum += err;
          ++qr_count;
        }
      }
    }
  }
  if (gaussian_count > 0 && qr_count > 0) {
    report.directional_checked = true;
    report.gaussian_mae = gaussian_sum / gaussian_count;
    report.qrdrl_mae = qr_sum / qr_count;
    report.directional_pass = report.gaussian_mae < report.qrdrl_mae;
  }
  return report;
}

void write_chain_csv(std::ostream& out, const ChainReport& report, const ExperimentConfig& cfg) {
  const auto hash = cfg.hash();
  std::ostringstream buf;
  buf << "K,seed,method,moment_order,estimate,oracle,abs_error,rel_error,status,config_hash\n";
  for (const auto& r : report.rows) {
    const double abs_error = std::abs(r.estimate - r.oracle);
    const double rel_error = r.oracle != 0.0 ? abs_error / std::abs(r.oracle) : 0.0;
    buf << r.chain_length << ',' << r.seed << ',' << r.method << ',' << r.moment_order << ','
        << format_double(r.estimate) << ',' << format_double(r.oracle) << ','
        << format_double(abs_error) << ',' << format_double(rel_error) << ',' << r.status << ','
        << hash << '\n';
  }
  out << buf.str();
}

// ------------------------------------------------------ contraction suites

namespace {

CertificateRow certify_pair(const std::string& suite, int instance, const Kernel& k,
                            int chain_length, double gamma, double order, const ReturnTable& mu,
                            const ReturnTable& nu, const ReturnTable& t_mu, const ReturnTable& t_nu) {
  CertificateRow row;
  row.suite = suite;
  row.instance = instance;
  row.kernel = k.to_string();
  row.chain_length = chain_length;
  row.gamma = gamma;
  row.order = order;
  row.mmd_before = mmd_sup(mu, nu, k);
  row.mmd_after = mmd_sup(t_mu, t_nu, k);
  row.ratio = row.mmd_before > 0.0 ? row.mmd_after / row.mmd_before : 0.0;
  return row;
}

std::vector<CertificateRow> counterexample_rows(const ExperimentConfig& cfg) {
  const std::vector<double> rewards = {0.0, 0.25, 0.5, 0.75, 1.0};
  const std::vector<double> p = {0.4, 0.3, 0.2, 0.1, 0.0};
  const std::vector<double> q = {0.0, 0.1, 0.2, 0.3, 0.4};
  const double sigma_sq = cfg.counterexample_sigma * cfg.counterexample_sigma;
  const std::vector<Kernel> kernels = {Kernel::gaussian(2.0 * sigma_sq), Kernel::exp_prod(sigma_sq)};
  std::vector<CertificateRow> rows;
  int instance = 0;
  for (double gamma : cfg.counterexample_gammas) {
    for (double alpha : cfg.counterexample_alphas) {
      const auto probs = counterexample_reward_probs(static_cast<int>(rewards.size()), gamma, alpha);
      const auto ce = build_counterexample(gamma, rewards, probs, p, q);
      const auto policy = Policy::constant(2, 1, 0);
      const auto t_mu = apply_bellman_exact(ce.mdp, policy, ce.mu);
      const auto t_nu = apply_bellman_exact(ce.mdp, policy, ce.nu);
      for (const auto& k : kernels) {
        auto row = certify_pair("non-contraction", instance, k, 2, gamma, alpha, ce.mu, ce.nu, t_mu, t_nu);
        row.bound = std::pow(gamma, alpha);
        row.pass = row.ratio - row.bound > cfg.violation_margin;
        rows.push_back(row);
      }
      ++instance;
    }
  }
  return rows;
}

CertificateReport finalize(std::vector<CertificateRow> rows) {
  CertificateReport report;
  report.rows = std::move(rows);
  for (const auto& r : report.rows) report.violations += r.pass ? 0 : 1;
  return report;
}

}  // namespace

CertificateReport run_contraction_suite(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto seeds = cfg.seed_list();
  const std::uint64_t base = seeds.front();
  const auto n = static_cast<std::size_t>(cfg.contraction_instances);
  std::vector<std::vector<CertificateRow>> per_instance(n);
  parallel_for(n, [&](std::size_t i) {
    Rng rng = make_rng({base, i, 0xc0ULL});
    const int length = cfg.contraction_chain_lengths[rng() % cfg.contraction_chain_lengths.size()];
    const auto mdp = build_chain(length);
    const auto policy = Policy::random(length, 2, rng);
    const auto mu = detail::random_table(length, 2, rng, cfg.max_atoms, -3.0, 3.0);
    const auto nu = detail::random_table(length, 2, rng, cfg.max_atoms, -3.0, 3.0);
    const auto t_mu = apply_bellman_exact(mdp, policy, mu);
    const auto t_nu = apply_bellman_exact(mdp, policy, nu);
    const auto c = detail::random_simplex(3, rng);
    const auto c2 = detail::random_simplex(2, rng);
    const std::vector<Kernel> kernels = {
        Kernel::unrectified(0.5),
        Kernel::unrectified(1.0),
        Kernel::unrectified(1.5),
        Kernel::unrectified_mixture({0.5, 1.0, 1.5}, c),
        Kernel::unrectified_mixture({1.0, 1.5}, c2),
    };
    for (const auto& k : kernels) {
      auto row = certify_pair("contraction", static_cast<int>(i), k, length, mdp.gamma(),
                              k.min_scale_order(), mu, nu, t_mu, t_nu);
      row.bound = std::pow(mdp.gamma(), row.order / 2.0);
      row.pass = row.mmd_after <= row.bound * row.mmd_before + cfg.contraction_tolerance;
      per_instance[i].push_back(row);
    }
  });
  std::vector<CertificateRow> rows;
  for (auto& r : per_instance) rows.insert(rows.end(), r.begin(), r.end());

  // Zero discount: every entry collapses onto its reward distribution.
  for (int i = 0; i < 5; ++i) {
    Rng rng = make_rng({base, static_cast<std::uint64_t>(i), 0x0dULL});
    const auto mdp = build_chain(3, 0.0);
    const auto policy = Policy::random(3, 2, rng);
    const auto mu = detail::random_table(3, 2, rng, cfg.max_atoms, -3.0, 3.0);
    const auto nu = detail::random_table(3, 2, rng, cfg.max_atoms, -3.0, 3.0);
    const auto k = Kernel::unrectified(1.0);
    auto row = certify_pair("zero-discount", i, k, 3, 0.0, 1.0, mu, nu,
                            apply_bellman_exact(mdp, policy, mu), apply_bellman_exact(mdp, policy, nu));
    row.bound = 0.0;
    row.pass = row.mmd_after <= 1e-6;
    rows.push_back(row);
  }

  auto ce = counterexample_rows(cfg);
  rows.insert(rows.end(), ce.begin(), ce.end());
  return finalize(std::move(rows));
}

CertificateReport run_counterexample_suite(const ExperimentConfig& cfg) {
  cfg.validate();
  return finalize(counterexample_rows(cfg));
}

void write_certificate_csv(std::ostream& out, const CertificateReport& report,
                           const ExperimentConfig& cfg) {
  const auto hash = cfg.hash();
  const auto seed = cfg.seed_list().front();
  std::ostringstream buf;
  buf << "suite,instance,kernel,chain_length,gamma,order,mmd_before,mmd_after,ratio,bound,status,"
         "seed,config_hash\n";
  for (const auto& r : report.rows) {
    // Kernel strings contain commas; quote them.
    buf << r.suite << ',' << r.instance << ",\"" << r.kernel << "\"," << r.chain_length << ','
        << format_double(r.gamma) << ',' << format_double(r.order) << ','
        << format_double(r.mmd_before) << ',' << format_double(r.mmd_after) << ','
        << format_double(r.ratio) << ',' << format_double(r.bound) << ',' << pass_word(r.pass)
        << ',' << seed << ',' << hash << '\n';
  }
  out << buf.str();
}

// ------------------------------------------------------------------ herding

HerdingReport run_herding_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto target = discretized_gaussian(cfg.herding_target_atoms);
  const auto k = Kernel::parse(cfg.herding_kernel);
  RateExperimentOptions options;
  options.descent = cfg.descent;
  options.seed = cfg.seed_list().front();
  HerdingReport report;
  // The two fits are independent; run them side by side.
  parallel_for(2, [&](std::size_t i) {
    if (i == 0) {
      report.descent = rate_experiment(target, cfg.herding_sizes, k, HerdingMethod::kDescent, options);
    } else {
      report.greedy = rate_experiment(target, cfg.herding_sizes, k, HerdingMethod::kGreedy, options);
    }
  });
  for (const auto& p : report.descent.points) report.rows.push_back({p.n, p.mmd, "descent"});
  for (const auto& p : report.greedy.points) report.rows.push_back({p.n, p.mmd, "greedy"});
  report.descent_pass = report.descent.slope >= cfg.descent_slope_min &&
                        report.descent.slope <= cfg.descent_slope_max;
  report.greedy_pass = report.greedy.slope <= cfg.greedy_slope_max;
  return report;
}

void write_herding_csv(std::ostream& out, const HerdingReport& report, const ExperimentConfig& cfg) {
  const auto hash = cfg.hash();
  const auto seed = cfg.seed_list().front();
  std::ostringstream buf;
  buf << "n,mmd,method,seed,config_hash\n";
  for (const auto& r : report.rows) {
    buf << r.n << ',' << format_double(r.mmd) << ',' << r.method << ',' << seed << ',' << hash
        << '\n';
  }
  out << buf.str();
}

// --------------------------------------------------------------- properties

bool PropertyReport::pass() const {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass(); });
}

std::vector<PropertyResult> PropertyReport::select(const std::string& property) const {
  std::vector<PropertyResult> out;
  for (const auto& r : results) {
    if (r.property == property) out.push_back(r);
  }
  return out;
}

void write_property_csv(std::ostream& out, const PropertyReport& report,
                        const ExperimentConfig& cfg) {
  const auto hash = cfg.hash();
  const auto seed = cfg.seed_list().front();
  std::ostringstream buf;
  buf << "property,kernel,instances,violations,worst,tolerance,status,seed,config_hash\n";
  for (const auto& r : report.results) {
    buf << r.property << ",\"" << r.kernel << "\"," << r.instances << ',' << r.violations << ','
        << format_double(r.worst) << ',' << format_double(r.tolerance) << ','
        << pass_word(r.pass()) << ',' << seed << ',' << hash << '\n';
  }
  out << buf.str();
}

// ------------------------------------------------------------------- runner

bool run_and_write(const std::string& kind, const ExperimentConfig& cfg, std::ostream& log) {
  cfg.validate();
  const auto dir = std::filesystem::path(cfg.out_dir) / cfg.experiment;
  std::filesystem::create_directories(dir);
  std::ofstream csv(dir / (kind + ".csv"), std::ios::binary);
  std::ostringstream summary;
  summary << "experiment: " << cfg.experiment << "\nkind: " << kind
          << "\nconfig_hash: " << cfg.hash() << "\n";
  bool pass = false;
  if (kind == "chain-eval") {
    const auto report = run_chain_experiment(cfg);
    write_chain_csv(csv, report, cfg);
    if (report.fidelity_checked) {
      summary << "mean fidelity: worst |mean - expected return| = "
              << brief(report.fidelity_worst_error) << " (tolerance "
              << brief(cfg.fidelity_tolerance) << ") " << pass_word(report.fidelity_pass)
              << "\n";
    }
    if (report.directional_checked) {
      summary << "higher-moment MAE: gaussian-mmdrl " << brief(report.gaussian_mae)
              << " vs qrdrl " << brief(report.qrdrl_mae) << " "
              << pass_word(report.directional_pass) << "\n";
    }
    pass = report.pass();
  } else if (kind == "contraction" || kind == "counterexample") {
    const auto report =
        kind == "contraction" ? run_contraction_suite(cfg) : run_counterexample_suite(cfg);
    write_certificate_csv(csv, report, cfg);
    std::map<std::string, std::pair<int, int>> by_suite;
    for (const auto& r : report.rows) {
      auto& [total, failed] = by_suite[r.suite];
      ++total;
      failed += r.pass ? 0 : 1;
    }
    for (const auto& [suite, counts] : by_suite) {
      summary << suite << ": " << counts.first << " checks, " << counts.second << " failed\n";
    }
    pass = report.pass();
  } else if (kind == "herding") {
    const auto report = run_herding_experiment(cfg);
    write_herding_csv(csv, report, cfg);
    summary << "descent slope " << brief(report.descent.slope) << " (band ["
            << brief(cfg.descent_slope_min) << ", " << brief(cfg.descent_slope_max)
            << "]) " << pass_word(report.descent_pass) << "\n";
    summary << "greedy slope " << brief(report.greedy.slope) << " (max "
            << brief(cfg.greedy_slope_max) << ") " << pass_word(report.greedy_pass) << "\n";
    pass = report.pass();
  } else if (kind == "properties") {
    const auto report = run_property_suite(cfg);
    write_property_csv(csv, report, cfg);
    for (const auto& r : report.results) {
      summary << r.property << " [" << r.kernel << "]: " << r.violations << "/" << r.instances
              << " violations " << pass_word(r.pass()) << "\n";
    }
    pass = report.pass();
  } else {
    throw DomainError("unknown experiment kind '" + kind + "'");
  }
  summary << "overall: " << pass_word(pass) << "\n";
  std::ofstream(dir / (kind + "_summary.txt"), std::ios::binary) << summary.str();
  log << summary.str();
  return pass;
}

}  // namespace mmdrl::experiments
