#include "mmdrl/measures.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "mmdrl/errors.hpp"

namespace mmdrl {
namespace {

constexpr double kWeightTolerance = 1e-12;
constexpr double kRenormalizeTolerance = 1e-9;

double integer_power(double x, int n) {
  double result = 1.0;
  for (int i = 0; i < n; ++i) result *= x;
  return result;
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(std::vector<double> atoms, std::vector<double> weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
  if (atoms_.empty()) throw DomainError("a discrete measure needs at least one atom");
  if (atoms_.size() != weights_.size()) {
    throw DomainError("atom and weight lists differ in length");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (!std::isfinite(atoms_[i])) throw DomainError("atoms must be finite");
    if (!(weights_[i] >= 0.0) || !std::isfinite(weights_[i])) {
      throw DomainError("weights must be finite and nonnegative");
    }
    total += weights_[i];
  }
  const double drift = std::abs(total - 1.0);
  if (drift > kRenormalizeTolerance) {
    throw DomainError("weights sum to " + std::to_string(total) + ", expected 1");
  }
  if (drift > kWeightTolerance) {
    for (double& w : weights_) w /= total;
  }
}

DiscreteMeasure DiscreteMeasure::dirac(double z) { return DiscreteMeasure({z}, {1.0}); }

DiscreteMeasure DiscreteMeasure::uniform(std::span<const double> atoms) {
  if (atoms.empty()) throw DomainError("a discrete measure needs at least one atom");
  const double w = 1.0 / static_cast<double>(atoms.size());
  return DiscreteMeasure(std::vector<double>(atoms.begin(), atoms.end()),
                         std::vector<double>(atoms.size(), w));
}

double DiscreteMeasure::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) m += weights_[i] * atoms_[i];
  return m;
}

ParticleSet::ParticleSet(std::vector<double> particles) : particles_(std::move(particles)) {
  if (particles_.empty()) throw DomainError("a particle set needs at least one particle");
  for (double p : particles_) {
    if (!std::isfinite(p)) throw DomainError("particles must be finite");
  }
}

double ParticleSet::mean() const {
  return std::accumulate(particles_.begin(), particles_.end(), 0.0) /
         static_cast<double>(particles_.size());
}

DiscreteMeasure pushforward_affine(const DiscreteMeasure& m, double reward, double gamma) {
  std::vector<double> atoms(m.atoms().begin(), m.atoms().end());
  for (double& z : atoms) z = reward + gamma * z;
  return DiscreteMeasure(std::move(atoms), std::vector<double>(m.weights().begin(), m.weights().end()));
}

DiscreteMeasure mixture(std::span<const DiscreteMeasure> measures, std::span<const double> probs) {
  if (measures.empty()) throw DomainError("mixture of an empty list");
  if (measures.size() != probs.size()) throw DomainError("mixture weights do not match measures");
  std::size_t total = 0;
  for (const auto& m : measures) total += m.size();
  std::vector<double> atoms;
  std::vector<double> weights;
  atoms.reserve(total);
  weights.reserve(total);
  for (std::size_t k = 0; k < measures.size(); ++k) {
    if (!(probs[k] >= 0.0)) throw DomainError("mixture probabilities must be nonnegative");
    const auto a = measures[k].atoms();
    const auto w = measures[k].weights();
    for (std::size_t i = 0; i < a.size(); ++i) {
      atoms.push_back(a[i]);
      weights.push_back(probs[k] * w[i]);
    }
  }
  return DiscreteMeasure(std::move(atoms), std::move(weights));
}

double moment(const DiscreteMeasure& m, int order, bool central) {
  if (order < 1) throw DomainError("moment order must be positive");
  const double mean = m.mean();
  if (central && order == 1) return mean;
  const double shift = central ? mean : 0.0;
  double sum = 0.0;
  const auto a = m.atoms();
  const auto w = m.weights();
  for (std::size_t i = 0; i < a.size(); ++i) sum += w[i] * integer_power(a[i] - shift, order);
  return sum;
}

std::vector<double> sample_central_moments(std::span<const double> samples, int max_order) {
  if (samples.empty()) throw DomainError("central moments of an empty sample");
  if (max_order < 1) throw DomainError("moment order must be positive");
  const double n = static_cast<double>(samples.size());
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  std::vector<double> out(static_cast<std::size_t>(max_order), 0.0);
  out[0] = mean;
  for (double x : samples) {
    const double d = x - mean;
    double p = d;
    for (int k = 2; k <= max_order; ++k) {
      p *= d;
      out[static_cast<std::size_t>(k - 1)] += p;
    }
  }
  for (std::size_t k = 1; k < out.size(); ++k) out[k] /= n;
  return out;
}

DiscreteMeasure compact_preserving_mean(const DiscreteMeasure& m, std::size_t max_atoms) {
  if (max_atoms == 0) throw DomainError("compaction needs at least one atom");
  if (m.size() <= max_atoms) return m;
  std::vector<std::size_t> order(m.size());
  std::iota(order.begin(), order.end(), 0);
  const auto a = m.atoms();
  const auto w = m.weights();
  std::sort(order.begin(), order.end(), [&](auto i, auto j) { return a[i] < a[j]; });

  std::vector<double> atoms;
  std::vector<double> weights;
  atoms.reserve(max_atoms);
  weights.reserve(max_atoms);
  // Contiguous groups of (almost) equal size in sorted order.
  const std::size_t n = m.size();
  for (std::size_t g = 0; g < max_atoms; ++g) {
    const std::size_t begin = g * n / max_atoms;
    const std::size_t end = (g + 1) * n / max_atoms;
    double mass = 0.0;
    double first = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
      mass += w[order[k]];
      first += w[order[k]] * a[order[k]];
    }
    if (mass > 0.0) {
      atoms.push_back(first / mass);
      weights.push_back(mass);
    }
  }
  return DiscreteMeasure(std::move(atoms), std::move(weights));
}

void write_csv(std::ostream& out, const DiscreteMeasure& m) {
  std::ostringstream buf;
  buf.precision(17);
  buf << "atom,weight\n";
  for (std::size_t i = 0; i < m.size(); ++i) buf << m.atoms()[i] << ',' << m.weights()[i] << '\n';
  out << buf.str();
}

DiscreteMeasure read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("atom,weight", 0) != 0) {
    throw DomainError("measure CSV must start with the header 'atom,weight'");
  }
  std::vector<double> atoms;
  std::vector<double> weights;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw DomainError("malformed measure CSV row: " + line);
    try {
      atoms.push_back(std::stod(line.substr(0, comma)));
      weights.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::logic_error&) {
      throw DomainError("malformed measure CSV row: " + line);
    }
  }
  return DiscreteMeasure(std::move(atoms), std::move(weights));
}

}  // namespace mmdrl
