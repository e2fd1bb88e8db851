#include "mmdrl/kernels.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "mmdrl/errors.hpp"

namespace mmdrl {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_inputs(double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y)) {
    throw DomainError("kernel evaluated at a non-finite point");
  }
}

void check_bandwidth(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("Gaussian bandwidth must be positive");
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("unrectified order must lie in (0, 2]");
}

double gaussian_value(double h, double d) { return std::exp(-d * d / h); }

double gaussian_grad(double h, double d) { return -2.0 * d / h * std::exp(-d * d / h); }

double unrectified_value(double alpha, double d) {
  const double a = std::abs(d);
  if (alpha == 1.0) return -a;
  if (alpha == 2.0) return -d * d;
  return -std::pow(a, alpha);
}

double unrectified_grad(double alpha, double d) {
  if (d == 0.0) return 0.0;
  const double sign = d > 0.0 ? 1.0 : -1.0;
  if (alpha == 1.0) return -sign;
  if (alpha == 2.0) return -2.0 * d;
  return -alpha * std::pow(std::abs(d), alpha - 1.0) * sign;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<double> parse_list(std::string_view text, std::string_view spec) {
  std::vector<double> values;
  while (true) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
      throw DomainError("cannot parse number '" + std::string(item) + "' in kernel spec '" +
                        std::string(spec) + "'");
    }
    values.push_back(v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return values;
}

std::string join(const std::vector<double>& values) {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ',';
    out << values[i];
  }
  return out.str();
}

}  // namespace

Kernel Kernel::gaussian(double bandwidth) {
  check_bandwidth(bandwidth);
  return Kernel(GaussianKernel{bandwidth});
}

Kernel Kernel::gaussian_mixture(std::vector<double> bandwidths) {
  if (bandwidths.empty()) throw DomainError("Gaussian mixture needs at least one bandwidth");
  for (double h : bandwidths) check_bandwidth(h);
  return Kernel(GaussianMixtureKernel{std::move(bandwidths)});
}

Kernel Kernel::unrectified(double alpha) {
  check_alpha(alpha);
  return Kernel(UnrectifiedKernel{alpha});
}

Kernel Kernel::unrectified_mixture(std::vector<double> alphas, std::vector<double> coefficients) {
  if (alphas.empty() || alphas.size() != coefficients.size()) {
    throw DomainError("unrectified mixture needs matching, nonempty order and coefficient lists");
  }
  for (double a : alphas) check_alpha(a);
  for (double c : coefficients) {
    if (!(c >= 0.0) || !std::isfinite(c)) {
      throw DomainError("unrectified mixture coefficients must be nonnegative");
    }
  }
  return Kernel(UnrectifiedMixtureKernel{std::move(alphas), std::move(coefficients)});
}

Kernel Kernel::exp_prod(double sigma_sq) {
  if (!(sigma_sq > 0.0) || !std::isfinite(sigma_sq)) {
    throw DomainError("exp-prod scale must be positive");
  }
  return Kernel(ExpProdKernel{sigma_sq});
}

Kernel Kernel::atari_mixture() {
  return gaussian_mixture({1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
}

Kernel Kernel::tabular_default() { return gaussian_mixture({8, 10, 12}); }

Kernel Kernel::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  const auto name = trim(spec.substr(0, colon));
  std::vector<std::pair<std::string, std::vector<double>>> params;
  if (colon != std::string_view::npos) {
    auto rest = spec.substr(colon + 1);
    while (!rest.empty()) {
      const auto semi = rest.find(';');
      const auto item = rest.substr(0, semi);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw DomainError("expected key=value in kernel spec '" + std::string(spec) + "'");
      }
      params.emplace_back(std::string(trim(item.substr(0, eq))),
                          parse_list(item.substr(eq + 1), spec));
      if (semi == std::string_view::npos) break;
      rest.remove_prefix(semi + 1);
    }
  }
  auto get = [&](std::string_view key) -> const std::vector<double>& {
    for (const auto& [k, v] : params) {
      if (k == key) return v;
    }
    throw DomainError("kernel spec '" + std::string(spec) + "' is missing '" + std::string(key) +
                      "'");
  };
  auto scalar = [&](std::string_view key) {
    const auto& v = get(key);
    if (v.size() != 1) throw DomainError("'" + std::string(key) + "' takes a single value");
    return v.front();
  };

  if (name == "gaussian") return gaussian(scalar("h"));
  if (name == "gaussian_mix") return gaussian_mixture(get("h"));
  if (name == "unrectified") return unrectified(scalar("alpha"));
  if (name == "unrectified_mix") {
    const auto& alphas = get("alpha");
    bool has_c = false;
    for (const auto& p : params) has_c = has_c || p.first == "c";
    return unrectified_mixture(alphas, has_c ? get("c") : std::vector<double>(alphas.size(), 1.0));
  }
  if (name == "expprod") return exp_prod(scalar("sigma2"));
  throw DomainError("unknown kernel family '" + std::string(name) + "'");
}

double Kernel::operator()(double x, double y) const {
  check_inputs(x, y);
  const double d = x - y;
  return std::visit(
      Overloaded{
          [&](const GaussianKernel& k) { return gaussian_value(k.bandwidth, d); },
          [&](const GaussianMixtureKernel& k) {
            double sum = 0.0;
            for (double h : k.bandwidths) sum += gaussian_value(h, d);
            return sum;
          },
          [&](const UnrectifiedKernel& k) { return unrectified_value(k.alpha, d); },
          [&](const UnrectifiedMixtureKernel& k) {
            double sum = 0.0;
            for (std::size_t i = 0; i < k.alphas.size(); ++i) {
              sum += k.coefficients[i] * unrectified_value(k.alphas[i], d);
            }
            return sum;
          },
          [&](const ExpProdKernel& k) { return std::exp(x * y / k.sigma_sq); },
      },
      variant_);
}

double Kernel::grad_x(double x, double y) const {
  check_inputs(x, y);
  const double d = x - y;
  return std::visit(
      Overloaded{
          [&](const GaussianKernel& k) { return gaussian_grad(k.bandwidth, d); },
          [&](const GaussianMixtureKernel& k) {
            double sum = 0.0;
            for (double h : k.bandwidths) sum += gaussian_grad(h, d);
            return sum;
          },
          [&](const UnrectifiedKernel& k) { return unrectified_grad(k.alpha, d); },
          [&](const UnrectifiedMixtureKernel& k) {
            double sum = 0.0;
            for (std::size_t i = 0; i < k.alphas.size(); ++i) {
              sum += k.coefficients[i] * unrectified_grad(k.alphas[i], d);
            }
            return sum;
          },
          [&](const ExpProdKernel& k) { return y / k.sigma_sq * std::exp(x * y / k.sigma_sq); },
      },
      variant_);
}

std::string Kernel::to_string() const {
  return std::visit(
      Overloaded{
          [](const GaussianKernel& k) { return "gaussian:h=" + join({k.bandwidth}); },
          [](const GaussianMixtureKernel& k) { return "gaussian_mix:h=" + join(k.bandwidths); },
          [](const UnrectifiedKernel& k) { return "unrectified:alpha=" + join({k.alpha}); },
          [](const UnrectifiedMixtureKernel& k) {
            return "unrectified_mix:alpha=" + join(k.alphas) + ";c=" + join(k.coefficients);
          },
          [](const ExpProdKernel& k) { return "expprod:sigma2=" + join({k.sigma_sq}); },
      },
      variant_);
}

double Kernel::min_scale_order() const {
  if (const auto* k = std::get_if<UnrectifiedKernel>(&variant_)) return k->alpha;
  if (const auto* k = std::get_if<UnrectifiedMixtureKernel>(&variant_)) {
    // Components with a zero coefficient do not contribute.
    double order = 0.0;
    for (std::size_t i = 0; i < k->alphas.size(); ++i) {
      if (k->coefficients[i] > 0.0 && (order == 0.0 || k->alphas[i] < order)) order = k->alphas[i];
    }
    return order;
  }
  return 0.0;
}

bool Kernel::shift_invariant() const { return !std::holds_alternative<ExpProdKernel>(variant_); }

}  // namespace mmdrl
