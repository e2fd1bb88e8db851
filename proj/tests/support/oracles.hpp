#pragma once

// Reference computations written independently of the library: plain kernel
// formulas, quadruple-loop MMD, finite differences, a dense linear solve for
// chain values.

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

namespace oracle {

using KernelFn = std::function<double(double, double)>;

inline KernelFn gaussian(double h) {
  return [h](double x, double y) { return std::exp(-(x - y) * (x - y) / h); };
}

inline KernelFn unrectified(double alpha) {
  return [alpha](double x, double y) { return -std::pow(std::abs(x - y), alpha); };
}

inline KernelFn exp_prod(double s2) {
  return [s2](double x, double y) { return std::exp(x * y / s2); };
}

struct Weighted {
  std::vector<double> atoms;
  std::vector<double> weights;
};

inline double expectation(const Weighted& p, const Weighted& q, const KernelFn& k) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.atoms.size(); ++i) {
    for (std::size_t j = 0; j < q.atoms.size(); ++j) s += p.weights[i] * q.weights[j] * k(p.atoms[i], q.atoms[j]);
  }
  return s;
}

inline double mmd_squared(const Weighted& p, const Weighted& q, const KernelFn& k) {
  return expectation(p, p, k) + expectation(q, q, k) - 2.0 * expectation(p, q, k);
}

inline Weighted uniform(const std::vector<double>& atoms) {
  return {atoms, std::vector<double>(atoms.size(), 1.0 / static_cast<double>(atoms.size()))};
}

// Central difference of f at x along coordinate i.
inline std::vector<double> numeric_gradient(const std::function<double(const std::vector<double>&)>& f,
                                            const std::vector<double>& x, double step = 1e-6) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto up = x;
    auto down = x;
    up[i] += step;
    down[i] -= step;
    g[i] = (f(up) - f(down)) / (2.0 * step);
  }
  return g;
}

// Solves A x = b by Gaussian elimination with partial pivoting.
inline std::vector<double> solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[pivot][c])) pivot = r;
    }
    std::swap(a[c], a[pivot]);
    std::swap(b[c], b[pivot]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

// Always-forward values on the chain: states 0..K-2 live, K-1 terminal.
// Forward moves right w.p. 0.9 and back to 0 w.p. 0.1; landing on 0 pays -1,
// landing on the terminal state pays +1.
inline std::vector<double> chain_forward_values(int length, double gamma = 0.9) {
  const auto n = static_cast<std::size_t>(length - 1);
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  std::vector<double> b(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    a[s][s] += 1.0;
    // back to 0
    a[s][0] -= 0.1 * gamma;
    b[s] += 0.1 * -1.0;
    // right
    if (s + 1 == n) {
      b[s] += 0.9 * 1.0;
    } else {
      a[s][s + 1] -= 0.9 * gamma;
    }
  }
  return solve(a, b);
}

}  // namespace oracle
