#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

namespace fockcalc {

/// Nodes and weights integrating against the standard normal N(0, 1); weights sum to 1.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Golub-Welsch start, then Newton on the orthonormal recurrence; weights are Christoffel numbers.
inline GaussHermiteRule make_gauss_hermite(int order) {
  if (order < 1) throw std::invalid_argument("gauss_hermite: order must be >= 1");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) J(k, k - 1) = J(k - 1, k) = std::sqrt(static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J, Eigen::EigenvaluesOnly);
  GaussHermiteRule r;
  r.nodes.resize(order);
  r.weights.resize(order);
  // h_{k+1} = (x h_k - sqrt(k) h_{k-1}) / sqrt(k+1) and h_n' = sqrt(n) h_{n-1}.
  auto step = [order](double x, double& sum) {
    double h0 = 0.0, h1 = 1.0;
    sum = 0.0;
    for (int k = 0; k < order; ++k) {
      sum += h1 * h1;
      const double h2 = (x * h1 - std::sqrt(static_cast<double>(k)) * h0) / std::sqrt(k + 1.0);
      h0 = h1;
      h1 = h2;
    }
    return h1 / (std::sqrt(static_cast<double>(order)) * h0);  // h_n / h_n'
  };
  auto refine = [&](double x) {
    double sum = 0.0;
    for (int it = 0; it < 3; ++it) x -= step(x, sum);
    step(x, sum);
    return std::pair{x, 1.0 / sum};
  };
  for (int i = 0; i < order; ++i) std::tie(r.nodes[i], r.weights[i]) = refine(es.eigenvalues()(i));
  // symmetrise
  for (int i = 0; i < order / 2; ++i) {
    const int j = order - 1 - i;
    const double x = 0.5 * (r.nodes[j] - r.nodes[i]);
    const double w = 0.5 * (r.weights[i] + r.weights[j]);
    r.nodes[i] = -x;
    r.nodes[j] = x;
    r.weights[i] = r.weights[j] = w;
  }
  if (order % 2) r.nodes[order / 2] = 0.0;
  return r;
}

/// Shared read-only rule per order.
inline std::shared_ptr<const GaussHermiteRule> gauss_hermite(int order) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const GaussHermiteRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[order];
  if (!slot) slot = std::make_shared<const GaussHermiteRule>(make_gauss_hermite(order));
  return slot;
}

/// Upper bound on tensor-product nodes before a quadrature is declared infeasible.
inline constexpr double kMaxTensorNodes = 5e7;

/// Tensor-product rule for E[f(x)], x ~ N(0, variance I_dim). f receives the node vector.
template <class T, class F>
T tensor_gauss_expectation(std::size_t dim, int order, double variance, F&& f) {
  if (!(variance > 0.0)) throw std::domain_error("tensor_gauss_expectation: variance must be positive");
  if (std::pow(static_cast<double>(order), static_cast<double>(dim)) > kMaxTensorNodes)
    throw std::domain_error("tensor_gauss_expectation: quadrature infeasible (order^dim exceeds node cap)");
  const auto rule = gauss_hermite(order);
  const double s = std::sqrt(variance);
  std::vector<std::size_t> idx(dim, 0);
  std::vector<double> x(dim);
  T acc{};
  while (true) {
    double w = 1.0;
    for (std::size_t d = 0; d < dim; ++d) {
      x[d] = s * rule->nodes[idx[d]];
      w *= rule->weights[idx[d]];
    }
    acc += w * f(x);
    std::size_t d = 0;
    while (d < dim && ++idx[d] == static_cast<std::size_t>(order)) idx[d++] = 0;
    if (d == dim) break;
  }
  return acc;
}

}  // namespace fockcalc
