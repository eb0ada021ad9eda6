#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "fock_vector.hpp"
#include "phase_symbol.hpp"
#include "quantization.hpp"

namespace fockcalc {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Generator for one test case, independent of execution order.
inline std::mt19937_64 case_rng(std::uint64_t seed, std::string_view suite, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(seed ^ fnv1a(suite)) + index));
}

template <class Rng>
Complex random_complex(Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  const double re = g(rng);
  return {re, g(rng)};
}

template <class Rng>
int random_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// Degree uniform in [0, max_degree], quanta spread uniformly over the modes.
template <class Rng>
MultiIndex random_index(Rng& rng, std::size_t modes, int max_degree) {
  const int d = random_int(rng, 0, max_degree);
  std::vector<int> e(modes, 0);
  for (int t = 0; t < d; ++t) ++e[static_cast<std::size_t>(random_int(rng, 0, static_cast<int>(modes) - 1))];
  return MultiIndex(std::move(e));
}

/// Sparse vector with up to `terms` nonzero coefficients of degree <= max_degree.
template <class Rng>
FockVector random_fock_vector(Rng& rng, const TruncationSpec& spec, int max_degree, int terms) {
  FockVector f(spec);
  const int k = random_int(rng, 1, terms);
  for (int t = 0; t < k; ++t) f.add(random_index(rng, spec.modes, max_degree), random_complex(rng));
  if (f.empty()) f.add(MultiIndex(spec.modes), 1.0);
  return f;
}

template <class Rng>
PhasePoint random_point_in_ball(Rng& rng, std::size_t modes, double radius) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(2 * modes);
  double n2 = 0.0;
  for (auto& v : x) {
    v = g(rng);
    n2 += v * v;
  }
  const double r = radius * std::pow(u(rng), 1.0 / static_cast<double>(x.size())) / std::sqrt(n2);
  for (auto& v : x) v *= r;
  return PhasePoint::from_stacked(x);
}

/// Random polynomial symbol with up to `terms` monomials of degree <= max_degree.
template <class Rng>
PhaseSymbol random_polynomial_symbol(Rng& rng, std::size_t modes, int max_degree, int terms, bool real = false) {
  Polynomial P(2 * modes);
  const int k = random_int(rng, 1, terms);
  for (int t = 0; t < k; ++t) {
    Complex c = random_complex(rng);
    if (real) c = c.real();
    P.add_term(random_index(rng, 2 * modes, max_degree), c);
  }
  return PhaseSymbol::from_polynomial(modes, P);
}

/// Normal-ordered operator with up to `terms` monomials of total degree |alpha| + |beta| <= max_degree.
template <class Rng>
LadderPolynomial random_ladder(Rng& rng, std::size_t modes, int max_degree, int terms) {
  LadderPolynomial L(modes);
  const int k = random_int(rng, 1, terms);
  for (int t = 0; t < k; ++t) {
    const MultiIndex e = random_index(rng, 2 * modes, max_degree);
    std::vector<int> a(e.entries().begin(), e.entries().begin() + static_cast<long>(modes));
    std::vector<int> b(e.entries().begin() + static_cast<long>(modes), e.entries().end());
    L.add_term(MultiIndex(std::move(a)), MultiIndex(std::move(b)), random_complex(rng));
  }
  return L;
}

/// Random orthogonal matrix (QR of a Gaussian matrix, signs fixed by R's diagonal).
template <class Rng>
Eigen::MatrixXd random_orthogonal(Rng& rng, std::size_t d) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd M(d, d);
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j) M(i, j) = g(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(M);
  Eigen::MatrixXd Q = qr.householderQ();
  const Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < Q.cols(); ++j)
    if (R(j, j) < 0) Q.col(j) *= -1.0;
  return Q;
}

}  // namespace fockcalc
