#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "phase_symbol.hpp"

namespace fockcalc {

enum class StarKind { wick, weyl };

/// Terms C_0..C_K of a star-product series. closed_form holds the full sum when it is known
/// exactly (polynomial inputs, or sums of pure plane waves).
struct StarExpansion {
  StarKind kind = StarKind::wick;
  double h = 1.0;
  std::vector<PhaseSymbol> terms;
  std::optional<PhaseSymbol> closed_form;

  int order() const { return static_cast<int>(terms.size()) - 1; }

  /// sum_{k <= M} h^k C_k, M defaulting to every stored term.
  PhaseSymbol partial_sum(int M = -1) const {
    if (terms.empty()) throw std::logic_error("StarExpansion: no terms");
    if (M < 0 || M > order()) M = order();
    PhaseSymbol s(terms.front().modes());
    for (int k = 0; k <= M; ++k) s += terms[static_cast<std::size_t>(k)] * std::pow(h, k);
    return s;
  }

  PhaseSymbol sum() const { return closed_form ? *closed_form : partial_sum(); }
  Complex eval(const PhasePoint& X) const { return sum().eval(X); }
};

namespace detail {
/// d_{q_j} + s i d_{p_j}.
inline PhaseSymbol holo_derivative(const PhaseSymbol& F, std::size_t j, double s) {
  return F.partial(j) + F.partial(F.modes() + j) * Complex(0.0, s);
}

inline PhaseSymbol apply_multi(PhaseSymbol F, const MultiIndex& alpha, double s) {
  for (std::size_t j = 0; j < alpha.modes(); ++j)
    for (int t = 0; t < alpha[j] && !F.is_zero(); ++t) F = holo_derivative(F, j, s);
  return F;
}

/// True when every term is a constant times a plane wave.
inline bool pure_plane_waves(const PhaseSymbol& F) {
  for (const auto& [a, P] : F.terms())
    if (P.degree() > 0) return false;
  return true;
}

inline Complex constant_of(const Polynomial& P) { return P.coefficient(MultiIndex(P.nvars())); }

inline Frequency add(const Frequency& a, const Frequency& b) {
  Frequency c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}
}  // namespace detail

/// 2^{-k} sum_{|alpha|=k} (1/alpha!) (d_q - i d_p)^alpha F (d_q + i d_p)^alpha G.
inline PhaseSymbol c_k_wick(const PhaseSymbol& F, const PhaseSymbol& G, int k) {
  F.require_same(G);
  if (k < 0) throw std::domain_error("c_k_wick: k must be >= 0");
  PhaseSymbol r(F.modes());
  for_each_of_degree(F.modes(), k, [&](const MultiIndex& alpha) {
    const PhaseSymbol dF = detail::apply_multi(F, alpha, -1.0);
    if (dF.is_zero()) return;
    const PhaseSymbol dG = detail::apply_multi(G, alpha, 1.0);
    if (dG.is_zero()) return;
    r += (dF * dG) * (1.0 / factorial_multi(alpha).convert_to<double>());
  });
  return r * std::pow(0.5, k);
}

/// (1/((2i)^k k!)) sigma(grad_1, grad_2)^k (F (x) G) on the diagonal.
inline PhaseSymbol c_k_weyl(const PhaseSymbol& F, const PhaseSymbol& G, int k) {
  if (k < 0) throw std::domain_error("c_k_weyl: k must be >= 0");
  const Complex denom = std::pow(Complex(0.0, 2.0), k) * std::tgamma(k + 1.0);
  return symplectic_bidiff_power(F, G, k) * (1.0 / denom);
}

namespace detail {
/// Closed-form series sum for plane-wave inputs.
inline PhaseSymbol plane_wave_star(const PhaseSymbol& F, const PhaseSymbol& G, double h, StarKind kind) {
  const std::size_t n = F.modes();
  PhaseSymbol r(n);
  for (const auto& [a, P] : F.terms())
    for (const auto& [b, Q] : G.terms()) {
      Complex e;
      if (kind == StarKind::weyl) {
        e = Complex(0.0, 0.5 * h * sigma(a, b));
      } else {
        Complex T{};
        for (std::size_t j = 0; j < n; ++j) T -= Complex(a[j], -a[n + j]) * Complex(b[j], b[n + j]);
        e = 0.5 * h * T;
      }
      r.add_term(add(a, b), Polynomial::constant(2 * n, constant_of(P) * constant_of(Q) * std::exp(e)));
    }
  return r;
}

template <class Term>
StarExpansion expand(const PhaseSymbol& F, const PhaseSymbol& G, double h, int max_order, StarKind kind,
                     Term&& term) {
  F.require_same(G);
  if (!(h > 0.0)) throw std::domain_error("star expansion: h must be positive");
  StarExpansion E;
  E.kind = kind;
  E.h = h;
  const bool poly = F.is_polynomial() && G.is_polynomial();
  int K = max_order;
  if (poly) {
    const int cap = std::max(0, std::min(F.degree(), G.degree()));
    K = K < 0 ? cap : std::min(K, cap);
  } else if (K < 0) {
    throw std::invalid_argument("star expansion: non-polynomial input needs an explicit order");
  }
  for (int k = 0; k <= K; ++k) E.terms.push_back(term(F, G, k));
  if (poly) {
    const int cap = std::max(0, std::min(F.degree(), G.degree()));
    if (!term(F, G, cap + 1).pruned(0.0).is_zero())
      throw std::logic_error("star expansion: series failed to terminate on polynomial input");
    if (K == cap) E.closed_form = E.partial_sum();
  } else if (pure_plane_waves(F) && pure_plane_waves(G)) {
    E.closed_form = plane_wave_star(F, G, h, kind);
  }
  return E;
}
}  // namespace detail

/// Wick-symbol composition series sum_k h^k C_k^wick(F, G).
inline StarExpansion mizrahi_compose(const PhaseSymbol& F, const PhaseSymbol& G, double h, int max_order = -1) {
  return detail::expand(F, G, h, max_order, StarKind::wick,
                        [](const PhaseSymbol& a, const PhaseSymbol& b, int k) { return c_k_wick(a, b, k); });
}

/// Weyl star product sum_k h^k C_k^weyl(F, G).
inline StarExpansion weyl_compose(const PhaseSymbol& F, const PhaseSymbol& G, double h, int max_order = -1) {
  return detail::expand(F, G, h, max_order, StarKind::weyl,
                        [](const PhaseSymbol& a, const PhaseSymbol& b, int k) { return c_k_weyl(a, b, k); });
}

/// normF normG (Tr A_Q)^k / (2^k k!).
inline double c_k_weyl_bound(int k, const QuadraticForm& Q, double normF, double normG) {
  if (k < 0) throw std::domain_error("c_k_weyl_bound: k must be >= 0");
  return normF * normG * std::pow(Q.trace() / 2.0, k) / std::tgamma(k + 1.0);
}

/// sum_k h^k c_k_weyl_bound(k) = normF normG e^{h Tr A_Q / 2}.
inline double c_k_weyl_bound_sum(double h, const QuadraticForm& Q, double normF, double normG) {
  return normF * normG * std::exp(h * Q.trace() / 2.0);
}

/// normF normG (Tr A_Q)^{M+1} / (M+1)! e^{h Tr A_Q / 2}.
inline double remainder_bound(int M, double h, const QuadraticForm& Q, double normF, double normG) {
  return normF * normG * std::pow(Q.trace(), M + 1) / std::tgamma(M + 2.0) * std::exp(h * Q.trace() / 2.0);
}

/// Deterministic Halton grid in the box |X|_inf <= box, rotated by a seed-derived shift.
inline std::vector<PhasePoint> phase_grid(std::size_t modes, std::size_t count = 512, double box = 2.0,
                                          std::uint64_t seed = 42) {
  static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
  const std::size_t dim = 2 * modes;
  if (dim > std::size(primes)) throw std::invalid_argument("phase_grid: too many modes");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> shift(dim);
  for (auto& s : shift) s = u(rng);
  std::vector<PhasePoint> out;
  out.reserve(count);
  for (std::size_t i = 1; i <= count; ++i) {
    std::vector<double> x(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      double f = 1.0, r = 0.0;
      for (std::size_t k = i; k > 0; k /= static_cast<std::size_t>(primes[d])) {
        f /= primes[d];
        r += f * static_cast<double>(k % static_cast<std::size_t>(primes[d]));
      }
      r += shift[d];
      r -= std::floor(r);
      x[d] = box * (2.0 * r - 1.0);
    }
    out.push_back(PhasePoint::from_stacked(x));
  }
  return out;
}

inline double sup_on_grid(const PhaseSymbol& F, const std::vector<PhasePoint>& grid) {
  double m = 0.0;
  for (const auto& X : grid) m = std::max(m, std::abs(F.eval(X)));
  return m;
}

struct RemainderResult {
  double measured = 0.0;  // max over grid of |K - sum_{k<=M} h^k C_k| / h^{M+1}
  double bound = 0.0;
  bool within = false;
};

/// Scaled Weyl remainder on a grid against its trace bound.
inline RemainderResult remainder_check(const PhaseSymbol& F, const PhaseSymbol& G, double h, int M,
                                       const QuadraticForm& Q, double normF, double normG,
                                       const std::vector<PhasePoint>& grid) {
  if (M < 0) throw std::domain_error("remainder_check: M must be >= 0");
  const StarExpansion E = weyl_compose(F, G, h, M);
  if (!E.closed_form) throw std::invalid_argument("remainder_check: no exact sum available for these symbols");
  const PhaseSymbol K = *E.closed_form;
  const PhaseSymbol S = E.partial_sum(M);
  RemainderResult r;
  r.bound = remainder_bound(M, h, Q, normF, normG);
  const double scale = std::pow(h, M + 1);
  for (const auto& X : grid) r.measured = std::max(r.measured, std::abs(K.eval(X) - S.eval(X)) / scale);
  r.within = r.measured <= r.bound;
  return r;
}

/// Residual between sum h^k C_k^wick(H_{h/2}F, H_{h/2}G) and H_{h/2}(sum h^k C_k^weyl(F, G)).
inline double lemma_bridge_check(const PhaseSymbol& F, const PhaseSymbol& G, double h) {
  if (!F.is_polynomial() || !G.is_polynomial())
    throw std::invalid_argument("lemma_bridge_check: polynomial symbols required");
  const PhaseSymbol lhs = mizrahi_compose(heat_apply(F, h / 2.0), heat_apply(G, h / 2.0), h).sum();
  const PhaseSymbol rhs = heat_apply(weyl_compose(F, G, h).sum(), h / 2.0);
  return max_coefficient_diff(lhs, rhs);
}

}  // namespace fockcalc
