#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bargmann.hpp"
#include "displacement.hpp"
#include "operator_matrix.hpp"
#include "phase_symbol.hpp"

namespace fockcalc {

/// sum c_{alpha beta} a*^alpha a^beta, normal ordered.
class LadderPolynomial {
 public:
  using Key = std::pair<MultiIndex, MultiIndex>;

  explicit LadderPolynomial(std::size_t modes = 1) : modes_(modes) {}

  static LadderPolynomial identity(std::size_t modes) {
    LadderPolynomial L(modes);
    L.add_term(MultiIndex(modes), MultiIndex(modes), 1.0);
    return L;
  }
  static LadderPolynomial term(const MultiIndex& alpha, const MultiIndex& beta, Complex c = 1.0) {
    LadderPolynomial L(alpha.modes());
    L.add_term(alpha, beta, c);
    return L;
  }

  std::size_t modes() const noexcept { return modes_; }
  const std::map<Key, Complex>& terms() const noexcept { return terms_; }

  void add_term(const MultiIndex& alpha, const MultiIndex& beta, Complex c) {
    if (alpha.modes() != modes_ || beta.modes() != modes_)
      throw std::invalid_argument("LadderPolynomial: index has wrong mode count");
    if (c == Complex{}) return;
    auto [it, inserted] = terms_.try_emplace(Key{alpha, beta}, c);
    if (!inserted) {
      it->second += c;
      if (it->second == Complex{}) terms_.erase(it);
    }
  }

  Complex coefficient(const MultiIndex& alpha, const MultiIndex& beta) const {
    auto it = terms_.find(Key{alpha, beta});
    return it == terms_.end() ? Complex{} : it->second;
  }

  /// max (|alpha| + |beta|), -1 when empty.
  int degree() const {
    int d = -1;
    for (const auto& [k, c] : terms_) d = std::max(d, k.first.degree() + k.second.degree());
    return d;
  }

  LadderPolynomial& operator+=(const LadderPolynomial& o) {
    if (o.modes_ != modes_) throw std::invalid_argument("LadderPolynomial mode count mismatch");
    for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, c);
    return *this;
  }
  LadderPolynomial& operator*=(Complex s) {
    for (auto& [k, c] : terms_) c *= s;
    return *this;
  }

 private:
  std::size_t modes_;
  std::map<Key, Complex> terms_;
};

/// max |c - d| over the union of terms.
inline double max_coefficient_diff(const LadderPolynomial& a, const LadderPolynomial& b) {
  double m = 0.0;
  for (const auto& [k, c] : a.terms()) m = std::max(m, std::abs(c - b.coefficient(k.first, k.second)));
  for (const auto& [k, c] : b.terms())
    if (a.coefficient(k.first, k.second) == Complex{}) m = std::max(m, std::abs(c));
  return m;
}

namespace detail {
/// prod_j gamma_j! / (gamma_j - beta_j)!, beta <= gamma.
inline BigInt falling(const MultiIndex& gamma, const MultiIndex& beta) {
  BigInt r = 1;
  for (std::size_t j = 0; j < gamma.modes(); ++j)
    for (int t = gamma[j]; t > gamma[j] - beta[j]; --t) r *= t;
  return r;
}

inline Complex ipow(Complex z, int k) {
  Complex r = 1.0;
  for (int i = 0; i < k; ++i) r *= z;
  return r;
}
}  // namespace detail

/// Realises each a*^alpha a^beta on the basis vectors; components leaving the truncation drop.
inline OperatorMatrix ladder_to_matrix(const LadderPolynomial& L, const TruncationSpec& spec) {
  if (L.modes() != spec.modes) throw std::invalid_argument("ladder_to_matrix: mode count mismatch");
  OperatorMatrix A(spec);
  const Basis& basis = A.basis();
  for (std::size_t col = 0; col < basis.size(); ++col) {
    const MultiIndex& g = basis[col];
    for (const auto& [key, c] : L.terms()) {
      const auto& [alpha, beta] = key;
      if (!beta.divides(g)) continue;
      const MultiIndex d = g - beta;
      const MultiIndex out = d + alpha;
      if (out.degree() > spec.max_degree) continue;
      const BigInt w = detail::falling(g, beta) * detail::falling(out, alpha);
      A(basis.position(out), col) += c * std::sqrt(w.convert_to<double>());
    }
  }
  return A;
}

struct WickValue {
  Complex value;
  double tail_mass = 0.0;  // coherent-state mass outside the truncation
};

/// <A Psi_X, Psi_X> with the truncated coherent state.
inline WickValue wick_symbol_eval(const OperatorMatrix& A, double h, const PhasePoint& X) {
  if (!(h > 0.0)) throw std::domain_error("wick_symbol_eval: h must be positive");
  const auto psi = coherent_state(X, h, A.spec());
  const Eigen::VectorXcd v = to_dense(psi.vector);
  return {v.dot(A.matrix() * v), psi.dropped_mass};
}

namespace detail {
/// Rows give old variables (q_1..q_n, p_1..p_n) in terms of (zbar_1..zbar_n, z_1..z_n).
inline std::vector<std::vector<Complex>> qp_from_z(std::size_t n, double h) {
  const double s = std::sqrt(h / 2.0);
  std::vector<std::vector<Complex>> L(2 * n, std::vector<Complex>(2 * n));
  for (std::size_t j = 0; j < n; ++j) {
    L[j][j] = s;
    L[j][n + j] = s;
    L[n + j][j] = Complex(0.0, s);
    L[n + j][n + j] = Complex(0.0, -s);
  }
  return L;
}

/// Rows give (zbar, z) in terms of (q, p); z = (q + ip)/sqrt(2h).
inline std::vector<std::vector<Complex>> z_from_qp(std::size_t n, double h) {
  const double s = 1.0 / std::sqrt(2.0 * h);
  std::vector<std::vector<Complex>> L(2 * n, std::vector<Complex>(2 * n));
  for (std::size_t j = 0; j < n; ++j) {
    L[j][j] = s;
    L[j][n + j] = Complex(0.0, -s);
    L[n + j][j] = s;
    L[n + j][n + j] = Complex(0.0, s);
  }
  return L;
}

inline MultiIndex slice(const MultiIndex& e, std::size_t from, std::size_t n) {
  std::vector<int> v(n);
  for (std::size_t j = 0; j < n; ++j) v[j] = e[from + j];
  return MultiIndex(std::move(v));
}

inline MultiIndex join(const MultiIndex& a, const MultiIndex& b) {
  std::vector<int> v = a.entries();
  v.insert(v.end(), b.entries().begin(), b.entries().end());
  return MultiIndex(std::move(v));
}
}  // namespace detail

/// Wick symbol of a normal-ordered operator: a*^alpha a^beta -> zbar^alpha z^beta.
inline PhaseSymbol normal_symbol(const LadderPolynomial& L, double h) {
  if (!(h > 0.0)) throw std::domain_error("normal_symbol: h must be positive");
  const std::size_t n = L.modes();
  Polynomial Z(2 * n);
  for (const auto& [key, c] : L.terms()) Z.add_term(detail::join(key.first, key.second), c);
  return PhaseSymbol::from_polynomial(n, Z.substitute_linear(detail::z_from_qp(n, h), 2 * n));
}

/// Inverse of normal_symbol on polynomial symbols.
inline LadderPolynomial to_ladder_polynomial(const PhaseSymbol& F, double h) {
  if (!(h > 0.0)) throw std::domain_error("to_ladder_polynomial: h must be positive");
  if (!F.is_polynomial()) throw std::invalid_argument("to_ladder_polynomial: plane-wave terms present");
  const std::size_t n = F.modes();
  const Polynomial Z = F.polynomial().substitute_linear(detail::qp_from_z(n, h), 2 * n);
  LadderPolynomial L(n);
  for (const auto& [e, c] : Z.terms()) L.add_term(detail::slice(e, 0, n), detail::slice(e, n, n), c);
  return L;
}

inline OperatorMatrix wick_to_operator(const PhaseSymbol& F, double h, const TruncationSpec& spec) {
  if (F.modes() != spec.modes) throw std::invalid_argument("wick_to_operator: mode count mismatch");
  return ladder_to_matrix(to_ladder_polynomial(F, h), spec);
}

/// Normal-ordered coefficients of a matrix, for all |alpha|, |beta| <= N:
/// c_{ab} = sum_{g <= min(a,b)} (-1)^|g| / g! * A_{a-g, b-g} / sqrt((a-g)! (b-g)!).
inline LadderPolynomial normal_order_coefficients(const OperatorMatrix& A) {
  const Basis& basis = A.basis();
  const std::size_t n = A.spec().modes;
  std::vector<double> isf(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) isf[i] = 1.0 / sqrt_factorial_multi(basis[i]);
  std::vector<std::pair<MultiIndex, double>> gammas;
  for (const auto& g : basis) gammas.emplace_back(g, (g.degree() % 2 ? -1.0 : 1.0) / factorial_multi(g).convert_to<double>());
  LadderPolynomial L(n);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const MultiIndex& a = basis[i];
      const MultiIndex& b = basis[j];
      const int cap = std::min(a.degree(), b.degree());
      Complex c{};
      for (const auto& [g, w] : gammas) {
        if (g.degree() > cap) break;
        if (!g.divides(a) || !g.divides(b)) continue;
        const std::size_t r = basis.position(a - g), s = basis.position(b - g);
        c += w * A(r, s) * isf[r] * isf[s];
      }
      L.add_term(a, b, c);
    }
  }
  return L;
}

namespace detail {
/// E[w^m wbar^k e^{lam w + lam' wbar}] for w = y - i eta, y, eta ~ N(0, h) independent.
inline std::vector<std::vector<Complex>> moment_table(Complex lam, Complex lamp, double h, int mmax, int kmax) {
  const double c = 2.0 * h;
  const Complex pre = std::exp(c * lam * lamp);
  std::vector<double> fact(std::max(mmax, kmax) + 1, 1.0);
  for (std::size_t i = 1; i < fact.size(); ++i) fact[i] = fact[i - 1] * static_cast<double>(i);
  std::vector<std::vector<Complex>> M(mmax + 1, std::vector<Complex>(kmax + 1));
  for (int m = 0; m <= mmax; ++m)
    for (int k = 0; k <= kmax; ++k) {
      Complex s{};
      for (int r = 0; r <= std::min(m, k); ++r)
        s += std::pow(c, r) / fact[r] * ipow(c * lamp, m - r) / fact[m - r] * ipow(c * lam, k - r) / fact[k - r];
      M[m][k] = pre * fact[m] * fact[k] * s;
    }
  return M;
}
}  // namespace detail

/// Entry (alpha, beta) = int F(Y) Phi~_beta(Y) conj(Phi~_alpha(Y)) dmu_h(Y), by exact complex Gaussian
/// moments in w = y - i eta. Handles polynomial times plane-wave terms.
inline OperatorMatrix anti_wick_op(const PhaseSymbol& F, double h, const TruncationSpec& spec) {
  if (!(h > 0.0)) throw std::domain_error("anti_wick_op: h must be positive");
  if (F.modes() != spec.modes) throw std::invalid_argument("anti_wick_op: mode count mismatch");
  const std::size_t n = spec.modes;
  OperatorMatrix A(spec);
  const Basis& basis = A.basis();
  const int N = spec.max_degree;
  std::vector<double> norm(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i)
    norm[i] = std::pow(2.0 * h, -0.5 * basis[i].degree()) / sqrt_factorial_multi(basis[i]);

  // (y, eta) in terms of (w, wbar): y = (w + wbar)/2, eta = i (w - wbar)/2
  std::vector<std::vector<Complex>> L(2 * n, std::vector<Complex>(2 * n));
  for (std::size_t j = 0; j < n; ++j) {
    L[j][j] = 0.5;
    L[j][n + j] = 0.5;
    L[n + j][j] = Complex(0.0, 0.5);
    L[n + j][n + j] = Complex(0.0, -0.5);
  }

  for (const auto& [a, P] : F.terms()) {
    const Polynomial W = P.substitute_linear(L, 2 * n);
    const int d = std::max(W.degree(), 0);
    const bool flat = PhaseSymbol::is_zero_frequency(a);
    std::vector<std::vector<std::vector<Complex>>> M(n);
    for (std::size_t j = 0; j < n; ++j) {
      const Complex lam = Complex(0.0, 0.5) * Complex(a[j], a[n + j]);
      const Complex lamp = Complex(0.0, 0.5) * Complex(a[j], -a[n + j]);
      M[j] = detail::moment_table(lam, lamp, h, N + d, N + d);
    }
    for (const auto& [e, c] : W.terms()) {
      const MultiIndex mu = detail::slice(e, 0, n), nu = detail::slice(e, n, n);
      for (std::size_t col = 0; col < basis.size(); ++col) {
        const MultiIndex& beta = basis[col];
        const MultiIndex top = mu + beta;
        if (flat) {
          // only alpha = mu + beta - nu survives
          if (!nu.divides(top)) continue;
          const MultiIndex alpha = top - nu;
          if (alpha.degree() > N) continue;
          const std::size_t row = basis.position(alpha);
          Complex v = c;
          for (std::size_t j = 0; j < n; ++j) v *= M[j][top[j]][nu[j] + alpha[j]];
          A(row, col) += v * norm[row] * norm[col];
          continue;
        }
        for (std::size_t row = 0; row < basis.size(); ++row) {
          const MultiIndex& alpha = basis[row];
          Complex v = c;
          for (std::size_t j = 0; j < n; ++j) v *= M[j][top[j]][nu[j] + alpha[j]];
          A(row, col) += v * norm[row] * norm[col];
        }
      }
    }
  }
  return A;
}

/// Op^weyl: polynomial G -> wick_to_operator(H_{h/2} G); pure plane waves -> exp(i sqrt(h) Phi_S(a)).
inline OperatorMatrix weyl_op(const PhaseSymbol& G, double h, const TruncationSpec& spec) {
  if (!(h > 0.0)) throw std::domain_error("weyl_op: h must be positive");
  if (G.modes() != spec.modes) throw std::invalid_argument("weyl_op: mode count mismatch");
  if (G.is_polynomial()) return wick_to_operator(heat_apply(G, h / 2.0), h, spec);
  OperatorMatrix A(spec);
  for (const auto& [a, P] : G.terms()) {
    if (P.degree() > 0)
      throw std::invalid_argument("weyl_op: mixed polynomial and plane-wave terms are not supported");
    const Complex c = P.coefficient(MultiIndex(P.nvars()));
    if (PhaseSymbol::is_zero_frequency(a)) {
      A.matrix() += c * Eigen::MatrixXcd::Identity(A.dim(), A.dim());
      continue;
    }
    A.matrix() += c * segal_exponential(PhasePoint::from_stacked(a) * std::sqrt(h), spec).matrix();
  }
  return A;
}

/// J phi = I(U, phi), column by column.
inline OperatorMatrix identification_op(const FockVector& U, const TruncationSpec& spec) {
  if (!(U.spec() == spec)) throw std::invalid_argument("identification_op: truncation mismatch");
  OperatorMatrix J(spec);
  const Basis& basis = J.basis();
  for (std::size_t col = 0; col < basis.size(); ++col) {
    const auto r = compose_I(U, FockVector::basis_vector(spec, basis[col]), Overflow::truncate);
    for (const auto& [a, c] : r.vector.coefficients()) J(basis.position(a), col) = c;
  }
  return J;
}

/// Multi-component J: one operator per component.
inline std::vector<OperatorMatrix> identification_ops(const std::vector<FockVector>& components,
                                                      const TruncationSpec& spec) {
  std::vector<OperatorMatrix> out;
  for (const auto& U : components) out.push_back(identification_op(U, spec));
  return out;
}

/// max |J - Op^AW_1(T^FH U)| over rows and columns of degree <= N - deg U.
inline double t_j_equality_check(const FockVector& U) {
  const TruncationSpec& spec = U.spec();
  const OperatorMatrix J = identification_op(U, spec);
  const OperatorMatrix A = anti_wick_op(t_fh(U, 1.0).to_symbol(), 1.0, spec);
  return J.max_abs_diff_on_block(A, spec.max_degree - std::max(U.degree(), 0));
}

/// max over Y of |sigma^wick(V(X) A V(-X))(Y) - sigma^wick(A)(Y - X)|.
inline double displacement_covariance_check(const OperatorMatrix& A, const PhasePoint& X, double h,
                                            const std::vector<PhasePoint>& samples) {
  const OperatorMatrix V = displacement(X, h, A.spec());
  const OperatorMatrix Vm = displacement(-X, h, A.spec());
  const OperatorMatrix B = V * A * Vm;
  double r = 0.0;
  for (const auto& Y : samples)
    r = std::max(r, std::abs(wick_symbol_eval(B, h, Y).value - wick_symbol_eval(A, h, Y - X).value));
  return r;
}

}  // namespace fockcalc
