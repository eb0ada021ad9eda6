#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "polynomial.hpp"

namespace fockcalc {

using Frequency = std::vector<double>;

/// F(X) = sum_a P_a(X) e^{i a.X} over X = (q_1..q_n, p_1..p_n).
/// Variable i < n is q_i, variable n + i is p_i.
class PhaseSymbol {
 public:
  using Map = std::map<Frequency, Polynomial>;

  explicit PhaseSymbol(std::size_t modes = 1) : modes_(modes) {
    if (modes == 0) throw std::invalid_argument("PhaseSymbol: modes must be positive");
  }

  static PhaseSymbol constant(std::size_t modes, Complex c) {
    PhaseSymbol s(modes);
    s.add_term(s.zero_frequency(), Polynomial::constant(2 * modes, c));
    return s;
  }
  static PhaseSymbol variable(std::size_t modes, std::size_t var) {
    PhaseSymbol s(modes);
    s.add_term(s.zero_frequency(), Polynomial::variable(2 * modes, var));
    return s;
  }
  static PhaseSymbol q(std::size_t modes, std::size_t j) { return variable(modes, check(modes, j)); }
  static PhaseSymbol p(std::size_t modes, std::size_t j) { return variable(modes, modes + check(modes, j)); }

  static PhaseSymbol from_polynomial(std::size_t modes, const Polynomial& poly) {
    PhaseSymbol s(modes);
    s.add_term(s.zero_frequency(), poly);
    return s;
  }

  /// c e^{i a.X}, a stacked as (a_q, a_p).
  static PhaseSymbol plane_wave(const Frequency& a, Complex c = 1.0) {
    if (a.empty() || a.size() % 2) throw std::invalid_argument("plane_wave: frequency must have even length");
    PhaseSymbol s(a.size() / 2);
    s.add_term(a, Polynomial::constant(a.size(), c));
    return s;
  }

  std::size_t modes() const noexcept { return modes_; }
  std::size_t nvars() const noexcept { return 2 * modes_; }
  const Map& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  Frequency zero_frequency() const { return Frequency(nvars(), 0.0); }

  static bool is_zero_frequency(const Frequency& a) {
    for (double x : a)
      if (x != 0.0) return false;
    return true;
  }

  bool is_polynomial() const {
    for (const auto& [a, P] : terms_)
      if (!is_zero_frequency(a)) return false;
    return true;
  }

  /// Polynomial part; throws if any plane-wave term is present.
  Polynomial polynomial() const {
    if (!is_polynomial()) throw std::invalid_argument("PhaseSymbol: plane-wave terms present");
    auto it = terms_.find(zero_frequency());
    return it == terms_.end() ? Polynomial(nvars()) : it->second;
  }

  /// Largest polynomial degree over all terms, -1 for zero.
  int degree() const {
    int d = -1;
    for (const auto& [a, P] : terms_) d = std::max(d, P.degree());
    return d;
  }

  void add_term(const Frequency& a, const Polynomial& P) {
    if (a.size() != nvars() || P.nvars() != nvars())
      throw std::invalid_argument("PhaseSymbol: term has wrong variable count");
    if (P.is_zero()) return;
    Frequency key = a;
    for (double& x : key)
      if (x == 0.0) x = 0.0;  // fold -0.0
    auto [it, inserted] = terms_.try_emplace(key, P);
    if (!inserted) {
      it->second += P;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  PhaseSymbol& operator+=(const PhaseSymbol& o) {
    require_same(o);
    for (const auto& [a, P] : o.terms_) add_term(a, P);
    return *this;
  }
  PhaseSymbol& operator-=(const PhaseSymbol& o) {
    require_same(o);
    for (const auto& [a, P] : o.terms_) add_term(a, -P);
    return *this;
  }
  PhaseSymbol& operator*=(Complex s) {
    if (s == Complex{}) {
      terms_.clear();
      return *this;
    }
    for (auto& [a, P] : terms_) P *= s;
    return *this;
  }

  friend PhaseSymbol operator+(PhaseSymbol a, const PhaseSymbol& b) { return a += b; }
  friend PhaseSymbol operator-(PhaseSymbol a, const PhaseSymbol& b) { return a -= b; }
  friend PhaseSymbol operator-(PhaseSymbol a) { return a *= -1.0; }
  friend PhaseSymbol operator*(PhaseSymbol a, Complex s) { return a *= s; }
  friend PhaseSymbol operator*(Complex s, PhaseSymbol a) { return a *= s; }

  friend PhaseSymbol operator*(const PhaseSymbol& F, const PhaseSymbol& G) {
    F.require_same(G);
    PhaseSymbol r(F.modes_);
    for (const auto& [a, P] : F.terms_)
      for (const auto& [b, Q] : G.terms_) {
        Frequency c(a.size());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] + b[i];
        r.add_term(c, P * Q);
      }
    return r;
  }

  PhaseSymbol partial(std::size_t var) const {
    if (var >= nvars()) throw std::out_of_range("PhaseSymbol::partial: variable index out of range");
    PhaseSymbol r(modes_);
    for (const auto& [a, P] : terms_) {
      Polynomial d = P.partial(var);
      if (a[var] != 0.0) d += P * Complex(0.0, a[var]);
      r.add_term(a, d);
    }
    return r;
  }

  PhaseSymbol laplacian() const {
    PhaseSymbol r(modes_);
    for (std::size_t i = 0; i < nvars(); ++i) r += partial(i).partial(i);
    return r;
  }

  Complex eval(const PhasePoint& X) const {
    if (X.modes() != modes_) throw std::invalid_argument("PhaseSymbol::eval: mode count mismatch");
    const std::vector<double> x = X.stacked();
    Complex s{};
    for (const auto& [a, P] : terms_) {
      double phase = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) phase += a[i] * x[i];
      s += P.eval(x) * std::exp(Complex(0.0, phase));
    }
    return s;
  }

  /// Variable i of this symbol becomes variable map[i] of a symbol over new_modes modes.
  PhaseSymbol remap(const std::vector<std::size_t>& map, std::size_t new_modes) const {
    PhaseSymbol r(new_modes);
    for (const auto& [a, P] : terms_) {
      Frequency b(2 * new_modes, 0.0);
      for (std::size_t i = 0; i < a.size(); ++i) b.at(map[i]) += a[i];
      r.add_term(b, P.remap(map, 2 * new_modes));
    }
    return r;
  }

  /// X -> F(M X) for a real 2n x 2n matrix M.
  PhaseSymbol compose_linear(const Eigen::MatrixXd& M) const {
    const auto m = static_cast<Eigen::Index>(nvars());
    if (M.rows() != m || M.cols() != m) throw std::invalid_argument("compose_linear: matrix shape mismatch");
    std::vector<std::vector<Complex>> L(nvars(), std::vector<Complex>(nvars()));
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index k = 0; k < m; ++k) L[i][k] = M(i, k);
    PhaseSymbol r(modes_);
    for (const auto& [a, P] : terms_) {
      Eigen::VectorXd av = Eigen::Map<const Eigen::VectorXd>(a.data(), m);
      Eigen::VectorXd bv = M.transpose() * av;
      r.add_term(Frequency(bv.data(), bv.data() + m), P.substitute_linear(L, nvars()));
    }
    return r;
  }

  PhaseSymbol pruned(double eps) const {
    PhaseSymbol r(modes_);
    for (const auto& [a, P] : terms_) r.add_term(a, P.pruned(eps));
    return r;
  }

  double max_abs_coefficient() const {
    double m = 0.0;
    for (const auto& [a, P] : terms_) m = std::max(m, P.max_abs_coefficient());
    return m;
  }

  void require_same(const PhaseSymbol& o) const {
    if (modes_ != o.modes_) throw std::invalid_argument("PhaseSymbol mode count mismatch");
  }

 private:
  static std::size_t check(std::size_t modes, std::size_t j) {
    if (j >= modes) throw std::out_of_range("PhaseSymbol: mode index out of range");
    return j;
  }

  std::size_t modes_;
  Map terms_;
};

inline PhaseSymbol sym_add(const PhaseSymbol& F, const PhaseSymbol& G) { return F + G; }
inline PhaseSymbol sym_mul(const PhaseSymbol& F, const PhaseSymbol& G) { return F * G; }
inline PhaseSymbol sym_partial(const PhaseSymbol& F, std::size_t var) { return F.partial(var); }
inline PhaseSymbol sym_laplacian(const PhaseSymbol& F) { return F.laplacian(); }

/// max over frequencies and exponents of the coefficient difference.
inline double max_coefficient_diff(const PhaseSymbol& F, const PhaseSymbol& G) {
  return (F - G).max_abs_coefficient();
}

/// sum_k (v/2)^k / k! Delta^k F, i.e. convolution with the centred Gaussian of variance v.
inline PhaseSymbol heat_apply(const PhaseSymbol& F, double v) {
  if (!(v >= 0.0)) throw std::domain_error("heat_apply: variance must be non-negative");
  const std::size_t m = F.nvars();
  PhaseSymbol r(F.modes());
  for (const auto& [a, P] : F.terms()) {
    // exp((v/2) Delta)(P e_a) = e^{-v|a|^2/2} exp((v/2)(Delta + 2i a.grad)) P e_a; nilpotent on P.
    double a2 = 0.0;
    for (double x : a) a2 += x * x;
    auto L = [&](const Polynomial& Q) {
      Polynomial out(m);
      for (std::size_t i = 0; i < m; ++i) {
        const Polynomial d = Q.partial(i);
        if (d.is_zero()) continue;
        out += d.partial(i);
        if (a[i] != 0.0) out += d * Complex(0.0, 2.0 * a[i]);
      }
      return out;
    };
    Polynomial sum = P, term = P;
    for (int k = 1; !term.is_zero(); ++k) {
      term = L(term) * (v / (2.0 * k));
      sum += term;
    }
    r.add_term(a, sum * std::exp(-v * a2 / 2.0));
  }
  return r;
}

namespace detail {
/// Doubled-variable layout over 2n modes: first copy (x, xi), second copy (y, eta).
struct Doubling {
  std::size_t n;
  std::vector<std::size_t> first, second, diagonal;

  explicit Doubling(std::size_t modes) : n(modes), first(2 * n), second(2 * n), diagonal(4 * n) {
    for (std::size_t j = 0; j < n; ++j) {
      first[j] = j;
      first[n + j] = 2 * n + j;
      second[j] = n + j;
      second[n + j] = 3 * n + j;
      diagonal[j] = j;
      diagonal[n + j] = j;
      diagonal[2 * n + j] = n + j;
      diagonal[3 * n + j] = n + j;
    }
  }
  std::size_t x(std::size_t j) const { return j; }
  std::size_t y(std::size_t j) const { return n + j; }
  std::size_t xi(std::size_t j) const { return 2 * n + j; }
  std::size_t eta(std::size_t j) const { return 3 * n + j; }
};
}  // namespace detail

/// sigma(grad_1, grad_2)^k (F (x) G) restricted to the diagonal, where
/// sigma(grad_1, grad_2) = sum_j d_{y_j} d_{xi_j} - d_{x_j} d_{eta_j}.
inline PhaseSymbol symplectic_bidiff_power(const PhaseSymbol& F, const PhaseSymbol& G, int k) {
  F.require_same(G);
  if (k < 0) throw std::domain_error("symplectic_bidiff_power: k must be >= 0");
  const detail::Doubling D(F.modes());
  PhaseSymbol T = F.remap(D.first, 2 * D.n) * G.remap(D.second, 2 * D.n);
  for (int step = 0; step < k && !T.is_zero(); ++step) {
    PhaseSymbol next(2 * D.n);
    for (std::size_t j = 0; j < D.n; ++j) {
      next += T.partial(D.y(j)).partial(D.xi(j));
      next -= T.partial(D.x(j)).partial(D.eta(j));
    }
    T = std::move(next);
  }
  return T.remap(D.diagonal, D.n);
}

/// {F, G} = -sigma(dF, dG) = sum_j F_{q_j} G_{p_j} - F_{p_j} G_{q_j}.
inline PhaseSymbol poisson_bracket(const PhaseSymbol& F, const PhaseSymbol& G) {
  F.require_same(G);
  const std::size_t n = F.modes();
  PhaseSymbol r(n);
  for (std::size_t j = 0; j < n; ++j) {
    r += F.partial(j) * G.partial(n + j);
    r -= F.partial(n + j) * G.partial(j);
  }
  return r;
}

/// Q(X) = (A X).X with A symmetric positive semidefinite on R^{2n}.
class QuadraticForm {
 public:
  explicit QuadraticForm(Eigen::MatrixXd A, double tol = 1e-12) : A_(std::move(A)) {
    if (A_.rows() != A_.cols() || A_.rows() == 0 || A_.rows() % 2)
      throw std::invalid_argument("QuadraticForm: matrix must be square of even size");
    const double scale = std::max(1.0, A_.cwiseAbs().maxCoeff());
    if ((A_ - A_.transpose()).cwiseAbs().maxCoeff() > tol * scale)
      throw std::invalid_argument("QuadraticForm: matrix must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol * scale)
      throw std::invalid_argument("QuadraticForm: matrix must be positive semidefinite");
  }

  std::size_t modes() const noexcept { return static_cast<std::size_t>(A_.rows() / 2); }
  const Eigen::MatrixXd& matrix() const noexcept { return A_; }
  double trace() const { return A_.trace(); }

  double operator()(const PhasePoint& X) const {
    const std::vector<double> x = X.stacked();
    Eigen::Map<const Eigen::VectorXd> v(x.data(), static_cast<Eigen::Index>(x.size()));
    return v.dot(A_ * v);
  }

 private:
  Eigen::MatrixXd A_;
};

/// True iff (a.U)^2 <= Q(U) for all U, i.e. A_Q - a a^T is positive semidefinite.
inline bool q_seminorm_dominates(const Frequency& a, const QuadraticForm& Q, double tol = 1e-12) {
  const auto m = static_cast<Eigen::Index>(a.size());
  if (m != Q.matrix().rows()) throw std::invalid_argument("q_seminorm_dominates: dimension mismatch");
  Eigen::Map<const Eigen::VectorXd> v(a.data(), m);
  const Eigen::MatrixXd B = Q.matrix() - v * v.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B, Eigen::EigenvaluesOnly);
  const double scale = std::max(1.0, Q.matrix().cwiseAbs().maxCoeff());
  return es.eigenvalues().minCoeff() >= -tol * scale;
}

}  // namespace fockcalc
