#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <utility>

#include "multi_index.hpp"
#include "phase_point.hpp"

namespace fockcalc {

/// Sparse element of the truncated symmetric Fock space: alpha -> <f, u_alpha>.
class FockVector {
 public:
  using Map = std::map<MultiIndex, Complex>;

  explicit FockVector(TruncationSpec spec) : spec_(spec) { spec_.validate(); }

  static FockVector basis_vector(const TruncationSpec& spec, const MultiIndex& alpha, Complex c = 1.0) {
    FockVector f(spec);
    f.set(alpha, c);
    return f;
  }

  const TruncationSpec& spec() const noexcept { return spec_; }
  std::size_t modes() const noexcept { return spec_.modes; }
  const Map& coefficients() const noexcept { return coeffs_; }
  bool empty() const noexcept { return coeffs_.empty(); }

  Complex coefficient(const MultiIndex& alpha) const {
    auto it = coeffs_.find(alpha);
    return it == coeffs_.end() ? Complex{} : it->second;
  }

  void set(const MultiIndex& alpha, Complex c) {
    check_key(alpha);
    if (c == Complex{})
      coeffs_.erase(alpha);
    else
      coeffs_[alpha] = c;
  }

  void add(const MultiIndex& alpha, Complex c) {
    check_key(alpha);
    auto [it, inserted] = coeffs_.try_emplace(alpha, c);
    if (!inserted) {
      it->second += c;
      if (it->second == Complex{}) coeffs_.erase(it);
    }
  }

  /// Largest |alpha| carrying a nonzero coefficient, -1 for the zero vector.
  int degree() const {
    int d = -1;
    for (const auto& [a, c] : coeffs_) d = std::max(d, a.degree());
    return d;
  }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& [a, c] : coeffs_) s += std::norm(c);
    return s;
  }
  double norm() const { return std::sqrt(norm_squared()); }

  FockVector& operator+=(const FockVector& g) {
    require_same_spec(g);
    for (const auto& [a, c] : g.coeffs_) add(a, c);
    return *this;
  }
  FockVector& operator-=(const FockVector& g) {
    require_same_spec(g);
    for (const auto& [a, c] : g.coeffs_) add(a, -c);
    return *this;
  }
  FockVector& operator*=(Complex s) {
    if (s == Complex{}) {
      coeffs_.clear();
      return *this;
    }
    for (auto& [a, c] : coeffs_) c *= s;
    return *this;
  }

  friend FockVector operator+(FockVector f, const FockVector& g) { return f += g; }
  friend FockVector operator-(FockVector f, const FockVector& g) { return f -= g; }
  friend FockVector operator*(FockVector f, Complex s) { return f *= s; }
  friend FockVector operator*(Complex s, FockVector f) { return f *= s; }

  void require_same_spec(const FockVector& g) const {
    if (!(spec_ == g.spec_)) throw std::invalid_argument("FockVector truncation mismatch");
  }

 private:
  void check_key(const MultiIndex& alpha) const {
    if (alpha.modes() != spec_.modes) throw std::invalid_argument("FockVector: index has wrong mode count");
    if (alpha.degree() > spec_.max_degree) throw std::out_of_range("FockVector: index beyond max_degree");
  }

  TruncationSpec spec_;
  Map coeffs_;
};

/// Result paired with the squared mass lost to truncation.
struct Truncated {
  FockVector vector;
  double dropped_mass = 0.0;
};

enum class Overflow { strict, truncate };

inline FockVector vacuum(const TruncationSpec& spec) {
  return FockVector::basis_vector(spec, MultiIndex(spec.modes));
}

/// Copies f into another truncation with the same mode count.
inline Truncated embed(const FockVector& f, const TruncationSpec& target) {
  if (target.modes != f.modes()) throw std::invalid_argument("embed: mode count mismatch");
  Truncated r{FockVector(target), 0.0};
  for (const auto& [a, c] : f.coefficients()) {
    if (target.contains(a))
      r.vector.set(a, c);
    else
      r.dropped_mass += std::norm(c);
  }
  return r;
}

namespace detail {
inline void check_mode(const FockVector& f, std::size_t j) {
  if (j >= f.modes()) throw std::out_of_range("ladder operator: mode index out of range");
}
}  // namespace detail

/// a*(e_j) f; components leaving the truncation are dropped and accounted.
inline Truncated create(std::size_t j, const FockVector& f) {
  detail::check_mode(f, j);
  Truncated r{FockVector(f.spec()), 0.0};
  for (const auto& [a, c] : f.coefficients()) {
    const Complex v = c * std::sqrt(a[j] + 1.0);
    if (a.degree() + 1 > f.spec().max_degree)
      r.dropped_mass += std::norm(v);
    else
      r.vector.add(a.shifted(j, 1), v);
  }
  return r;
}

/// a(e_j) f.
inline FockVector annihilate(std::size_t j, const FockVector& f) {
  detail::check_mode(f, j);
  FockVector r(f.spec());
  for (const auto& [a, c] : f.coefficients())
    if (a[j] > 0) r.add(a.shifted(j, -1), c * std::sqrt(static_cast<double>(a[j])));
  return r;
}

/// <f, g>, linear in f.
inline Complex inner(const FockVector& f, const FockVector& g) {
  f.require_same_spec(g);
  Complex s{};
  const auto& small = f.coefficients().size() <= g.coefficients().size() ? f : g;
  const auto& large = &small == &f ? g : f;
  for (const auto& [a, c] : small.coefficients()) {
    const Complex d = large.coefficient(a);
    if (d == Complex{}) continue;
    s += &small == &f ? c * std::conj(d) : d * std::conj(c);
  }
  return s;
}

/// ||f||_R = (sum |c_alpha|^2 R^|alpha|)^{1/2}.
inline double weighted_norm(const FockVector& f, double R) {
  if (!(R >= 1.0)) throw std::domain_error("weighted_norm: R must be >= 1");
  double s = 0.0;
  for (const auto& [a, c] : f.coefficients()) s += std::norm(c) * std::pow(R, a.degree());
  return std::sqrt(s);
}

/// I(f, g) written into `target` (same modes; any max_degree).
inline Truncated compose_I(const FockVector& f, const FockVector& g, const TruncationSpec& target,
                           Overflow mode = Overflow::truncate) {
  if (f.modes() != g.modes() || target.modes != f.modes())
    throw std::invalid_argument("compose_I: mode count mismatch");
  target.validate();
  Truncated r{FockVector(target), 0.0};
  FockVector::Map overflow;
  for (const auto& [a, c] : f.coefficients()) {
    for (const auto& [b, d] : g.coefficients()) {
      const MultiIndex s = a + b;
      const Complex v = c * d * merge_weight(a, b);
      if (s.degree() <= target.max_degree) {
        r.vector.add(s, v);
      } else {
        if (mode == Overflow::strict) throw std::out_of_range("compose_I: degree overflow in strict mode");
        overflow[s] += v;
      }
    }
  }
  for (const auto& [s, v] : overflow) r.dropped_mass += std::norm(v);
  return r;
}

inline Truncated compose_I(const FockVector& f, const FockVector& g, Overflow mode = Overflow::truncate) {
  f.require_same_spec(g);
  return compose_I(f, g, f.spec(), mode);
}

/// Degree distribution of a coherent state is Poisson(|X|^2/2h); returns its mass above N.
inline double poisson_tail(double lambda, int N) {
  if (lambda == 0.0) return 0.0;
  if (lambda > N + 1.0) {
    double head = 0.0, term = std::exp(-lambda);
    for (int m = 0; m <= N; ++m) {
      head += term;
      term *= lambda / (m + 1);
    }
    return std::max(0.0, 1.0 - head);
  }
  double term = std::exp(-lambda + (N + 1) * std::log(lambda) - std::lgamma(N + 2.0));
  double tail = 0.0;
  for (int m = N + 1; term > 1e-300; ++m) {
    tail += term;
    term *= lambda / (m + 1);
    if (term < tail * 1e-18) break;
  }
  return tail;
}

/// Truncated Psi_{X,h}; dropped_mass carries 1 - ||Psi_X^N||^2.
inline Truncated coherent_state(const PhasePoint& X, double h, const TruncationSpec& spec) {
  if (!(h > 0.0)) throw std::domain_error("coherent_state: h must be positive");
  if (X.modes() != spec.modes) throw std::invalid_argument("coherent_state: mode count mismatch");
  const double n2 = X.norm_squared();
  const double pref = std::exp(-n2 / (4.0 * h));
  const double s2h = std::sqrt(2.0 * h);
  std::vector<Complex> w(spec.modes);
  for (std::size_t j = 0; j < spec.modes; ++j) w[j] = X.z(j) / s2h;
  Truncated r{FockVector(spec), poisson_tail(n2 / (2.0 * h), spec.max_degree)};
  for (const auto& a : enumerate_basis(spec)) {
    Complex c = pref / sqrt_factorial_multi(a);
    for (std::size_t j = 0; j < spec.modes; ++j)
      if (a[j]) c *= std::pow(w[j], a[j]);
    r.vector.set(a, c);
  }
  return r;
}

/// <Psi_X, Psi_Y> in closed form.
inline Complex coherent_overlap(const PhasePoint& X, const PhasePoint& Y, double h) {
  if (!(h > 0.0)) throw std::domain_error("coherent_overlap: h must be positive");
  const double d2 = (X - Y).norm_squared();
  return std::exp(Complex(-d2 / (4.0 * h), sigma(X, Y) / (2.0 * h)));
}

/// ||I(Psi_X^N, Psi_Y^N) - e^{X.Y/2h} Psi_{X+Y}^N||, with I evaluated in degree 2N so the
/// cross terms above N are kept.
inline double coherent_product_check(const PhasePoint& X, const PhasePoint& Y, double h,
                                     const TruncationSpec& spec) {
  const TruncationSpec wide{spec.modes, 2 * spec.max_degree};
  const auto px = coherent_state(X, h, spec).vector;
  const auto py = coherent_state(Y, h, spec).vector;
  FockVector lhs = compose_I(px, py, wide, Overflow::strict).vector;
  FockVector rhs = embed(coherent_state(X + Y, h, spec).vector, wide).vector;
  rhs *= std::exp(dot(X, Y) / (2.0 * h));
  return (lhs - rhs).norm();
}

}  // namespace fockcalc
