#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "multi_index.hpp"
#include "phase_point.hpp"

namespace fockcalc {

/// Sparse polynomial with complex coefficients in a fixed number of variables.
/// Exponents are MultiIndex values whose mode count is the variable count.
class Polynomial {
 public:
  using Map = std::map<MultiIndex, Complex>;

  explicit Polynomial(std::size_t nvars = 0) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, Complex c) {
    Polynomial p(nvars);
    p.add_term(MultiIndex(nvars), c);
    return p;
  }

  static Polynomial variable(std::size_t nvars, std::size_t i) {
    Polynomial p(nvars);
    p.add_term(MultiIndex::unit(nvars, i), 1.0);
    return p;
  }

  static Polynomial monomial(const MultiIndex& e, Complex c = 1.0) {
    Polynomial p(e.modes());
    p.add_term(e, c);
    return p;
  }

  std::size_t nvars() const noexcept { return nvars_; }
  const Map& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  Complex coefficient(const MultiIndex& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Complex{} : it->second;
  }

  void add_term(const MultiIndex& e, Complex c) {
    if (e.modes() != nvars_) throw std::invalid_argument("Polynomial: exponent has wrong variable count");
    if (c == Complex{}) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == Complex{}) terms_.erase(it);
    }
  }

  /// Total degree, -1 for the zero polynomial.
  int degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, e.degree());
    return d;
  }

  double max_abs_coefficient() const {
    double m = 0.0;
    for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
    return m;
  }

  Polynomial& operator+=(const Polynomial& o) {
    require_same(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    require_same(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  Polynomial& operator*=(Complex s) {
    if (s == Complex{}) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) { return a *= -1.0; }
  friend Polynomial operator*(Polynomial a, Complex s) { return a *= s; }
  friend Polynomial operator*(Complex s, Polynomial a) { return a *= s; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.require_same(b);
    Polynomial r(a.nvars_);
    for (const auto& [e, c] : a.terms_)
      for (const auto& [f, d] : b.terms_) r.add_term(e + f, c * d);
    return r;
  }

  Polynomial pow(int k) const {
    if (k < 0) throw std::domain_error("Polynomial::pow: negative exponent");
    Polynomial r = constant(nvars_, 1.0), base = *this;
    while (k) {
      if (k & 1) r = r * base;
      k >>= 1;
      if (k) base = base * base;
    }
    return r;
  }

  Polynomial partial(std::size_t i) const {
    if (i >= nvars_) throw std::out_of_range("Polynomial::partial: variable index out of range");
    Polynomial r(nvars_);
    for (const auto& [e, c] : terms_)
      if (e[i] > 0) r.add_term(e.shifted(i, -1), c * static_cast<double>(e[i]));
    return r;
  }

  template <class T>
  Complex eval(const std::vector<T>& x) const {
    if (x.size() != nvars_) throw std::invalid_argument("Polynomial::eval: wrong point dimension");
    Complex s{};
    for (const auto& [e, c] : terms_) {
      Complex m = c;
      for (std::size_t i = 0; i < nvars_; ++i)
        if (e[i]) m *= std::pow(Complex(x[i]), e[i]);
      s += m;
    }
    return s;
  }

  /// Renames variables: old variable i becomes new variable map[i]. Several old variables may
  /// land on the same new one (restriction to a diagonal).
  Polynomial remap(const std::vector<std::size_t>& map, std::size_t new_nvars) const {
    if (map.size() != nvars_) throw std::invalid_argument("Polynomial::remap: map length mismatch");
    Polynomial r(new_nvars);
    for (const auto& [e, c] : terms_) {
      std::vector<int> ne(new_nvars, 0);
      for (std::size_t i = 0; i < nvars_; ++i) ne.at(map[i]) += e[i];
      r.add_term(MultiIndex(std::move(ne)), c);
    }
    return r;
  }

  /// Substitutes old variable i := sum_k L[i][k] * new_k.
  Polynomial substitute_linear(const std::vector<std::vector<Complex>>& L, std::size_t new_nvars) const {
    if (L.size() != nvars_) throw std::invalid_argument("Polynomial::substitute_linear: row count mismatch");
    std::vector<std::vector<Polynomial>> powers(nvars_);
    const int d = std::max(degree(), 0);
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (L[i].size() != new_nvars) throw std::invalid_argument("substitute_linear: column count mismatch");
      Polynomial lin(new_nvars);
      for (std::size_t k = 0; k < new_nvars; ++k) lin.add_term(MultiIndex::unit(new_nvars, k), L[i][k]);
      powers[i].push_back(constant(new_nvars, 1.0));
      for (int m = 1; m <= d; ++m) powers[i].push_back(powers[i].back() * lin);
    }
    Polynomial r(new_nvars);
    for (const auto& [e, c] : terms_) {
      Polynomial m = constant(new_nvars, c);
      for (std::size_t i = 0; i < nvars_; ++i)
        if (e[i]) m = m * powers[i][static_cast<std::size_t>(e[i])];
      r += m;
    }
    return r;
  }

  /// Drops coefficients with |c| <= eps.
  Polynomial pruned(double eps) const {
    Polynomial r(nvars_);
    for (const auto& [e, c] : terms_)
      if (std::abs(c) > eps) r.terms_.emplace(e, c);
    return r;
  }

  void require_same(const Polynomial& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("Polynomial variable count mismatch");
  }

 private:
  std::size_t nvars_;
  Map terms_;
};

/// Complex conjugate as a function of real variables.
inline Polynomial conjugate(const Polynomial& P) {
  Polynomial r(P.nvars());
  for (const auto& [e, c] : P.terms()) r.add_term(e, std::conj(c));
  return r;
}

/// max_e |a_e - b_e|.
inline double max_coefficient_diff(const Polynomial& a, const Polynomial& b) {
  return (a - b).max_abs_coefficient();
}

}  // namespace fockcalc
