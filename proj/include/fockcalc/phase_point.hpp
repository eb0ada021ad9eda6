#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fockcalc {

using Complex = std::complex<double>;

/// X = (q, p) in R^n x R^n.
struct PhasePoint {
  std::vector<double> q;
  std::vector<double> p;

  PhasePoint() = default;
  explicit PhasePoint(std::size_t modes) : q(modes, 0.0), p(modes, 0.0) {}
  PhasePoint(std::vector<double> q_, std::vector<double> p_) : q(std::move(q_)), p(std::move(p_)) {
    if (q.size() != p.size()) throw std::invalid_argument("PhasePoint: q and p lengths differ");
  }

  /// Builds from the stacked coordinates (q_1..q_n, p_1..p_n).
  static PhasePoint from_stacked(const std::vector<double>& x) {
    if (x.size() % 2) throw std::invalid_argument("PhasePoint: stacked vector must have even length");
    const std::size_t n = x.size() / 2;
    return {std::vector<double>(x.begin(), x.begin() + n), std::vector<double>(x.begin() + n, x.end())};
  }

  std::size_t modes() const noexcept { return q.size(); }

  std::vector<double> stacked() const {
    std::vector<double> x = q;
    x.insert(x.end(), p.begin(), p.end());
    return x;
  }

  /// z_j = q_j + i p_j (unnormalised).
  Complex z(std::size_t j) const { return {q.at(j), p.at(j)}; }

  double norm_squared() const {
    double s = 0.0;
    for (std::size_t j = 0; j < modes(); ++j) s += q[j] * q[j] + p[j] * p[j];
    return s;
  }

  friend PhasePoint operator+(const PhasePoint& a, const PhasePoint& b) {
    a.require_same(b);
    PhasePoint r(a.modes());
    for (std::size_t j = 0; j < a.modes(); ++j) {
      r.q[j] = a.q[j] + b.q[j];
      r.p[j] = a.p[j] + b.p[j];
    }
    return r;
  }
  friend PhasePoint operator-(const PhasePoint& a, const PhasePoint& b) { return a + (-b); }
  friend PhasePoint operator-(const PhasePoint& a) { return a * -1.0; }
  friend PhasePoint operator*(const PhasePoint& a, double s) {
    PhasePoint r = a;
    for (auto& v : r.q) v *= s;
    for (auto& v : r.p) v *= s;
    return r;
  }
  friend PhasePoint operator*(double s, const PhasePoint& a) { return a * s; }

  void require_same(const PhasePoint& other) const {
    if (modes() != other.modes()) throw std::invalid_argument("PhasePoint mode count mismatch");
  }
};

/// Real inner product q.q' + p.p'.
inline double dot(const PhasePoint& x, const PhasePoint& y) {
  x.require_same(y);
  double s = 0.0;
  for (std::size_t j = 0; j < x.modes(); ++j) s += x.q[j] * y.q[j] + x.p[j] * y.p[j];
  return s;
}

/// sigma((q,p),(q',p')) = p.q' - q.p'.
inline double sigma(const PhasePoint& x, const PhasePoint& y) {
  x.require_same(y);
  double s = 0.0;
  for (std::size_t j = 0; j < x.modes(); ++j) s += x.p[j] * y.q[j] - x.q[j] * y.p[j];
  return s;
}

/// sigma on stacked frequency vectors a = (a_q, a_p).
inline double sigma(const std::vector<double>& a, const std::vector<double>& b) {
  return sigma(PhasePoint::from_stacked(a), PhasePoint::from_stacked(b));
}

}  // namespace fockcalc
