#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "fock_vector.hpp"
#include "gauss_hermite.hpp"
#include "phase_symbol.hpp"

namespace fockcalc {

/// Degree-k Hermite polynomial, orthonormal for the standard Gaussian.
inline double hermite_orthonormal(int k, double x) {
  if (k < 0) throw std::domain_error("hermite_orthonormal: degree must be >= 0");
  double h0 = 1.0;
  if (k == 0) return h0;
  double h1 = x;
  for (int j = 1; j < k; ++j) {
    const double h2 = (x * h1 - std::sqrt(static_cast<double>(j)) * h0) / std::sqrt(j + 1.0);
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

/// Phi_{alpha,h}(q,p) = (2h)^{-|alpha|/2} (alpha!)^{-1/2} prod_j (q_j - i p_j)^{alpha_j}.
inline Complex phi_alpha(const MultiIndex& alpha, double h, const PhasePoint& X) {
  if (alpha.modes() != X.modes()) throw std::invalid_argument("phi_alpha: mode count mismatch");
  Complex v = std::pow(2.0 * h, -0.5 * alpha.degree()) / sqrt_factorial_multi(alpha);
  for (std::size_t j = 0; j < alpha.modes(); ++j)
    if (alpha[j]) v *= std::pow(std::conj(X.z(j)), alpha[j]);
  return v;
}

/// F = sum_alpha c_alpha Phi_{alpha,h}.
struct BargmannPoly {
  std::size_t modes = 1;
  double h = 1.0;
  std::map<MultiIndex, Complex> coeffs;

  Complex eval(const PhasePoint& X) const {
    Complex s{};
    for (const auto& [a, c] : coeffs) s += c * phi_alpha(a, h, X);
    return s;
  }

  /// Expanded in the real phase variables (q, p).
  PhaseSymbol to_symbol() const {
    const std::size_t m = 2 * modes;
    int d = 0;
    for (const auto& [a, c] : coeffs) d = std::max(d, a.degree());
    std::vector<std::vector<Polynomial>> pw(modes);
    for (std::size_t j = 0; j < modes; ++j) {
      Polynomial lin(m);
      lin.add_term(MultiIndex::unit(m, j), 1.0);
      lin.add_term(MultiIndex::unit(m, modes + j), Complex(0.0, -1.0));
      pw[j].push_back(Polynomial::constant(m, 1.0));
      for (int k = 1; k <= d; ++k) pw[j].push_back(pw[j].back() * lin);
    }
    Polynomial P(m);
    for (const auto& [a, c] : coeffs) {
      Polynomial t = Polynomial::constant(m, c * std::pow(2.0 * h, -0.5 * a.degree()) / sqrt_factorial_multi(a));
      for (std::size_t j = 0; j < modes; ++j)
        if (a[j]) t = t * pw[j][static_cast<std::size_t>(a[j])];
      P += t;
    }
    return PhaseSymbol::from_polynomial(modes, P);
  }
};

/// T^FH f as a coefficient map over Phi_{alpha,h}.
inline BargmannPoly t_fh(const FockVector& f, double h) {
  if (!(h > 0.0)) throw std::domain_error("t_fh: h must be positive");
  return BargmannPoly{f.modes(), h, f.coefficients()};
}

/// e^{|X|^2/4h} <f, Psi_{X,h}>.
inline Complex t_fh_eval(const FockVector& f, double h, const PhasePoint& X) {
  const auto psi = coherent_state(X, h, f.spec()).vector;
  return std::exp(X.norm_squared() / (4.0 * h)) * inner(f, psi);
}

struct GaussianSpec {
  std::size_t dimension = 1;
  double variance = 1.0;

  void validate() const {
    if (dimension == 0) throw std::invalid_argument("GaussianSpec: dimension must be positive");
    if (!(variance > 0.0)) throw std::domain_error("GaussianSpec: variance must be positive");
  }
};

/// E[x^e] under N(0, variance) for one coordinate.
inline double gaussian_moment_1d(int e, double variance) {
  if (e % 2) return 0.0;
  double r = 1.0;
  for (int k = e - 1; k > 1; k -= 2) r *= k;
  return r * std::pow(variance, e / 2);
}

/// Exact expectation of a polynomial under the centred Gaussian (Isserlis pairing).
inline Complex gaussian_moment_integrate(const Polynomial& P, const GaussianSpec& g) {
  g.validate();
  if (P.nvars() != g.dimension) throw std::invalid_argument("gaussian_moment_integrate: dimension mismatch");
  Complex s{};
  for (const auto& [e, c] : P.terms()) {
    double m = 1.0;
    for (std::size_t i = 0; i < P.nvars() && m != 0.0; ++i) m *= gaussian_moment_1d(e[i], g.variance);
    s += c * m;
  }
  return s;
}

inline Complex gaussian_moment_integrate(const PhaseSymbol& P, const GaussianSpec& g) {
  if (!P.is_polynomial())
    throw std::invalid_argument("gaussian_moment_integrate: plane-wave term present, use the characteristic function");
  return gaussian_moment_integrate(P.polynomial(), g);
}

/// ||P||_{L^2(mu)} computed exactly.
inline double gaussian_l2_norm(const Polynomial& P, const GaussianSpec& g) {
  return std::sqrt(std::max(0.0, gaussian_moment_integrate(P * conjugate(P), g).real()));
}

/// L^2 norm of the linear form x -> a.x.
inline double linear_form_l2_norm(const std::vector<double>& a, double h) {
  Polynomial P(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) P.add_term(MultiIndex::unit(a.size(), i), a[i]);
  return gaussian_l2_norm(P, GaussianSpec{a.size(), h});
}

/// Coefficients <T^FW f, Phi~_alpha> for every alpha of the truncation, by exact integration of
/// the real-variable products.
inline std::map<MultiIndex, Complex> segal_hermite_coeffs(const FockVector& f, double h) {
  const Polynomial F = t_fh(f, h).to_symbol().polynomial();
  const GaussianSpec g{2 * f.modes(), h};
  std::map<MultiIndex, Complex> out;
  for (const auto& a : enumerate_basis(f.spec())) {
    BargmannPoly phi{f.modes(), h, {{a, 1.0}}};
    const Complex c = gaussian_moment_integrate(F * conjugate(phi.to_symbol().polynomial()), g);
    if (c != Complex{}) out.emplace(a, c);
  }
  return out;
}

struct ReproducingResult {
  Complex value;
  Complex coarse_value;  // same rule at half the order
  double change = 0.0;
  bool converged = false;
};

namespace detail {
inline Complex reproducing_quadrature(const FockVector& f, double h, const PhasePoint& X, int order) {
  const std::size_t n = f.modes();
  const int N = std::max(f.degree(), 0);
  std::vector<std::pair<MultiIndex, Complex>> terms;
  for (const auto& [a, c] : f.coefficients())
    terms.emplace_back(a, c * std::pow(2.0 * h, -0.5 * a.degree()) / sqrt_factorial_multi(a));
  std::vector<Complex> xbar(n);
  for (std::size_t j = 0; j < n; ++j) xbar[j] = std::conj(X.z(j)) / (2.0 * h);
  std::vector<std::vector<Complex>> pw(n, std::vector<Complex>(N + 1));
  return tensor_gauss_expectation<Complex>(2 * n, order, h, [&](const std::vector<double>& Y) {
    Complex ell{};
    for (std::size_t j = 0; j < n; ++j) {
      const Complex w(Y[j], -Y[n + j]);
      ell += xbar[j] * std::conj(w);
      pw[j][0] = 1.0;
      for (int k = 1; k <= N; ++k) pw[j][k] = pw[j][k - 1] * w;
    }
    Complex fw{};
    for (const auto& [a, c] : terms) {
      Complex t = c;
      for (std::size_t j = 0; j < n; ++j) t *= pw[j][static_cast<std::size_t>(a[j])];
      fw += t;
    }
    return std::exp(ell) * fw;
  });
}
}  // namespace detail

/// int B_h(X, Y) T^FW f(Y) dmu_h(Y) with B_h = exp(l_X(Y)/2h), l_X(Y) = (q - ip).(y + i eta),
/// by tensor Gauss-Hermite quadrature over R^{2n}.
inline ReproducingResult reproducing_apply(const FockVector& f, double h, const PhasePoint& X, int order,
                                           double tol = 1e-8) {
  if (!(h > 0.0)) throw std::domain_error("reproducing_apply: h must be positive");
  if (X.modes() != f.modes()) throw std::invalid_argument("reproducing_apply: mode count mismatch");
  ReproducingResult r;
  r.value = detail::reproducing_quadrature(f, h, X, order);
  r.coarse_value = detail::reproducing_quadrature(f, h, X, std::max(1, order / 2));
  r.change = std::abs(r.value - r.coarse_value);
  r.converged = r.change <= tol * std::max(1.0, std::abs(r.value));
  return r;
}

struct HermiteSplitResult {
  double corrected_residual = 0.0;  // against sqrt(m!/(p!q!)) (-i)^q H_p(x) H_q(y)
  double printed_residual = 0.0;    // against the same weights on H_q(x) H_q(y)
};

namespace detail {
/// Integer coefficients of the probabilists' Hermite polynomial He_k.
inline std::vector<BigInt> he_coefficients(int k) {
  std::vector<BigInt> a{1}, b{0, 1};
  if (k == 0) return a;
  for (int j = 1; j < k; ++j) {
    std::vector<BigInt> c(j + 2, 0);
    for (int i = 0; i <= j; ++i) c[i + 1] += b[i];
    for (int i = 0; i < j; ++i) c[i] -= BigInt(j) * a[i];
    a = std::move(b);
    b = std::move(c);
  }
  return b;
}

/// E[x^j He_k(x)] for x ~ N(0, 1), exact.
inline BigInt moment_times_he(int j, int k) {
  const auto c = he_coefficients(k);
  BigInt s = 0;
  for (int i = 0; i <= k; ++i) {
    const int e = i + j;
    if (e % 2 || c[i] == 0) continue;
    BigInt m = 1;
    for (int t = e - 1; t > 1; t -= 2) m *= t;
    s += c[i] * m;
  }
  return s;
}
}  // namespace detail

/// Projects (x - iy)^m / sqrt(m!) onto H_p(x) H_q(y), p, q <= m, with exact integer moments.
inline HermiteSplitResult hermite_split_identity_check(int m) {
  if (m < 0) throw std::domain_error("hermite_split_identity_check: m must be >= 0");
  HermiteSplitResult r;
  const BigInt fm = factorial(static_cast<unsigned>(m));
  // sign(t) sqrt(t^2 / d) with t, d exact integers
  auto scaled = [](const BigInt& t, const BigInt& d) {
    if (t == 0) return 0.0;
    const double v = std::sqrt(static_cast<BigInt>(t * t).convert_to<double>() / d.convert_to<double>());
    return t < 0 ? -v : v;
  };
  auto formula = [&](int pp, int qq) -> Complex {
    if (pp + qq != m) return 0.0;
    const BigInt multinomial = fm / (factorial(static_cast<unsigned>(pp)) * factorial(static_cast<unsigned>(qq)));
    return std::sqrt(multinomial.convert_to<double>()) * std::pow(Complex(0.0, -1.0), qq);
  };
  for (int p = 0; p <= m; ++p) {
    for (int q = 0; q <= m; ++q) {
      // sum_k C(m,k) (-i)^k E[x^{m-k} He_p] E[y^k He_q]
      BigInt re = 0, im = 0;
      for (int k = 0; k <= m; ++k) {
        const BigInt t = binomial(m, k) * detail::moment_times_he(m - k, p) * detail::moment_times_he(k, q);
        if (t == 0) continue;
        switch (k % 4) {
          case 0: re += t; break;
          case 1: im -= t; break;
          case 2: re -= t; break;
          default: im += t; break;
        }
      }
      const BigInt d = fm * factorial(static_cast<unsigned>(p)) * factorial(static_cast<unsigned>(q));
      const Complex exact(scaled(re, d), scaled(im, d));
      r.corrected_residual = std::max(r.corrected_residual, std::abs(exact - formula(p, q)));
      const Complex printed = p == q ? formula(m - q, q) : Complex{};
      r.printed_residual = std::max(r.printed_residual, std::abs(exact - printed));
    }
  }
  return r;
}

/// Checks that the columns of each basis are orthonormal and that E_k is contained in E_{k+1}.
inline void validate_nested_subspaces(const std::vector<Eigen::MatrixXd>& bases, std::size_t dim,
                                      double tol = 1e-10) {
  for (std::size_t k = 0; k < bases.size(); ++k) {
    const auto& B = bases[k];
    if (static_cast<std::size_t>(B.rows()) != dim) throw std::invalid_argument("subspace basis has wrong row count");
    const Eigen::MatrixXd G = B.transpose() * B;
    if ((G - Eigen::MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff() > tol)
      throw std::invalid_argument("subspace basis columns are not orthonormal");
    if (k > 0) {
      const Eigen::MatrixXd& A = bases[k - 1];
      const Eigen::MatrixXd proj = B * (B.transpose() * A);
      if ((proj - A).cwiseAbs().maxCoeff() > tol) throw std::invalid_argument("subspaces are not nested");
    }
  }
}

/// F o pi_E with pi_E the orthogonal projection onto span(B).
inline Polynomial compose_projection(const Polynomial& F, const Eigen::MatrixXd& B) {
  const std::size_t d = F.nvars();
  const Eigen::MatrixXd P = B * B.transpose();
  std::vector<std::vector<Complex>> L(d, std::vector<Complex>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) L[i][k] = P(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
  return F.substitute_linear(L, d);
}

/// ||F o pi_{E_{k+1}} - F o pi_{E_k}||_{L^2} for consecutive nested subspaces.
inline std::vector<double> stochastic_extension_check(const Polynomial& F, const std::vector<Eigen::MatrixXd>& bases,
                                                      const GaussianSpec& g) {
  g.validate();
  if (F.nvars() != g.dimension) throw std::invalid_argument("stochastic_extension_check: dimension mismatch");
  validate_nested_subspaces(bases, g.dimension);
  std::vector<Polynomial> cyl;
  for (const auto& B : bases) cyl.push_back(compose_projection(F, B));
  std::vector<double> gaps;
  for (std::size_t k = 0; k + 1 < cyl.size(); ++k) gaps.push_back(gaussian_l2_norm(cyl[k + 1] - cyl[k], g));
  return gaps;
}

/// ||R_E T^FH f||_{L^2(E, mu_h)} for E spanned by the listed modes.
inline double restricted_bargmann_norm(const FockVector& f, double h, const std::vector<std::size_t>& modes) {
  const std::size_t n = f.modes();
  std::vector<std::vector<Complex>> L(2 * n, std::vector<Complex>(2 * n));
  for (std::size_t j : modes) {
    if (j >= n) throw std::out_of_range("restricted_bargmann_norm: mode index out of range");
    L[j][j] = 1.0;
    L[n + j][n + j] = 1.0;
  }
  const Polynomial R = t_fh(f, h).to_symbol().polynomial().substitute_linear(L, 2 * n);
  return gaussian_l2_norm(R, GaussianSpec{2 * n, h});
}

}  // namespace fockcalc
