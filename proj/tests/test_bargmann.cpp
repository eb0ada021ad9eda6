#include <random>

#include "test_support.hpp"

using namespace fockcalc;
using fockcalc::testing::idx;
using fockcalc::testing::near;
using fockcalc::testing::point;

TEST(Hermite, LowDegreesAndOrthonormality) {
  EXPECT_EQ(hermite_orthonormal(0, 0.7), 1.0);
  EXPECT_EQ(hermite_orthonormal(1, 0.7), 0.7);
  EXPECT_NEAR(hermite_orthonormal(2, 0.7), (0.49 - 1.0) / std::sqrt(2.0), 1e-16);
  EXPECT_NEAR(hermite_orthonormal(3, 0.7), (0.343 - 3 * 0.7) / std::sqrt(6.0), 1e-15);
  const auto rule = gauss_hermite(30);
  for (int j = 0; j <= 10; ++j)
    for (int k = 0; k <= 10; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < rule->nodes.size(); ++i)
        s += rule->weights[i] * hermite_orthonormal(j, rule->nodes[i]) * hermite_orthonormal(k, rule->nodes[i]);
      EXPECT_NEAR(s, j == k ? 1.0 : 0.0, 1e-12) << j << " " << k;
    }
  EXPECT_THROW(hermite_orthonormal(-1, 0.0), std::domain_error);
}

TEST(Bargmann, BasisImagesAndCoherentRoute) {
  const double h = 0.6;
  const TruncationSpec spec{2, 6};
  std::mt19937_64 rng(51);
  EXPECT_TRUE(near(t_fh_eval(vacuum(spec), h, point({0.3, 1.0}, {-2.0, 0.4})), 1.0, 1e-15));
  for (int t = 0; t < 50; ++t) {
    const PhasePoint X = random_point_in_ball(rng, 2, 1.5);
    for (const auto& a : enumerate_basis({2, 3})) {
      const Complex v = t_fh_eval(FockVector::basis_vector(spec, a), h, X);
      EXPECT_TRUE(near(v, phi_alpha(a, h, X), 1e-13 * std::max(1.0, std::abs(v))));
    }
    const FockVector f = random_fock_vector(rng, spec, 6, 6);
    const Complex direct = t_fh(f, h).eval(X);
    EXPECT_TRUE(near(t_fh_eval(f, h, X), direct, 1e-12 * std::max(1.0, std::abs(direct))));
    EXPECT_TRUE(near(t_fh(f, h).to_symbol().eval(X), direct, 1e-12 * std::max(1.0, std::abs(direct))));
  }
  const PhasePoint X = point({0.8}, {0.3});
  EXPECT_TRUE(near(t_fh_eval(FockVector::basis_vector({1, 1}, idx({1})), h, X),
                   Complex(0.8, -0.3) / std::sqrt(2 * h), 1e-15));
}

TEST(Bargmann, AntiHolomorphicStructure) {
  // Functions of w = q - ip satisfy d_p F = -i d_q F.
  std::mt19937_64 rng(53);
  for (int t = 0; t < 20; ++t) {
    const FockVector f = random_fock_vector(rng, {2, 6}, 6, 6);
    const PhaseSymbol F = t_fh(f, 0.8).to_symbol();
    for (std::size_t j = 0; j < 2; ++j)
      EXPECT_LT(max_coefficient_diff(F.partial(2 + j), F.partial(j) * Complex(0, -1)), 1e-12);
  }
}

TEST(Bargmann, LadderIntertwining) {
  const double h = 0.7;
  const TruncationSpec spec{2, 7};
  std::mt19937_64 rng(55);
  for (int t = 0; t < 30; ++t) {
    const FockVector f = random_fock_vector(rng, spec, 6, 6);
    const PhaseSymbol F = t_fh(f, h).to_symbol();
    for (std::size_t j = 0; j < 2; ++j) {
      const PhaseSymbol w = (PhaseSymbol::q(2, j) - PhaseSymbol::p(2, j) * Complex(0, 1)) * (1.0 / std::sqrt(2 * h));
      EXPECT_LT(max_coefficient_diff(t_fh(create(j, f).vector, h).to_symbol(), w * F), 1e-12);
      const PhaseSymbol d = (F.partial(j) + F.partial(2 + j) * Complex(0, 1)) * std::sqrt(h / 2);
      EXPECT_LT(max_coefficient_diff(t_fh(annihilate(j, f), h).to_symbol(), d), 1e-12);
    }
  }
}

TEST(Bargmann, MultiplicativeOnComposition) {
  const double h = 1.3;
  const TruncationSpec spec{2, 10};
  std::mt19937_64 rng(57);
  for (int t = 0; t < 40; ++t) {
    const FockVector f = random_fock_vector(rng, spec, 5, 5), g = random_fock_vector(rng, spec, 5, 5);
    const PhaseSymbol lhs = t_fh(compose_I(f, g, Overflow::strict).vector, h).to_symbol();
    const PhaseSymbol rhs = t_fh(f, h).to_symbol() * t_fh(g, h).to_symbol();
    EXPECT_LT(max_coefficient_diff(lhs, rhs), 1e-12 * std::max(1.0, rhs.max_abs_coefficient()));
    const PhasePoint X = random_point_in_ball(rng, 2, 1.0);
    const Complex v = t_fh_eval(f, h, X) * t_fh_eval(g, h, X);
    EXPECT_TRUE(near(t_fh(compose_I(f, g).vector, h).eval(X), v, 1e-12 * std::max(1.0, std::abs(v))));
  }
}

TEST(Bargmann, PartialIsometry) {
  const double h = 0.5;
  const TruncationSpec spec{2, 4};
  for (const auto& a : enumerate_basis(spec)) {
    // Off-diagonal moments cancel only up to rounding.
    for (const auto& [b, v] : segal_hermite_coeffs(FockVector::basis_vector(spec, a), h))
      EXPECT_TRUE(near(v, b == a ? 1.0 : 0.0, 1e-14)) << a << " " << b;
  }
  std::mt19937_64 rng(59);
  for (int t = 0; t < 20; ++t) {
    const FockVector f = random_fock_vector(rng, spec, 4, 5), g = random_fock_vector(rng, spec, 4, 5);
    const auto cf = segal_hermite_coeffs(f, h), cg = segal_hermite_coeffs(g, h);
    double n2 = 0.0;
    for (const auto& [a, c] : cf) n2 += std::norm(c);
    EXPECT_NEAR(std::sqrt(n2), f.norm(), 1e-12 * f.norm());
    Complex ip{};
    for (const auto& [a, c] : cf)
      if (auto it = cg.find(a); it != cg.end()) ip += c * std::conj(it->second);
    EXPECT_TRUE(near(ip, inner(f, g), 1e-12 * std::max(1.0, f.norm() * g.norm())));
  }
}

TEST(Gaussian, Moments) {
  const double h = 0.7;
  const GaussianSpec g{2, h};
  const Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
  EXPECT_EQ(gaussian_moment_integrate(x, g), Complex(0.0));
  EXPECT_NEAR(gaussian_moment_integrate(x * x, g).real(), h, 1e-16);
  EXPECT_NEAR(gaussian_moment_integrate(x.pow(4), g).real(), 3 * h * h, 1e-15);
  EXPECT_NEAR(gaussian_moment_1d(8, 2.0), 105.0 * 16.0, 1e-12);
  // Quadrature oracle on a mixed polynomial.
  const Polynomial P = x.pow(4) * y * y + Complex(0, 2) * x * y.pow(3) - 3.0 * y.pow(2) + x * x * y;
  const Complex q = tensor_gauss_expectation<Complex>(2, 12, h, [&](const std::vector<double>& v) { return P.eval(v); });
  EXPECT_TRUE(near(gaussian_moment_integrate(P, g), q, 1e-13));
  EXPECT_THROW(gaussian_moment_integrate(PhaseSymbol::plane_wave({1.0, 0.0}), g), std::invalid_argument);
  EXPECT_THROW(gaussian_moment_integrate(x, GaussianSpec{3, h}), std::invalid_argument);
}

TEST(Reproducing, VacuumAndFirstState) {
  const double h = 1.0;
  const PhasePoint X = point({0.4}, {-0.6});
  const auto r0 = reproducing_apply(vacuum({1, 0}), h, X, 40);
  EXPECT_TRUE(near(r0.value, 1.0, 1e-12));
  EXPECT_TRUE(r0.converged);
  const FockVector u1 = FockVector::basis_vector({1, 1}, idx({1}));
  const auto r1 = reproducing_apply(u1, h, X, 40);
  EXPECT_TRUE(near(r1.value, phi_alpha(idx({1}), h, X), 1e-8));
}

TEST(Reproducing, MatchesClosedFormAndIsLinear) {
  std::mt19937_64 rng(61);
  for (std::size_t n : {1u, 2u}) {
    for (int t = 0; t < 4; ++t) {
      const double h = 0.5 + 0.25 * t;
      const FockVector f = random_fock_vector(rng, {n, 4}, 4, 4), g = random_fock_vector(rng, {n, 4}, 4, 4);
      const PhasePoint X = random_point_in_ball(rng, n, 1.0);
      const auto rf = reproducing_apply(f, h, X, 40), rg = reproducing_apply(g, h, X, 40);
      EXPECT_TRUE(rf.converged);
      EXPECT_TRUE(near(rf.value, t_fh_eval(f, h, X), 1e-8 * std::max(1.0, std::abs(rf.value))));
      const auto rs = reproducing_apply(f * Complex(2, -1) + g, h, X, 40);
      EXPECT_TRUE(near(rs.value, Complex(2, -1) * rf.value + rg.value, 1e-10 * std::max(1.0, std::abs(rs.value))));
    }
  }
}

TEST(Reproducing, ErrorShrinksWithOrder) {
  const double h = 1.0;
  const FockVector f = FockVector::basis_vector({1, 6}, idx({6}));
  const PhasePoint X = point({1.5}, {-1.0});
  const Complex exact = t_fh_eval(f, h, X);
  const double e2 = std::abs(reproducing_apply(f, h, X, 2).value - exact);
  const double e4 = std::abs(reproducing_apply(f, h, X, 4).value - exact);
  const double e8 = std::abs(reproducing_apply(f, h, X, 8).value - exact);
  EXPECT_LT(e4, e2);
  EXPECT_LT(e8, e4 * 0.25);
  EXPECT_FALSE(reproducing_apply(f, h, X, 4, 1e-8).converged);
}

TEST(Reproducing, InfeasibleDimensionIsReported) {
  const FockVector f = vacuum({3, 2});
  EXPECT_THROW(reproducing_apply(f, 1.0, PhasePoint(3), 40), std::domain_error);
}

TEST(HermiteSplit, CorrectedAndPrintedReadings) {
  EXPECT_EQ(hermite_split_identity_check(0).corrected_residual, 0.0);
  EXPECT_EQ(hermite_split_identity_check(0).printed_residual, 0.0);
  EXPECT_EQ(hermite_split_identity_check(1).corrected_residual, 0.0);
  for (int m = 0; m <= 12; ++m) EXPECT_LE(hermite_split_identity_check(m).corrected_residual, 1e-12) << m;
  for (int m = 1; m <= 6; ++m) EXPECT_GT(hermite_split_identity_check(m).printed_residual, 0.1) << m;
  EXPECT_NEAR(hermite_split_identity_check(2).printed_residual, 1.0, 1e-15);
}

TEST(HermiteSplit, FloatingQuadratureOracle) {
  // Project (x - iy)^m / sqrt(m!) with a 2-d Gauss-Hermite rule in double precision.
  const auto rule = gauss_hermite(30);
  for (int m = 0; m <= 8; ++m) {
    const double sm = std::sqrt(std::tgamma(m + 1.0));
    for (int p = 0; p <= m; ++p) {
      const int q = m - p;
      Complex s{};
      for (std::size_t i = 0; i < rule->nodes.size(); ++i)
        for (std::size_t k = 0; k < rule->nodes.size(); ++k) {
          const double x = rule->nodes[i], y = rule->nodes[k];
          s += rule->weights[i] * rule->weights[k] * std::pow(Complex(x, -y), m) / sm * hermite_orthonormal(p, x) *
               hermite_orthonormal(q, y);
        }
      const Complex want = std::sqrt(std::tgamma(m + 1.0) / (std::tgamma(p + 1.0) * std::tgamma(q + 1.0))) *
                           std::pow(Complex(0, -1), q);
      EXPECT_TRUE(near(s, want, 1e-10)) << m << " " << p;
    }
  }
}

TEST(StochasticExtension, CylindricalExamples) {
  const double h = 0.8;
  const std::size_t d = 4;
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
  std::vector<Eigen::MatrixXd> grow;
  for (std::size_t k = 1; k <= d; ++k) grow.push_back(I.leftCols(static_cast<Eigen::Index>(k)));
  const GaussianSpec g{d, h};

  for (double gap : stochastic_extension_check(Polynomial::variable(d, 0), grow, g)) EXPECT_EQ(gap, 0.0);

  const Polynomial x3 = Polynomial::variable(d, 2);
  const auto gaps = stochastic_extension_check(x3 * x3, {I.leftCols(1), I.leftCols(3), I}, g);
  ASSERT_EQ(gaps.size(), 2u);
  EXPECT_NEAR(gaps[0], std::sqrt(3.0) * h, 1e-14);  // x3^2 o pi_{E1} = 0
  EXPECT_EQ(gaps[1], 0.0);

  std::vector<double> a{0.3, -1.2, 0.5, 2.0};
  double n2 = 0.0;
  for (double v : a) n2 += v * v;
  EXPECT_NEAR(linear_form_l2_norm(a, h), std::sqrt(h * n2), 1e-14);
}

TEST(StochasticExtension, RotatedCylinderBecomesStationary) {
  std::mt19937_64 rng(63);
  const std::size_t d = 5;
  for (int t = 0; t < 10; ++t) {
    const Eigen::MatrixXd U = random_orthogonal(rng, d);
    EXPECT_LT((U.transpose() * U - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff(), 1e-13);
    // F(x) = (u1.x)^2 (u2.x) + (u2.x)
    Polynomial u1(d), u2(d);
    for (std::size_t k = 0; k < d; ++k) {
      u1.add_term(MultiIndex::unit(d, k), U(static_cast<Eigen::Index>(k), 0));
      u2.add_term(MultiIndex::unit(d, k), U(static_cast<Eigen::Index>(k), 1));
    }
    const Polynomial F = u1 * u1 * u2 + u2;
    std::vector<Eigen::MatrixXd> bases;
    for (std::size_t k = 1; k <= d; ++k) bases.push_back(U.leftCols(static_cast<Eigen::Index>(k)));
    const auto gaps = stochastic_extension_check(F, bases, {d, 1.0});
    EXPECT_GT(gaps[0], 0.1);
    for (std::size_t k = 1; k < gaps.size(); ++k) EXPECT_LT(gaps[k], 1e-12);
  }
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(3, 3);
  Eigen::MatrixXd other = Eigen::MatrixXd::Zero(3, 1);
  other(2, 0) = 1.0;
  EXPECT_THROW(validate_nested_subspaces({I.leftCols(1), other}, 3), std::invalid_argument);
  EXPECT_THROW(validate_nested_subspaces({2.0 * I.leftCols(1)}, 3), std::invalid_argument);
}

TEST(StochasticExtension, RestrictionNorm) {
  std::mt19937_64 rng(65);
  const double h = 0.9;
  for (int t = 0; t < 20; ++t) {
    const FockVector f = random_fock_vector(rng, {3, 4}, 4, 8);
    const std::vector<std::size_t> S{0, 2};
    double expect = 0.0;  // mass on multi-indices supported in S
    for (const auto& [a, c] : f.coefficients())
      if (a[1] == 0) expect += std::norm(c);
    EXPECT_NEAR(restricted_bargmann_norm(f, h, S), std::sqrt(expect), 1e-12 * f.norm());
    EXPECT_LE(restricted_bargmann_norm(f, h, S), f.norm() * (1 + 1e-12));
    EXPECT_NEAR(restricted_bargmann_norm(f, h, {0, 1, 2}), f.norm(), 1e-12 * f.norm());
  }
}
