#include <random>

#include "test_support.hpp"

using namespace fockcalc;
using fockcalc::testing::idx;
using fockcalc::testing::near;
using fockcalc::testing::point;

namespace {

FockVector random_vector(std::mt19937_64& rng, const TruncationSpec& spec, int max_degree, int terms = 6) {
  return random_fock_vector(rng, spec, max_degree, terms);
}

double diff_norm(const FockVector& a, const FockVector& b) { return (a - b).norm(); }

}  // namespace

TEST(FockVector, VacuumAndBasis) {
  const TruncationSpec spec{2, 3};
  const FockVector v = vacuum(spec);
  EXPECT_EQ(v.coefficient(idx({0, 0})), Complex(1.0));
  EXPECT_DOUBLE_EQ(v.norm(), 1.0);
  EXPECT_DOUBLE_EQ(weighted_norm(v, 5.0), 1.0);
  EXPECT_THROW(FockVector::basis_vector(spec, idx({2, 2})), std::out_of_range);
  EXPECT_THROW(FockVector::basis_vector(spec, idx({1})), std::invalid_argument);
}

TEST(Ladder, Examples) {
  const TruncationSpec spec{2, 4};
  const auto u10 = create(0, vacuum(spec)).vector;
  EXPECT_EQ(u10.coefficients().size(), 1u);
  EXPECT_EQ(u10.coefficient(idx({1, 0})), Complex(1.0));
  const auto two = create(0, u10).vector;
  EXPECT_DOUBLE_EQ(two.coefficient(idx({2, 0})).real(), std::sqrt(2.0));
  EXPECT_TRUE(annihilate(0, vacuum(spec)).empty());
  const auto back = annihilate(0, FockVector::basis_vector(spec, idx({2, 0})));
  EXPECT_DOUBLE_EQ(back.coefficient(idx({1, 0})).real(), std::sqrt(2.0));
  EXPECT_THROW(create(2, vacuum(spec)), std::out_of_range);
  EXPECT_THROW(annihilate(5, vacuum(spec)), std::out_of_range);
}

TEST(Ladder, NumberOperatorDiagonal) {
  const TruncationSpec spec{3, 5};
  for (const auto& a : enumerate_basis({3, 4})) {
    const auto u = FockVector::basis_vector(spec, a);
    for (std::size_t j = 0; j < 3; ++j) {
      const auto r = annihilate(j, create(j, u).vector);
      EXPECT_NEAR(std::abs(r.coefficient(a) - Complex(a[j] + 1.0)), 0.0, 1e-14);
      EXPECT_EQ(r.coefficients().size(), 1u);
    }
  }
}

TEST(Ladder, CreateReportsDroppedMass) {
  const TruncationSpec spec{1, 2};
  const auto r = create(0, FockVector::basis_vector(spec, idx({2}), 2.0));
  EXPECT_TRUE(r.vector.empty());
  EXPECT_NEAR(r.dropped_mass, 4.0 * 3.0, 1e-14);
}

TEST(Ladder, AdjointnessAndCommutation) {
  std::mt19937_64 rng(3);
  const TruncationSpec spec{3, 6};
  for (int t = 0; t < 50; ++t) {
    const FockVector f = random_vector(rng, spec, 5);
    const FockVector g = random_vector(rng, spec, 6);
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_TRUE(near(inner(create(j, f).vector, g), inner(f, annihilate(j, g)), 1e-12));
      for (std::size_t k = 0; k < 3; ++k) {
        const FockVector lhs = annihilate(j, create(k, f).vector) - create(k, annihilate(j, f)).vector;
        FockVector rhs(spec);
        if (j == k) rhs = f;
        EXPECT_LT(diff_norm(lhs, rhs), 1e-12);
      }
    }
  }
}

TEST(Inner, OrthonormalAndPositive) {
  const TruncationSpec spec{2, 3};
  for (const auto& a : enumerate_basis(spec))
    for (const auto& b : enumerate_basis(spec))
      EXPECT_EQ(inner(FockVector::basis_vector(spec, a), FockVector::basis_vector(spec, b)),
                Complex(a == b ? 1.0 : 0.0));
  std::mt19937_64 rng(5);
  const FockVector f = random_vector(rng, spec, 3);
  const Complex ff = inner(f, f);
  EXPECT_GE(ff.real(), 0.0);
  EXPECT_EQ(ff.imag(), 0.0);
  const FockVector g = random_vector(rng, spec, 3);
  EXPECT_TRUE(near(inner(f * Complex(0, 2), g), Complex(0, 2) * inner(f, g), 1e-13));
  EXPECT_TRUE(near(inner(f, g), std::conj(inner(g, f)), 1e-14));
}

TEST(WeightedNorm, Examples) {
  const TruncationSpec spec{2, 4};
  EXPECT_DOUBLE_EQ(weighted_norm(FockVector::basis_vector(spec, idx({2, 1})), 3.0), std::pow(3.0, 1.5));
  FockVector f = FockVector::basis_vector(spec, idx({1, 0})) + FockVector::basis_vector(spec, idx({0, 2}));
  EXPECT_DOUBLE_EQ(weighted_norm(f, 4.0), std::sqrt(20.0));
  EXPECT_DOUBLE_EQ(weighted_norm(f, 1.0), std::sqrt(inner(f, f).real()));
  EXPECT_THROW(weighted_norm(f, 0.5), std::domain_error);
}

TEST(ComposeI, BasisRule) {
  for (std::size_t n = 1; n <= 3; ++n) {
    const TruncationSpec spec{n, 12};
    const auto basis = enumerate_basis({n, 6});
    for (const auto& a : basis)
      for (const auto& b : basis) {
        const auto r = compose_I(FockVector::basis_vector(spec, a), FockVector::basis_vector(spec, b), Overflow::strict);
        const double w = std::sqrt((factorial_multi(a + b) / (factorial_multi(a) * factorial_multi(b))).convert_to<double>());
        ASSERT_EQ(r.vector.coefficients().size(), 1u);
        EXPECT_DOUBLE_EQ(r.vector.coefficient(a + b).real(), w);
        EXPECT_EQ(r.dropped_mass, 0.0);
      }
  }
  const TruncationSpec spec{2, 2};
  const auto u = FockVector::basis_vector(spec, idx({1, 0}));
  EXPECT_DOUBLE_EQ(compose_I(u, u).vector.coefficient(idx({2, 0})).real(), std::sqrt(2.0));
}

TEST(ComposeI, UnitCommutativeAssociative) {
  std::mt19937_64 rng(9);
  const TruncationSpec spec{3, 12};
  for (int t = 0; t < 40; ++t) {
    const FockVector f = random_vector(rng, spec, 4), g = random_vector(rng, spec, 4), k = random_vector(rng, spec, 4);
    EXPECT_LT(diff_norm(compose_I(vacuum(spec), f).vector, f), 1e-15);
    EXPECT_LT(diff_norm(compose_I(f, vacuum(spec)).vector, f), 1e-15);
    EXPECT_LT(diff_norm(compose_I(f, g).vector, compose_I(g, f).vector), 1e-12);
    const FockVector l = compose_I(compose_I(f, g).vector, k, Overflow::strict).vector;
    const FockVector r = compose_I(f, compose_I(g, k).vector, Overflow::strict).vector;
    EXPECT_LT(diff_norm(l, r), 1e-10 * std::max(1.0, l.norm()));
  }
}

TEST(ComposeI, OverflowPolicy) {
  const TruncationSpec spec{1, 3};
  const auto u2 = FockVector::basis_vector(spec, idx({2}));
  EXPECT_THROW(compose_I(u2, u2, Overflow::strict), std::out_of_range);
  const auto r = compose_I(u2, u2);
  EXPECT_TRUE(r.vector.empty());
  EXPECT_NEAR(r.dropped_mass, 6.0, 1e-13);  // weight sqrt(4!/(2!2!)) squared
  const auto wide = compose_I(u2, u2, TruncationSpec{1, 4}, Overflow::strict);
  EXPECT_NEAR(wide.vector.coefficient(idx({4})).real(), std::sqrt(6.0), 1e-15);
}

TEST(ComposeI, WeightedNormBound) {
  const double choices[3][2] = {{2.0, 2.0}, {3.0, 1.5}, {4.0, 4.0 / 3.0}};
  std::mt19937_64 rng(13);
  const TruncationSpec spec{2, 8};
  for (int t = 0; t < 300; ++t) {
    const double R = choices[t % 3][0], Rp = choices[t % 3][1];
    const double R2 = 1.0 / (1.0 / R + 1.0 / Rp);
    const FockVector f = random_vector(rng, spec, 8), g = random_vector(rng, spec, 8);
    const FockVector fg = compose_I(f, g, TruncationSpec{2, 16}, Overflow::strict).vector;
    EXPECT_LE(weighted_norm(fg, R2), weighted_norm(f, R) * weighted_norm(g, Rp) * (1.0 + 1e-12));
  }
}

TEST(ComposeI, IdentificationNormControl) {
  // ||I(U, phi)|| <= ||U||_{R'} ||phi||_R with R' = R/(R-1), output weight 1.
  std::mt19937_64 rng(17);
  const TruncationSpec spec{2, 10};
  for (double R : {1.5, 2.0, 4.0}) {
    const double Rp = R / (R - 1.0);
    for (int t = 0; t < 50; ++t) {
      const FockVector U = random_vector(rng, spec, 3), phi = random_vector(rng, spec, 5);
      const FockVector J = compose_I(U, phi, TruncationSpec{2, 20}, Overflow::strict).vector;
      EXPECT_LE(J.norm(), weighted_norm(U, Rp) * weighted_norm(phi, R) * (1.0 + 1e-12));
    }
  }
}

TEST(CoherentState, CoefficientsMatchDirectFormula) {
  const PhasePoint X = point({0.4, -0.3}, {0.1, 0.7});
  const double h = 0.7;
  const TruncationSpec spec{2, 8};
  const auto psi = coherent_state(X, h, spec).vector;
  for (const auto& a : enumerate_basis(spec)) {
    Complex c = std::exp(-X.norm_squared() / (4 * h));
    for (std::size_t j = 0; j < 2; ++j)
      c *= std::pow(Complex(X.q[j], X.p[j]) / std::sqrt(2 * h), a[j]) / std::sqrt(std::tgamma(a[j] + 1.0));
    EXPECT_TRUE(near(psi.coefficient(a), c, 1e-15));
  }
}

TEST(CoherentState, ZeroIsVacuumAndNormAccountsTail) {
  const TruncationSpec spec{2, 6};
  const auto v = coherent_state(PhasePoint(2), 1.0, spec);
  EXPECT_LT(diff_norm(v.vector, vacuum(spec)), 1e-16);
  EXPECT_EQ(v.dropped_mass, 0.0);
  for (int N : {2, 4, 8, 16, 30}) {
    const PhasePoint X = point({1.5, -0.5}, {0.8, 1.1});
    const auto psi = coherent_state(X, 0.5, TruncationSpec{2, N});
    EXPECT_NEAR(psi.vector.norm_squared() + psi.dropped_mass, 1.0, 1e-13) << N;
  }
}

TEST(CoherentState, PoissonTailAgainstDirectSum) {
  for (double lambda : {0.01, 0.5, 2.0, 10.0, 40.0})
    for (int N : {0, 1, 5, 20, 50}) {
      double head = 0.0;
      for (int m = 0; m <= N; ++m) head += std::exp(-lambda + m * std::log(lambda) - std::lgamma(m + 1.0));
      const double tail = poisson_tail(lambda, N);
      EXPECT_NEAR(tail, std::max(0.0, 1.0 - head), 1e-13);
      EXPECT_GE(tail, 0.0);
    }
}

TEST(CoherentState, OverlapClosedForm) {
  const double h = 0.8;
  const PhasePoint X = point({0.3, -0.2}, {0.5, 0.1}), Y = point({-0.4, 0.2}, {0.0, 0.6});
  const TruncationSpec spec{2, 30};
  const Complex num = inner(coherent_state(X, h, spec).vector, coherent_state(Y, h, spec).vector);
  EXPECT_TRUE(near(num, coherent_overlap(X, Y, h), 1e-13));
  EXPECT_TRUE(near(coherent_overlap(X, X, h), 1.0, 1e-16));
  EXPECT_EQ(sigma(X, X), 0.0);
  EXPECT_DOUBLE_EQ(sigma(X, Y), -sigma(Y, X));
}

TEST(CoherentState, ProductCheck) {
  const TruncationSpec spec{2, 16};
  const PhasePoint X = point({0.2, -0.3}, {0.1, 0.25}), Y = point({-0.1, 0.2}, {0.3, -0.15});
  EXPECT_LE(coherent_product_check(X, Y, 1.0, spec), 1e-9);
  EXPECT_EQ(coherent_product_check(PhasePoint(2), Y, 1.0, spec), 0.0);

  // Y = -X: the product collapses onto a multiple of the vacuum.
  const auto px = coherent_state(X, 1.0, TruncationSpec{2, 24}).vector;
  const auto pm = coherent_state(-X, 1.0, TruncationSpec{2, 24}).vector;
  const auto prod = compose_I(px, pm, TruncationSpec{2, 48}, Overflow::strict).vector;
  const double factor = std::exp(-X.norm_squared() / 2.0);
  EXPECT_TRUE(near(prod.coefficient(idx({0, 0})), factor, 1e-14));
  EXPECT_LT(prod.norm_squared() - std::norm(prod.coefficient(idx({0, 0}))), 1e-20);

  std::vector<double> res;
  for (int N : {4, 8, 12, 16}) res.push_back(coherent_product_check(X, Y, 1.0, TruncationSpec{2, N}));
  for (std::size_t k = 1; k < res.size(); ++k) EXPECT_LE(res[k], res[k - 1] + 1e-14);
}

TEST(Displacement, IdentityVacuumAndUnitarity) {
  const TruncationSpec spec{2, 20};
  const double h = 0.9;
  const OperatorMatrix I0 = displacement(PhasePoint(2), h, spec);
  EXPECT_LT((I0.matrix() - Eigen::MatrixXcd::Identity(I0.dim(), I0.dim())).cwiseAbs().maxCoeff(), 1e-15);

  const PhasePoint X = point({0.3, -0.4}, {0.2, 0.1});
  const OperatorMatrix V = displacement(X, h, spec);
  const FockVector got = V.apply(vacuum(spec));
  const auto psi = coherent_state(X, h, spec);
  EXPECT_LT(diff_norm(got, psi.vector), 1e-12);

  // Unitary on the low block.
  const Eigen::MatrixXcd VV = V.adjoint().matrix() * V.matrix();
  const auto k = static_cast<Eigen::Index>(V.block_size(10));
  EXPECT_LT((VV.topLeftCorner(k, k) - Eigen::MatrixXcd::Identity(k, k)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Displacement, WeylRelationOnLowBlock) {
  const TruncationSpec spec{2, 24};
  const double h = 1.0;
  const PhasePoint U = point({0.3, 0.1}, {-0.2, 0.25}), W = point({-0.15, 0.2}, {0.1, 0.3});
  const OperatorMatrix lhs = displacement(U, h, spec) * displacement(W, h, spec);
  const OperatorMatrix rhs =
      std::exp(Complex(0.0, sigma(U, W) / (2 * h))) * displacement(U + W, h, spec);
  EXPECT_LT(lhs.max_abs_diff_on_block(rhs, 8), 1e-10);
  // The opposite phase is visibly wrong.
  const OperatorMatrix wrong = std::exp(Complex(0.0, -sigma(U, W) / (2 * h))) * displacement(U + W, h, spec);
  EXPECT_GT(lhs.max_abs_diff_on_block(wrong, 8), 1e-3);
}
