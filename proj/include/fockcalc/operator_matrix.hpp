#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

#include "fock_vector.hpp"

namespace fockcalc {

/// Shared read-only basis per truncation.
inline std::shared_ptr<const Basis> basis_for(const TruncationSpec& spec) {
  static std::mutex mu;
  static std::map<std::pair<std::size_t, int>, std::shared_ptr<const Basis>> cache;
  spec.validate();
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{spec.modes, spec.max_degree}];
  if (!slot) slot = std::make_shared<const Basis>(spec);
  return slot;
}

inline Eigen::VectorXcd to_dense(const FockVector& f) {
  const auto basis = basis_for(f.spec());
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->size()));
  for (const auto& [a, c] : f.coefficients()) v(static_cast<Eigen::Index>(basis->position(a))) = c;
  return v;
}

inline FockVector from_dense(const Eigen::VectorXcd& v, const TruncationSpec& spec) {
  const auto basis = basis_for(spec);
  if (static_cast<std::size_t>(v.size()) != basis->size())
    throw std::invalid_argument("from_dense: length does not match basis size");
  FockVector f(spec);
  for (std::size_t i = 0; i < basis->size(); ++i) f.set((*basis)[i], v(static_cast<Eigen::Index>(i)));
  return f;
}

/// Dense operator on span{u_alpha : |alpha| <= N}, indexed in basis order.
class OperatorMatrix {
 public:
  explicit OperatorMatrix(const TruncationSpec& spec)
      : basis_(basis_for(spec)), m_(Eigen::MatrixXcd::Zero(dim_of(*basis_), dim_of(*basis_))) {}

  OperatorMatrix(const TruncationSpec& spec, Eigen::MatrixXcd m) : basis_(basis_for(spec)), m_(std::move(m)) {
    if (m_.rows() != dim_of(*basis_) || m_.cols() != dim_of(*basis_))
      throw std::invalid_argument("OperatorMatrix: matrix shape does not match basis size");
  }

  static OperatorMatrix identity(const TruncationSpec& spec) {
    OperatorMatrix r(spec);
    r.m_.setIdentity();
    return r;
  }

  const TruncationSpec& spec() const noexcept { return basis_->spec(); }
  const Basis& basis() const noexcept { return *basis_; }
  std::size_t dim() const noexcept { return basis_->size(); }
  const Eigen::MatrixXcd& matrix() const noexcept { return m_; }
  Eigen::MatrixXcd& matrix() noexcept { return m_; }

  Complex operator()(std::size_t row, std::size_t col) const {
    return m_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  }
  Complex& operator()(std::size_t row, std::size_t col) {
    return m_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  }

  /// Entry <u_alpha, A u_beta>.
  Complex entry(const MultiIndex& alpha, const MultiIndex& beta) const {
    const std::size_t i = basis_->position(alpha), j = basis_->position(beta);
    if (i == dim() || j == dim()) throw std::out_of_range("OperatorMatrix::entry: index outside truncation");
    return (*this)(i, j);
  }

  FockVector apply(const FockVector& f) const {
    if (!(f.spec() == spec())) throw std::invalid_argument("OperatorMatrix::apply: truncation mismatch");
    return from_dense(m_ * to_dense(f), spec());
  }

  OperatorMatrix adjoint() const { return {spec(), m_.adjoint()}; }

  friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
    a.require_same(b);
    return {a.spec(), a.m_ * b.m_};
  }
  friend OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
    a.require_same(b);
    return {a.spec(), a.m_ + b.m_};
  }
  friend OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
    a.require_same(b);
    return {a.spec(), a.m_ - b.m_};
  }
  friend OperatorMatrix operator*(Complex s, const OperatorMatrix& a) { return {a.spec(), s * a.m_}; }

  /// Indices (in basis order) of basis vectors with degree <= d.
  std::size_t block_size(int d) const {
    if (d < 0) return 0;
    return basis_size(TruncationSpec{spec().modes, std::min(d, spec().max_degree)});
  }

  /// max |A_ij - B_ij| over the leading block of degree <= d.
  double max_abs_diff_on_block(const OperatorMatrix& other, int d) const {
    require_same(other);
    const auto k = static_cast<Eigen::Index>(block_size(d));
    if (k == 0) return 0.0;
    return (m_.topLeftCorner(k, k) - other.m_.topLeftCorner(k, k)).cwiseAbs().maxCoeff();
  }

  void require_same(const OperatorMatrix& other) const {
    if (!(spec() == other.spec())) throw std::invalid_argument("OperatorMatrix truncation mismatch");
  }

 private:
  static Eigen::Index dim_of(const Basis& b) { return static_cast<Eigen::Index>(b.size()); }

  std::shared_ptr<const Basis> basis_;
  Eigen::MatrixXcd m_;
};

/// Matrix of a*(e_j) on the truncation (top degree maps out and is dropped).
inline OperatorMatrix creation_matrix(std::size_t j, const TruncationSpec& spec) {
  if (j >= spec.modes) throw std::out_of_range("creation_matrix: mode index out of range");
  OperatorMatrix r(spec);
  const Basis& b = r.basis();
  for (std::size_t col = 0; col < b.size(); ++col) {
    const MultiIndex& a = b[col];
    if (a.degree() == spec.max_degree) continue;
    r(b.position(a.shifted(j, 1)), col) = std::sqrt(a[j] + 1.0);
  }
  return r;
}

inline OperatorMatrix annihilation_matrix(std::size_t j, const TruncationSpec& spec) {
  return creation_matrix(j, spec).adjoint();
}

}  // namespace fockcalc
