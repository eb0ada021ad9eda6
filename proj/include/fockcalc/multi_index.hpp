#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace fockcalc {

using BigInt = boost::multiprecision::cpp_int;

/// Occupation numbers over a fixed number of modes.
///
/// Ordering is graded lexicographic: lower total degree first, then
/// lexicographically *descending* entries, so that within degree one the
/// order is e_1, e_2, ..., e_n. Indices with different mode counts compare
/// by mode count first.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t modes) : entries_(modes, 0) {}
  MultiIndex(std::initializer_list<int> entries) : entries_(entries) { validate(); }
  explicit MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) { validate(); }

  static MultiIndex unit(std::size_t modes, std::size_t j) {
    if (j >= modes) throw std::out_of_range("MultiIndex::unit: mode index out of range");
    MultiIndex e(modes);
    e.entries_[j] = 1;
    return e;
  }

  std::size_t modes() const noexcept { return entries_.size(); }
  int degree() const noexcept { return std::accumulate(entries_.begin(), entries_.end(), 0); }
  bool is_zero() const noexcept {
    return std::all_of(entries_.begin(), entries_.end(), [](int a) { return a == 0; });
  }

  int operator[](std::size_t j) const { return entries_.at(j); }
  const std::vector<int>& entries() const noexcept { return entries_; }

  /// Returns a copy with entry j shifted by delta; throws if it would go negative.
  MultiIndex shifted(std::size_t j, int delta) const {
    MultiIndex r = *this;
    if (j >= r.modes()) throw std::out_of_range("MultiIndex::shifted: mode index out of range");
    r.entries_[j] += delta;
    if (r.entries_[j] < 0) throw std::domain_error("MultiIndex::shifted: negative entry");
    return r;
  }

  /// Componentwise alpha <= beta.
  bool divides(const MultiIndex& other) const {
    require_same_modes(other);
    for (std::size_t j = 0; j < modes(); ++j)
      if (entries_[j] > other.entries_[j]) return false;
    return true;
  }

  friend MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
    a.require_same_modes(b);
    MultiIndex r = a;
    for (std::size_t j = 0; j < a.modes(); ++j) r.entries_[j] += b.entries_[j];
    return r;
  }

  /// Componentwise difference; throws unless b divides a.
  friend MultiIndex operator-(const MultiIndex& a, const MultiIndex& b) {
    if (!b.divides(a)) throw std::domain_error("MultiIndex difference would be negative");
    MultiIndex r = a;
    for (std::size_t j = 0; j < a.modes(); ++j) r.entries_[j] -= b.entries_[j];
    return r;
  }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

  friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
    if (auto c = a.modes() <=> b.modes(); c != 0) return c;
    if (auto c = a.degree() <=> b.degree(); c != 0) return c;
    // descending lexicographic inside a degree
    return std::lexicographical_compare_three_way(b.entries_.begin(), b.entries_.end(),
                                                  a.entries_.begin(), a.entries_.end());
  }

  friend std::ostream& operator<<(std::ostream& os, const MultiIndex& a) {
    os << '(';
    for (std::size_t j = 0; j < a.modes(); ++j) os << (j ? "," : "") << a.entries_[j];
    return os << ')';
  }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t j = 0; j < modes(); ++j) s += (j ? "," : "") + std::to_string(entries_[j]);
    return s + ")";
  }

  void require_same_modes(const MultiIndex& other) const {
    if (modes() != other.modes()) throw std::invalid_argument("MultiIndex mode count mismatch");
  }

 private:
  void validate() const {
    for (int a : entries_)
      if (a < 0) throw std::invalid_argument("MultiIndex entries must be non-negative");
  }

  std::vector<int> entries_;
};

/// Finite surrogate of the Fock space: n modes, total degree at most N.
struct TruncationSpec {
  std::size_t modes = 1;
  int max_degree = 0;

  void validate() const {
    if (modes == 0) throw std::invalid_argument("TruncationSpec: modes must be positive");
    if (max_degree < 0) throw std::invalid_argument("TruncationSpec: max_degree must be >= 0");
  }

  bool contains(const MultiIndex& a) const { return a.modes() == modes && a.degree() <= max_degree; }

  friend bool operator==(const TruncationSpec&, const TruncationSpec&) = default;
};

inline BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

inline std::size_t basis_size(const TruncationSpec& spec) {
  spec.validate();
  return binomial(static_cast<unsigned>(spec.modes + spec.max_degree), static_cast<unsigned>(spec.modes))
      .convert_to<std::size_t>();
}

namespace detail {
inline void enumerate_degree(std::vector<int>& current, std::size_t pos, int remaining,
                             std::vector<MultiIndex>& out) {
  if (pos + 1 == current.size()) {
    current[pos] = remaining;
    out.emplace_back(current);
    return;
  }
  for (int a = remaining; a >= 0; --a) {
    current[pos] = a;
    enumerate_degree(current, pos + 1, remaining - a, out);
  }
}
}  // namespace detail

/// All multi-indices of total degree <= N, in graded lexicographic order.
inline std::vector<MultiIndex> enumerate_basis(const TruncationSpec& spec) {
  spec.validate();
  std::vector<MultiIndex> out;
  out.reserve(basis_size(spec));
  std::vector<int> current(spec.modes, 0);
  for (int d = 0; d <= spec.max_degree; ++d) detail::enumerate_degree(current, 0, d, out);
  return out;
}

/// Ordered basis with reverse lookup.
class Basis {
 public:
  explicit Basis(const TruncationSpec& spec) : spec_(spec), indices_(enumerate_basis(spec)) {
    for (std::size_t i = 0; i < indices_.size(); ++i) lookup_.emplace(indices_[i], i);
  }

  const TruncationSpec& spec() const noexcept { return spec_; }
  std::size_t size() const noexcept { return indices_.size(); }
  const MultiIndex& operator[](std::size_t i) const { return indices_.at(i); }
  const std::vector<MultiIndex>& indices() const noexcept { return indices_; }

  /// Position of alpha, or size() when alpha lies outside the truncation.
  std::size_t position(const MultiIndex& alpha) const {
    auto it = lookup_.find(alpha);
    return it == lookup_.end() ? indices_.size() : it->second;
  }

  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

 private:
  TruncationSpec spec_;
  std::vector<MultiIndex> indices_;
  std::map<MultiIndex, std::size_t> lookup_;
};

inline BigInt factorial(unsigned n) {
  BigInt r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

/// alpha! = prod_j alpha_j!, exact.
inline BigInt factorial_multi(const MultiIndex& alpha) {
  BigInt r = 1;
  for (int a : alpha.entries()) r *= factorial(static_cast<unsigned>(a));
  return r;
}

/// Floating value of sqrt(alpha!), used for basis normalisations.
inline double sqrt_factorial_multi(const MultiIndex& alpha) {
  if (alpha.degree() <= 40) return std::sqrt(factorial_multi(alpha).convert_to<double>());
  double log_r = 0.0;
  for (int a : alpha.entries()) log_r += std::lgamma(a + 1.0);
  return std::exp(0.5 * log_r);
}

/// Total degree up to which merge weights use exact integers.
inline constexpr int kExactMergeDegree = 40;

enum class MergePath { automatic, exact, log_gamma };

namespace detail {
/// Pascal triangle up to kExactMergeDegree; every entry fits in 64 bits.
inline const std::vector<std::vector<std::uint64_t>>& pascal_table() {
  static const auto table = [] {
    std::vector<std::vector<std::uint64_t>> t(kExactMergeDegree + 1);
    for (int n = 0; n <= kExactMergeDegree; ++n) {
      t[n].assign(n + 1, 1);
      for (int k = 1; k < n; ++k) t[n][k] = t[n - 1][k - 1] + t[n - 1][k];
    }
    return t;
  }();
  return table;
}

/// prod_j C(alpha_j + beta_j, alpha_j) exactly. By Vandermonde it is at most
/// C(|alpha|+|beta|, |alpha|) <= C(40, 20), so it fits in 64 bits and converts to double exactly.
inline std::uint64_t merge_ratio_exact(const MultiIndex& alpha, const MultiIndex& beta) {
  const auto& t = pascal_table();
  std::uint64_t r = 1;
  for (std::size_t j = 0; j < alpha.modes(); ++j) r *= t[alpha[j] + beta[j]][alpha[j]];
  return r;
}
}  // namespace detail

/// log sqrt((alpha+beta)! / (alpha! beta!)).
inline double log_merge_weight(const MultiIndex& alpha, const MultiIndex& beta,
                               MergePath path = MergePath::automatic) {
  alpha.require_same_modes(beta);
  const int total = alpha.degree() + beta.degree();
  if (path == MergePath::exact && total > kExactMergeDegree) {
    BigInt ratio = 1;
    for (std::size_t j = 0; j < alpha.modes(); ++j)
      ratio *= binomial(static_cast<unsigned>(alpha[j] + beta[j]), static_cast<unsigned>(alpha[j]));
    return 0.5 * std::log(ratio.convert_to<double>());
  }
  if (path != MergePath::log_gamma && total <= kExactMergeDegree)
    return 0.5 * std::log(static_cast<double>(detail::merge_ratio_exact(alpha, beta)));
  double acc = 0.0;
  for (std::size_t j = 0; j < alpha.modes(); ++j)
    acc += std::lgamma(alpha[j] + beta[j] + 1.0) - std::lgamma(alpha[j] + 1.0) - std::lgamma(beta[j] + 1.0);
  return 0.5 * acc;
}

/// sqrt((alpha+beta)! / (alpha! beta!)), the weight of I(u_alpha, u_beta).
inline double merge_weight(const MultiIndex& alpha, const MultiIndex& beta) {
  alpha.require_same_modes(beta);
  if (alpha.degree() + beta.degree() <= kExactMergeDegree)
    return std::sqrt(static_cast<double>(detail::merge_ratio_exact(alpha, beta)));
  return std::exp(log_merge_weight(alpha, beta, MergePath::log_gamma));
}

/// Calls f(alpha) for every multi-index over `modes` modes of total degree exactly d.
template <class F>
void for_each_of_degree(std::size_t modes, int d, F&& f) {
  if (modes == 0) {
    if (d == 0) f(MultiIndex{});
    return;
  }
  std::vector<MultiIndex> out;
  std::vector<int> current(modes, 0);
  detail::enumerate_degree(current, 0, d, out);
  for (const auto& a : out) f(a);
}

}  // namespace fockcalc
