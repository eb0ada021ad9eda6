#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "../bargmann.hpp"
#include "../displacement.hpp"
#include "../quantization.hpp"
#include "../random.hpp"
#include "../serialization.hpp"
#include "../star_products.hpp"

namespace fockcalc::verify {

inline constexpr const char* kReportSchema = "fockcalc-verify/1";

/// Run parameters. The has_* flags mark keys set explicitly; suites pin their own
/// truncation, case count and tolerance only when the key was left at its default.
struct SuiteConfig {
  std::size_t modes = 2;
  int max_degree = 12;
  double hbar = 1.0;
  double tol = 1e-9;
  std::uint64_t seed = 42;
  int quad = 40;
  int cases = 100;
  unsigned jobs = 1;  // worker threads; never part of the report
  bool timing = false;

  bool has_modes = false, has_degree = false, has_hbar = false, has_tol = false, has_quad = false,
       has_cases = false, has_seed = false, has_jobs = false;

  void validate() const {
    if (modes < 1) throw std::invalid_argument("modes must be >= 1");
    if (max_degree < 1) throw std::invalid_argument("degree must be >= 1");
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw std::invalid_argument("hbar must be positive");
    if (!(tol >= 0.0) || !std::isfinite(tol)) throw std::invalid_argument("tol must be >= 0");
    if (quad < 1) throw std::invalid_argument("quad must be >= 1");
    if (cases < 1) throw std::invalid_argument("cases must be >= 1");
    if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
  }

  /// Sets one key from text. Returns false for an unknown key; throws on a malformed value.
  bool set(const std::string& key, const std::string& value) {
    auto whole = [&](auto parse) {
      std::size_t used = 0;
      auto v = parse(value, &used);
      if (used != value.size()) throw std::invalid_argument("bad value for " + key + ": " + value);
      return v;
    };
    auto as_int = [&] { return whole([](const std::string& s, std::size_t* u) { return std::stoll(s, u); }); };
    auto as_double = [&] { return whole([](const std::string& s, std::size_t* u) { return std::stod(s, u); }); };
    try {
      if (key == "modes") {
        const auto v = as_int();
        if (v < 1) throw std::invalid_argument("modes must be >= 1");
        modes = static_cast<std::size_t>(v);
        has_modes = true;
      } else if (key == "degree") {
        max_degree = static_cast<int>(as_int());
        has_degree = true;
      } else if (key == "hbar") {
        hbar = as_double();
        has_hbar = true;
      } else if (key == "tol") {
        tol = as_double();
        has_tol = true;
      } else if (key == "seed") {
        if (value.find('-') != std::string::npos) throw std::invalid_argument("seed must be >= 0");
        seed = whole([](const std::string& s, std::size_t* u) { return std::stoull(s, u); });
        has_seed = true;
      } else if (key == "quad") {
        quad = static_cast<int>(as_int());
        has_quad = true;
      } else if (key == "cases") {
        cases = static_cast<int>(as_int());
        has_cases = true;
      } else if (key == "jobs") {
        const auto v = as_int();
        if (v < 1) throw std::invalid_argument("jobs must be >= 1");
        jobs = static_cast<unsigned>(v);
        has_jobs = true;
      } else {
        return false;
      }
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception&) {
      throw std::invalid_argument("bad value for " + key + ": " + value);
    }
    return true;
  }
};

/// Reads `key = value` lines; `#` starts a comment. Keys already set in `base` are kept.
inline SuiteConfig merge_config_file(SuiteConfig base, std::istream& in) {
  const SuiteConfig flags = base;
  SuiteConfig file;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (!file.set(key, trim(line.substr(eq + 1))))
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  SuiteConfig out = flags;
  if (!flags.has_modes && file.has_modes) out.modes = file.modes, out.has_modes = true;
  if (!flags.has_degree && file.has_degree) out.max_degree = file.max_degree, out.has_degree = true;
  if (!flags.has_hbar && file.has_hbar) out.hbar = file.hbar, out.has_hbar = true;
  if (!flags.has_tol && file.has_tol) out.tol = file.tol, out.has_tol = true;
  if (!flags.has_quad && file.has_quad) out.quad = file.quad, out.has_quad = true;
  if (!flags.has_cases && file.has_cases) out.cases = file.cases, out.has_cases = true;
  if (!flags.has_seed && file.has_seed) out.seed = file.seed, out.has_seed = true;
  if (!flags.has_jobs && file.has_jobs) out.jobs = file.jobs, out.has_jobs = true;
  return out;
}

struct CaseRecord {
  int index = 0;
  std::string label;
  std::string digest;  // FNV-1a of the serialized inputs
  double residual = 0.0;
  double threshold = 0.0;
  std::string criterion = "tolerance";  // or "bound"
  bool pass = false;
  json detail = json::object();
};

struct SuiteReport {
  std::string suite;
  std::string identity;
  double tolerance = 0.0;
  std::vector<CaseRecord> cases;
  double max_residual = 0.0;
  bool pass = false;
  std::optional<std::string> error;
  double wall_seconds = 0.0;
};

namespace detail {

inline std::string digest_of(const json& inputs) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(inputs.dump())));
  return buf;
}

inline json point_json(const PhasePoint& X) { return X.stacked(); }

inline CaseRecord record(int index, std::string label, const json& inputs, double residual, double threshold,
                         json detail = json::object(), std::string criterion = "tolerance") {
  CaseRecord r;
  r.index = index;
  r.label = std::move(label);
  r.digest = digest_of(inputs);
  r.residual = residual;
  r.threshold = threshold;
  r.criterion = std::move(criterion);
  r.pass = residual <= threshold;  // false for NaN
  r.detail = std::move(detail);
  return r;
}

/// max|diff| relative to max(1, |scale|).
inline double relative(double diff, double scale) { return diff / std::max(1.0, scale); }

inline double ladder_scale(const LadderPolynomial& L) { return max_coefficient_diff(L, LadderPolynomial(L.modes())); }

/// Evaluates each case on `jobs` threads; output order depends only on the index.
inline std::vector<CaseRecord> run_cases(int count, unsigned jobs,
                                         const std::function<std::vector<CaseRecord>(int)>& one) {
  std::vector<std::vector<CaseRecord>> slots(static_cast<std::size_t>(count));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        slots[static_cast<std::size_t>(i)] = one(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min(jobs, static_cast<unsigned>(count)));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<CaseRecord> out;
  for (auto& s : slots)
    for (auto& r : s) out.push_back(std::move(r));
  return out;
}

struct Suite {
  const char* name;
  const char* identity;
  double default_tol;
  std::function<std::vector<CaseRecord>(const SuiteConfig&, double tol)> run;
};

inline int cases_or(const SuiteConfig& c, int pinned) { return c.has_cases ? c.cases : pinned; }
inline int degree_or(const SuiteConfig& c, int pinned) { return c.has_degree ? c.max_degree : pinned; }

inline std::vector<CaseRecord> coherent_product(const SuiteConfig& c, double tol) {
  std::vector<int> sweep{4, 8, 12, 16};
  if (c.has_degree)
    for (int k = 0; k < 4; ++k) sweep[static_cast<std::size_t>(k)] = std::max(1, (k + 1) * c.max_degree / 4);
  const double h = c.hbar;
  return run_cases(cases_or(c, c.cases), c.jobs, [&](int i) {
    auto rng = case_rng(c.seed, "coherent-product", static_cast<std::uint64_t>(i));
    const PhasePoint X = random_point_in_ball(rng, c.modes, 0.5);
    const PhasePoint Y = random_point_in_ball(rng, c.modes, 0.5);
    std::vector<double> res;
    for (int N : sweep) res.push_back(coherent_product_check(X, Y, h, TruncationSpec{c.modes, N}));
    double rise = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < res.size(); ++k) rise = std::max(rise, res[k] - res[k - 1]);
    const json in = {{"X", point_json(X)}, {"Y", point_json(Y)}, {"h", h}, {"degrees", sweep}};
    return std::vector<CaseRecord>{
        record(i, "residual", in, res.back(), tol, {{"degree", sweep.back()}, {"sweep", res}}),
        record(i, "decay", in, std::max(rise, 0.0), 1e-14, {{"sweep", res}}, "bound")};
  });
}

inline std::vector<CaseRecord> norm_bound(const SuiteConfig& c, double tol) {
  static const double choices[3][2] = {{2.0, 2.0}, {3.0, 1.5}, {4.0, 4.0 / 3.0}};
  const double slack = c.has_tol ? tol : 1e-12;
  const TruncationSpec spec{c.modes, c.max_degree};
  const TruncationSpec wide{c.modes, 2 * c.max_degree};
  return run_cases(cases_or(c, 1000), c.jobs, [&](int i) {
    auto rng = case_rng(c.seed, "norm-bound", static_cast<std::uint64_t>(i));
    const double R = choices[i % 3][0], Rp = choices[i % 3][1];
    const double R2 = 1.0 / (1.0 / R + 1.0 / Rp);
    const FockVector f = random_fock_vector(rng, spec, c.max_degree, 6);
    const FockVector g = random_fock_vector(rng, spec, c.max_degree, 6);
    const FockVector fg = compose_I(f, g, wide, Overflow::strict).vector;
    const double lhs = weighted_norm(fg, R2);
    const double rhs = weighted_norm(f, R) * weighted_norm(g, Rp);
    const json in = {{"f", to_json(f)}, {"g", to_json(g)}, {"R", R}, {"R_prime", Rp}};
    return std::vector<CaseRecord>{record(i, "R=" + json(R).dump() + ",R'=" + json(Rp).dump(), in, lhs / rhs,
                                          1.0 + slack, {{"lhs", lhs}, {"rhs", rhs}, {"R_double_prime", R2}},
                                          "bound")};
  });
}

inline std::vector<CaseRecord> bargmann_factorization(const SuiteConfig& c, double tol) {
  const int d = c.has_degree ? std::max(1, c.max_degree / 2) : 5;
  const TruncationSpec spec{c.modes, 2 * d};
  const double h = c.hbar;
  return run_cases(cases_or(c, 200), c.jobs, [&](int i) {
    auto rng = case_rng(c.seed, "bargmann-factorization", static_cast<std::uint64_t>(i));
    const FockVector f = random_fock_vector(rng, spec, d, 5);
    const FockVector g = random_fock_vector(rng, spec, d, 5);
    const PhaseSymbol lhs = t_fh(compose_I(f, g, Overflow::strict).vector, h).to_symbol();
    const PhaseSymbol rhs = t_fh(f, h).to_symbol() * t_fh(g, h).to_symbol();
    const double diff = max_coefficient_diff(lhs, rhs);
    const json in = {{"f", to_json(f)}, {"g", to_json(g)}, {"h", h}};
    return std::vector<CaseRecord>{
        record(i, "coefficients", in, relative(diff, rhs.max_abs_coefficient()), tol, {{"abs_diff", diff}})};
  });
}

inline std::vector<CaseRecord> reproducing_kernel(const SuiteConfig& c, double tol) {
  const double h = c.hbar;
  return run_cases(cases_or(c, 20), c.jobs, [&](int i) {
    auto rng = case_rng(c.seed, "reproducing-kernel", static_cast<std::uint64_t>(i));
    const std::size_t n = c.has_modes ? c.modes : static_cast<std::size_t>(1 + i % 2);
    const int d = c.has_degree ? c.max_degree : 4;
    const FockVector f = random_fock_vector(rng, TruncationSpec{n, d}, d, 4);
    const PhasePoint X = random_point_in_ball(rng, n, 1.0);
    const ReproducingResult r = reproducing_apply(f, h, X, c.quad, tol);
    const Complex exact = t_fh_eval(f, h, X);
    const double err = relative(std::abs(r.value - exact), std::abs(exact));
    const double change = relative(r.change, std::abs(r.value));
    const json in = {{"f", to_json(f)}, {"X", point_json(X)}, {"h", h}, {"order", c.quad}};
    return std::vector<CaseRecord>{record(i, "n=" + std::to_string(n), in, std::max(err, change), tol,
                                          {{"error", err}, {"order_change", change}, {"converged", r.converged}})};
  });
}

inline std::vector<CaseRecord> hermite_identity(const SuiteConfig& c, double tol) {
  const int mmax = degree_or(c, 12);
  return run_cases(mmax + 1, c.jobs, [&](int m) {
    const HermiteSplitResult r = hermite_split_identity_check(m);
    return std::vector<CaseRecord>{record(m, "m=" + std::to_string(m), json{{"m", m}}, r.corrected_residual, tol,
                                          {{"printed_formula_residual", r.printed_residual}})};
  });
}

inline std::vector<CaseRecord> stochastic_extension(const SuiteConfig& c, double tol) {
  const double h = c.hbar;
  return run_cases(cases_or(c, c.cases), c.jobs, [&](int i) {
    auto rng = case_rng(c.seed, "stochastic-extension", static_cast<std::uint64_t>(i));
    const std::size_t d = 2 * c.modes + 2;
    const std::size_t r = static_cast<std::size_t>(random_int(rng, 1, static_cast<int>(d) - 1));
    const Eigen::MatrixXd U = random_orthogonal(rng, d);
    // P(U_r^T x): a polynomial in the first r rotated coordinates.
    Polynomial P(r);
    const int terms = random_int(rng, 1, 4);
    for (int t = 0; t < terms; ++t) P.add_term(random_index(rng, r, 3), random_complex(rng));
    std::vector<std::vector<Complex>> L(r, std::vector<Complex>(d));
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t k = 0; k < d; ++k) L[a][k] = U(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(a));
    const Polynomial F = P.substitute_linear(L, d);
    std::vector<Eigen::MatrixXd> bases;
    for (std::size_t k = 1; k <= d; ++k) bases.push_back(U.leftCols(static_cast<Eigen::Index>(k)));
    const GaussianSpec g{d, h};
    const std::vector<double> gaps = stochastic_extension_check(F, bases, g);
    const double scale = gaussian_l2_norm(F, g);
    double tail = 0.0;
    for (std::size_t k = r - 1; k < gaps.size(); ++k) tail = std::max(tail, gaps[k]);
    tail = relative(tail, scale);

    // Restriction to a mode subset never increases the norm; the full set preserves it.
    const FockVector f = random_fock_vector(rng, TruncationSpec{c.modes, 4}, 4, 5);
    std::vector<std::size_t> subset, all;
    for (std::size_t j = 0; j < c.modes; ++j) {
      all.push_back(j);
      if (random_int(rng, 0, 1)) subset.push_back(j);
    }
    const double fn = f.norm();
    const double sub = restricted_bargmann_norm(f, h, subset);
    const double full = restricted_bargmann_norm(f, h, all);
    const double excess = std::max(0.0, sub - fn) / fn;
    const double full_gap = std::abs(full - fn) / fn;

    std::vector<double> a(d);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double an = 0.0;
    for (auto& v : a) v = gauss(rng), an += v * v;
    const double lin = std::abs(linear_form_l2_norm(a, h) - std::sqrt(h * an)) / std::max(1.0, std::sqrt(h * an));

    const json in = {{"rotation", std::vector<double>(U.data(), U.data() + U.size())},
                     {"cylinder_rank", r},
                     {"F", fockcalc::detail::poly_to_json(P)},
                     {"f", to_json(f)},
                     {"subset", subset},
                     {"a", a},
                     {"h", h}};
    const double worst = std::max({tail, excess, full_gap, lin});
    return std::vector<CaseRecord>{record(i, "rank=" + std::to_string(r), in, worst, tol,
                                          {{"gaps", gaps},
                                           {"stationary_gap", tail},
                                           {"restricted_excess", excess},
                                           {"full_restriction_gap", full_gap},
                                           {"linear_form_gap", lin}})};
  });
}

inline std::vector<CaseRecord> husimi(const SuiteConfig& c, double tol) {
  const TruncationSpec spec{c.modes, c.max_degree};
  const double h = c.hbar;
  return run_cases(cases_or(c, 100), c.jobs, [&](int i) {
    auto rng = case_rng(c.seed, "husimi", static_cast<std::uint64_t>(i));
    const PhaseSymbol F = random_polynomial_symbol(rng, c.modes, std::max(0, c.max_degree - 2), 4);
    const LadderPolynomial got = normal_order_coefficients(anti_wick_op(F, h, spec));
    const LadderPolynomial want = to_ladder_polynomial(heat_apply(F, h), h);
    const double diff = max_coefficient_diff(got, want);
    const json in = {{"F", to_json(F)}, {"h", h}, {"degree", c.max_degree}};
    return std::vector<CaseRecord>{
        record(i, "degree=" + std::to_string(F.degree()), in, relative(diff, ladder_scale(want)), tol,
               {{"abs_diff", diff}})};
  });
}

inline std::vector<CaseRecord> identification_tj(const SuiteConfig& c, double tol) {
  const TruncationSpec spec{c.modes, degree_or(c, 10)};
  return run_cases(cases_or(c, 50), c.jobs, [&](int i) {
    auto rng = case_rng(c.seed, "identification-tj", static_cast<std::uint64_t>(i));
    const FockVector U = random_fock_vector(rng, spec, std::min(3, spec.max_degree), 4);
    const double r = t_j_equality_check(U);
    return std::vector<CaseRecord>{record(i, "deg U=" + std::to_string(U.degree()), json{{"U", to_json(U)}}, r, tol,
                                          {{"safe_block_degree", spec.max_degree - U.degree()}})};
  });
}

inline std::vector<CaseRecord> mizrahi(const SuiteConfig& c, double tol) {
  const TruncationSpec spec{c.modes, degree_or(c, 20)};
  const double h = c.hbar;
  return run_cases(cases_or(c, 50), c.jobs, [&](int i) {
    auto rng = case_rng(c.seed, "mizrahi", static_cast<std::uint64_t>(i));
    const LadderPolynomial A = random_ladder(rng, c.modes, 2, 3);
    const LadderPolynomial B = random_ladder(rng, c.modes, 2, 3);
    const PhasePoint X = i == 0 ? PhasePoint(c.modes) : random_point_in_ball(rng, c.modes, 1.0);
    const WickValue lhs = wick_symbol_eval(ladder_to_matrix(A, spec) * ladder_to_matrix(B, spec), h, X);
    const Complex rhs = mizrahi_compose(normal_symbol(A, h), normal_symbol(B, h), h).eval(X);
    const double r = relative(std::abs(lhs.value - rhs), std::abs(rhs));
    const json in = {{"A", to_json(A)}, {"B", to_json(B)}, {"X", point_json(X)}, {"h", h}, {"degree", spec.max_degree}};
    return std::vector<CaseRecord>{record(i, i == 0 ? "X=0" : "sample", in, r, tol,
                                          {{"matrix_value", {lhs.value.real(), lhs.value.imag()}},
                                           {"series_value", {rhs.real(), rhs.imag()}},
                                           {"coherent_tail", lhs.tail_mass}})};
  });
}

inline std::vector<CaseRecord> displacement_covariance(const SuiteConfig& c, double tol) {
  const TruncationSpec spec{c.modes, degree_or(c, 20)};
  const double h = c.hbar;
  return run_cases(cases_or(c, 20), c.jobs, [&](int i) {
    auto rng = case_rng(c.seed, "displacement-covariance", static_cast<std::uint64_t>(i));
    const LadderPolynomial L = random_ladder(rng, c.modes, 2, 3);
    const PhasePoint X = random_point_in_ball(rng, c.modes, 0.5);
    std::vector<PhasePoint> Ys;
    json ys = json::array();
    for (int k = 0; k < 8; ++k) {
      Ys.push_back(random_point_in_ball(rng, c.modes, 0.5));
      ys.push_back(point_json(Ys.back()));
    }
    const double r = displacement_covariance_check(ladder_to_matrix(L, spec), X, h, Ys);
    const json in = {{"A", to_json(L)}, {"X", point_json(X)}, {"Y", ys}, {"h", h}, {"degree", spec.max_degree}};
    return std::vector<CaseRecord>{record(i, "samples=8", in, r, tol)};
  });
}

inline std::vector<CaseRecord> weyl_compose_suite(const SuiteConfig& c, double tol) {
  const TruncationSpec spec{c.modes, c.max_degree};
  const double h = c.hbar;
  const double wave_tol = c.has_tol ? tol : 1e-12;
  return run_cases(cases_or(c, c.cases), c.jobs, [&](int i) {
    auto rng = case_rng(c.seed, "weyl-compose", static_cast<std::uint64_t>(i));
    const PhaseSymbol F = random_polynomial_symbol(rng, c.modes, 2, 4);
    const PhaseSymbol G = random_polynomial_symbol(rng, c.modes, 2, 4);
    const OperatorMatrix lhs = weyl_op(F, h, spec) * weyl_op(G, h, spec);
    const OperatorMatrix rhs = weyl_op(weyl_compose(F, G, h).sum(), h, spec);
    const int block = spec.max_degree - 2;
    const double op = lhs.max_abs_diff_on_block(rhs, block);

    const std::size_t m = 2 * c.modes;
    Frequency a(m), b(m);
    std::normal_distribution<double> gauss(0.0, 0.5);
    for (auto& v : a) v = gauss(rng);
    for (auto& v : b) v = gauss(rng);
    const PhaseSymbol Ea = PhaseSymbol::plane_wave(a), Eb = PhaseSymbol::plane_wave(b);
    const PhaseSymbol series = weyl_compose(Ea, Eb, h, 30).partial_sum();
    Frequency ab(m);
    for (std::size_t k = 0; k < m; ++k) ab[k] = a[k] + b[k];
    const PhaseSymbol expected = PhaseSymbol::plane_wave(ab, std::exp(Complex(0.0, 0.5 * h * sigma(a, b))));
    double wave = max_coefficient_diff(series, expected);
    for (const auto& X : phase_grid(c.modes, 16, 2.0, c.seed + static_cast<std::uint64_t>(i)))
      wave = std::max(wave, std::abs(std::abs(series.eval(X)) - 1.0));

    return std::vector<CaseRecord>{
        record(i, "operator", json{{"F", to_json(F)}, {"G", to_json(G)}, {"h", h}, {"degree", spec.max_degree}}, op,
               tol, {{"safe_block_degree", block}}),
        record(i, "plane-wave", json{{"a", a}, {"b", b}, {"h", h}}, wave, wave_tol, {{"terms", 31}})};
  });
}

inline std::vector<CaseRecord> lemma_bridge(const SuiteConfig& c, double tol) {
  return run_cases(cases_or(c, 200), c.jobs, [&](int i) {
    auto rng = case_rng(c.seed, "lemma-bridge", static_cast<std::uint64_t>(i));
    const std::size_t n = c.has_modes ? c.modes : static_cast<std::size_t>(1 + i % 2);
    const double h = c.has_hbar ? c.hbar : (i / 2 % 2 ? 1.0 : 0.1);
    const int d = c.has_degree ? c.max_degree : 4;
    const PhaseSymbol F = random_polynomial_symbol(rng, n, d, 4);
    const PhaseSymbol G = random_polynomial_symbol(rng, n, d, 4);
    const double diff = lemma_bridge_check(F, G, h);
    const double scale = heat_apply(weyl_compose(F, G, h).sum(), h / 2.0).max_abs_coefficient();
    const json in = {{"F", to_json(F)}, {"G", to_json(G)}, {"h", h}};
    return std::vector<CaseRecord>{record(i, "n=" + std::to_string(n) + ",h=" + json(h).dump(), in,
                                          relative(diff, scale), tol, {{"abs_diff", diff}})};
  });
}

inline std::vector<CaseRecord> remainder_bound_suite(const SuiteConfig& c, double) {
  const std::vector<PhasePoint> grid = phase_grid(c.modes, 512, 2.0, c.seed);
  const std::vector<double> hs = c.has_hbar ? std::vector<double>{c.hbar} : std::vector<double>{0.1, 1.0};
  return run_cases(cases_or(c, 20), c.jobs, [&](int i) {
    auto rng = case_rng(c.seed, "remainder-bound", static_cast<std::uint64_t>(i));
    const auto m = static_cast<Eigen::Index>(2 * c.modes);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd B(m, m);
    for (Eigen::Index r = 0; r < m; ++r)
      for (Eigen::Index k = 0; k < m; ++k) B(r, k) = gauss(rng);
    const double scale = std::uniform_real_distribution<double>(0.2, 2.0)(rng);
    const Eigen::MatrixXd A = B * B.transpose() * (scale / static_cast<double>(m));
    const QuadraticForm Q(A);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    const Eigen::MatrixXd root = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                                 es.eigenvectors().transpose();
    auto dominated = [&] {
      const std::vector<double> u = random_point_in_ball(rng, c.modes, 1.0).stacked();
      const Eigen::VectorXd v = root * Eigen::Map<const Eigen::VectorXd>(u.data(), m);
      return Frequency(v.data(), v.data() + v.size());
    };
    const Frequency a = dominated(), b = dominated();
    const bool certified = q_seminorm_dominates(a, Q) && q_seminorm_dominates(b, Q);
    const PhaseSymbol Ea = PhaseSymbol::plane_wave(a), Eb = PhaseSymbol::plane_wave(b);
    double worst = certified ? 0.0 : std::numeric_limits<double>::infinity();
    json rows = json::array();
    for (double h : hs)
      for (int M = 0; M <= 4; ++M) {
        const RemainderResult r = remainder_check(Ea, Eb, h, M, Q, 1.0, 1.0, grid);
        worst = std::max(worst, r.measured / r.bound);
        rows.push_back({{"h", h}, {"M", M}, {"measured", r.measured}, {"bound", r.bound}});
      }
    const json in = {{"A", std::vector<double>(A.data(), A.data() + A.size())}, {"a", a}, {"b", b}};
    return std::vector<CaseRecord>{record(i, "trace=" + json(Q.trace()).dump(), in, worst, 1.0,
                                          {{"certified", certified}, {"checks", rows}}, "bound")};
  });
}

inline const std::vector<Suite>& registry() {
  static const std::vector<Suite> suites = {
      {"coherent-product", "I(Psi_X, Psi_Y) = exp(X.Y/2h) Psi_{X+Y}, with residual decay in the truncation degree",
       1e-9, coherent_product},
      {"norm-bound", "||I(f,g)||_{R''} <= ||f||_R ||g||_{R'} with 1/R'' = 1/R + 1/R'", 1e-12, norm_bound},
      {"bargmann-factorization", "T^FH I(f,g) = (T^FH f)(T^FH g)", 1e-9, bargmann_factorization},
      {"reproducing-kernel", "int B_h(X,Y) T^FW f(Y) dmu_h(Y) = T^FH f(X)", 1e-8, reproducing_kernel},
      {"hermite-identity", "(x - iy)^m / sqrt(m!) = sum_{p+q=m} sqrt(m!/(p!q!)) (-i)^q H_p(x) H_q(y)", 1e-12,
       hermite_identity},
      {"stochastic-extension",
       "cylindrical approximations F o pi_{E_k} are stationary once E_k contains the base; "
       "restriction norm inequality; ||l_a|| = sqrt(h)|a|",
       1e-9, stochastic_extension},
      {"husimi", "wick symbol of Op^AW(F) = H_h F", 1e-9, husimi},
      {"identification-tj", "J = Op^AW_1(T^FH U) on the safe block", 1e-10, identification_tj},
      {"mizrahi", "wick symbol of A B = sum_k h^k C_k^wick(sigma(A), sigma(B))", 1e-9, mizrahi},
      {"displacement-covariance", "wick symbol of V(X) A V(-X) at Y = wick symbol of A at Y - X", 1e-6,
       displacement_covariance},
      {"weyl-compose",
       "Op^weyl(F) Op^weyl(G) = Op^weyl(K^weyl(F,G)); K^weyl(E_a,E_b) = exp(ih sigma(a,b)/2) E_{a+b}", 1e-9,
       weyl_compose_suite},
      {"lemma-bridge", "sum h^k C_k^wick(H_{h/2}F, H_{h/2}G) = H_{h/2} sum h^k C_k^weyl(F,G)", 1e-10,
       lemma_bridge},
      {"remainder-bound",
       "|K^weyl - sum_{k<=M} h^k C_k^weyl| / h^{M+1} <= (Tr A_Q)^{M+1}/(M+1)! exp(h Tr A_Q/2)", 1.0,
       remainder_bound_suite},
  };
  return suites;
}

}  // namespace detail

inline std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const auto& s : detail::registry()) out.emplace_back(s.name);
  return out;
}

/// Suite name -> identity it checks.
inline std::vector<std::pair<std::string, std::string>> manifest() {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& s : detail::registry()) out.emplace_back(s.name, s.identity);
  return out;
}

inline SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg) {
  const auto& reg = detail::registry();
  const auto it = std::find_if(reg.begin(), reg.end(), [&](const detail::Suite& s) { return name == s.name; });
  if (it == reg.end()) {
    std::string list;
    for (const auto& s : reg) list += (list.empty() ? "" : ", ") + std::string(s.name);
    throw std::invalid_argument("unknown suite '" + name + "'; valid suites: " + list);
  }
  cfg.validate();
  SuiteReport rep;
  rep.suite = it->name;
  rep.identity = it->identity;
  rep.tolerance = cfg.has_tol ? cfg.tol : it->default_tol;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    rep.cases = it->run(cfg, rep.tolerance);
    rep.pass = !rep.cases.empty();
    for (const auto& r : rep.cases) {
      rep.max_residual = std::max(rep.max_residual, std::isnan(r.residual) ? std::numeric_limits<double>::infinity()
                                                                           : r.residual);
      rep.pass = rep.pass && r.pass;
    }
  } catch (const std::exception& e) {
    rep.cases.clear();
    rep.max_residual = std::numeric_limits<double>::infinity();
    rep.error = e.what();
    rep.pass = false;
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

inline std::vector<SuiteReport> run_all(const SuiteConfig& cfg) {
  std::vector<SuiteReport> out;
  for (const auto& name : suite_names()) out.push_back(run_suite(name, cfg));
  return out;
}

namespace detail {
inline json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
}  // namespace detail

inline json config_json(const SuiteConfig& c) {
  return {{"modes", c.modes}, {"degree", c.max_degree}, {"hbar", c.hbar}, {"tol", c.tol},
          {"seed", c.seed},   {"quad", c.quad},         {"cases", c.cases}};
}

inline json to_json(const CaseRecord& r) {
  return {{"index", r.index},
          {"label", r.label},
          {"digest", r.digest},
          {"residual", detail::finite_or_null(r.residual)},
          {"threshold", r.threshold},
          {"criterion", r.criterion},
          {"pass", r.pass},
          {"detail", r.detail}};
}

inline json to_json(const SuiteReport& s, bool timing) {
  json cases = json::array();
  for (const auto& r : s.cases) cases.push_back(to_json(r));
  json j = {{"suite", s.suite},
            {"identity", s.identity},
            {"tolerance", s.tolerance},
            {"cases", cases},
            {"max_residual", detail::finite_or_null(s.max_residual)},
            {"pass", s.pass},
            {"error", s.error ? json(*s.error) : json(nullptr)}};
  if (timing) j["wall_seconds"] = s.wall_seconds;
  return j;
}

inline json report_json(const SuiteConfig& cfg, const std::vector<SuiteReport>& reports) {
  json suites = json::array();
  bool pass = !reports.empty();
  for (const auto& r : reports) {
    suites.push_back(to_json(r, cfg.timing));
    pass = pass && r.pass;
  }
  return {{"schema", kReportSchema}, {"config", config_json(cfg)}, {"suites", suites}, {"pass", pass}};
}

}  // namespace fockcalc::verify
