#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "operator_matrix.hpp"
#include "phase_symbol.hpp"
#include "quantization.hpp"
#include "star_products.hpp"

namespace fockcalc {

using json = nlohmann::json;

namespace detail {
inline json complex_pair(Complex c) { return json::array({c.real(), c.imag()}); }

inline MultiIndex index_from_json(const json& j) { return MultiIndex(j.get<std::vector<int>>()); }

inline json poly_to_json(const Polynomial& P) {
  json out = json::array();
  for (const auto& [e, c] : P.terms()) out.push_back(json::array({e.entries(), c.real(), c.imag()}));
  return out;
}

inline Polynomial poly_from_json(const json& j, std::size_t nvars) {
  Polynomial P(nvars);
  for (const auto& t : j) P.add_term(index_from_json(t.at(0)), Complex(t.at(1).get<double>(), t.at(2).get<double>()));
  return P;
}
}  // namespace detail

inline json to_json(const FockVector& f) {
  json entries = json::array();
  for (const auto& [a, c] : f.coefficients()) entries.push_back(json::array({a.entries(), c.real(), c.imag()}));
  return {{"modes", f.modes()}, {"max_degree", f.spec().max_degree}, {"entries", entries}};
}

inline FockVector fock_vector_from_json(const json& j) {
  FockVector f(TruncationSpec{j.at("modes").get<std::size_t>(), j.at("max_degree").get<int>()});
  for (const auto& e : j.at("entries"))
    f.add(detail::index_from_json(e.at(0)), Complex(e.at(1).get<double>(), e.at(2).get<double>()));
  return f;
}

inline json to_json(const PhaseSymbol& F) {
  json terms = json::array();
  for (const auto& [a, P] : F.terms()) terms.push_back({{"freq", a}, {"poly", detail::poly_to_json(P)}});
  return {{"modes", F.modes()}, {"terms", terms}};
}

inline PhaseSymbol phase_symbol_from_json(const json& j) {
  const auto n = j.at("modes").get<std::size_t>();
  PhaseSymbol F(n);
  for (const auto& t : j.at("terms")) {
    auto a = t.at("freq").get<Frequency>();
    F.add_term(a, detail::poly_from_json(t.at("poly"), 2 * n));
  }
  return F;
}

/// Row-major complex pairs in basis order.
inline json to_json(const OperatorMatrix& A) {
  json entries = json::array();
  for (std::size_t r = 0; r < A.dim(); ++r)
    for (std::size_t c = 0; c < A.dim(); ++c) entries.push_back(detail::complex_pair(A(r, c)));
  return {{"modes", A.spec().modes}, {"max_degree", A.spec().max_degree}, {"dim", A.dim()}, {"entries", entries}};
}

inline OperatorMatrix operator_matrix_from_json(const json& j) {
  OperatorMatrix A(TruncationSpec{j.at("modes").get<std::size_t>(), j.at("max_degree").get<int>()});
  const auto& e = j.at("entries");
  if (e.size() != A.dim() * A.dim()) throw std::invalid_argument("OperatorMatrix JSON: wrong entry count");
  for (std::size_t r = 0; r < A.dim(); ++r)
    for (std::size_t c = 0; c < A.dim(); ++c) {
      const auto& p = e.at(r * A.dim() + c);
      A(r, c) = Complex(p.at(0).get<double>(), p.at(1).get<double>());
    }
  return A;
}

/// Terms [alpha, beta, re, im] of sum c a*^alpha a^beta.
inline json to_json(const LadderPolynomial& L) {
  json terms = json::array();
  for (const auto& [k, c] : L.terms())
    terms.push_back(json::array({k.first.entries(), k.second.entries(), c.real(), c.imag()}));
  return {{"modes", L.modes()}, {"terms", terms}};
}

inline LadderPolynomial ladder_polynomial_from_json(const json& j) {
  LadderPolynomial L(j.at("modes").get<std::size_t>());
  for (const auto& t : j.at("terms"))
    L.add_term(detail::index_from_json(t.at(0)), detail::index_from_json(t.at(1)),
               Complex(t.at(2).get<double>(), t.at(3).get<double>()));
  return L;
}

inline json to_json(const StarExpansion& E) {
  json terms = json::array();
  for (std::size_t k = 0; k < E.terms.size(); ++k) terms.push_back({{"k", k}, {"symbol", to_json(E.terms[k])}});
  return {{"kind", E.kind == StarKind::wick ? "wick" : "weyl"},
          {"h", E.h},
          {"order", E.order()},
          {"terms", terms},
          {"closed_form", E.closed_form ? to_json(*E.closed_form) : json(nullptr)}};
}

inline StarExpansion star_expansion_from_json(const json& j) {
  StarExpansion E;
  const auto kind = j.at("kind").get<std::string>();
  if (kind != "wick" && kind != "weyl") throw std::invalid_argument("StarExpansion JSON: unknown kind");
  E.kind = kind == "wick" ? StarKind::wick : StarKind::weyl;
  E.h = j.at("h").get<double>();
  for (const auto& t : j.at("terms")) E.terms.push_back(phase_symbol_from_json(t.at("symbol")));
  if (!j.at("closed_form").is_null()) E.closed_form = phase_symbol_from_json(j.at("closed_form"));
  return E;
}

}  // namespace fockcalc
