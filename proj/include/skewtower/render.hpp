#pragma once

// Plain-text rendering of monomials and coefficient maps.

#include <string>
#include <vector>

#include "skewtower/monomial.hpp"
#include "skewtower/scalars.hpp"

namespace skewtower {

inline std::string render_monomial(const Monomial& m, const std::vector<std::string>& names) {
  std::string out;
  for (int t = 0; t < static_cast<int>(names.size()); ++t) {
    const int e = m[t];
    if (e == 0) continue;
    if (!out.empty()) out += '*';
    out += names[static_cast<std::size_t>(t)];
    if (e != 1) out += '^' + std::to_string(e);
  }
  return out.empty() ? "1" : out;
}

/// Terms in graded-lex order joined by " + " (or " - " for negative
/// rationals); "0" when empty.
inline std::string render_terms(const Terms& terms, const std::vector<std::string>& names) {
  if (terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms) {
    Scalar coeff = c;
    if (coeff.is_negative()) {
      out += first ? "-" : " - ";
      coeff = -coeff;
    } else if (!first) {
      out += " + ";
    }
    first = false;
    if (m.is_one()) {
      out += coeff.to_string();
    } else if (coeff.is_one()) {
      out += render_monomial(m, names);
    } else {
      out += coeff.to_string() + "*" + render_monomial(m, names);
    }
  }
  return out;
}

}  // namespace skewtower
