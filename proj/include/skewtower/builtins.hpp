#pragma once

// Named example towers reachable from the CLI as @e1 ... @e6.

#include <string>
#include <string_view>
#include <vector>

#include "skewtower/error.hpp"
#include "skewtower/tower.hpp"

namespace skewtower {

/// F_5[[x]][[y; id, d]] with d(x) = x^2 (or x^3 for the cubic variant).
inline TowerPtr build_e1(int precision = kDefaultPrecision, int delta_degree = 2) {
  TowerBuilder b(delta_degree == 2 ? "e1" : "e1-cubic", FieldDescriptor::prime(5), precision);
  b.adjoin("x");
  b.adjoin("y", {}, {{"x", power(b.gen("x"), delta_degree)}});
  return b.build();
}

/// F_3[[Y, Z]][[X; s]] with s(Y) = Z, s(Z) = -Y, over any prime.
inline TowerPtr build_e3(std::int64_t p = 3, int precision = kDefaultPrecision) {
  TowerBuilder b(p == 3 ? "e3" : "e3-p" + std::to_string(p), FieldDescriptor::prime(p), precision);
  b.adjoin("Y");
  b.adjoin("Z");
  b.adjoin("X", {{"Y", b.gen("Z")}, {"Z", -b.gen("Y")}});
  return b.build();
}

inline const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names{"@e1", "@e1-cubic", "@e2", "@e3", "@e4", "@e5", "@e6", "@e6-row-major"};
  return names;
}

/// Looks up a built-in tower; precision overrides the default when given.
inline TowerPtr builtin_tower(std::string_view name, std::optional<int> precision = std::nullopt) {
  const int n = precision.value_or(kDefaultPrecision);
  if (name == "@e1") return build_e1(n);
  if (name == "@e1-cubic") return build_e1(n, 3);
  if (name == "@e2") return build_q_commutative(3, {{1, 2}, {2, 1}}, n, "e2");
  if (name == "@e3") return build_e3(3, n);
  if (name == "@e4") return build_iwasawa_semidirect(IwasawaVariant::Dim3NonRigid, 3, n, "e4");
  if (name == "@e5") return build_iwasawa_semidirect(IwasawaVariant::Dim2OnePlusP, 3, n, "e5");
  if (name == "@e6") return build_quantum_matrix_2x2(5, 2, QuantumMatrixOrder::Antidiagonal, n, "e6");
  if (name == "@e6-row-major") {
    return build_quantum_matrix_2x2(5, 2, QuantumMatrixOrder::RowMajor, n, "e6-row-major");
  }
  throw Error(ErrorKind::InvalidOperand, "unknown built-in tower " + std::string(name));
}

}  // namespace skewtower
