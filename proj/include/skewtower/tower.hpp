#pragma once

// Construction and validation of ring towers, the example constructors, and
// stage quotients.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "skewtower/error.hpp"
#include "skewtower/linalg.hpp"
#include "skewtower/ring_tower.hpp"
#include "skewtower/series.hpp"

namespace skewtower {

struct StepValidation {
  std::string generator;
  int images_checked = 0;     // locality checks on s_j(x_t), d_j(x_t)
  int pairs_checked = 0;      // (u, t) relations checked for s and d consistency
  bool linear_part_invertible = false;
};

struct ValidationReport {
  std::string tower;
  int precision = 0;
  std::vector<StepValidation> steps;
};

/// Degree-1 coefficient matrix of s_j: entry (t, s) is the coefficient of x_s
/// in s_j(x_t).
inline Matrix sigma_linear_part(const RingTower& tower, int j) {
  Matrix m(tower.field(), j, j);
  for (int t = 0; t < j; ++t) {
    for (const auto& [mono, c] : tower.sigma_image(j, t)) {
      if (mono.degree() == 1) m.at(t, mono.first_generator()) = c;
    }
  }
  return m;
}

/// Checks locality, invertibility of the linear part of s_j and consistency
/// of s_j (multiplicative) and d_j (Leibniz) with the relations of the lower
/// ring, all modulo m^N. Throws on the first failure.
inline StepValidation validate_step(const TowerPtr& tower, int j) {
  const RingTower& t = *tower;
  const int n = t.precision();
  const std::string& name = t.generator_name(j);
  StepValidation out{name};

  for (int u = 0; u < j; ++u) {
    const std::string where = "step " + name + ", generator " + t.generator_name(u);
    const Terms& s = t.sigma_image(j, u);
    if (s.count(Monomial()) != 0) {
      throw Error(ErrorKind::NonLocalSigma, where + ": sigma image has a nonzero constant term");
    }
    const int vd = min_degree(t.delta_image(j, u), kInfiniteValuation);
    if (vd < 2 && n > vd) {
      throw Error(ErrorKind::NonLocalDelta, where + ": delta image has valuation " + std::to_string(vd) + " < 2");
    }
    ++out.images_checked;
  }

  if (!sigma_linear_part(t, j).is_invertible()) {
    throw Error(ErrorKind::SingularSigmaLinearPart, "step " + name + ": linear part of sigma is singular");
  }
  out.linear_part_invertible = true;

  for (int a = 0; a < j; ++a) {
    for (int b = a + 1; b < j; ++b) {
      // Relation x_b x_a = nf in the lower ring.
      const Series xa = Series::generator(tower, a);
      const Series xb = Series::generator(tower, b);
      const Series nf = xb * xa;
      const std::string where = "step " + name + ", pair (" + t.generator_name(b) + ", " + t.generator_name(a) + ")";

      const Series sa = apply_sigma(j, xa), sb = apply_sigma(j, xb);
      if (!(apply_sigma(j, nf) == sb * sa)) {
        throw Error(ErrorKind::InconsistentSigma, where + ": sigma does not respect the relation");
      }
      const Series da = apply_delta(j, xa), db = apply_delta(j, xb);
      if (!(apply_delta(j, nf) == db * xa + sb * da)) {
        throw Error(ErrorKind::InconsistentDelta, where + ": delta violates the Leibniz rule on the relation");
      }
      ++out.pairs_checked;
    }
  }
  return out;
}

inline ValidationReport validate_tower(const TowerPtr& tower) {
  ValidationReport report{tower->name(), tower->precision(), {}};
  for (int j = 0; j < tower->generator_count(); ++j) report.steps.push_back(validate_step(tower, j));
  return report;
}

/// Adjoins generators one at a time; images are given as series over the
/// tower built so far, and each new step is validated as it is added.
class TowerBuilder {
 public:
  using Images = std::vector<std::pair<std::string, Series>>;

  TowerBuilder(std::string name, FieldDescriptor field, int precision = kDefaultPrecision)
      : name_(std::move(name)), field_(field), precision_(precision) {
    current_ = std::make_shared<const RingTower>(name_, field_, steps_, precision_);
  }

  const TowerPtr& current() const noexcept { return current_; }
  int precision() const noexcept { return precision_; }
  const FieldDescriptor& field() const noexcept { return field_; }

  Series gen(std::string_view name) const { return Series::generator(current_, name); }
  Series constant(std::int64_t c) const { return Series::constant(current_, c); }
  Series constant(const Scalar& c) const { return Series::constant(current_, c); }

  TowerBuilder& adjoin(std::string name, const Images& sigma = {}, const Images& delta = {}) {
    SkewStep step{std::move(name), {}, {}};
    auto convert = [&](const Images& images, std::map<int, Terms>& into) {
      for (const auto& [gen, image] : images) {
        if (image.tower() != current_) throw Error(ErrorKind::TowerMismatch, "image built over another tower");
        if (image.precision() != precision_) throw Error(ErrorKind::PrecisionMismatch, "image precision");
        const int t = current_->generator_index(gen);
        if (t < 0) throw Error(ErrorKind::UseBeforeDeclaration, "generator " + gen + " is not declared");
        into[t] = image.terms();
      }
    };
    convert(sigma, step.sigma_images);
    convert(delta, step.delta_images);
    steps_.push_back(std::move(step));
    auto next = std::make_shared<const RingTower>(name_, field_, steps_, precision_);
    try {
      validate_step(next, static_cast<int>(steps_.size()) - 1);
    } catch (...) {
      steps_.pop_back();
      throw;
    }
    current_ = std::move(next);
    return *this;
  }

  TowerPtr build(std::optional<PresentationWindow> presentation = std::nullopt) const {
    if (!presentation) return current_;
    return std::make_shared<const RingTower>(name_, field_, steps_, precision_, std::move(presentation));
  }

 private:
  std::string name_;
  FieldDescriptor field_;
  int precision_;
  std::vector<SkewStep> steps_;
  TowerPtr current_;
};

/// k_q[[x_1..x_n]] with x_i x_j = q_ij x_j x_i; q must satisfy q_ii = 1 and
/// q_ij q_ji = 1 with all entries nonzero.
inline TowerPtr build_q_commutative(std::int64_t p, const std::vector<std::vector<std::int64_t>>& q,
                                    int precision = kDefaultPrecision, std::string name = "q-commutative") {
  const FieldDescriptor field = FieldDescriptor::prime(p);
  const int n = static_cast<int>(q.size());
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(q[static_cast<std::size_t>(i)].size()) != n) {
      throw Error(ErrorKind::NotAntisymmetric, "q must be square");
    }
  }
  auto entry = [&](int i, int j) { return Scalar(field, q[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]); };
  for (int i = 0; i < n; ++i) {
    if (!entry(i, i).is_one()) throw Error(ErrorKind::NotAntisymmetric, "q_ii must be 1");
    for (int j = 0; j < n; ++j) {
      if (entry(i, j).is_zero() || !(entry(i, j) * entry(j, i)).is_one()) {
        throw Error(ErrorKind::NotAntisymmetric,
                    "q_" + std::to_string(i + 1) + std::to_string(j + 1) + " q_" + std::to_string(j + 1) +
                        std::to_string(i + 1) + " != 1");
      }
    }
  }
  TowerBuilder b(std::move(name), field, precision);
  for (int j = 0; j < n; ++j) {
    TowerBuilder::Images sigma;
    for (int i = 0; i < j; ++i) {
      const std::string gi = "x" + std::to_string(i + 1);
      // x_j x_i = q_ji x_i x_j.
      if (!entry(j, i).is_one()) sigma.emplace_back(gi, entry(j, i) * b.gen(gi));
    }
    b.adjoin("x" + std::to_string(j + 1), sigma);
  }
  return b.build();
}

enum class QuantumMatrixOrder { RowMajor, Antidiagonal };

/// Completed O_q(M_2(k)) on generators a, b, c, d with
///   ab = qba, ac = qca, bc = cb, bd = qdb, cd = qdc, ad - da = (q - q^{-1}) bc,
/// adjoined in row-major order (a, b, c, d) or antidiagonal order (b, c, a, d).
inline TowerPtr build_quantum_matrix_2x2(std::int64_t p, std::int64_t q_value, QuantumMatrixOrder order,
                                         int precision = kDefaultPrecision, std::string name = "quantum-2x2") {
  const FieldDescriptor field = FieldDescriptor::prime(p);
  const Scalar q(field, q_value);
  if (q.is_zero()) throw Error(ErrorKind::InvalidScalar, "q must be nonzero");
  const Scalar q_inv = q.inverse();
  const Scalar lambda = q - q_inv;

  TowerBuilder b(std::move(name), field, precision);
  if (order == QuantumMatrixOrder::RowMajor) {
    b.adjoin("a");
    b.adjoin("b", {{"a", q_inv * b.gen("a")}});                              // ba = q^{-1} ab
    b.adjoin("c", {{"a", q_inv * b.gen("a")}});                              // ca = q^{-1} ac, cb = bc
    b.adjoin("d", {{"b", q_inv * b.gen("b")}, {"c", q_inv * b.gen("c")}},    // db = q^{-1} bd, dc = q^{-1} cd
             {{"a", (-lambda) * (b.gen("b") * b.gen("c"))}});                // da = ad - (q - q^{-1}) bc
  } else {
    b.adjoin("b");
    b.adjoin("c");                                                           // cb = bc
    b.adjoin("a", {{"b", q * b.gen("b")}, {"c", q * b.gen("c")}});           // ab = q ba, ac = q ca
    b.adjoin("d", {{"b", q_inv * b.gen("b")}, {"c", q_inv * b.gen("c")}},
             {{"a", (-lambda) * (b.gen("b") * b.gen("c"))}});
  }
  return b.build();
}

enum class IwasawaVariant {
  Dim2OnePlusP,     // Z_p x| Z_p, generator acting by 1 + p
  Dim3NonRigid,     // (Z_p^2) x| Z_p with x.y = y z^p, x.z = z y^{-p}, p = 3 mod 4
  Dim3Supersoluble  // same action with p = 1 mod 4
};

/// F_p-Iwasawa algebras of small semidirect products, written with X = x - 1,
/// Y = y - 1, Z = z - 1 and skew data s = conjugation by x, d = s - id.
inline TowerPtr build_iwasawa_semidirect(IwasawaVariant variant, std::int64_t p, int precision = kDefaultPrecision,
                                         std::string name = "") {
  const FieldDescriptor field = FieldDescriptor::prime(p);
  if (variant == IwasawaVariant::Dim2OnePlusP) {
    TowerBuilder b(name.empty() ? "iwasawa-dim2-" + std::to_string(p) : std::move(name), field, precision);
    b.adjoin("Y");
    const Series one = b.constant(1), y = b.gen("Y");
    const Series sigma_y = power(one + y, static_cast<int>(1 + p)) - one;
    b.adjoin("X", {{"Y", sigma_y}}, {{"Y", sigma_y - y}});
    return b.build();
  }

  if (variant == IwasawaVariant::Dim3NonRigid && p % 4 != 3) {
    throw Error(ErrorKind::BadPrimeCongruence, "the non-rigid example needs p = 3 mod 4");
  }
  if (variant == IwasawaVariant::Dim3Supersoluble && p % 4 != 1) {
    throw Error(ErrorKind::BadPrimeCongruence, "the supersoluble example needs p = 1 mod 4");
  }
  const std::string default_name =
      (variant == IwasawaVariant::Dim3NonRigid ? "iwasawa-dim3-nonrigid-" : "iwasawa-dim3-supersoluble-") +
      std::to_string(p);
  TowerBuilder b(name.empty() ? default_name : std::move(name), field, precision);
  b.adjoin("Y");
  b.adjoin("Z");
  const Series one = b.constant(1), y = b.gen("Y"), z = b.gen("Z");
  const int pp = static_cast<int>(p);
  Series sigma_y = one, sigma_z = one;
  if (variant == IwasawaVariant::Dim3NonRigid) {
    sigma_y = y + (one + y) * power(z, pp);
    sigma_z = z + power(series_inverse(one + y) - one, pp) * (one + z);
  } else {
    // Conjugates of y and z: y z^p and z y^{-p}.
    sigma_y = (one + y) * power(one + z, pp) - one;
    sigma_z = (one + z) * power(series_inverse(one + y), pp) - one;
  }
  b.adjoin("X", {{"Y", sigma_y}, {"Z", sigma_z}}, {{"Y", sigma_y - y}, {"Z", sigma_z - z}});
  return b.build();
}

namespace detail {
inline Terms kill_below(const Terms& image, int count) {
  Terms out;
  for (const auto& [m, c] : image) {
    if (m.below(count).is_one()) out.emplace(m.shifted_down(count), c);
  }
  return out;
}
}  // namespace detail

/// R / m_i R, where m_i is the maximal ideal of the subring on the first i
/// generators: a tower on x_{i+1}, ..., x_n with x_1, ..., x_i set to zero.
/// Requires m_i to be preserved by every later s_j and d_j.
inline TowerPtr quotient_by_stage(const TowerPtr& tower, int stage) {
  const RingTower& t = *tower;
  const int n = t.generator_count();
  if (stage < 0 || stage > n) throw Error(ErrorKind::InvalidOperand, "stage out of range");
  if (stage == 0) return tower;

  for (int j = stage; j < n; ++j) {
    for (int u = 0; u < stage; ++u) {
      for (const Terms* image : {&t.sigma_image(j, u), &t.delta_image(j, u)}) {
        if (!terms_involve_only_below(*image, stage)) {
          throw Error(ErrorKind::NotStableThroughStage,
                      "image of " + t.generator_name(u) + " under step " + t.generator_name(j) +
                          " leaves the subring on the first " + std::to_string(stage) + " generators");
        }
      }
    }
  }

  std::vector<SkewStep> steps;
  for (int j = stage; j < n; ++j) {
    SkewStep step{t.generator_name(j), {}, {}};
    for (int u = stage; u < j; ++u) {
      if (!t.sigma_is_identity_on(j, u)) step.sigma_images[u - stage] = detail::kill_below(t.sigma_image(j, u), stage);
      Terms d = detail::kill_below(t.delta_image(j, u), stage);
      if (!d.empty()) step.delta_images[u - stage] = std::move(d);
    }
    steps.push_back(std::move(step));
  }

  std::optional<PresentationWindow> window;
  const auto bounds = t.presentation().boundaries();
  for (std::size_t b = 0; b < bounds.size(); ++b) {
    if (bounds[b] == stage) {
      window = PresentationWindow{{t.presentation().block_sizes.begin() + static_cast<std::ptrdiff_t>(b),
                                   t.presentation().block_sizes.end()}};
    }
  }
  auto out = std::make_shared<const RingTower>(t.name() + "/m" + std::to_string(stage), t.field(), std::move(steps),
                                               t.precision(), window);
  validate_tower(out);
  return out;
}

/// R / (x_n) for a top step of automorphic type, where x_n R = R x_n; the
/// result is the tower on the first n - 1 generators.
inline TowerPtr quotient_by_top(const TowerPtr& tower) {
  const RingTower& t = *tower;
  const int n = t.generator_count();
  if (n == 0) throw Error(ErrorKind::InvalidOperand, "no top generator");
  for (int u = 0; u < n - 1; ++u) {
    if (!t.delta_image(n - 1, u).empty()) {
      throw Error(ErrorKind::NotPureAutomorphic, "top step " + t.generator_name(n - 1) + " has a nonzero delta on " +
                                                     t.generator_name(u) + "; (x_n) is not two-sided");
    }
  }
  std::vector<SkewStep> steps(t.steps().begin(), t.steps().end() - 1);
  auto out = std::make_shared<const RingTower>(t.name() + "/(" + t.generator_name(n - 1) + ")", t.field(),
                                               std::move(steps), t.precision());
  validate_tower(out);
  return out;
}

/// dim_k(m / m^2), computed from spans modulo m^3; also checks that taking
/// the constant term is multiplicative on generator-level test elements.
inline int residue_rank(const TowerPtr& tower) {
  if (tower->precision() < 3) throw Error(ErrorKind::PrecisionTooLow, "residue_rank needs precision >= 3");
  const int n = tower->generator_count();
  constexpr int kPrecision = 3;
  const FieldDescriptor& field = tower->field();

  SpanBasis maximal(field), square(field);
  std::vector<Series> gens;
  for (int t = 0; t < n; ++t) gens.push_back(Series::generator(tower, t, kPrecision));
  for (const auto& g : gens) maximal.insert(g.terms());
  for (const auto& g : gens) {
    for (const auto& h : gens) {
      const Series gh = g * h;
      maximal.insert(gh.terms());
      square.insert(gh.terms());
    }
  }

  // Residue projection onto k.
  std::vector<Series> probes{Series::one(tower, kPrecision)};
  for (int t = 0; t < n; ++t) {
    probes.push_back(Series::constant(tower, t + 2, kPrecision) + gens[static_cast<std::size_t>(t)]);
  }
  for (const auto& a : probes) {
    for (const auto& b : probes) {
      if (!((a * b).constant_term() == a.constant_term() * b.constant_term())) {
        throw Error(ErrorKind::ValidationError, "constant-term projection is not multiplicative");
      }
    }
  }
  return static_cast<int>(maximal.dimension() - square.dimension());
}

}  // namespace skewtower
