#pragma once

// Two-sided ideals modulo m^N, (s, d)-ideal and stability checks, and the
// degree-one obstruction search for stable presentations of length n.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "skewtower/error.hpp"
#include "skewtower/linalg.hpp"
#include "skewtower/ring_tower.hpp"
#include "skewtower/series.hpp"

namespace skewtower {

/// The image of a two-sided ideal of the prefix subring on the first
/// `ambient` generators in that subring modulo m^N.
class TruncatedIdeal {
 public:
  TruncatedIdeal(TowerPtr tower, int precision, int ambient, std::vector<Series> generators, SpanBasis basis)
      : tower_(std::move(tower)),
        precision_(precision),
        ambient_(ambient),
        generators_(std::move(generators)),
        basis_(std::move(basis)) {}

  const TowerPtr& tower() const noexcept { return tower_; }
  int precision() const noexcept { return precision_; }
  int ambient() const noexcept { return ambient_; }
  const std::vector<Series>& generators() const noexcept { return generators_; }
  std::size_t dimension() const noexcept { return basis_.dimension(); }

  /// Row-reduced basis of the image in degrees <= d.
  std::vector<Terms> basis_by_degree(int d) const { return basis_.basis_up_to_degree(d); }

  bool contains(const Series& a) const {
    if (a.precision() != precision_) {
      throw Error(ErrorKind::PrecisionMismatch,
                  "ideal at precision " + std::to_string(precision_) + ", element at " + std::to_string(a.precision()));
    }
    if (a.tower() != tower_) throw Error(ErrorKind::TowerMismatch, "element of another tower");
    return basis_.contains(a.terms());
  }

 private:
  TowerPtr tower_;
  int precision_;
  int ambient_;
  std::vector<Series> generators_;
  SpanBasis basis_;
};

/// Saturates span(gens) under left and right multiplication by the
/// generators x_1..x_ambient. ambient defaults to the whole tower.
inline TruncatedIdeal ideal_closure(const TowerPtr& tower, const std::vector<Series>& gens, int precision,
                                    std::optional<int> ambient = std::nullopt) {
  const int amb = ambient.value_or(tower->generator_count());
  if (amb < 0 || amb > tower->generator_count()) throw Error(ErrorKind::InvalidOperand, "ambient out of range");
  if (precision < 1 || precision > tower->precision()) {
    throw Error(ErrorKind::PrecisionMismatch, "closure precision outside the tower's range");
  }
  std::vector<Series> generators;
  for (const auto& g : gens) {
    if (g.tower() != tower) throw Error(ErrorKind::TowerMismatch, "ideal generator from another tower");
    if (g.precision() < precision) throw Error(ErrorKind::PrecisionMismatch, "ideal generator precision too low");
    if (!terms_involve_only_below(g.terms(), amb)) {
      throw Error(ErrorKind::InvalidOperand, "ideal generator outside the ambient subring");
    }
    generators.push_back(g.truncated(precision));
  }

  std::vector<Series> xs;
  for (int t = 0; t < amb; ++t) xs.push_back(Series::generator(tower, t, precision));

  SpanBasis basis(tower->field());
  std::vector<Series> queue;
  for (const auto& g : generators) {
    if (basis.insert(g.terms())) queue.push_back(g);
  }
  while (!queue.empty()) {
    const Series v = queue.back();
    queue.pop_back();
    for (const auto& x : xs) {
      for (const Series& w : {x * v, v * x}) {
        if (!w.is_zero() && basis.insert(w.terms())) queue.push_back(w);
      }
    }
  }
  return TruncatedIdeal(tower, precision, amb, std::move(generators), std::move(basis));
}

inline bool ideal_contains(const TruncatedIdeal& ideal, const Series& a) { return ideal.contains(a); }

enum class ImageKind { Sigma, Delta };

inline std::string to_string(ImageKind k) { return k == ImageKind::Sigma ? "sigma" : "delta"; }

struct IdealWitness {
  int generator = 0;  // index into the ideal's generators, or the tower generator for stability
  ImageKind kind = ImageKind::Sigma;
  Series image;
  std::string reason;
};

struct IdealVerdict {
  bool holds = true;  // up to the ideal's precision
  std::optional<IdealWitness> witness;
};

/// Whether s_j(I) and d_j(I) lie in I, checked on the generators of I and on
/// the generators of its ambient subring (which s_j, d_j must preserve for
/// the generator-level check to be sufficient).
inline IdealVerdict is_sigma_delta_ideal(const TruncatedIdeal& ideal, int j) {
  const TowerPtr& tower = ideal.tower();
  if (j < 0 || j >= tower->generator_count()) throw Error(ErrorKind::InvalidOperand, "no such step");
  if (ideal.ambient() > j) throw Error(ErrorKind::InvalidOperand, "ideal must live below the step");
  const int n = ideal.precision();

  for (int t = 0; t < ideal.ambient(); ++t) {
    const Series x = Series::generator(tower, t, n);
    for (ImageKind kind : {ImageKind::Sigma, ImageKind::Delta}) {
      Series image = kind == ImageKind::Sigma ? apply_sigma(j, x) : apply_delta(j, x);
      if (!terms_involve_only_below(image.terms(), ideal.ambient())) {
        return {false, IdealWitness{t, kind, std::move(image), "image of an ambient generator leaves the subring"}};
      }
    }
  }
  for (std::size_t g = 0; g < ideal.generators().size(); ++g) {
    const Series& gen = ideal.generators()[g];
    for (ImageKind kind : {ImageKind::Sigma, ImageKind::Delta}) {
      Series image = kind == ImageKind::Sigma ? apply_sigma(j, gen) : apply_delta(j, gen);
      if (!ideal.contains(image)) {
        return {false, IdealWitness{static_cast<int>(g), kind, std::move(image), "image not in the ideal"}};
      }
    }
  }
  return {true, std::nullopt};
}

struct StabilityPair {
  int i = 0;  // stage, 1-based; R_i is generated by the first b_i generators
  int j = 0;  // stage, 1-based, i < j
  bool holds = true;
  std::optional<IdealWitness> witness;  // generator = tower generator index
  std::string step;                     // generator of the step where it fails
};

struct StabilityReport {
  PresentationWindow presentation;
  int precision = 0;
  std::vector<StabilityPair> pairs;

  bool stable() const {
    return std::all_of(pairs.begin(), pairs.end(), [](const StabilityPair& p) { return p.holds; });
  }
};

/// Checks that the maximal ideal of every stage R_i is preserved by the skew
/// data of every later stage. Since images have no constant term, this is
/// membership of s(x_t), d(x_t) in the subring R_i for each generator x_t of R_i.
inline StabilityReport check_presentation_stability(const TowerPtr& tower,
                                                    std::optional<PresentationWindow> window = std::nullopt) {
  const RingTower& t = *tower;
  StabilityReport report{window.value_or(t.presentation()), t.precision(), {}};
  const auto bounds = report.presentation.boundaries();
  if (bounds.back() != t.generator_count()) {
    throw Error(ErrorKind::InvalidOperand, "presentation does not match the generator count");
  }
  const int len = report.presentation.length();
  for (int i = 1; i < len; ++i) {
    const int bi = bounds[static_cast<std::size_t>(i)];
    for (int j = i + 1; j <= len; ++j) {
      StabilityPair pair{i, j, true, std::nullopt, {}};
      for (int step = bounds[static_cast<std::size_t>(j - 1)]; step < bounds[static_cast<std::size_t>(j)] && pair.holds;
           ++step) {
        for (int u = 0; u < bi && pair.holds; ++u) {
          for (ImageKind kind : {ImageKind::Sigma, ImageKind::Delta}) {
            const Terms& image = kind == ImageKind::Sigma ? t.sigma_image(step, u) : t.delta_image(step, u);
            if (!terms_involve_only_below(image, bi)) {
              pair.holds = false;
              pair.step = t.generator_name(step);
              pair.witness = IdealWitness{u, kind, Series(tower, t.precision(), image),
                                          "image not in the maximal ideal of R_" + std::to_string(i)};
              break;
            }
          }
        }
      }
      report.pairs.push_back(std::move(pair));
    }
  }
  return report;
}

struct DefectReport {
  int defect = 0;
  bool abelian = false;  // every s is the identity and every d is zero
};

/// d = min over steps j and t < j of min(v(s_j(x_t) - x_t) + 1, v(d_j(x_t))) - 2,
/// clamped at 0. For an abelian tower all commutators vanish and d is
/// reported as max(0, N - 3).
inline DefectReport commutator_defect(const TowerPtr& tower) {
  const RingTower& t = *tower;
  long best = kInfiniteValuation;
  for (int j = 0; j < t.generator_count(); ++j) {
    for (int u = 0; u < j; ++u) {
      Terms diff = t.sigma_image(j, u);
      add_term(diff, Monomial::generator(u), -Scalar::one(t.field()));
      const int vs = min_degree(diff, kInfiniteValuation);
      const int vd = min_degree(t.delta_image(j, u), kInfiniteValuation);
      if (vs != kInfiniteValuation) best = std::min<long>(best, vs + 1L);
      if (vd != kInfiniteValuation) best = std::min<long>(best, vd);
    }
  }
  if (best == kInfiniteValuation) return {std::max(0, t.precision() - 3), true};
  return {static_cast<int>(std::max(0L, best - 2)), false};
}

enum class RigidityVerdict { RigidByExhibitedPresentation, NotRigidCertified, Inconclusive };

inline std::string to_string(RigidityVerdict v) {
  switch (v) {
    case RigidityVerdict::RigidByExhibitedPresentation: return "RIGID_BY_EXHIBITED_PRESENTATION";
    case RigidityVerdict::NotRigidCertified: return "NOT_RIGID_CERTIFIED";
    case RigidityVerdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

using ProjectiveVector = std::vector<std::int64_t>;

struct SecondStageSurvivor {
  ProjectiveVector t;
  std::int64_t eta = 0;
  std::int64_t theta = 0;
};

struct SecondStageResult {
  ProjectiveVector s;
  std::vector<SecondStageSurvivor> survivors;
};

struct ObstructionReport {
  int defect = 0;
  bool abelian = false;
  int truncation_order = 0;
  std::vector<ProjectiveVector> stage1_survivors;
  bool stage2_run = false;
  std::vector<SecondStageResult> stage2;
  RigidityVerdict verdict = RigidityVerdict::Inconclusive;
};

namespace detail {

/// Nonzero vectors of F_p^n whose first nonzero entry is 1, in lexicographic order.
inline std::vector<ProjectiveVector> projective_points(std::int64_t p, int n) {
  std::vector<ProjectiveVector> out;
  for (int lead = 0; lead < n; ++lead) {
    ProjectiveVector v(static_cast<std::size_t>(n), 0);
    v[static_cast<std::size_t>(lead)] = 1;
    const int free = n - lead - 1;
    std::int64_t count = 1;
    for (int k = 0; k < free; ++k) count *= p;
    for (std::int64_t code = 0; code < count; ++code) {
      std::int64_t c = code;
      for (int k = n - 1; k > lead; --k) {
        v[static_cast<std::size_t>(k)] = c % p;
        c /= p;
      }
      out.push_back(v);
    }
  }
  return out;
}

inline Series linear_form(const TowerPtr& tower, const ProjectiveVector& v, int precision) {
  Terms terms;
  for (int t = 0; t < static_cast<int>(v.size()); ++t) {
    add_term(terms, Monomial::generator(t), Scalar(tower->field(), v[static_cast<std::size_t>(t)]));
  }
  return Series(tower, precision, std::move(terms));
}

inline void require_prime_field(const RingTower& t) {
  if (!t.field().is_prime_field()) {
    throw Error(ErrorKind::UnsupportedField, "the obstruction search needs a finite prime field");
  }
}

}  // namespace detail

/// Stage 1: projective degree-one vectors l such that, with s = sum l_t x_t,
/// every commutator g s - s g (g a generator) is congruent to s * alpha mod m^K
/// for some alpha of valuation >= v(g s - s g) - 1, where K = 3 + defect.
inline ObstructionReport degree_one_obstruction(const TowerPtr& tower) {
  const RingTower& t = *tower;
  detail::require_prime_field(t);
  const DefectReport defect = commutator_defect(tower);
  ObstructionReport report;
  report.defect = defect.defect;
  report.abelian = defect.abelian;
  report.truncation_order = 3 + defect.defect;
  const int k = report.truncation_order;
  if (k > t.precision()) {
    throw Error(ErrorKind::PrecisionTooLow, "truncation order " + std::to_string(k) + " exceeds precision " +
                                                std::to_string(t.precision()));
  }
  const int n = t.generator_count();
  std::vector<Series> gens;
  for (int u = 0; u < n; ++u) gens.push_back(Series::generator(tower, u, k));

  for (const auto& ell : detail::projective_points(t.field().characteristic(), n)) {
    const Series s = detail::linear_form(tower, ell, k);
    bool survives = true;
    for (const auto& g : gens) {
      const Series c = g * s - s * g;
      if (c.is_zero()) continue;
      const int w = valuation_m_adic(c);
      SpanBasis span(t.field());
      for (const auto& m : monomials_in_range(n, std::max(0, w - 1), k - 2)) {
        span.insert((s * Series::monomial(tower, m, k)).terms());
      }
      if (!span.contains(c.terms())) {
        survives = false;
        break;
      }
    }
    if (survives) report.stage1_survivors.push_back(ell);
  }
  if (report.stage1_survivors.empty()) report.verdict = RigidityVerdict::NotRigidCertified;
  return report;
}

/// Stage 2 for a stage-1 survivor s: projective t not proportional to s such
/// that t s - eta s t - theta s^2 = 0 mod m^3 for some eta != 0 and theta.
inline SecondStageResult second_stage_obstruction(const TowerPtr& tower, const ProjectiveVector& s_vec) {
  const RingTower& t = *tower;
  detail::require_prime_field(t);
  if (static_cast<int>(s_vec.size()) != t.generator_count()) {
    throw Error(ErrorKind::InvalidOperand, "vector length must equal the generator count");
  }
  const DefectReport defect = commutator_defect(tower);
  if (defect.defect != 0) {
    throw Error(ErrorKind::DefectNonZero, "stage 2 runs only at defect 0 (defect is " +
                                              std::to_string(defect.defect) + ")");
  }
  constexpr int kOrder = 3;
  if (t.precision() < kOrder) throw Error(ErrorKind::PrecisionTooLow, "stage 2 needs precision >= 3");
  const std::int64_t p = t.field().characteristic();
  const FieldDescriptor& field = t.field();
  const Series s = detail::linear_form(tower, s_vec, kOrder);
  const Series ss = s * s;

  // Normalise s so proportional vectors compare equal.
  ProjectiveVector s_norm = s_vec;
  {
    Scalar lead = Scalar::zero(field);
    for (auto c : s_vec) {
      if (Scalar(field, c).is_zero()) continue;
      lead = Scalar(field, c).inverse();
      break;
    }
    if (lead.is_zero()) throw Error(ErrorKind::InvalidOperand, "zero vector");
    for (auto& c : s_norm) c = (lead * Scalar(field, c)).numerator();
  }

  SecondStageResult result{s_norm, {}};
  for (const auto& ell : detail::projective_points(p, t.generator_count())) {
    if (ell == s_norm) continue;
    const Series tt = detail::linear_form(tower, ell, kOrder);
    const Series ts = tt * s, st = s * tt;
    std::optional<SecondStageSurvivor> found;
    for (std::int64_t eta = 1; eta < p && !found; ++eta) {
      for (std::int64_t theta = 0; theta < p && !found; ++theta) {
        if ((ts - st.scaled(Scalar(field, eta)) - ss.scaled(Scalar(field, theta))).is_zero()) {
          found = SecondStageSurvivor{ell, eta, theta};
        }
      }
    }
    if (found) result.survivors.push_back(*found);
  }
  return result;
}

/// Stage 1, followed by stage 2 for every survivor when the defect is 0.
/// NOT_RIGID_CERTIFIED when no stage-1 survivor exists, or when no survivor
/// admits an independent partner in stage 2.
inline ObstructionReport obstruction_search(const TowerPtr& tower) {
  ObstructionReport report = degree_one_obstruction(tower);
  if (report.verdict == RigidityVerdict::NotRigidCertified || report.defect != 0) return report;
  report.stage2_run = true;
  bool all_dependent = true;
  for (const auto& ell : report.stage1_survivors) {
    report.stage2.push_back(second_stage_obstruction(tower, ell));
    if (!report.stage2.back().survivors.empty()) all_dependent = false;
  }
  report.verdict = all_dependent ? RigidityVerdict::NotRigidCertified : RigidityVerdict::Inconclusive;
  return report;
}

/// Positive verdict only from an exhibited stable presentation of length n
/// (the declared generator order); otherwise the obstruction search.
inline ObstructionReport rigidity_report(const TowerPtr& tower) {
  const int n = tower->generator_count();
  if (check_presentation_stability(tower, PresentationWindow::saturated(n)).stable()) {
    ObstructionReport report;
    const DefectReport d = commutator_defect(tower);
    report.defect = d.defect;
    report.abelian = d.abelian;
    report.truncation_order = 3 + d.defect;
    report.verdict = RigidityVerdict::RigidByExhibitedPresentation;
    return report;
  }
  return obstruction_search(tower);
}

}  // namespace skewtower
