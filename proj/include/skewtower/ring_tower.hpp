#pragma once

// Data model of an iterated local skew power series ring
//   R = k[[x_1; s_1, d_1]] ... [[x_n; s_n, d_n]].
// Step j stores the images s_j(x_t) and d_j(x_t) of the earlier generators
// t < j; everything else is obtained by extension (see series.hpp).

#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "skewtower/error.hpp"
#include "skewtower/monomial.hpp"
#include "skewtower/scalars.hpp"

namespace skewtower {

inline constexpr int kDefaultPrecision = 8;

struct SkewStep {
  std::string generator_name;
  /// Keyed by earlier generator index; an omitted entry means identity.
  std::map<int, Terms> sigma_images;
  /// Keyed by earlier generator index; an omitted entry means zero.
  std::map<int, Terms> delta_images;
};

/// Block sizes (d_1, ..., d_l) of a presentation R_0 < R_1 < ... < R_l = R.
struct PresentationWindow {
  std::vector<int> block_sizes;

  static PresentationWindow saturated(int n) { return {std::vector<int>(static_cast<std::size_t>(n), 1)}; }

  int length() const noexcept { return static_cast<int>(block_sizes.size()); }
  bool is_saturated() const {
    for (int d : block_sizes) {
      if (d != 1) return false;
    }
    return true;
  }
  /// Prefix sums 0 = b_0 < b_1 < ... < b_l = n.
  std::vector<int> boundaries() const {
    std::vector<int> out{0};
    for (int d : block_sizes) out.push_back(out.back() + d);
    return out;
  }
  friend bool operator==(const PresentationWindow&, const PresentationWindow&) = default;
};

class RingTower;
using TowerPtr = std::shared_ptr<const RingTower>;

namespace detail {

struct CacheKey {
  int precision;
  int step;
  Monomial mono;
  friend bool operator==(const CacheKey&, const CacheKey&) = default;
};

struct CacheKeyHash {
  std::size_t operator()(const CacheKey& k) const noexcept {
    return k.mono.hash() ^ (static_cast<std::size_t>(k.precision) * 0x9e3779b97f4a7c15ull) ^
           (static_cast<std::size_t>(k.step) << 17);
  }
};

/// Memo tables for the rewriting engine. Entries are never erased, so
/// references into the maps stay valid; lookups and inserts are guarded.
struct EngineCache {
  using Table = std::unordered_map<CacheKey, Terms, CacheKeyHash>;
  std::mutex mutex;
  Table gen_times;  // x_j * x^gamma
  Table sigma;      // s_j(x^gamma), gamma below j
  Table delta;      // d_j(x^gamma), gamma below j

  const Terms* find(const Table& table, const CacheKey& key) {
    std::lock_guard lock(mutex);
    auto it = table.find(key);
    return it == table.end() ? nullptr : &it->second;
  }
  const Terms* insert(Table& table, const CacheKey& key, Terms value) {
    std::lock_guard lock(mutex);
    return &table.try_emplace(key, std::move(value)).first->second;
  }
};

}  // namespace detail

/// An immutable ring tower. Construction checks only structure (indices,
/// fields, precision); mathematical validity is checked by validate_tower.
class RingTower {
 public:
  RingTower(std::string name, FieldDescriptor field, std::vector<SkewStep> steps,
            int precision = kDefaultPrecision, std::optional<PresentationWindow> presentation = std::nullopt)
      : name_(std::move(name)),
        field_(field),
        steps_(std::move(steps)),
        precision_(precision),
        cache_(std::make_unique<detail::EngineCache>()) {
    const int n = generator_count();
    if (n > kMaxGenerators) {
      throw Error(ErrorKind::InvalidOperand, "at most " + std::to_string(kMaxGenerators) + " generators");
    }
    if (precision_ < 1 || precision_ > kMaxPrecision) {
      throw Error(ErrorKind::InvalidOperand, "precision must lie in [1, " + std::to_string(kMaxPrecision) + "]");
    }
    presentation_ = presentation.value_or(PresentationWindow::saturated(n));
    for (int d : presentation_.block_sizes) {
      if (d < 1) throw Error(ErrorKind::InvalidOperand, "presentation blocks must be positive");
    }
    const int total = std::accumulate(presentation_.block_sizes.begin(), presentation_.block_sizes.end(), 0);
    if (total != n) {
      throw Error(ErrorKind::InvalidOperand, "presentation block sizes must sum to the generator count");
    }

    sigma_.resize(static_cast<std::size_t>(n));
    delta_.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      auto& step = steps_[static_cast<std::size_t>(j)];
      if (step.generator_name.empty()) throw Error(ErrorKind::InvalidOperand, "empty generator name");
      for (int u = 0; u < j; ++u) {
        if (steps_[static_cast<std::size_t>(u)].generator_name == step.generator_name) {
          throw Error(ErrorKind::InvalidOperand, "duplicate generator " + step.generator_name);
        }
      }
      auto& sig = sigma_[static_cast<std::size_t>(j)];
      auto& del = delta_[static_cast<std::size_t>(j)];
      sig.resize(static_cast<std::size_t>(j));
      del.resize(static_cast<std::size_t>(j));
      for (int t = 0; t < j; ++t) {
        sig[static_cast<std::size_t>(t)] = {{Monomial::generator(t), Scalar::one(field_)}};
      }
      auto check_image = [&](int t, const Terms& image, const char* what) {
        if (t < 0 || t >= j) {
          throw Error(ErrorKind::InvalidOperand, std::string(what) + " image of step " + step.generator_name +
                                                     " names a generator that is not earlier");
        }
        for (const auto& [m, c] : image) {
          if (!m.involves_only_below(j)) {
            throw Error(ErrorKind::InvalidOperand, std::string(what) + " image of step " + step.generator_name +
                                                       " involves a later generator");
          }
          if (!(c.field() == field_)) throw Error(ErrorKind::FieldMismatch, "image coefficient field");
        }
      };
      for (auto& [t, image] : step.sigma_images) {
        check_image(t, image, "sigma");
        image = truncate_terms(image, precision_);
        sig[static_cast<std::size_t>(t)] = image;
      }
      for (auto& [t, image] : step.delta_images) {
        check_image(t, image, "delta");
        image = truncate_terms(image, precision_);
        del[static_cast<std::size_t>(t)] = image;
      }
    }
  }

  RingTower(const RingTower&) = delete;
  RingTower& operator=(const RingTower&) = delete;

  const std::string& name() const noexcept { return name_; }
  const FieldDescriptor& field() const noexcept { return field_; }
  int generator_count() const noexcept { return static_cast<int>(steps_.size()); }
  int precision() const noexcept { return precision_; }
  const std::vector<SkewStep>& steps() const noexcept { return steps_; }
  const SkewStep& step(int j) const { return steps_.at(static_cast<std::size_t>(j)); }
  const PresentationWindow& presentation() const noexcept { return presentation_; }

  const std::string& generator_name(int t) const { return step(t).generator_name; }

  /// Index of a generator by name, or -1.
  int generator_index(std::string_view name) const {
    for (int t = 0; t < generator_count(); ++t) {
      if (steps_[static_cast<std::size_t>(t)].generator_name == name) return t;
    }
    return -1;
  }

  /// s_j(x_t) for t < j, truncated at the tower precision.
  const Terms& sigma_image(int j, int t) const {
    return sigma_.at(static_cast<std::size_t>(j)).at(static_cast<std::size_t>(t));
  }
  /// d_j(x_t) for t < j, truncated at the tower precision.
  const Terms& delta_image(int j, int t) const {
    return delta_.at(static_cast<std::size_t>(j)).at(static_cast<std::size_t>(t));
  }

  bool sigma_is_identity_on(int j, int t) const {
    const Terms& image = sigma_image(j, t);
    return image.size() == 1 && image.begin()->first == Monomial::generator(t) && image.begin()->second.is_one();
  }

  /// All delta images vanish (pure automorphic type).
  bool is_pure_automorphic() const {
    for (int j = 0; j < generator_count(); ++j) {
      for (int t = 0; t < j; ++t) {
        if (!delta_image(j, t).empty()) return false;
      }
    }
    return true;
  }

  detail::EngineCache& cache() const { return *cache_; }

 private:
  std::string name_;
  FieldDescriptor field_;
  std::vector<SkewStep> steps_;
  int precision_;
  PresentationWindow presentation_;
  std::vector<std::vector<Terms>> sigma_;
  std::vector<std::vector<Terms>> delta_;
  std::unique_ptr<detail::EngineCache> cache_;
};

}  // namespace skewtower
