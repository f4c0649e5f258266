#include "sponge/moran.hpp"

#include <algorithm>

#include "sponge/classify.hpp"
#include "sponge/error.hpp"
#include "sponge/tree.hpp"

namespace sponge {

namespace {

SimpleIFSStats member_stats(const std::vector<AffineMap1D>& maps) {
  SimpleIFSStats s;
  s.count = maps.size();
  s.min_ratio = maps.front().ratio;
  s.max_ratio = maps.front().ratio;
  s.measure = Rational(0);
  for (const auto& m : maps) {
    s.min_ratio = min(s.min_ratio, m.ratio);
    s.max_ratio = max(s.max_ratio, m.ratio);
    s.measure += m.ratio;
  }
  s.biggest_gap = max(maps.front().image().lo, Rational(1) - maps.back().image().hi);
  for (std::size_t k = 0; k + 1 < maps.size(); ++k) {
    s.biggest_gap = max(s.biggest_gap, maps[k + 1].image().lo - maps[k].image().hi);
  }
  s.tiles = attractor_is_unit_interval(maps);
  return s;
}

}  // namespace

SimpleIFSFamily::SimpleIFSFamily(std::vector<std::vector<AffineMap1D>> members) : members_(std::move(members)) {
  if (members_.empty()) throw ArgumentError("components", "simple IFS family is empty");
  for (std::size_t j = 0; j < members_.size(); ++j) {
    auto& maps = members_[j];
    const std::string who = "family member " + std::to_string(j);
    if (maps.empty()) throw ArgumentError("components", who + " has no maps");
    for (const auto& m : maps) {
      if (!m.unit_preserving()) throw ArgumentError("components", who + ": map " + m.str() + " leaves [0,1]");
    }
    std::sort(maps.begin(), maps.end(), [](const AffineMap1D& a, const AffineMap1D& b) { return a.image() < b.image(); });
    for (std::size_t k = 0; k + 1 < maps.size(); ++k) {
      if (maps[k].image().hi > maps[k + 1].image().lo) {
        throw ArgumentError("components", who + ": images of " + maps[k].str() + " and " + maps[k + 1].str() + " overlap");
      }
    }
    stats_.push_back(member_stats(maps));
  }
}

Rational SimpleIFSFamily::min_ratio() const {
  Rational r = stats_.front().min_ratio;
  for (const auto& s : stats_) r = min(r, s.min_ratio);
  return r;
}

Rational SimpleIFSFamily::max_ratio() const {
  Rational r = stats_.front().max_ratio;
  for (const auto& s : stats_) r = max(r, s.max_ratio);
  return r;
}

Rational SimpleIFSFamily::max_measure() const {
  Rational r = stats_.front().measure;
  for (const auto& s : stats_) r = max(r, s.measure);
  return r;
}

std::size_t SimpleIFSFamily::max_count() const {
  std::size_t n = 0;
  for (const auto& s : stats_) n = std::max(n, s.count);
  return n;
}

Rational SimpleIFSFamily::gap_lower_bound() const {
  return (Rational(1) - max_measure()) / Rational(static_cast<long long>(max_count() + 2));
}

bool SimpleIFSFamily::has_unit_interval_member() const {
  return std::any_of(stats_.begin(), stats_.end(), [](const SimpleIFSStats& s) { return s.tiles; });
}

PreMoranSet pre_moran_intervals(const SimpleIFSFamily& family, std::span<const std::size_t> word, std::size_t cap) {
  std::size_t count = 1;
  for (auto i : word) {
    if (i >= family.size()) {
      throw ArgumentError("components", "member index " + std::to_string(i) + " out of range for a family of " +
                                            std::to_string(family.size()));
    }
    count *= family.stats(i).count;
    if (count > cap) {
      throw ResourceError("components", "pre-Moran set exceeds the cap of " + std::to_string(cap) + " intervals");
    }
  }
  std::vector<Interval> current{unit_interval()};
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    std::vector<Interval> next;
    next.reserve(current.size() * family.stats(*it).count);
    for (const auto& f : family.member(*it)) {
      for (const auto& iv : current) next.push_back(f.image(iv));
    }
    current = std::move(next);
  }
  std::sort(current.begin(), current.end());
  return {{word.begin(), word.end()}, std::move(current)};
}

MoranBoundReport check_moran_bound(const SimpleIFSFamily& family, std::span<const std::size_t> word,
                                   const Rational& delta, std::size_t cap) {
  if (family.has_unit_interval_member()) {
    throw ValidationError("components", "family has a member whose attractor is [0,1]");
  }
  if (delta.sign() <= 0) throw MathError("delta must be positive, got " + delta.str());
  const auto set = pre_moran_intervals(family, word, cap);
  const Rational alpha = family.min_ratio(), g = family.gap_lower_bound();
  Rational beta_product(1);
  for (auto i : word) beta_product *= family.stats(i).max_ratio;

  MoranBoundReport r;
  r.threshold = g / alpha * beta_product;
  r.admissible = delta >= r.threshold;
  r.bound = (Rational(2) / (g * alpha) + Rational(1)) * delta;
  // Basic intervals are sorted and disjoint, so components are maximal runs
  // with consecutive gaps <= delta.
  Rational start = set.intervals.front().lo, best(0);
  for (std::size_t k = 0; k < set.intervals.size(); ++k) {
    if (k > 0 && set.intervals[k].lo - set.intervals[k - 1].hi > delta) start = set.intervals[k].lo;
    best = max(best, set.intervals[k].hi - start);
  }
  r.max_component_diam = best;
  r.holds = best <= r.bound;
  return r;
}

SimpleIFSFamily top_fiber_family(const SpongeIFS& ifs) {
  if (ifs.dim() < 2) throw ArgumentError("components", "the fiber family needs dimension >= 2");
  const SpongeIFS proj = major_projection(ifs, ifs.dim() - 1);
  std::vector<std::vector<AffineMap1D>> members;
  for (const auto& m : proj.maps()) members.push_back(fiber_labels(ifs, m.coords));
  return SimpleIFSFamily(std::move(members));
}

ProductDecompositionReport check_product_decomposition(const SpongeIFS& ifs, std::size_t k, std::size_t cap) {
  if (ifs.dim() < 2) throw ArgumentError("components", "product decomposition needs dimension >= 2");
  require_lg(ifs);
  auto lhs = cylinder_boxes(ifs, k, cap);
  const SpongeIFS proj = major_projection(ifs, ifs.dim() - 1);
  const SimpleIFSFamily family = top_fiber_family(ifs);
  const auto projected = cylinder_boxes(proj, k, cap);

  std::vector<Box> rhs;
  Word word(k, 0);
  for (std::size_t idx = 0; idx < projected.size(); ++idx) {
    // Decode idx into the lexicographic word matching cylinder_boxes order.
    std::size_t rest = idx;
    for (std::size_t pos = k; pos-- > 0;) {
      word[pos] = rest % proj.size();
      rest /= proj.size();
    }
    for (const auto& iv : pre_moran_intervals(family, word, cap).intervals) {
      Box b = projected[idx];
      b.sides.push_back(iv);
      rhs.push_back(std::move(b));
      if (rhs.size() > cap) throw ResourceError("components", "product side exceeds the cap of " + std::to_string(cap));
    }
  }
  ProductDecompositionReport r;
  std::sort(lhs.begin(), lhs.end());
  lhs.erase(std::unique(lhs.begin(), lhs.end()), lhs.end());
  std::sort(rhs.begin(), rhs.end());
  rhs.erase(std::unique(rhs.begin(), rhs.end()), rhs.end());
  r.cylinder_count = lhs.size();
  r.product_count = rhs.size();
  r.equal = lhs == rhs;
  return r;
}

}  // namespace sponge
