#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sponge/components.hpp"
#include "sponge/ifs.hpp"

namespace sponge {

struct SimpleIFSStats {
  Rational min_ratio;    // alpha_j
  Rational max_ratio;    // beta_j
  Rational measure;      // L_j, Lebesgue measure of F_j([0,1])
  std::size_t count = 0; // N_j
  Rational biggest_gap;  // g_j, largest gap of F_j([0,1]) together with {0,1}
  bool tiles = false;
};

/// Finite family F_1..F_p of simple IFS on [0,1]. Members are sorted by image.
class SimpleIFSFamily {
 public:
  /// Throws ArgumentError unless every member is non-empty, maps [0,1] into
  /// itself and has non-overlapping images.
  explicit SimpleIFSFamily(std::vector<std::vector<AffineMap1D>> members);

  std::size_t size() const { return members_.size(); }
  const std::vector<AffineMap1D>& member(std::size_t j) const { return members_.at(j); }
  const SimpleIFSStats& stats(std::size_t j) const { return stats_.at(j); }

  Rational min_ratio() const;      // alpha_*
  Rational max_ratio() const;      // beta^*
  Rational max_measure() const;    // L^*
  std::size_t max_count() const;   // N^*
  /// g_* = (1 - L^*) / (N^* + 2), a lower bound for every g_j.
  Rational gap_lower_bound() const;
  bool has_unit_interval_member() const;

 private:
  std::vector<std::vector<AffineMap1D>> members_;
  std::vector<SimpleIFSStats> stats_;
};

struct PreMoranSet {
  std::vector<std::size_t> word;
  std::vector<Interval> intervals;  // basic intervals, sorted
};

/// F_{i_1} o ... o F_{i_k}([0,1]). ResourceError when the interval count
/// exceeds `cap`.
PreMoranSet pre_moran_intervals(const SimpleIFSFamily& family, std::span<const std::size_t> word,
                                std::size_t cap = kDefaultObjectCap);

struct MoranBoundReport {
  bool admissible = false;
  Rational threshold;            // (g_* / alpha_*) prod beta_{i_j}
  Rational bound;                // (2 / (g_* alpha_*) + 1) delta
  Rational max_component_diam;
  bool holds = false;
};

/// Component-diameter bound for a pre-Moran set. Throws ValidationError if a
/// family member tiles [0,1].
MoranBoundReport check_moran_bound(const SimpleIFSFamily& family, std::span<const std::size_t> word,
                                   const Rational& delta, std::size_t cap = kDefaultObjectCap);

/// Fiber IFS of every vertex of the (d-1)-th major projection, in its order.
SimpleIFSFamily top_fiber_family(const SpongeIFS& ifs);

struct ProductDecompositionReport {
  bool equal = false;
  std::size_t cylinder_count = 0;
  std::size_t product_count = 0;
};

/// Compares the level-k cylinder boxes with the union of projected cylinders
/// times pre-Moran intervals of the top fiber family. Needs d >= 2.
ProductDecompositionReport check_product_decomposition(const SpongeIFS& ifs, std::size_t k,
                                                       std::size_t cap = kDefaultObjectCap);

}  // namespace sponge
