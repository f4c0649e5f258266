#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sponge/ifs.hpp"

namespace sponge {

/// Default cap on enumerated objects (cylinders, intervals, pairs of words).
inline constexpr std::size_t kDefaultObjectCap = 200000;

/// Finite set of points in R^d with duplicates removed (first occurrence kept).
class PointSet {
 public:
  explicit PointSet(std::vector<Point> points);

  const std::vector<Point>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const Point& operator[](std::size_t i) const { return points_[i]; }

 private:
  std::vector<Point> points_;
};

Rational distance_sq(const Point& a, const Point& b);
/// Squared Euclidean set distance between two boxes (0 when they meet).
Rational distance_sq(const Box& a, const Box& b);
/// Squared largest distance between a point of `a` and a point of `b`.
Rational spread_sq(const Box& a, const Box& b);

/// Partition of a finite object list into delta-connected components.
/// Blocks are sorted by their smallest member; members ascend. Diameters are
/// kept squared so that every comparison stays exact.
struct ComponentPartition {
  Rational delta;
  std::vector<std::vector<std::size_t>> blocks;
  std::vector<Rational> diameter_sq;

  std::size_t size() const { return blocks.size(); }
  Rational max_diameter_sq() const;
};

/// Union-find closure of "distance <= delta". Throws MathError for delta <= 0.
/// The result does not depend on `workers`.
ComponentPartition delta_components(std::span<const Box> objects, const Rational& delta, std::size_t workers = 1);
ComponentPartition delta_components(const PointSet& points, const Rational& delta, std::size_t workers = 1);

/// Exact sup over delta >= lower of (max component diameter / delta)^2,
/// evaluated at `lower` and at every merge distance above it. Without a lower
/// bound delta ranges over (0, inf); nullopt then means the ratio is unbounded
/// (some object or touching pair has positive diameter at delta -> 0).
std::optional<Rational> sup_diameter_ratio_sq(std::span<const Box> objects, const std::optional<Rational>& lower);

struct Delta0Sequence {
  bool exists = false;
  std::vector<std::size_t> sequence;  // indices x_0..x_n into the point set
};

/// Searches for distinct x_0..x_n with |x_i - x_{i+1}| <= delta0 |x_0 - x_n|.
/// Throws ArgumentError for fewer than 2 points, MathError for delta0 <= 0.
Delta0Sequence delta0_sequence_exists(const PointSet& points, const Rational& delta0);

struct ProfileRow {
  Rational delta;
  std::size_t num_components = 0;
  Rational max_diam_sq;

  Rational ratio_sq() const { return max_diam_sq / delta.square(); }
};

/// delta-components of the level-`depth` cylinder boxes for each delta.
/// Requires a Lalley-Gatzouras system; ResourceError above `cap` cylinders.
std::vector<ProfileRow> component_diameter_profile(const SpongeIFS& ifs, std::size_t depth,
                                                   std::span<const Rational> deltas,
                                                   std::size_t cap = kDefaultObjectCap, std::size_t workers = 1);

enum class UnionBoundStatus { Holds, BoundViolated, PreconditionFailed };

std::string to_string(UnionBoundStatus s);

struct UnionBoundReport {
  UnionBoundStatus status = UnionBoundStatus::Holds;
  Rational constant;                     // (9C)^(2^(n-1)) / 9
  std::optional<std::size_t> failing_set;
  std::optional<Rational> failing_delta;
  Rational worst_ratio_sq;               // max over the grid of (diam / delta)^2 for the union
};

/// Checks the union bound for sets that each satisfy diam <= C delta for
/// every delta >= lower (verified exactly first). Grid entries must be >= lower
/// and C must be >= 1.
UnionBoundReport check_union_bound(std::span<const std::vector<Box>> sets, const Rational& lower,
                                   std::span<const Rational> grid, const Rational& C);

struct ApproxSquare {
  Box box;
  std::vector<std::size_t> depths;  // l(1) >= ... >= l(d) for ordered systems
};

/// Side j is the image of [0,1] under the shortest prefix of `word` whose
/// coordinate-j ratio product drops strictly below delta. Throws
/// ArgumentError naming the coordinate when the word is too short.
ApproxSquare approx_square(const SpongeIFS& ifs, std::span<const std::size_t> word, const Rational& delta);

}  // namespace sponge
