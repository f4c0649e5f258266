#pragma once

// Brute-force reference implementations and random generators used only by
// the test suites. They deliberately avoid the library's algorithms.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sponge/ifs.hpp"

namespace oracle {

using sponge::AffineMap1D;
using sponge::Box;
using sponge::Interval;
using sponge::Point;
using sponge::Rational;
using sponge::SpongeIFS;

std::string data_path(const std::string& name);
SpongeIFS fixture(const std::string& name);

/// Hutchinson iteration on [0,1] to `depth` with merged intervals: true iff
/// the uncovered measure of [0,1] is 0 at every depth.
bool tiles_by_iteration(const std::vector<AffineMap1D>& maps, int depth = 8);

/// Blocks by breadth-first search over all pairs with exact squared set
/// distance, blocks sorted by smallest member.
std::vector<std::vector<std::size_t>> components_bfs(const std::vector<Box>& boxes, const Rational& delta);
/// Squared diameter of a union of boxes by enumerating all corner pairs.
Rational corner_diameter_sq(const std::vector<Box>& boxes, const std::vector<std::size_t>& members);

/// Depth-first search over simple paths; exponential, fine for tiny sets.
bool delta0_sequence_by_paths(const std::vector<Point>& points, const Rational& delta0);

/// Every composition f_{w_1} o ... o f_{w_k} applied to [0,1], sorted.
std::vector<Interval> pre_moran_by_words(const std::vector<std::vector<AffineMap1D>>& family,
                                         const std::vector<std::size_t>& word);

/// Deterministic generator with helpers for exact random data.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  Rational fraction(long max_den) {
    const long q = uniform(1, max_den);
    return Rational(uniform(0, q), q);
  }

  /// Simple IFS on [0,1] with 1..max_maps maps and denominators <= max_den.
  /// Roughly half of the draws tile [0,1].
  std::vector<AffineMap1D> simple_ifs(int max_maps, long max_den, bool allow_tiling = true);

  /// Lalley-Gatzouras system in dimension `dim` with at most `max_maps` maps.
  SpongeIFS lg_system(std::size_t dim, int max_maps, long max_den);

  /// d = 2 system whose first coordinates tile [0,1] with m maps and whose
  /// second-coordinate ratios are strictly smaller. Never degenerate.
  SpongeIFS special_system(int m, long max_den);

  /// Points with coordinates in [0,1] of denominator <= max_den.
  std::vector<Point> points(std::size_t n, std::size_t dim, long max_den);

 private:
  std::vector<Rational> cut_points(int pieces, long max_den);
  std::mt19937_64 rng_;
};

}  // namespace oracle
