#pragma once

#include <compare>
#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sponge/rational.hpp"

namespace sponge {

/// Closed interval [lo, hi].
struct Interval {
  Rational lo;
  Rational hi;

  Interval() = default;
  Interval(Rational lo_, Rational hi_);

  Rational length() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
  friend auto operator<=>(const Interval&, const Interval&) = default;
};

/// Unit interval [0, 1].
Interval unit_interval();

/// x -> ratio * x + offset with 0 < ratio < 1.
struct AffineMap1D {
  Rational ratio;
  Rational offset;

  AffineMap1D() = default;
  /// Throws ArgumentError unless 0 < ratio < 1.
  AffineMap1D(Rational ratio_, Rational offset_);

  Rational operator()(const Rational& x) const { return ratio * x + offset; }
  Interval image(const Interval& iv) const { return {(*this)(iv.lo), (*this)(iv.hi)}; }
  /// Image of [0,1].
  Interval image() const { return {offset, ratio + offset}; }
  /// Membership in Aff+[0,1]: offset in [0, 1 - ratio].
  bool unit_preserving() const;
  Rational fixed_point() const { return offset / (Rational(1) - ratio); }

  std::string str() const;

  friend bool operator==(const AffineMap1D&, const AffineMap1D&) = default;
  friend auto operator<=>(const AffineMap1D&, const AffineMap1D&) = default;
};

/// outer o inner.
AffineMap1D compose(const AffineMap1D& outer, const AffineMap1D& inner);

using Point = std::vector<Rational>;

/// Axis-aligned box, one closed interval per coordinate.
struct Box {
  std::vector<Interval> sides;

  std::size_t dim() const { return sides.size(); }
  friend bool operator==(const Box&, const Box&) = default;
  friend auto operator<=>(const Box&, const Box&) = default;
};

Box unit_cube(std::size_t dim);
/// Length of the shortest side; 1 for the unit cube, 0 for a degenerate box.
Rational width(const Box& box);
/// True iff the interiors of the two boxes meet (shared faces do not count).
bool open_boxes_overlap(const Box& a, const Box& b);
Box point_box(const Point& p);

/// phi(x_1..x_d) = (f_1(x_1), ..., f_d(x_d)).
struct DiagonalAffineMap {
  std::vector<AffineMap1D> coords;

  std::size_t dim() const { return coords.size(); }
  Point operator()(const Point& x) const;
  Box image(const Box& b) const;
  Box image() const;
  /// First `count` coordinates.
  DiagonalAffineMap truncated(std::size_t count) const;

  friend bool operator==(const DiagonalAffineMap&, const DiagonalAffineMap&) = default;
  friend auto operator<=>(const DiagonalAffineMap&, const DiagonalAffineMap&) = default;
};

DiagonalAffineMap compose(const DiagonalAffineMap& outer, const DiagonalAffineMap& inner);
/// Coordinate-wise offset_i / (1 - ratio_i).
Point fixed_point(const DiagonalAffineMap& map);

/// Word over the maps of an IFS; entries are 0-based map indices.
using Word = std::vector<std::size_t>;

/// Diagonal self-affine IFS on [0,1]^d. Immutable once built.
class SpongeIFS {
 public:
  /// Throws ArgumentError if dim < 1, there are no maps, a map has the wrong
  /// number of coordinates, or two maps coincide.
  SpongeIFS(std::size_t dim, std::vector<DiagonalAffineMap> maps);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return maps_.size(); }
  const std::vector<DiagonalAffineMap>& maps() const { return maps_; }
  const DiagonalAffineMap& operator[](std::size_t k) const { return maps_[k]; }

  friend bool operator==(const SpongeIFS&, const SpongeIFS&) = default;

 private:
  std::size_t dim_;
  std::vector<DiagonalAffineMap> maps_;
};

/// Parses the line-oriented IFS text format (`dim d`, then `map r o ; ...`).
/// Throws ParseError carrying the 1-based line and column of the fault.
SpongeIFS parse_ifs(std::string_view text);
SpongeIFS parse_ifs(std::istream& in);
SpongeIFS load_ifs(const std::string& path);
std::string serialize_ifs(const SpongeIFS& ifs);

struct Violation {
  std::string condition;    // "contraction", "unit_cube", "coordinate_ordering", "neat_projection"
  std::size_t level = 0;    // projection level l (neat_projection) or coordinate index
  std::size_t first = 0;    // map index
  std::size_t second = 0;   // second map index (neat_projection only)
  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
  bool contraction_ok = true;
  bool unit_cube_ok = true;
  bool coordinate_ordering_ok = true;
  bool neat_projection_ok = true;
  std::vector<Violation> violations;

  bool lg_type() const {
    return contraction_ok && unit_cube_ok && coordinate_ordering_ok && neat_projection_ok;
  }
};

/// Checks the Lalley-Gatzouras conditions. Never throws on a well-formed
/// system: all failures land in the report. Neat-projection violations carry
/// the projection level (1-based) and the first input indices of the two
/// overlapping projected maps.
ValidationReport validate_lg(const SpongeIFS& ifs);

/// Throws ValidationError describing the first violation unless lg_type().
void require_lg(const SpongeIFS& ifs);

/// The system induced on the first `level` coordinates, duplicates merged,
/// order of first occurrence kept.
SpongeIFS major_projection(const SpongeIFS& ifs, std::size_t level);
/// Input index of the first map producing each projected map.
std::vector<std::size_t> major_projection_origins(const SpongeIFS& ifs, std::size_t level);

/// phi_{w_1} o ... o phi_{w_n}; identity for the empty word.
DiagonalAffineMap word_map(const SpongeIFS& ifs, std::span<const std::size_t> word);
Box cylinder_box(const SpongeIFS& ifs, std::span<const std::size_t> word);

/// All N^depth level-`depth` cylinder boxes in lexicographic word order.
/// Throws ResourceError when N^depth exceeds `cap`.
std::vector<Box> cylinder_boxes(const SpongeIFS& ifs, std::size_t depth, std::size_t cap);

/// Saturating N^depth.
std::size_t checked_power(std::size_t base, std::size_t exponent);

}  // namespace sponge
