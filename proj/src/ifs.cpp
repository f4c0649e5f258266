#include "sponge/ifs.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "sponge/error.hpp"

namespace sponge {

Interval::Interval(Rational lo_, Rational hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
  if (hi < lo) throw ArgumentError("ifs", "interval with hi < lo: [" + lo.str() + ", " + hi.str() + "]");
}

Interval unit_interval() { return {Rational(0), Rational(1)}; }

AffineMap1D::AffineMap1D(Rational ratio_, Rational offset_)
    : ratio(std::move(ratio_)), offset(std::move(offset_)) {
  if (ratio.sign() <= 0 || ratio >= Rational(1)) {
    throw ArgumentError("ifs", "ratio " + ratio.str() + " outside (0,1)");
  }
}

bool AffineMap1D::unit_preserving() const {
  return offset.sign() >= 0 && offset <= Rational(1) - ratio;
}

std::string AffineMap1D::str() const { return ratio.str() + " " + offset.str(); }

AffineMap1D compose(const AffineMap1D& outer, const AffineMap1D& inner) {
  AffineMap1D r;
  r.ratio = outer.ratio * inner.ratio;
  r.offset = outer.ratio * inner.offset + outer.offset;
  return r;
}

Box unit_cube(std::size_t dim) { return Box{std::vector<Interval>(dim, unit_interval())}; }

Rational width(const Box& box) {
  if (box.sides.empty()) return Rational(0);
  Rational w = box.sides.front().length();
  for (const auto& s : box.sides) w = min(w, s.length());
  return w;
}

bool open_boxes_overlap(const Box& a, const Box& b) {
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (!(a.sides[i].lo < b.sides[i].hi && b.sides[i].lo < a.sides[i].hi)) return false;
  }
  return true;
}

Box point_box(const Point& p) {
  Box b;
  b.sides.reserve(p.size());
  for (const auto& x : p) b.sides.emplace_back(x, x);
  return b;
}

Point DiagonalAffineMap::operator()(const Point& x) const {
  Point y(x.size());
  for (std::size_t i = 0; i < coords.size(); ++i) y[i] = coords[i](x[i]);
  return y;
}

Box DiagonalAffineMap::image(const Box& b) const {
  Box r;
  r.sides.reserve(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) r.sides.push_back(coords[i].image(b.sides[i]));
  return r;
}

Box DiagonalAffineMap::image() const {
  Box r;
  r.sides.reserve(coords.size());
  for (const auto& c : coords) r.sides.push_back(c.image());
  return r;
}

DiagonalAffineMap DiagonalAffineMap::truncated(std::size_t count) const {
  return DiagonalAffineMap{{coords.begin(), coords.begin() + static_cast<std::ptrdiff_t>(count)}};
}

DiagonalAffineMap compose(const DiagonalAffineMap& outer, const DiagonalAffineMap& inner) {
  DiagonalAffineMap r;
  r.coords.reserve(outer.dim());
  for (std::size_t i = 0; i < outer.dim(); ++i) r.coords.push_back(compose(outer.coords[i], inner.coords[i]));
  return r;
}

Point fixed_point(const DiagonalAffineMap& map) {
  Point p;
  p.reserve(map.dim());
  for (const auto& c : map.coords) p.push_back(c.fixed_point());
  return p;
}

SpongeIFS::SpongeIFS(std::size_t dim, std::vector<DiagonalAffineMap> maps)
    : dim_(dim), maps_(std::move(maps)) {
  if (dim_ < 1) throw ArgumentError("ifs", "dim must be at least 1");
  if (maps_.empty()) throw ArgumentError("ifs", "an IFS needs at least one map");
  std::set<DiagonalAffineMap> seen;
  for (std::size_t k = 0; k < maps_.size(); ++k) {
    if (maps_[k].dim() != dim_) {
      throw ArgumentError("ifs", "map " + std::to_string(k) + " has " + std::to_string(maps_[k].dim()) +
                                     " coordinates, expected " + std::to_string(dim_));
    }
    if (!seen.insert(maps_[k]).second) {
      throw ArgumentError("ifs", "map " + std::to_string(k) + " duplicates an earlier map");
    }
  }
}

ValidationReport validate_lg(const SpongeIFS& ifs) {
  ValidationReport rep;
  const std::size_t d = ifs.dim();
  for (std::size_t k = 0; k < ifs.size(); ++k) {
    const auto& coords = ifs[k].coords;
    for (std::size_t i = 0; i < d; ++i) {
      if (coords[i].ratio.sign() <= 0 || coords[i].ratio >= Rational(1)) {
        rep.contraction_ok = false;
        rep.violations.push_back({"contraction", i, k, k});
      }
      if (!coords[i].unit_preserving()) {
        rep.unit_cube_ok = false;
        rep.violations.push_back({"unit_cube", i, k, k});
      }
      if (i + 1 < d && !(coords[i].ratio > coords[i + 1].ratio)) {
        rep.coordinate_ordering_ok = false;
        rep.violations.push_back({"coordinate_ordering", i, k, k});
      }
    }
  }
  for (std::size_t level = 1; level <= d; ++level) {
    const SpongeIFS proj = major_projection(ifs, level);
    const auto origins = major_projection_origins(ifs, level);
    std::vector<Box> boxes;
    boxes.reserve(proj.size());
    for (const auto& m : proj.maps()) boxes.push_back(m.image());
    for (std::size_t p = 0; p < boxes.size(); ++p) {
      for (std::size_t q = p + 1; q < boxes.size(); ++q) {
        if (open_boxes_overlap(boxes[p], boxes[q])) {
          rep.neat_projection_ok = false;
          rep.violations.push_back({"neat_projection", level, origins[p], origins[q]});
        }
      }
    }
  }
  return rep;
}

void require_lg(const SpongeIFS& ifs) {
  const auto rep = validate_lg(ifs);
  if (rep.lg_type()) return;
  const auto& v = rep.violations.front();
  std::string detail = v.condition + " violated by map " + std::to_string(v.first);
  if (v.condition == "neat_projection") {
    detail += " and map " + std::to_string(v.second) + " at level " + std::to_string(v.level);
  } else {
    detail += " at coordinate " + std::to_string(v.level);
  }
  throw ValidationError("ifs", "system is not of Lalley-Gatzouras type: " + detail);
}

namespace {

void check_level(const SpongeIFS& ifs, std::size_t level) {
  if (level < 1 || level > ifs.dim()) {
    throw ArgumentError("ifs", "projection level " + std::to_string(level) + " outside 1.." +
                                   std::to_string(ifs.dim()));
  }
}

}  // namespace

std::vector<std::size_t> major_projection_origins(const SpongeIFS& ifs, std::size_t level) {
  check_level(ifs, level);
  std::vector<std::size_t> origins;
  std::set<DiagonalAffineMap> seen;
  for (std::size_t k = 0; k < ifs.size(); ++k) {
    if (seen.insert(ifs[k].truncated(level)).second) origins.push_back(k);
  }
  return origins;
}

SpongeIFS major_projection(const SpongeIFS& ifs, std::size_t level) {
  std::vector<DiagonalAffineMap> maps;
  for (std::size_t k : major_projection_origins(ifs, level)) maps.push_back(ifs[k].truncated(level));
  return SpongeIFS(level, std::move(maps));
}

DiagonalAffineMap word_map(const SpongeIFS& ifs, std::span<const std::size_t> word) {
  DiagonalAffineMap acc;
  acc.coords.assign(ifs.dim(), AffineMap1D{});
  for (auto& c : acc.coords) c.ratio = Rational(1);  // identity
  for (std::size_t idx : word) {
    if (idx >= ifs.size()) {
      throw ArgumentError("ifs", "symbol " + std::to_string(idx) + " outside 0.." + std::to_string(ifs.size() - 1));
    }
    acc = compose(acc, ifs[idx]);
  }
  return acc;
}

Box cylinder_box(const SpongeIFS& ifs, std::span<const std::size_t> word) {
  return word_map(ifs, word).image();
}

std::size_t checked_power(std::size_t base, std::size_t exponent) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (base != 0 && r > std::numeric_limits<std::size_t>::max() / base) {
      return std::numeric_limits<std::size_t>::max();
    }
    r *= base;
  }
  return r;
}

std::vector<Box> cylinder_boxes(const SpongeIFS& ifs, std::size_t depth, std::size_t cap) {
  const std::size_t count = checked_power(ifs.size(), depth);
  if (count > cap) {
    throw ResourceError("ifs", std::to_string(ifs.size()) + "^" + std::to_string(depth) +
                                   " cylinders exceed the cap of " + std::to_string(cap));
  }
  // Level-by-level composition: maps at level n+1 are maps at level n composed with each phi_k.
  std::vector<DiagonalAffineMap> level{word_map(ifs, {})};
  for (std::size_t n = 0; n < depth; ++n) {
    std::vector<DiagonalAffineMap> next;
    next.reserve(level.size() * ifs.size());
    for (const auto& prefix : level) {
      for (const auto& m : ifs.maps()) next.push_back(compose(prefix, m));
    }
    level = std::move(next);
  }
  std::vector<Box> boxes;
  boxes.reserve(level.size());
  for (const auto& m : level) boxes.push_back(m.image());
  return boxes;
}

}  // namespace sponge
