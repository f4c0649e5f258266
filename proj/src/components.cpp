#include "sponge/components.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>

#include "disjoint_sets.hpp"
#include "sponge/error.hpp"
#include "sponge/parallel.hpp"

namespace sponge {

namespace {

void require_positive(const Rational& delta, const char* what) {
  if (delta.sign() <= 0) throw MathError(std::string(what) + " must be positive, got " + delta.str());
}

Rational axis_gap(const Interval& a, const Interval& b) {
  if (a.hi < b.lo) return b.lo - a.hi;
  if (b.hi < a.lo) return a.lo - b.hi;
  return Rational(0);
}

Rational axis_spread(const Interval& a, const Interval& b) { return max(a.hi - b.lo, b.hi - a.lo); }

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) throw ArgumentError("components", "dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

std::vector<Box> as_boxes(const PointSet& points) {
  std::vector<Box> boxes;
  boxes.reserve(points.size());
  for (const auto& p : points.points()) boxes.push_back(point_box(p));
  return boxes;
}

Rational block_diameter_sq(std::span<const Box> objects, const std::vector<std::size_t>& block) {
  if (objects[block.front()].dim() == 1) {
    Rational lo = objects[block.front()].sides[0].lo, hi = objects[block.front()].sides[0].hi;
    for (auto i : block) {
      lo = min(lo, objects[i].sides[0].lo);
      hi = max(hi, objects[i].sides[0].hi);
    }
    return (hi - lo).square();
  }
  Rational best(0);
  for (std::size_t a = 0; a < block.size(); ++a) {
    for (std::size_t b = a; b < block.size(); ++b) {
      best = max(best, spread_sq(objects[block[a]], objects[block[b]]));
    }
  }
  return best;
}

/// Merge bookkeeping for the Kruskal sweep: members and squared diameter per root.
class MergeTracker {
 public:
  explicit MergeTracker(std::span<const Box> objects) : objects_(objects), sets_(objects.size()) {
    members_.resize(objects.size());
    diam_sq_.resize(objects.size());
    for (std::size_t i = 0; i < objects.size(); ++i) {
      members_[i] = {i};
      diam_sq_[i] = spread_sq(objects[i], objects[i]);
      max_diam_sq_ = max(max_diam_sq_, diam_sq_[i]);
    }
  }

  void unite(std::size_t a, std::size_t b) {
    a = sets_.find(a);
    b = sets_.find(b);
    if (a == b) return;
    Rational d = max(diam_sq_[a], diam_sq_[b]);
    for (auto x : members_[a]) {
      for (auto y : members_[b]) d = max(d, spread_sq(objects_[x], objects_[y]));
    }
    const std::size_t root = sets_.unite(a, b), other = root == a ? b : a;
    members_[root].insert(members_[root].end(), members_[other].begin(), members_[other].end());
    members_[other].clear();
    diam_sq_[root] = d;
    max_diam_sq_ = max(max_diam_sq_, d);
  }

  const Rational& max_diam_sq() const { return max_diam_sq_; }

 private:
  std::span<const Box> objects_;
  detail::DisjointSets sets_;
  std::vector<std::vector<std::size_t>> members_;
  std::vector<Rational> diam_sq_;
  Rational max_diam_sq_{0};
};

struct WeightedEdge {
  Rational w;
  std::size_t a, b;
};

std::vector<WeightedEdge> sorted_pair_distances(std::span<const Box> objects) {
  std::vector<WeightedEdge> edges;
  edges.reserve(objects.size() * (objects.size() - 1) / 2);
  for (std::size_t a = 0; a < objects.size(); ++a) {
    for (std::size_t b = a + 1; b < objects.size(); ++b) edges.push_back({distance_sq(objects[a], objects[b]), a, b});
  }
  std::sort(edges.begin(), edges.end(), [](const WeightedEdge& x, const WeightedEdge& y) {
    if (x.w != y.w) return x.w < y.w;
    return std::pair(x.a, x.b) < std::pair(y.a, y.b);
  });
  return edges;
}

}  // namespace

PointSet::PointSet(std::vector<Point> points) {
  std::set<Point> seen;
  for (auto& p : points) {
    if (!points_.empty()) require_same_dim(points_.front().size(), p.size());
    if (seen.insert(p).second) points_.push_back(std::move(p));
  }
}

Rational distance_sq(const Point& a, const Point& b) {
  require_same_dim(a.size(), b.size());
  Rational s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]).square();
  return s;
}

Rational distance_sq(const Box& a, const Box& b) {
  require_same_dim(a.dim(), b.dim());
  Rational s(0);
  for (std::size_t i = 0; i < a.dim(); ++i) s += axis_gap(a.sides[i], b.sides[i]).square();
  return s;
}

Rational spread_sq(const Box& a, const Box& b) {
  require_same_dim(a.dim(), b.dim());
  Rational s(0);
  for (std::size_t i = 0; i < a.dim(); ++i) s += axis_spread(a.sides[i], b.sides[i]).square();
  return s;
}

Rational ComponentPartition::max_diameter_sq() const {
  Rational best(0);
  for (const auto& d : diameter_sq) best = max(best, d);
  return best;
}

ComponentPartition delta_components(std::span<const Box> objects, const Rational& delta, std::size_t workers) {
  require_positive(delta, "delta");
  ComponentPartition out;
  out.delta = delta;
  const std::size_t n = objects.size();
  if (n == 0) return out;
  for (const auto& b : objects) require_same_dim(objects.front().dim(), b.dim());

  // Sweep on the first coordinate: once the left endpoint of a later box is
  // more than delta past the right endpoint of the current one, so are all
  // that follow.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return objects[a].sides[0].lo < objects[b].sides[0].lo; });
  const Rational delta_sq = delta.square();
  const std::size_t chunks = chunk_count(n, workers);
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> edges(chunks);
  parallel_chunks(n, workers, [&](std::size_t lo, std::size_t hi, std::size_t c) {
    for (std::size_t p = lo; p < hi; ++p) {
      const Box& a = objects[order[p]];
      for (std::size_t q = p + 1; q < n; ++q) {
        const Box& b = objects[order[q]];
        if (b.sides[0].lo - a.sides[0].hi > delta) break;
        if (distance_sq(a, b) <= delta_sq) edges[c].emplace_back(order[p], order[q]);
      }
    }
  });

  detail::DisjointSets sets(n);
  for (const auto& chunk : edges) {
    for (auto [a, b] : chunk) sets.unite(a, b);
  }
  std::map<std::size_t, std::size_t> block_of_root;
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, fresh] = block_of_root.try_emplace(sets.find(i), out.blocks.size());
    if (fresh) out.blocks.emplace_back();
    out.blocks[it->second].push_back(i);
  }
  out.diameter_sq.resize(out.blocks.size());
  parallel_chunks(out.blocks.size(), workers, [&](std::size_t lo, std::size_t hi, std::size_t) {
    for (std::size_t k = lo; k < hi; ++k) out.diameter_sq[k] = block_diameter_sq(objects, out.blocks[k]);
  });
  return out;
}

ComponentPartition delta_components(const PointSet& points, const Rational& delta, std::size_t workers) {
  const auto boxes = as_boxes(points);
  return delta_components(std::span<const Box>(boxes), delta, workers);
}

std::optional<Rational> sup_diameter_ratio_sq(std::span<const Box> objects, const std::optional<Rational>& lower) {
  if (lower) require_positive(*lower, "lower delta bound");
  if (objects.empty()) return Rational(0);
  const auto edges = sorted_pair_distances(objects);
  MergeTracker tracker(objects);
  std::size_t e = 0;
  Rational best(0);
  if (lower) {
    const Rational lower_sq = lower->square();
    for (; e < edges.size() && edges[e].w <= lower_sq; ++e) tracker.unite(edges[e].a, edges[e].b);
    best = tracker.max_diam_sq() / lower_sq;
  } else if (tracker.max_diam_sq().sign() > 0) {
    return std::nullopt;
  }
  while (e < edges.size()) {
    const Rational w = edges[e].w;
    for (; e < edges.size() && edges[e].w == w; ++e) tracker.unite(edges[e].a, edges[e].b);
    if (w.is_zero()) {
      if (tracker.max_diam_sq().sign() > 0) return std::nullopt;
      continue;
    }
    best = max(best, tracker.max_diam_sq() / w);
  }
  return best;
}

Delta0Sequence delta0_sequence_exists(const PointSet& points, const Rational& delta0) {
  const std::size_t n = points.size();
  if (n < 2) throw ArgumentError("components", "a delta0-sequence needs at least 2 distinct points, got " + std::to_string(n));
  require_positive(delta0, "delta0");
  std::vector<std::vector<Rational>> dist(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) dist[i][j] = dist[j][i] = distance_sq(points[i], points[j]);
  }
  const Rational scale = delta0.square();
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = s + 1; t < n; ++t) {
      const Rational step_sq = scale * dist[s][t];
      std::vector<std::size_t> prev(n, n);
      std::deque<std::size_t> queue{s};
      prev[s] = s;
      while (!queue.empty() && prev[t] == n) {
        const std::size_t u = queue.front();
        queue.pop_front();
        for (std::size_t v = 0; v < n; ++v) {
          if (prev[v] == n && dist[u][v] <= step_sq) {
            prev[v] = u;
            queue.push_back(v);
          }
        }
      }
      if (prev[t] == n) continue;
      Delta0Sequence out{true, {}};
      for (std::size_t v = t; v != s; v = prev[v]) out.sequence.push_back(v);
      out.sequence.push_back(s);
      std::reverse(out.sequence.begin(), out.sequence.end());
      return out;
    }
  }
  return {};
}

std::vector<ProfileRow> component_diameter_profile(const SpongeIFS& ifs, std::size_t depth,
                                                   std::span<const Rational> deltas, std::size_t cap,
                                                   std::size_t workers) {
  require_lg(ifs);
  if (depth < 1) throw ArgumentError("components", "profile depth must be at least 1");
  for (const auto& d : deltas) require_positive(d, "delta");
  const auto boxes = cylinder_boxes(ifs, depth, cap);
  std::vector<ProfileRow> rows;
  for (const auto& d : deltas) {
    const auto part = delta_components(std::span<const Box>(boxes), d, workers);
    rows.push_back({d, part.size(), part.max_diameter_sq()});
  }
  return rows;
}

std::string to_string(UnionBoundStatus s) {
  switch (s) {
    case UnionBoundStatus::Holds:
      return "Holds";
    case UnionBoundStatus::BoundViolated:
      return "BoundViolated";
    case UnionBoundStatus::PreconditionFailed:
      return "PreconditionFailed";
  }
  return "?";
}

UnionBoundReport check_union_bound(std::span<const std::vector<Box>> sets, const Rational& lower,
                                   std::span<const Rational> grid, const Rational& C) {
  constexpr std::size_t kMaxSets = 16;
  if (sets.empty()) throw ArgumentError("components", "union bound needs at least one set");
  if (sets.size() > kMaxSets) {
    throw ResourceError("components", "union bound constant is astronomically large beyond " +
                                          std::to_string(kMaxSets) + " sets");
  }
  if (C < Rational(1)) throw ArgumentError("components", "union bound constant C must be >= 1, got " + C.str());
  require_positive(lower, "lower delta bound");
  for (const auto& d : grid) {
    if (d < lower) throw ArgumentError("components", "grid value " + d.str() + " lies below the lower bound " + lower.str());
  }

  UnionBoundReport report;
  report.constant = pow(Rational(9) * C, 1u << (sets.size() - 1)) / Rational(9);
  const Rational c_sq = C.square();
  for (std::size_t k = 0; k < sets.size(); ++k) {
    const auto sup = sup_diameter_ratio_sq(std::span<const Box>(sets[k]), lower);
    if (!sup || *sup > c_sq) {
      report.status = UnionBoundStatus::PreconditionFailed;
      report.failing_set = k;
      return report;
    }
  }
  std::vector<Box> all;
  for (const auto& s : sets) all.insert(all.end(), s.begin(), s.end());
  const Rational bound_sq = report.constant.square();
  for (const auto& d : grid) {
    const Rational ratio = delta_components(std::span<const Box>(all), d).max_diameter_sq() / d.square();
    report.worst_ratio_sq = max(report.worst_ratio_sq, ratio);
    if (ratio > bound_sq && !report.failing_delta) {
      report.status = UnionBoundStatus::BoundViolated;
      report.failing_delta = d;
    }
  }
  return report;
}

ApproxSquare approx_square(const SpongeIFS& ifs, std::span<const std::size_t> word, const Rational& delta) {
  require_positive(delta, "delta");
  for (auto w : word) {
    if (w >= ifs.size()) throw ArgumentError("components", "word letter " + std::to_string(w) + " out of range");
  }
  ApproxSquare out;
  for (std::size_t j = 0; j < ifs.dim(); ++j) {
    AffineMap1D acc;
    acc.ratio = Rational(1);
    acc.offset = Rational(0);
    std::size_t depth = 0;
    for (std::size_t l = 0; l < word.size() && depth == 0; ++l) {
      acc = compose(acc, ifs[word[l]].coords[j]);
      if (acc.ratio < delta) depth = l + 1;
    }
    if (depth == 0) {
      throw ArgumentError("components", "word of length " + std::to_string(word.size()) +
                                            " too short: coordinate " + std::to_string(j + 1) +
                                            " ratio product stays >= " + delta.str());
    }
    out.box.sides.push_back(acc.image());
    out.depths.push_back(depth);
  }
  return out;
}

}  // namespace sponge
