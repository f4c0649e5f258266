#include "sponge/tree.hpp"

#include <algorithm>
#include <set>

#include "sponge/error.hpp"

namespace sponge {

namespace {

bool image_order(const AffineMap1D& a, const AffineMap1D& b) {
  const Interval ia = a.image(), ib = b.image();
  return ia.lo != ib.lo ? ia.lo < ib.lo : ia.hi < ib.hi;
}

}  // namespace

std::vector<AffineMap1D> fiber_labels(const SpongeIFS& ifs, std::span<const AffineMap1D> prefix) {
  if (prefix.size() >= ifs.dim()) {
    throw ArgumentError("tree", "vertex of rank " + std::to_string(prefix.size()) + " has no fiber IFS in dimension " +
                                    std::to_string(ifs.dim()));
  }
  std::set<AffineMap1D> seen;
  std::vector<AffineMap1D> labels;
  for (const auto& m : ifs.maps()) {
    if (!std::equal(prefix.begin(), prefix.end(), m.coords.begin())) continue;
    const auto& h = m.coords[prefix.size()];
    if (seen.insert(h).second) labels.push_back(h);
  }
  std::stable_sort(labels.begin(), labels.end(), image_order);
  return labels;
}

LabeledTree build_labeled_tree(const SpongeIFS& ifs) {
  require_lg(ifs);
  LabeledTree t;
  t.dim_ = ifs.dim();
  t.levels_.push_back({Vertex{}});
  for (std::size_t l = 1; l <= ifs.dim(); ++l) {
    std::vector<Vertex> level;
    const SpongeIFS proj = major_projection(ifs, l);
    for (const auto& m : proj.maps()) level.push_back(Vertex{m.coords});
    t.levels_.push_back(std::move(level));
  }
  for (std::size_t l = 0; l < t.levels_.size(); ++l) {
    for (std::size_t i = 0; i < t.levels_[l].size(); ++i) t.index_.emplace(t.levels_[l][i], i);
  }
  t.edges_.resize(t.levels_.size());
  for (std::size_t l = 0; l < t.levels_.size(); ++l) {
    t.edges_[l].resize(t.levels_[l].size());
    if (l == ifs.dim()) continue;
    for (std::size_t i = 0; i < t.levels_[l].size(); ++i) {
      const Vertex& parent = t.levels_[l][i];
      for (const auto& h : fiber_labels(ifs, parent.coords)) {
        Vertex child = parent;
        child.coords.push_back(h);
        t.edges_[l][i].push_back({h, t.index_.at(child)});
      }
    }
  }
  return t;
}

std::optional<std::size_t> LabeledTree::find(const Vertex& v) const {
  if (auto it = index_.find(v); it != index_.end()) return it->second;
  return std::nullopt;
}

std::optional<Vertex> LabeledTree::child(const Vertex& parent, const AffineMap1D& label) const {
  const auto idx = find(parent);
  if (!idx || parent.rank() >= dim_) return std::nullopt;
  for (const auto& e : offspring(parent.rank(), *idx)) {
    if (e.label == label) return levels_[parent.rank() + 1][e.child];
  }
  return std::nullopt;
}

FiberIFS fiber_ifs(const LabeledTree& tree, const Vertex& vertex) {
  if (vertex.rank() >= tree.dim()) {
    throw ArgumentError("tree", "leaves (rank " + std::to_string(tree.dim()) + ") have no fiber IFS");
  }
  const auto idx = tree.find(vertex);
  if (!idx) throw ArgumentError("tree", "vertex is not in the labeled tree");
  FiberIFS f{vertex, {}};
  for (const auto& e : tree.offspring(vertex.rank(), *idx)) f.labels.push_back(e.label);
  return f;
}

std::vector<FiberIFS> all_fiber_ifs(const LabeledTree& tree) {
  std::vector<FiberIFS> out;
  for (std::size_t l = 0; l < tree.dim(); ++l) {
    for (const auto& v : tree.level(l)) out.push_back(fiber_ifs(tree, v));
  }
  return out;
}

}  // namespace sponge
