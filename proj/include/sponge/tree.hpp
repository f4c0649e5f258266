#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "sponge/ifs.hpp"

namespace sponge {

/// A vertex of rank l is one map of the l-th major projection, stored by its
/// coefficient tuple. The root has rank 0 and no coordinates.
struct Vertex {
  std::vector<AffineMap1D> coords;

  std::size_t rank() const { return coords.size(); }
  bool is_root() const { return coords.empty(); }
  friend bool operator==(const Vertex&, const Vertex&) = default;
  friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

/// Simple IFS on [0,1] formed by the offspring labels of `owner`, ordered by
/// the left endpoint of each label's image.
struct FiberIFS {
  Vertex owner;
  std::vector<AffineMap1D> labels;
};

/// Distinct (rank+1)-th coordinates of the maps of `ifs` whose first `prefix`
/// coordinates equal `prefix`, sorted by image left endpoint. Works on any
/// system; no Lalley-Gatzouras check.
std::vector<AffineMap1D> fiber_labels(const SpongeIFS& ifs, std::span<const AffineMap1D> prefix);

class LabeledTree {
 public:
  struct Edge {
    AffineMap1D label;
    std::size_t child;  // index into level(rank + 1)
  };

  std::size_t dim() const { return dim_; }
  /// Vertices of rank l in order of first occurrence among the input maps.
  const std::vector<Vertex>& level(std::size_t rank) const { return levels_.at(rank); }
  std::size_t level_count() const { return levels_.size(); }
  /// Offspring of vertex `index` at `rank`, ordered by label image.
  const std::vector<Edge>& offspring(std::size_t rank, std::size_t index) const {
    return edges_.at(rank).at(index);
  }
  std::optional<std::size_t> find(const Vertex& v) const;
  std::optional<Vertex> child(const Vertex& parent, const AffineMap1D& label) const;

  friend LabeledTree build_labeled_tree(const SpongeIFS& ifs);

 private:
  std::size_t dim_ = 0;
  std::vector<std::vector<Vertex>> levels_;
  std::vector<std::vector<std::vector<Edge>>> edges_;
  std::map<Vertex, std::size_t> index_;
};

/// Throws ValidationError when the system is not of Lalley-Gatzouras type.
LabeledTree build_labeled_tree(const SpongeIFS& ifs);

/// Throws ArgumentError for leaves (rank d) and vertices not in the tree.
FiberIFS fiber_ifs(const LabeledTree& tree, const Vertex& vertex);

/// G(u) for every vertex of rank 0..d-1, breadth-first.
std::vector<FiberIFS> all_fiber_ifs(const LabeledTree& tree);

}  // namespace sponge
