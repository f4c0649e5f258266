#include "sponge/classify.hpp"

#include <algorithm>

#include "sponge/error.hpp"

namespace sponge {

std::string to_string(ConformalDimClass c) {
  switch (c) {
    case ConformalDimClass::Zero:
      return "Zero";
    case ConformalDimClass::AtLeastOne:
      return "AtLeastOne";
    case ConformalDimClass::ExactlyOne:
      return "ExactlyOne";
  }
  return "?";
}

bool attractor_is_unit_interval(std::span<const AffineMap1D> maps) {
  if (maps.empty()) return false;
  std::vector<Interval> images;
  images.reserve(maps.size());
  for (const auto& m : maps) images.push_back(m.image());
  std::sort(images.begin(), images.end());
  if (!images.front().lo.is_zero() || images.back().hi != Rational(1)) return false;
  for (std::size_t k = 0; k + 1 < images.size(); ++k) {
    if (images[k].hi != images[k + 1].lo) return false;
  }
  return true;
}

bool satisfies_unit_fiber_hypotheses(const SpongeIFS& ifs, const LabeledTree& tree) {
  const auto root = fiber_ifs(tree, Vertex{});
  if (root.labels.size() != ifs.size() || !attractor_is_unit_interval(root)) return false;
  for (std::size_t l = 1; l < tree.dim(); ++l) {
    for (std::size_t i = 0; i < tree.level(l).size(); ++i) {
      if (tree.offspring(l, i).size() != 1) return false;
    }
  }
  return true;
}

Classification classify(const SpongeIFS& ifs) {
  const LabeledTree tree = build_labeled_tree(ifs);
  Classification c;
  for (auto& fiber : all_fiber_ifs(tree)) {
    FiberVerdict v;
    for (const auto& h : fiber.labels) v.ratio_sum += h.ratio;
    v.tiles = attractor_is_unit_interval(fiber);
    if (v.tiles && !c.witness) c.witness = fiber.owner;
    v.fiber = std::move(fiber);
    c.fiber_report.push_back(std::move(v));
  }
  c.uniformly_disconnected = !c.witness.has_value();
  c.equivalent_statements = {c.uniformly_disconnected, c.uniformly_disconnected, c.uniformly_disconnected};
  if (c.uniformly_disconnected) {
    c.conformal_dim_class = ConformalDimClass::Zero;
  } else if (satisfies_unit_fiber_hypotheses(ifs, tree)) {
    c.conformal_dim_class = ConformalDimClass::ExactlyOne;
  } else {
    c.conformal_dim_class = ConformalDimClass::AtLeastOne;
  }
  return c;
}

namespace {

std::vector<AffineMap1D> tiling_fiber(const SpongeIFS& ifs, const Vertex& witness, const char* op) {
  if (witness.rank() >= ifs.dim()) {
    throw ValidationError("classify", std::string(op) + ": witness rank " + std::to_string(witness.rank()) +
                                          " has no fiber in dimension " + std::to_string(ifs.dim()));
  }
  auto labels = fiber_labels(ifs, witness.coords);
  if (labels.empty()) throw ValidationError("classify", std::string(op) + ": witness is not a vertex of the system");
  if (!attractor_is_unit_interval(labels)) {
    throw ValidationError("classify", std::string(op) + ": witness fiber does not tile [0,1]");
  }
  return labels;
}

}  // namespace

LineSegmentWitness line_segment_witness(const SpongeIFS& ifs, const Vertex& witness) {
  if (witness.rank() + 1 != ifs.dim()) {
    throw ValidationError("classify", "line segment witness needs a vertex of rank " + std::to_string(ifs.dim() - 1) +
                                          ", got rank " + std::to_string(witness.rank()));
  }
  tiling_fiber(ifs, witness, "line segment witness");
  return {fixed_point(DiagonalAffineMap{witness.coords}), ifs.dim() - 1};
}

UnitFiberSubsystem extract_unit_fiber_subsystem(const SpongeIFS& ifs, const Vertex& witness) {
  const auto labels = tiling_fiber(ifs, witness, "subsystem extraction");
  const std::size_t s = witness.rank();
  UnitFiberSubsystem out{witness.coords, SpongeIFS(1, {DiagonalAffineMap{{labels.front()}}}), std::nullopt, {}};
  std::vector<DiagonalAffineMap> maps;
  for (const auto& h : labels) {
    for (std::size_t k = 0; k < ifs.size(); ++k) {
      const auto& c = ifs[k].coords;
      if (std::equal(witness.coords.begin(), witness.coords.end(), c.begin()) && c[s] == h) {
        maps.push_back(DiagonalAffineMap{{c.begin() + static_cast<std::ptrdiff_t>(s), c.end()}});
        out.source_maps.push_back(k);
        break;
      }
    }
  }
  out.sub_ifs = SpongeIFS(ifs.dim() - s, std::move(maps));
  if (s > 0) out.anchor_point = fixed_point(DiagonalAffineMap{witness.coords});
  return out;
}

}  // namespace sponge
