#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sponge/ifs.hpp"
#include "sponge/tree.hpp"

namespace sponge {

enum class ConformalDimClass { Zero, AtLeastOne, ExactlyOne };

std::string to_string(ConformalDimClass c);

/// True iff the closed images of [0,1], sorted, tile [0,1] exactly. Assumes a
/// simple IFS (images non-overlapping and inside [0,1]).
bool attractor_is_unit_interval(std::span<const AffineMap1D> maps);
inline bool attractor_is_unit_interval(const FiberIFS& fiber) { return attractor_is_unit_interval(fiber.labels); }

/// The three equivalent characterisations; they always carry the same value.
struct EquivalentStatements {
  bool uniformly_disconnected = false;
  bool projections_totally_disconnected = false;
  bool no_fiber_attractor_is_unit_interval = false;
};

struct FiberVerdict {
  FiberIFS fiber;
  Rational ratio_sum;
  bool tiles = false;
};

struct Classification {
  bool uniformly_disconnected = false;
  ConformalDimClass conformal_dim_class = ConformalDimClass::Zero;
  /// First vertex (breadth-first, input order) whose fiber attractor is [0,1].
  std::optional<Vertex> witness;
  EquivalentStatements equivalent_statements;
  std::vector<FiberVerdict> fiber_report;
};

/// Root fiber has N distinct maps and tiles [0,1]; every fiber of rank >= 1
/// is a singleton.
bool satisfies_unit_fiber_hypotheses(const SpongeIFS& ifs, const LabeledTree& tree);

/// Throws ValidationError when the system is not of Lalley-Gatzouras type.
Classification classify(const SpongeIFS& ifs);

struct LineSegmentWitness {
  Point base;         // x0 in R^{d-1}
  std::size_t axis;   // 0-based coordinate the segment runs along (d-1)
};

/// {x0} x [0,1] lies in the attractor when `witness` has rank d-1 and its
/// fiber tiles [0,1]. Throws ValidationError otherwise.
LineSegmentWitness line_segment_witness(const SpongeIFS& ifs, const Vertex& witness);

struct UnitFiberSubsystem {
  std::vector<AffineMap1D> prefix_maps;   // g_1..g_s
  SpongeIFS sub_ifs;                      // (h_j, phi_{j,s+2}, ..., phi_{j,d})
  std::optional<Point> anchor_point;      // fixed point of (g_1..g_s); absent when s = 0
  std::vector<std::size_t> source_maps;   // input index chosen for each h_j
};

/// Picks, for every label h_j of the witness fiber (left to right), the first
/// input map extending (witness, h_j) and keeps its trailing coordinates.
/// Throws ValidationError unless the witness fiber tiles [0,1].
UnitFiberSubsystem extract_unit_fiber_subsystem(const SpongeIFS& ifs, const Vertex& witness);

}  // namespace sponge
