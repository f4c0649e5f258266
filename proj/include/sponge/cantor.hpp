#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sponge/components.hpp"
#include "sponge/ifs.hpp"

namespace sponge {

/// Gap data between the pieces j-1 and j of the tiling (j = 1..m-1).
struct Junction {
  Point delta;           // a_j - b_{j-1}
  std::size_t tau = 0;   // 1-based first nonzero coordinate of delta, 0 if delta = 0
};

/// A system whose root fiber tiles [0,1] and whose deeper fibers are singletons.
struct SpecialSystem {
  SpongeIFS base;                        // maps sorted left to right by first-coordinate image
  std::vector<std::size_t> source_index; // base[k] is input map source_index[k]
  Point a, b;                            // fixed points of the leftmost and rightmost maps
  std::vector<Point> a_images, b_images; // a_j = phi_j(a), b_j = phi_j(b)
  std::vector<Junction> junctions;       // junctions[j-1] for j = 1..m-1
  Rational r_star;                       // min first-coordinate ratio

  std::size_t m() const { return base.size(); }
  std::size_t dim() const { return base.dim(); }
  bool degenerate() const;               // every tau_j = 0
};

struct SeriesConstants {
  std::vector<Rational> s;   // s_j per junction; 0 when tau_j = 0
  Rational L;                // 1 + sum over tau_j >= 1 of 1 / (1 - s_j)
  Rational L_partial_lo;     // ten-term partial sum of the defining series
  Rational L_partial_hi;     // partial sum plus geometric tail bound
};

struct SpecialAnalysis {
  SpecialSystem system;
  SeriesConstants constants;
};

/// Throws ValidationError naming the offending fiber unless the system is
/// Lalley-Gatzouras with conformal dimension class ExactlyOne.
SpecialAnalysis analyze_special_system(const SpongeIFS& ifs);

/// Closed-form lengths and gaps of the m-tree Cantor construction.
class CantorGeometry {
 public:
  explicit CantorGeometry(SpecialAnalysis analysis);

  const SpecialSystem& system() const { return a_.system; }
  const SeriesConstants& constants() const { return a_.constants; }
  std::size_t m() const { return a_.system.m(); }

  /// phi'_{w,k} for k = 1..d (stored 0-based); all ones for the empty word.
  std::vector<Rational> derivatives(std::span<const std::size_t> word) const;
  /// |J_w| from the derivative vector of w.
  Rational length_from(std::span<const Rational> deriv) const;
  /// g_{w,j} from the derivative vector of w, j = 1..m-1.
  Rational gap_from(std::span<const Rational> deriv, std::size_t j) const;

  Rational length(std::span<const std::size_t> word) const { return length_from(derivatives(word)); }
  Rational gap(std::span<const std::size_t> word, std::size_t j) const { return gap_from(derivatives(word), j); }
  /// J_w, placed left to right from [0, L] with the prescribed gaps.
  Interval interval(std::span<const std::size_t> word) const;

 private:
  SpecialAnalysis a_;
};

/// |J_w|.
inline Rational cylinder_length(const CantorGeometry& g, std::span<const std::size_t> word) { return g.length(word); }

/// Intervals J_w for every |w| <= depth, one lexicographic level at a time.
class CantorTree {
 public:
  std::size_t depth() const { return levels_.size() - 1; }
  std::size_t m() const { return m_; }
  const std::vector<Interval>& level(std::size_t n) const { return levels_.at(n); }
  const Interval& interval(std::span<const std::size_t> word) const;

  friend CantorTree build_cantor_tree(const CantorGeometry& g, std::size_t depth, std::size_t cap);

 private:
  std::size_t m_ = 0;
  std::vector<std::vector<Interval>> levels_;
};

/// Throws ValidationError for degenerate systems, ResourceError above `cap` nodes.
CantorTree build_cantor_tree(const CantorGeometry& g, std::size_t depth, std::size_t cap = kDefaultObjectCap);

struct AdditivityReport {
  std::size_t nodes_checked = 0;
  std::vector<Word> failures;  // internal nodes whose length identity fails
  bool holds() const { return failures.empty(); }
};

/// |J_w| = sum_i |J_wi| + sum_j g_{w,j} for every internal node, plus
/// agreement of each stored interval with the closed-form length.
AdditivityReport check_additivity(const CantorGeometry& g, const CantorTree& tree);

struct LipschitzConstants {
  Rational c0;
  Rational c1_sq;                          // (d |a - b|)^2
  std::pair<Rational, Rational> c1;        // rational bracket of c1
  Rational c_prime;                        // L / r*
  std::pair<Rational, Rational> C0;        // rational bracket of C0
};

LipschitzConstants lipschitz_constants(const CantorGeometry& g, unsigned digits = 30);

struct BilipschitzReport {
  std::size_t pairs = 0;
  std::size_t identified_pairs = 0;  // x = y, which requires u = v
  std::size_t violations = 0;
  Rational min_ratio_sq;             // over pairs with x != y, ((u - v) / |x - y|)^2
  Rational max_ratio_sq;
  Rational bound_low_sq;             // 1 / c1^2
  std::pair<Rational, Rational> bound_high;  // C0 bracket
  bool pass = false;
};

/// Compares x = phi_alpha(a), y = phi_beta(b) with u = left end of J_alpha,
/// v = right end of J_beta over all alpha, beta of length <= depth. The upper
/// test uses the lower end of the C0 bracket, so a pass is certain.
BilipschitzReport bilipschitz_check(const CantorGeometry& g, const CantorTree& tree, const LipschitzConstants& k,
                                    std::size_t depth, std::size_t workers = 1);

struct BinaryCantorTree {
  std::size_t depth = 0;
  Rational T;                                         // L / r*
  Rational gamma;                                     // min_j phi'_{j,1} / phi'_{j,2}
  std::vector<std::vector<Interval>> levels;          // F_sigma for |sigma| <= depth + 1
  std::size_t balance_checks = 0;
  std::vector<std::vector<bool>> unbalanced;          // sigma strings that broke T-balance
  std::vector<std::optional<Rational>> gap_ratio;     // per n = 0..depth, min |F_sigma0| / dist

  bool balanced() const { return unbalanced.empty(); }
};

/// Splits each F_sigma into its leftmost J-constituent and the union of the
/// rest. Checks T-balance at |sigma| <= depth and fills the gap-ratio table.
BinaryCantorTree to_binary_tree(const CantorGeometry& g, std::size_t depth, std::size_t cap = kDefaultObjectCap);

}  // namespace sponge
