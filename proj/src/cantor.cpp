#include "sponge/cantor.hpp"

#include <algorithm>
#include <numeric>

#include "sponge/classify.hpp"
#include "sponge/error.hpp"
#include "sponge/parallel.hpp"
#include "sponge/tree.hpp"

namespace sponge {

namespace {

std::string vertex_str(const Vertex& v) {
  if (v.is_root()) return "root";
  std::string s = "(";
  for (std::size_t k = 0; k < v.coords.size(); ++k) s += (k ? ", " : "") + v.coords[k].str();
  return s + ")";
}

Point difference(const Point& x, const Point& y) {
  Point d(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) d[k] = x[k] - y[k];
  return d;
}

std::vector<Rational> scaled(std::span<const Rational> deriv, const DiagonalAffineMap& map) {
  std::vector<Rational> out(deriv.begin(), deriv.end());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] *= map.coords[k].ratio;
  return out;
}

Word decode(std::size_t index, std::size_t length, std::size_t base) {
  Word w(length);
  for (std::size_t pos = length; pos-- > 0;) {
    w[pos] = index % base;
    index /= base;
  }
  return w;
}

std::size_t tree_node_count(std::size_t base, std::size_t depth) {
  std::size_t total = 0;
  for (std::size_t n = 0; n <= depth; ++n) {
    const std::size_t level = checked_power(base, n);
    total = total > SIZE_MAX - level ? SIZE_MAX : total + level;
  }
  return total;
}

/// Sum over all words of length n of phi'_{w,coord}, by enumeration while the
/// level stays small and by the one-step product identity beyond that.
std::vector<Rational> level_sums(const SpongeIFS& sys, std::size_t coord, std::size_t levels) {
  constexpr std::size_t kEnumerationLimit = 4096;
  std::vector<Rational> sums{Rational(1)};
  std::vector<Rational> current{Rational(1)};
  Rational one_step(0);
  for (const auto& m : sys.maps()) one_step += m.coords[coord].ratio;
  for (std::size_t n = 1; n < levels; ++n) {
    if (current.size() * sys.size() <= kEnumerationLimit) {
      std::vector<Rational> next;
      for (const auto& p : current) {
        for (const auto& m : sys.maps()) next.push_back(p * m.coords[coord].ratio);
      }
      current = std::move(next);
      sums.push_back(std::accumulate(current.begin(), current.end(), Rational(0)));
    } else {
      sums.push_back(sums.back() * one_step);
    }
  }
  return sums;
}

void reject_unless_special(const SpongeIFS& ifs) {
  const LabeledTree tree = build_labeled_tree(ifs);
  const auto root = fiber_ifs(tree, Vertex{});
  if (root.labels.size() != ifs.size()) {
    throw ValidationError("cantor", "root fiber has " + std::to_string(root.labels.size()) +
                                        " distinct maps, expected one per input map (" + std::to_string(ifs.size()) + ")");
  }
  if (!attractor_is_unit_interval(root)) throw ValidationError("cantor", "root fiber attractor is not [0,1]");
  for (std::size_t l = 1; l < tree.dim(); ++l) {
    for (std::size_t i = 0; i < tree.level(l).size(); ++i) {
      const auto count = tree.offspring(l, i).size();
      if (count != 1) {
        throw ValidationError("cantor", "fiber of vertex " + vertex_str(tree.level(l)[i]) + " has " +
                                            std::to_string(count) + " maps, expected exactly one");
      }
    }
  }
}

}  // namespace

bool SpecialSystem::degenerate() const {
  return std::all_of(junctions.begin(), junctions.end(), [](const Junction& j) { return j.tau == 0; });
}

SpecialAnalysis analyze_special_system(const SpongeIFS& ifs) {
  reject_unless_special(ifs);
  const std::size_t m = ifs.size(), d = ifs.dim();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return ifs[x].coords[0].image() < ifs[y].coords[0].image(); });
  std::vector<DiagonalAffineMap> maps;
  for (auto k : order) maps.push_back(ifs[k]);

  SpecialAnalysis out{SpecialSystem{SpongeIFS(d, std::move(maps)), order, {}, {}, {}, {}, {}, {}}, {}};
  SpecialSystem& sys = out.system;
  sys.a = fixed_point(sys.base[0]);
  sys.b = fixed_point(sys.base[m - 1]);
  sys.r_star = sys.base[0].coords[0].ratio;
  for (const auto& map : sys.base.maps()) {
    sys.a_images.push_back(map(sys.a));
    sys.b_images.push_back(map(sys.b));
    sys.r_star = min(sys.r_star, map.coords[0].ratio);
  }
  for (std::size_t j = 1; j < m; ++j) {
    Junction jn{difference(sys.a_images[j], sys.b_images[j - 1]), 0};
    if (!jn.delta[0].is_zero()) {
      throw MathError("junction " + std::to_string(j) + " has nonzero first coordinate " + jn.delta[0].str());
    }
    for (std::size_t k = 0; k < d && jn.tau == 0; ++k) {
      if (!jn.delta[k].is_zero()) jn.tau = k + 1;
    }
    sys.junctions.push_back(std::move(jn));
  }

  SeriesConstants& c = out.constants;
  constexpr std::size_t kPartialTerms = 10;
  c.L = Rational(1);
  c.L_partial_lo = Rational(1);
  c.L_partial_hi = Rational(1);
  for (const auto& jn : sys.junctions) {
    if (jn.tau == 0) {
      c.s.emplace_back(0);
      continue;
    }
    const auto sums = level_sums(sys.base, jn.tau - 1, kPartialTerms + 1);
    const Rational s = sums[1];
    if (s >= Rational(1)) throw MathError("series ratio " + s.str() + " is not below 1");
    c.s.push_back(s);
    c.L += Rational(1) / (Rational(1) - s);
    const Rational partial = std::accumulate(sums.begin(), sums.begin() + kPartialTerms, Rational(0));
    c.L_partial_lo += partial;
    c.L_partial_hi += partial + sums[kPartialTerms] / (Rational(1) - s);
  }
  if (c.L < c.L_partial_lo || c.L > c.L_partial_hi) {
    throw MathError("closed-form L = " + c.L.str() + " falls outside the partial-sum bracket [" +
                    c.L_partial_lo.str() + ", " + c.L_partial_hi.str() + "]");
  }
  return out;
}

CantorGeometry::CantorGeometry(SpecialAnalysis analysis) : a_(std::move(analysis)) {}

std::vector<Rational> CantorGeometry::derivatives(std::span<const std::size_t> word) const {
  std::vector<Rational> deriv(system().dim(), Rational(1));
  for (auto letter : word) {
    if (letter >= m()) throw ArgumentError("cantor", "word letter " + std::to_string(letter) + " out of range");
    deriv = scaled(deriv, system().base[letter]);
  }
  return deriv;
}

Rational CantorGeometry::length_from(std::span<const Rational> deriv) const {
  Rational len = deriv[0];
  for (std::size_t j = 0; j < system().junctions.size(); ++j) {
    const auto tau = system().junctions[j].tau;
    if (tau != 0) len += deriv[tau - 1] / (Rational(1) - constants().s[j]);
  }
  return len;
}

Rational CantorGeometry::gap_from(std::span<const Rational> deriv, std::size_t j) const {
  if (j < 1 || j >= m()) throw ArgumentError("cantor", "gap index " + std::to_string(j) + " out of range");
  const auto tau = system().junctions[j - 1].tau;
  return tau == 0 ? Rational(0) : deriv[tau - 1];
}

Interval CantorGeometry::interval(std::span<const std::size_t> word) const {
  Rational lo(0);
  std::vector<Rational> deriv(system().dim(), Rational(1));
  for (auto letter : word) {
    if (letter >= m()) throw ArgumentError("cantor", "word letter " + std::to_string(letter) + " out of range");
    for (std::size_t k = 0; k < letter; ++k) lo += length_from(scaled(deriv, system().base[k])) + gap_from(deriv, k + 1);
    deriv = scaled(deriv, system().base[letter]);
  }
  return {lo, lo + length_from(deriv)};
}

const Interval& CantorTree::interval(std::span<const std::size_t> word) const {
  if (word.size() > depth()) {
    throw ArgumentError("cantor", "word of length " + std::to_string(word.size()) + " exceeds tree depth " +
                                      std::to_string(depth()));
  }
  std::size_t index = 0;
  for (auto letter : word) {
    if (letter >= m_) throw ArgumentError("cantor", "word letter " + std::to_string(letter) + " out of range");
    index = index * m_ + letter;
  }
  return levels_[word.size()][index];
}

CantorTree build_cantor_tree(const CantorGeometry& g, std::size_t depth, std::size_t cap) {
  if (g.system().degenerate()) {
    throw ValidationError("cantor", "every junction has tau = 0, so the Cantor set degenerates to an interval");
  }
  if (tree_node_count(g.m(), depth) > cap) {
    throw ResourceError("cantor", "Cantor tree of depth " + std::to_string(depth) + " exceeds the cap of " +
                                      std::to_string(cap) + " nodes");
  }
  CantorTree tree;
  tree.m_ = g.m();
  tree.levels_.push_back({{Rational(0), g.constants().L}});
  std::vector<std::vector<Rational>> derivs{std::vector<Rational>(g.system().dim(), Rational(1))};
  for (std::size_t n = 0; n < depth; ++n) {
    std::vector<Interval> next;
    std::vector<std::vector<Rational>> next_derivs;
    const auto& current = tree.levels_.back();
    for (std::size_t idx = 0; idx < current.size(); ++idx) {
      Rational pos = current[idx].lo;
      for (std::size_t i = 0; i < g.m(); ++i) {
        auto child = scaled(derivs[idx], g.system().base[i]);
        const Rational len = g.length_from(child);
        next.push_back({pos, pos + len});
        pos += len;
        if (i + 1 < g.m()) pos += g.gap_from(derivs[idx], i + 1);
        next_derivs.push_back(std::move(child));
      }
    }
    tree.levels_.push_back(std::move(next));
    derivs = std::move(next_derivs);
  }
  return tree;
}

AdditivityReport check_additivity(const CantorGeometry& g, const CantorTree& tree) {
  AdditivityReport report;
  const std::size_t m = g.m();
  for (std::size_t n = 0; n <= tree.depth(); ++n) {
    const auto& level = tree.level(n);
    for (std::size_t idx = 0; idx < level.size(); ++idx) {
      const Word w = decode(idx, n, m);
      const auto deriv = g.derivatives(w);
      const Rational len = g.length_from(deriv);
      bool ok = level[idx].length() == len;
      if (n < tree.depth()) {
        ++report.nodes_checked;
        Rational total(0);
        for (std::size_t i = 0; i < m; ++i) {
          total += g.length_from(scaled(deriv, g.system().base[i]));
          if (i + 1 < m) {
            const Rational gap = g.gap_from(deriv, i + 1);
            total += gap;
            const auto& next = tree.level(n + 1);
            ok = ok && next[idx * m + i + 1].lo - next[idx * m + i].hi == gap;
          }
        }
        const auto& next = tree.level(n + 1);
        ok = ok && total == len && next[idx * m].lo == level[idx].lo && next[idx * m + m - 1].hi == level[idx].hi;
      }
      if (!ok) report.failures.push_back(w);
    }
  }
  return report;
}

LipschitzConstants lipschitz_constants(const CantorGeometry& g, unsigned digits) {
  const SpecialSystem& sys = g.system();
  LipschitzConstants k;
  k.c0 = (sys.a[0] - sys.b[0]).abs();
  for (const auto& jn : sys.junctions) {
    if (jn.tau >= 2) k.c0 = min(k.c0, jn.delta[jn.tau - 1].abs());
  }
  Rational dist_sq(0);
  for (std::size_t i = 0; i < sys.dim(); ++i) dist_sq += (sys.a[i] - sys.b[i]).square();
  k.c1_sq = Rational(static_cast<long long>(sys.dim() * sys.dim())) * dist_sq;
  k.c1 = sqrt_bracket(k.c1_sq, digits);
  const Rational L = g.constants().L;
  k.c_prime = L / sys.r_star;
  const Rational spread = Rational(2) * L * (Rational(1) + Rational(2) * k.c_prime);
  auto c0_of = [&](const Rational& c1) { return max(c1, (Rational(1) + spread * c1 + spread * k.c0) / k.c0); };
  k.C0 = {c0_of(k.c1.first), c0_of(k.c1.second)};
  return k;
}

namespace {

struct PairExtremes {
  mpz_class min_w, min_s, max_w, max_s;  // ratio^2 is proportional to w / s
  bool any = false;
  std::size_t pairs = 0, identified = 0, violations = 0;

  void offer(const mpz_class& w, const mpz_class& s) {
    if (!any || w * min_s < min_w * s) min_w = w, min_s = s;
    if (!any || w * max_s > max_w * s) max_w = w, max_s = s;
    any = true;
  }
};

mpz_class common_denominator(const std::vector<const Rational*>& values) {
  mpz_class l = 1;
  for (const auto* v : values) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v->raw().get_den_mpz_t());
  return l;
}

mpz_class scale_to(const Rational& v, const mpz_class& den) { return v.raw().get_num() * (den / v.raw().get_den()); }

}  // namespace

BilipschitzReport bilipschitz_check(const CantorGeometry& g, const CantorTree& tree, const LipschitzConstants& k,
                                    std::size_t depth, std::size_t workers) {
  if (depth > tree.depth()) {
    throw ArgumentError("cantor", "check depth " + std::to_string(depth) + " exceeds tree depth " +
                                      std::to_string(tree.depth()));
  }
  const SpecialSystem& sys = g.system();
  const std::size_t d = sys.dim();
  std::vector<Point> xs, ys;
  std::vector<Rational> us, vs;
  std::vector<DiagonalAffineMap> level{word_map(sys.base, {})};
  for (std::size_t n = 0; n <= depth; ++n) {
    for (std::size_t idx = 0; idx < level.size(); ++idx) {
      xs.push_back(level[idx](sys.a));
      ys.push_back(level[idx](sys.b));
      us.push_back(tree.level(n)[idx].lo);
      vs.push_back(tree.level(n)[idx].hi);
    }
    if (n == depth) break;
    std::vector<DiagonalAffineMap> next;
    for (const auto& prefix : level) {
      for (const auto& map : sys.base.maps()) next.push_back(compose(prefix, map));
    }
    level = std::move(next);
  }

  std::vector<const Rational*> point_values, end_values;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t c = 0; c < d; ++c) point_values.push_back(&xs[i][c]), point_values.push_back(&ys[i][c]);
    end_values.push_back(&us[i]);
    end_values.push_back(&vs[i]);
  }
  const mpz_class D = common_denominator(point_values), DU = common_denominator(end_values);
  const std::size_t n = xs.size();
  std::vector<std::vector<mpz_class>> X(n), Y(n);
  std::vector<mpz_class> U(n), V(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < d; ++c) X[i].push_back(scale_to(xs[i][c], D)), Y[i].push_back(scale_to(ys[i][c], D));
    U[i] = scale_to(us[i], DU);
    V[i] = scale_to(vs[i], DU);
  }
  // ratio^2 = W D^2 / (S DU^2) with W = (U - V)^2, S = |X - Y|^2.
  const mpz_class D2 = D * D, DU2 = DU * DU;
  const Rational C0_lo_sq = k.C0.first.square();
  const mpz_class low_a = k.c1_sq.raw().get_num() * D2, low_b = k.c1_sq.raw().get_den() * DU2;
  const mpz_class high_a = C0_lo_sq.raw().get_den() * D2, high_b = C0_lo_sq.raw().get_num() * DU2;

  std::vector<PairExtremes> parts(chunk_count(n, workers));
  parallel_chunks(n, workers, [&](std::size_t lo, std::size_t hi, std::size_t chunk) {
    PairExtremes& e = parts[chunk];
    mpz_class s, t, w;
    for (std::size_t i = lo; i < hi; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        ++e.pairs;
        s = 0;
        for (std::size_t c = 0; c < d; ++c) {
          t = X[i][c] - Y[j][c];
          s += t * t;
        }
        t = U[i] - V[j];
        w = t * t;
        if (s == 0) {
          ++e.identified;
          if (w != 0) ++e.violations;
          continue;
        }
        if (low_a * w < low_b * s || high_a * w > high_b * s) ++e.violations;
        e.offer(w, s);
      }
    }
  });

  PairExtremes all;
  for (const auto& p : parts) {
    all.pairs += p.pairs;
    all.identified += p.identified;
    all.violations += p.violations;
    if (p.any) {
      all.offer(p.min_w, p.min_s);
      all.offer(p.max_w, p.max_s);
    }
  }
  BilipschitzReport r;
  r.pairs = all.pairs;
  r.identified_pairs = all.identified;
  r.violations = all.violations;
  if (all.any) {
    r.min_ratio_sq = Rational(mpq_class(all.min_w * D2, all.min_s * DU2));
    r.max_ratio_sq = Rational(mpq_class(all.max_w * D2, all.max_s * DU2));
  }
  r.bound_low_sq = k.c1_sq.reciprocal();
  r.bound_high = k.C0;
  r.pass = r.violations == 0;
  return r;
}

namespace {

/// F-node: union of J_{alpha lo} .. J_{alpha (hi-1)}; a single constituent is
/// stored as its own J-interval with the full child range.
struct BinaryNode {
  Word alpha;
  std::size_t lo = 0, hi = 0;
};

BinaryNode normalized(Word alpha, std::size_t lo, std::size_t hi, std::size_t m) {
  if (hi - lo == 1) {
    alpha.push_back(lo);
    return {std::move(alpha), 0, m};
  }
  return {std::move(alpha), lo, hi};
}

Interval node_interval(const CantorGeometry& g, const BinaryNode& node) {
  Word first = node.alpha, last = node.alpha;
  first.push_back(node.lo);
  last.push_back(node.hi - 1);
  return {g.interval(first).lo, g.interval(last).hi};
}

}  // namespace

BinaryCantorTree to_binary_tree(const CantorGeometry& g, std::size_t depth, std::size_t cap) {
  const SpecialSystem& sys = g.system();
  if (sys.degenerate()) {
    throw ValidationError("cantor", "every junction has tau = 0, so there is no Cantor set to convert");
  }
  if (tree_node_count(2, depth + 1) > cap) {
    throw ResourceError("cantor", "binary tree of depth " + std::to_string(depth) + " exceeds the cap of " +
                                      std::to_string(cap) + " nodes");
  }
  BinaryCantorTree out;
  out.depth = depth;
  out.T = g.constants().L / sys.r_star;
  out.gamma = sys.base[0].coords[0].ratio / sys.base[0].coords[1].ratio;
  for (const auto& map : sys.base.maps()) out.gamma = min(out.gamma, map.coords[0].ratio / map.coords[1].ratio);
  const Rational inv_T = out.T.reciprocal();

  const std::size_t m = g.m();
  std::vector<BinaryNode> nodes{{{}, 0, m}};
  out.levels.push_back({{Rational(0), g.constants().L}});
  for (std::size_t n = 0; n <= depth; ++n) {
    std::vector<BinaryNode> next;
    std::vector<Interval> next_intervals;
    std::optional<Rational> level_gap_ratio;
    for (std::size_t idx = 0; idx < nodes.size(); ++idx) {
      const BinaryNode& node = nodes[idx];
      BinaryNode left = normalized(node.alpha, node.lo, node.lo + 1, m);
      BinaryNode right = normalized(node.alpha, node.lo + 1, node.hi, m);
      const Interval li = node_interval(g, left), ri = node_interval(g, right);
      ++out.balance_checks;
      const Rational ratio = li.length() / ri.length();
      if (ratio < inv_T || ratio > out.T) {
        std::vector<bool> sigma(n);
        for (std::size_t b = 0; b < n; ++b) sigma[b] = (idx >> (n - 1 - b)) & 1U;
        out.unbalanced.push_back(std::move(sigma));
      }
      const Rational dist = ri.lo - li.hi;
      if (dist.sign() > 0) {
        const Rational gr = li.length() / dist;
        if (!level_gap_ratio || gr < *level_gap_ratio) level_gap_ratio = gr;
      }
      next.push_back(std::move(left));
      next.push_back(std::move(right));
      next_intervals.push_back(li);
      next_intervals.push_back(ri);
    }
    out.gap_ratio.push_back(level_gap_ratio);
    out.levels.push_back(std::move(next_intervals));
    nodes = std::move(next);
  }
  return out;
}

}  // namespace sponge
