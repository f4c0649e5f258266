// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include "oracles.hpp"
#include "sponge/cantor.hpp"
#include "sponge/classify.hpp"
#include "sponge/components.hpp"
#include "sponge/moran.hpp"
#include "sponge/report.hpp"

using namespace sponge;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string cli(const std::string& args, int* status = nullptr) {
  const std::string cmd = std::string(SPONGE_CLI_PATH) + " " + args + " 2>/dev/null";
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return out;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int raw = pclose(pipe);
  if (status) *status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return out;
}

std::size_t workers() { return std::max(1u, std::thread::hardware_concurrency()); }

Rational R(long n, long d = 1) { return Rational(n, d); }

std::vector<Word> words_up_to(std::size_t letters, std::size_t max_len) {
  std::vector<Word> all, level{{}};
  for (std::size_t n = 1; n <= max_len; ++n) {
    std::vector<Word> next;
    for (const auto& w : level) {
      for (std::size_t i = 0; i < letters; ++i) {
        Word c = w;
        c.push_back(i);
        next.push_back(c);
      }
    }
    all.insert(all.end(), next.begin(), next.end());
    level = std::move(next);
  }
  return all;
}

// Largest delta-component diameter of sorted disjoint intervals.
Rational interval_components_max_diam(const std::vector<Interval>& ivs, const Rational& delta) {
  Rational best(0);
  std::size_t start = 0;
  for (std::size_t i = 1; i <= ivs.size(); ++i) {
    if (i == ivs.size() || ivs[i].lo - ivs[i - 1].hi > delta) {
      best = std::max(best, ivs[i - 1].hi - ivs[start].lo);
      start = i;
    }
  }
  return best;
}

Outcome fixture_classification() {
  std::ostringstream d;
  bool ok = true;
  for (const auto& [name, ud, cls] : {std::tuple{"lg5.ifs", true, "Zero"}, std::tuple{"lg4.ifs", false, "ExactlyOne"}}) {
    const auto t0 = Clock::now();
    int status = -1;
    const auto doc = nlohmann::json::parse(cli("classify " + oracle::data_path(name), &status));
    const double s = seconds_since(t0);
    const auto& p = doc["payload"];
    bool good = status == 0 && p["uniformly_disconnected"] == ud && p["conformal_dim_class"] == cls && s < 1.0;
    if (!ud) good = good && p["witness"].is_object() && p["witness"]["rank"] == 0;
    ok = ok && good;
    d << name << " " << p["conformal_dim_class"].get<std::string>() << " in " << s << " s; ";
  }
  return {ok, d.str()};
}

Outcome tiling_oracle() {
  oracle::Gen g(1001);
  int disagreements = 0, tiling = 0;
  for (int t = 0; t < 200; ++t) {
    const auto maps = g.simple_ifs(4, 24);
    const bool lib = attractor_is_unit_interval(maps);
    const bool brute = oracle::tiles_by_iteration(maps, 8);
    disagreements += lib != brute;
    tiling += brute;
  }
  return {disagreements == 0, std::to_string(disagreements) + " disagreements, " + std::to_string(tiling) +
                                  " of 200 tile"};
}

Outcome uniform_characterisations() {
  oracle::Gen g(1003);
  std::vector<Rational> grid;
  for (unsigned k = 0; k < 8; ++k) grid.push_back(pow(R(1, 2), k));
  const std::vector<Rational> d0s{R(1, 2), R(1, 4), R(1, 8)};
  int sets = 0, a_checks = 0, b_checks = 0, violations = 0;
  while (sets < 100) {
    const PointSet pts(g.points(static_cast<std::size_t>(g.uniform(2, 12)), static_cast<std::size_t>(g.uniform(1, 3)), 16));
    if (pts.size() < 2) continue;
    ++sets;
    std::vector<Rational> diam_sq;
    for (const auto& d : grid) diam_sq.push_back(delta_components(pts, d).max_diameter_sq());
    for (const auto& d0 : d0s) {
      if (delta0_sequence_exists(pts, d0).exists) continue;
      ++a_checks;
      for (std::size_t k = 0; k < grid.size(); ++k) {
        violations += diam_sq[k] > (R(2) / d0 * grid[k]).square();
      }
    }
    std::vector<Box> boxes;
    for (const auto& p : pts.points()) boxes.push_back(point_box(p));
    const auto sup = sup_diameter_ratio_sq(std::span<const Box>(boxes), std::nullopt);
    if (!sup) {
      ++violations;
      continue;
    }
    const Rational M0 = sqrt_bracket(*sup, 20).second;
    for (std::size_t k = 0; k < grid.size(); ++k) violations += diam_sq[k] > (M0 * grid[k]).square();
    const Rational d0 = (R(2) * M0).reciprocal();
    ++b_checks;
    const bool exists = delta0_sequence_exists(pts, d0).exists;
    violations += exists;
    if (pts.size() <= 7) violations += oracle::delta0_sequence_by_paths(pts.points(), d0);
  }
  return {violations == 0, std::to_string(violations) + " violations; " + std::to_string(a_checks) +
                               " no-sequence cases checked on the grid, " + std::to_string(b_checks) +
                               " sets checked at delta0 = 1/(2 M0)"};
}

Outcome moran_bound() {
  oracle::Gen g(1005);
  const std::vector<Rational> grid{R(1), R(1, 4), R(1, 16), R(1, 64), R(1, 256), R(1, 1024)};
  std::size_t admissible = 0, violations = 0;
  for (int t = 0; t < 50; ++t) {
    std::vector<std::vector<AffineMap1D>> members;
    const int p = static_cast<int>(g.uniform(1, 3));
    for (int j = 0; j < p; ++j) members.push_back(g.simple_ifs(3, 24, false));
    const SimpleIFSFamily fam(members);
    const Rational a = fam.min_ratio(), gs = fam.gap_lower_bound();
    const Rational factor = R(2) / (gs * a) + R(1);
    for (const auto& w : words_up_to(fam.size(), 5)) {
      const auto ivs = pre_moran_intervals(fam, w).intervals;
      Rational beta(1);
      for (auto i : w) beta *= fam.stats(i).max_ratio;
      for (const auto& d : grid) {
        if (d < gs / a * beta) continue;
        ++admissible;
        const auto r = check_moran_bound(fam, w, d);
        const Rational diam = interval_components_max_diam(ivs, d);
        violations += !r.admissible || !r.holds || diam > factor * d || r.max_component_diam != diam;
      }
    }
  }
  return {violations == 0, std::to_string(violations) + " violations over " + std::to_string(admissible) +
                               " admissible (word, delta) cases"};
}

Outcome union_bound() {
  oracle::Gen g(1007);
  int violations = 0;
  std::ostringstream d;
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = static_cast<std::size_t>(g.uniform(1, 3));
    std::vector<std::vector<Box>> sets;
    Rational lower(0), C(1);
    for (std::size_t k = 0; k < n; ++k) {
      const SimpleIFSFamily fam({g.simple_ifs(3, 16, false)});
      const Word w(static_cast<std::size_t>(g.uniform(1, 3)), 0);
      const auto r = check_moran_bound(fam, w, R(1));
      lower = std::max(lower, r.threshold);
      C = std::max(C, R(2) / (fam.gap_lower_bound() * fam.min_ratio()) + R(1));
      const Rational shift(g.uniform(0, 8), 4);
      std::vector<Box> boxes;
      for (const auto& iv : pre_moran_intervals(fam, w).intervals) {
        boxes.push_back(Box{{Interval(iv.lo + shift, iv.hi + shift)}});
      }
      sets.push_back(std::move(boxes));
    }
    std::vector<Rational> grid;
    for (unsigned k = 0; k < 8; ++k) grid.push_back(lower * pow(R(2), k));
    const auto r = check_union_bound(sets, lower, grid, C);
    if (r.status != UnionBoundStatus::Holds) {
      ++violations;
      d << "union " << t << ": " << to_string(r.status) << "; ";
    }
  }
  d << violations << " violations over 30 unions";
  return {violations == 0, d.str()};
}

Outcome product_decomposition() {
  std::ostringstream d;
  bool ok = true;
  for (const char* name : {"lg5.ifs", "lg4.ifs"}) {
    const SpongeIFS ifs = oracle::fixture(name);
    for (std::size_t k = 1; k <= 3; ++k) {
      const auto r = check_product_decomposition(ifs, k);
      ok = ok && r.equal && r.cylinder_count == r.product_count;
      d << name << " k=" << k << (r.equal ? " equal" : " DIFFERENT") << "; ";
    }
  }
  return {ok, d.str()};
}

Outcome lg4_identities() {
  const auto t0 = Clock::now();
  const SpongeIFS lg4 = oracle::fixture("lg4.ifs");
  const CantorGeometry g(analyze_special_system(lg4));
  const Rational L = g.constants().L;
  // Independent value: 1 + 3 / (1 - s) with s the sum of second-coordinate ratios.
  Rational s(0);
  for (const auto& m : lg4.maps()) s += m.coords[1].ratio;
  const bool l_ok = L == R(613, 73) && L == R(1) + R(3) / (R(1) - s);
  const auto add = check_additivity(g, build_cantor_tree(g, 5));
  std::size_t jsigma_fail = 0, jsigma = 0;
  std::vector<AffineMap1D> x_maps;
  for (auto idx : g.system().source_index) x_maps.push_back(lg4[idx].coords[0]);
  for (const auto& w : words_up_to(4, 6)) {
    Rational dx(1);
    for (auto i : w) dx *= x_maps[i].ratio;
    ++jsigma;
    jsigma_fail += g.length(w) > L * dx;
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << "L = " << L.str() << ", additivity at " << add.nodes_checked << " nodes (" << add.failures.size()
    << " failures), length bound on " << jsigma << " words (" << jsigma_fail << " failures), " << secs << " s";
  return {l_ok && add.holds() && add.nodes_checked == 341 && jsigma_fail == 0 && secs < 5.0, d.str()};
}

Outcome bilipschitz_envelope() {
  const auto t0 = Clock::now();
  oracle::Gen g(1009);
  std::vector<SpongeIFS> systems{oracle::fixture("lg4.ifs")};
  for (int i = 0; i < 5; ++i) systems.push_back(g.special_system(static_cast<int>(g.uniform(2, 4)), 16));
  std::size_t pairs = 0, violations = 0;
  for (const auto& ifs : systems) {
    const CantorGeometry geo(analyze_special_system(ifs));
    const auto k = lipschitz_constants(geo);
    const auto r = bilipschitz_check(geo, build_cantor_tree(geo, 5), k, 5, workers());
    pairs += r.pairs;
    violations += r.violations + (r.pass ? 0 : 1);
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << violations << " violations over " << pairs << " pairs on " << systems.size() << " systems, " << secs << " s";
  return {violations == 0 && secs < 60.0, d.str()};
}

Outcome binary_conversion() {
  const CantorGeometry g(analyze_special_system(oracle::fixture("lg4.ifs")));
  const auto bt = to_binary_tree(g, 10);
  const Rational T = g.constants().L / g.system().r_star;
  std::size_t balance_fail = 0, gap_fail = 0, nodes = 0;
  for (std::size_t n = 0; n <= 10; ++n) {
    const auto& kids = bt.levels[n + 1];
    std::optional<Rational> min_ratio;
    for (std::size_t i = 0; 2 * i + 1 < kids.size(); ++i) {
      const Interval &l = kids[2 * i], &r = kids[2 * i + 1];
      const Rational q = l.length() / r.length();
      ++nodes;
      balance_fail += q > T || q < T.reciprocal();
      const Rational gap = r.lo - l.hi;
      if (gap.sign() > 0 && (!min_ratio || l.length() / gap < *min_ratio)) min_ratio = l.length() / gap;
    }
    if (n <= 8) {
      const Rational bound = g.system().r_star / g.constants().L * pow(R(5, 4), static_cast<unsigned>(n));
      gap_fail += !min_ratio || *min_ratio < bound;
    }
  }
  std::ostringstream d;
  d << "T = " << T.str() << ", " << nodes << " nodes, " << balance_fail << " unbalanced, " << gap_fail
    << " gap-ratio failures for n <= 8";
  return {T == R(7356, 73) && bt.balanced() && balance_fail == 0 && gap_fail == 0, d.str()};
}

Outcome determinism() {
  bool ok = true;
  std::ostringstream d;
  for (const char* name : {"lg5.ifs", "lg4.ifs", "bm.ifs", "bad.ifs"}) {
    const SpongeIFS ifs = oracle::fixture(name);
    const bool same = parse_ifs(serialize_ifs(ifs)) == ifs;
    ok = ok && same;
  }
  d << "round-trip on 4 fixtures; ";
  const std::vector<std::string> runs{"classify lg5.ifs", "components lg5.ifs --depth 4", "premoran lg5.ifs",
                                      "cantor lg4.ifs --depth 4", "all lg4.ifs --depth 3"};
  for (const auto& run : runs) {
    const auto space = run.find(' ');
    const auto rest = run.substr(space + 1);
    const auto file_end = rest.find(' ');
    const std::string file = rest.substr(0, file_end);
    const std::string extra = file_end == std::string::npos ? "" : rest.substr(file_end);
    const std::string base = run.substr(0, space) + " " + oracle::data_path(file) + extra + " --no-timing";
    int s1 = -1, s2 = -1, s3 = -1;
    const auto a = cli(base, &s1), b = cli(base, &s2), c = cli(base + " --workers 8", &s3);
    const bool same = s1 == 0 && s2 == 0 && s3 == 0 && !a.empty() && a == b && a == c;
    ok = ok && same;
    d << run.substr(0, space) << (same ? " identical" : " DIFFERS") << "; ";
  }
  return {ok, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 fixture classification", fixture_classification},
      {"2 tiling oracle equivalence", tiling_oracle},
      {"3 uniform disconnectedness characterisations", uniform_characterisations},
      {"4 pre-Moran component bound", moran_bound},
      {"5 union bound", union_bound},
      {"6 product decomposition", product_decomposition},
      {"7 exact Cantor identities on LG4", lg4_identities},
      {"8 bi-Lipschitz envelope", bilipschitz_envelope},
      {"9 binary conversion", binary_conversion},
      {"10 determinism and round-trip", determinism},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s criterion %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), seconds_since(t0),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
