#include "sponge/report.hpp"

#include <openssl/evp.h>

#include <iomanip>
#include <sstream>

#include "sponge/cantor.hpp"
#include "sponge/classify.hpp"
#include "sponge/error.hpp"
#include "sponge/moran.hpp"
#include "sponge/tree.hpp"

namespace sponge {

using nlohmann::json;

namespace {

json map_json(const AffineMap1D& m) { return json::array({m.ratio.str(), m.offset.str()}); }

json maps_json(std::span<const AffineMap1D> maps) {
  json out = json::array();
  for (const auto& m : maps) out.push_back(map_json(m));
  return out;
}

json point_json(const Point& p) {
  json out = json::array();
  for (const auto& x : p) out.push_back(x.str());
  return out;
}

json interval_json(const Interval& iv) { return json::array({iv.lo.str(), iv.hi.str()}); }

json box_json(const Box& b) {
  json out = json::array();
  for (const auto& s : b.sides) out.push_back(interval_json(s));
  return out;
}

std::string vertex_label(const Vertex& v) {
  if (v.is_root()) return "root";
  std::string s;
  for (const auto& c : v.coords) s += (s.empty() ? "" : " ; ") + c.str();
  return s;
}

json vertex_json(const Vertex& v) {
  return {{"label", vertex_label(v)}, {"rank", v.rank()}, {"maps", maps_json(v.coords)}};
}

json word_json(std::span<const std::size_t> w) {
  json out = json::array();
  for (auto x : w) out.push_back(x);
  return out;
}

std::vector<Rational> deltas_or(const RunConfig& cfg, std::vector<Rational> fallback) {
  return cfg.deltas.empty() ? fallback : cfg.deltas;
}

std::vector<Rational> default_profile_deltas() { return {Rational(1, 8), Rational(1, 16), Rational(1, 32), Rational(1, 64)}; }

json validate_payload(const SpongeIFS& ifs, bool& rejected) {
  const auto r = validate_lg(ifs);
  json violations = json::array();
  for (const auto& v : r.violations) {
    violations.push_back({{"condition", v.condition}, {"level", v.level}, {"first", v.first}, {"second", v.second}});
  }
  rejected = !r.lg_type();
  return {{"dim", ifs.dim()},
          {"maps", ifs.size()},
          {"lg_type", r.lg_type()},
          {"contraction_ok", r.contraction_ok},
          {"unit_cube_ok", r.unit_cube_ok},
          {"coordinate_ordering_ok", r.coordinate_ordering_ok},
          {"neat_projection_ok", r.neat_projection_ok},
          {"violations", violations}};
}

json classify_payload(const SpongeIFS& ifs) {
  const auto c = classify(ifs);
  json fibers = json::array();
  for (const auto& f : c.fiber_report) {
    fibers.push_back({{"owner", vertex_json(f.fiber.owner)},
                      {"labels", maps_json(f.fiber.labels)},
                      {"ratio_sum", f.ratio_sum.str()},
                      {"tiles", f.tiles}});
  }
  return {{"uniformly_disconnected", c.uniformly_disconnected},
          {"conformal_dim_class", to_string(c.conformal_dim_class)},
          {"witness", c.witness ? vertex_json(*c.witness) : json(nullptr)},
          {"equivalent_statements",
           {{"uniformly_disconnected", c.equivalent_statements.uniformly_disconnected},
            {"projections_totally_disconnected", c.equivalent_statements.projections_totally_disconnected},
            {"no_fiber_attractor_is_unit_interval", c.equivalent_statements.no_fiber_attractor_is_unit_interval}}},
          {"fiber_report", fibers}};
}

json tree_payload(const SpongeIFS& ifs) {
  const auto tree = build_labeled_tree(ifs);
  json levels = json::array();
  for (std::size_t l = 0; l < tree.level_count(); ++l) {
    json level = json::array();
    for (std::size_t i = 0; i < tree.level(l).size(); ++i) {
      json v = vertex_json(tree.level(l)[i]);
      json labels = json::array();
      if (l < tree.dim()) {
        for (const auto& e : tree.offspring(l, i)) labels.push_back(map_json(e.label));
      }
      v["offspring"] = labels;
      level.push_back(v);
    }
    levels.push_back(level);
  }
  return {{"dim", tree.dim()}, {"levels", levels}};
}

json components_payload(const SpongeIFS& ifs, const RunConfig& cfg) {
  const auto deltas = deltas_or(cfg, default_profile_deltas());
  const auto rows = component_diameter_profile(ifs, cfg.depth, deltas, cfg.cap, cfg.workers);
  json out_rows = json::array();
  Rational worst(0);
  for (const auto& r : rows) {
    worst = max(worst, r.ratio_sq());
    out_rows.push_back({{"delta", r.delta.str()},
                        {"num_components", r.num_components},
                        {"max_diam_sq", r.max_diam_sq.str()},
                        {"max_diam_decimal", sqrt_decimal(r.max_diam_sq, cfg.precision)},
                        {"ratio_decimal", sqrt_decimal(r.ratio_sq(), cfg.precision)}});
  }
  return {{"depth", cfg.depth},
          {"cylinders", checked_power(ifs.size(), cfg.depth)},
          {"rows", out_rows},
          {"max_ratio_sq", worst.str()},
          {"max_ratio_decimal", sqrt_decimal(worst, cfg.precision)}};
}

json family_json(const SimpleIFSFamily& family) {
  json members = json::array();
  for (std::size_t j = 0; j < family.size(); ++j) {
    const auto& s = family.stats(j);
    members.push_back({{"maps", maps_json(family.member(j))},
                       {"alpha", s.min_ratio.str()},
                       {"beta", s.max_ratio.str()},
                       {"measure", s.measure.str()},
                       {"count", s.count},
                       {"gap", s.biggest_gap.str()},
                       {"tiles", s.tiles}});
  }
  return {{"members", members},
          {"alpha_star", family.min_ratio().str()},
          {"beta_star", family.max_ratio().str()},
          {"L_star", family.max_measure().str()},
          {"N_star", family.max_count()},
          {"g_star", family.gap_lower_bound().str()}};
}

json premoran_payload(const SpongeIFS& ifs, const RunConfig& cfg) {
  const auto family = top_fiber_family(ifs);
  const Word word = cfg.word ? *cfg.word : Word(cfg.depth, 0);
  const auto set = pre_moran_intervals(family, word, cfg.cap);
  json intervals = json::array();
  for (const auto& iv : set.intervals) intervals.push_back(interval_json(iv));
  json out = {{"family", family_json(family)}, {"word", word_json(word)}, {"intervals", intervals}};
  if (family.has_unit_interval_member()) {
    out["moran"] = nullptr;
  } else {
    json moran = json::array();
    for (const auto& d : deltas_or(cfg, {Rational(1, 4), Rational(1, 16), Rational(1, 64)})) {
      const auto r = check_moran_bound(family, word, d, cfg.cap);
      moran.push_back({{"delta", d.str()},
                       {"admissible", r.admissible},
                       {"threshold", r.threshold.str()},
                       {"bound", r.bound.str()},
                       {"max_component_diam", r.max_component_diam.str()},
                       {"holds", r.holds}});
    }
    out["moran"] = moran;
  }
  const auto prod = check_product_decomposition(ifs, word.size(), cfg.cap);
  out["product_decomposition"] = {{"k", word.size()},
                                  {"equal", prod.equal},
                                  {"cylinder_count", prod.cylinder_count},
                                  {"product_count", prod.product_count}};
  return out;
}

json square_payload(const SpongeIFS& ifs, const RunConfig& cfg) {
  constexpr std::size_t kMaxPeriodicLength = 1 << 16;
  const Word base = cfg.word ? *cfg.word : Word{0};
  if (base.empty()) throw ArgumentError("cli", "square needs a non-empty --word");
  json squares = json::array();
  for (const auto& d : deltas_or(cfg, {Rational(1, 10)})) {
    Word w = base;
    std::optional<ApproxSquare> q;
    while (!q) {
      try {
        q = approx_square(ifs, w, d);
      } catch (const ArgumentError&) {
        if (!cfg.periodic || w.size() >= kMaxPeriodicLength) throw;
        const std::size_t target = std::min(kMaxPeriodicLength, 2 * w.size());
        for (std::size_t i = w.size(); i < target; ++i) w.push_back(base[i % base.size()]);
      }
    }
    squares.push_back({{"delta", d.str()}, {"depths", q->depths}, {"box", box_json(q->box)}});
  }
  return {{"word", word_json(base)}, {"periodic", cfg.periodic}, {"squares", squares}};
}

json cantor_payload(const SpongeIFS& ifs, const RunConfig& cfg) {
  const CantorGeometry g(analyze_special_system(ifs));
  const auto& sys = g.system();
  const auto& c = g.constants();
  json junctions = json::array();
  for (std::size_t j = 0; j < sys.junctions.size(); ++j) {
    junctions.push_back({{"j", j + 1},
                         {"delta", point_json(sys.junctions[j].delta)},
                         {"tau", sys.junctions[j].tau},
                         {"s", c.s[j].str()}});
  }
  json out = {{"m", sys.m()},
              {"order", sys.source_index},
              {"a", point_json(sys.a)},
              {"b", point_json(sys.b)},
              {"junctions", junctions},
              {"r_star", sys.r_star.str()},
              {"L", c.L.str()},
              {"L_decimal", c.L.decimal(cfg.precision)},
              {"L_partial_bracket", json::array({c.L_partial_lo.str(), c.L_partial_hi.str()})},
              {"degenerate", sys.degenerate()}};
  const bool all = cfg.check == "all";
  if (all || cfg.check == "tree" || cfg.check == "lipschitz") {
    const auto tree = build_cantor_tree(g, cfg.depth, cfg.cap);
    if (all || cfg.check == "tree") {
      const auto add = check_additivity(g, tree);
      json root_gaps = json::array();
      for (std::size_t j = 1; j < sys.m(); ++j) root_gaps.push_back(g.gap(Word{}, j).str());
      out["tree"] = {{"depth", cfg.depth},
                     {"leaves", tree.level(cfg.depth).size()},
                     {"internal_nodes", add.nodes_checked},
                     {"additivity_holds", add.holds()},
                     {"additivity_failures", add.failures.size()},
                     {"root_gaps", root_gaps}};
    }
    if (all || cfg.check == "lipschitz") {
      const auto k = lipschitz_constants(g);
      const auto r = bilipschitz_check(g, tree, k, cfg.depth, cfg.workers);
      out["lipschitz"] = {{"c0", k.c0.str()},
                          {"c1_sq", k.c1_sq.str()},
                          {"c1_decimal", sqrt_decimal(k.c1_sq, cfg.precision)},
                          {"c_prime", k.c_prime.str()},
                          {"C0_bracket", json::array({k.C0.first.decimal(cfg.precision + 8),
                                                      k.C0.second.decimal(cfg.precision + 8)})},
                          {"C0_decimal", k.C0.first.decimal(cfg.precision)},
                          {"depth", cfg.depth},
                          {"pairs", r.pairs},
                          {"identified_pairs", r.identified_pairs},
                          {"violations", r.violations},
                          {"min_ratio_sq", r.min_ratio_sq.str()},
                          {"max_ratio_sq", r.max_ratio_sq.str()},
                          {"min_ratio_decimal", sqrt_decimal(r.min_ratio_sq, cfg.precision)},
                          {"max_ratio_decimal", sqrt_decimal(r.max_ratio_sq, cfg.precision)},
                          {"bound_low_decimal", sqrt_decimal(r.bound_low_sq, cfg.precision)},
                          {"pass", r.pass}};
    }
  }
  if (all || cfg.check == "binary") {
    const auto bt = to_binary_tree(g, cfg.depth, cfg.cap);
    json table = json::array();
    const Rational base = sys.r_star / c.L;
    for (std::size_t n = 0; n < bt.gap_ratio.size(); ++n) {
      const Rational bound = base * pow(bt.gamma, static_cast<unsigned>(n));
      const auto& v = bt.gap_ratio[n];
      table.push_back({{"n", n},
                       {"min_ratio", v ? json(v->str()) : json(nullptr)},
                       {"min_ratio_decimal", v ? json(v->decimal(cfg.precision)) : json(nullptr)},
                       {"bound", bound.str()},
                       {"bound_holds", !v || *v >= bound}});
    }
    out["binary"] = {{"depth", bt.depth},
                     {"T", bt.T.str()},
                     {"gamma", bt.gamma.str()},
                     {"balance_checks", bt.balance_checks},
                     {"balanced", bt.balanced()},
                     {"gap_ratio", table}};
  }
  return out;
}

json all_payload(const SpongeIFS& ifs, const RunConfig& cfg, bool& rejected) {
  json out;
  out["validate"] = validate_payload(ifs, rejected);
  if (rejected) return out;
  out["classify"] = classify_payload(ifs);
  out["tree"] = tree_payload(ifs);
  out["components"] = components_payload(ifs, cfg);
  if (ifs.dim() >= 2) {
    RunConfig pm = cfg;
    pm.deltas.clear();
    out["premoran"] = premoran_payload(ifs, pm);
  }
  if (classify(ifs).conformal_dim_class == ConformalDimClass::ExactlyOne) {
    const CantorGeometry g(analyze_special_system(ifs));
    if (!g.system().degenerate()) out["cantor"] = cantor_payload(ifs, cfg);
  }
  return out;
}

json config_json(const RunConfig& cfg) {
  json deltas = json::array();
  for (const auto& d : cfg.deltas) deltas.push_back(d.str());
  return {{"depth", cfg.depth},
          {"deltas", deltas},
          {"cap", cfg.cap},
          {"precision", cfg.precision},
          {"check", cfg.check},
          {"word", cfg.word ? word_json(*cfg.word) : json(nullptr)},
          {"periodic", cfg.periodic}};
}

void flatten(const json& j, const std::string& path, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", out);
  } else if (j.is_string()) {
    out.emplace_back(path, j.get<std::string>());
  } else {
    out.emplace_back(path, j.dump());
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string csv_rows(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_field(r[i]);
    os << "\n";
  }
  return os.str();
}

std::string str_of(const json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

std::string emit_csv(const Report& r) {
  const json& p = r.payload;
  std::vector<std::vector<std::string>> rows;
  if (r.subcommand == "components") {
    for (const auto& row : p["rows"]) {
      rows.push_back({str_of(row["delta"]), str_of(row["num_components"]), str_of(row["max_diam_sq"]),
                      str_of(row["max_diam_decimal"]), str_of(row["ratio_decimal"])});
    }
    return csv_rows({"delta", "num_components", "max_diam_sq", "max_diam_decimal", "ratio_decimal"}, rows);
  }
  if (r.subcommand == "validate") {
    for (const auto& v : p["violations"]) {
      rows.push_back({str_of(v["condition"]), str_of(v["level"]), str_of(v["first"]), str_of(v["second"])});
    }
    return csv_rows({"condition", "level", "first", "second"}, rows);
  }
  if (r.subcommand == "classify") {
    for (const auto& f : p["fiber_report"]) {
      rows.push_back({str_of(f["owner"]["label"]), f["labels"].dump(), str_of(f["ratio_sum"]), str_of(f["tiles"])});
    }
    return csv_rows({"owner", "labels", "ratio_sum", "tiles"}, rows);
  }
  if (r.subcommand == "tree") {
    for (const auto& level : p["levels"]) {
      for (const auto& v : level) {
        rows.push_back({str_of(v["rank"]), str_of(v["label"]), std::to_string(v["offspring"].size()),
                        v["offspring"].dump()});
      }
    }
    return csv_rows({"rank", "vertex", "offspring_count", "labels"}, rows);
  }
  if (r.subcommand == "premoran") {
    for (const auto& iv : p["intervals"]) rows.push_back({str_of(iv[0]), str_of(iv[1])});
    return csv_rows({"lo", "hi"}, rows);
  }
  if (r.subcommand == "square") {
    for (const auto& q : p["squares"]) {
      for (std::size_t j = 0; j < q["box"].size(); ++j) {
        rows.push_back({str_of(q["delta"]), std::to_string(j + 1), str_of(q["depths"][j]), str_of(q["box"][j][0]),
                        str_of(q["box"][j][1])});
      }
    }
    return csv_rows({"delta", "coordinate", "depth", "lo", "hi"}, rows);
  }
  std::vector<std::pair<std::string, std::string>> flat;
  flatten(p, "", flat);
  for (auto& [k, v] : flat) rows.push_back({k, v});
  return csv_rows({"quantity", "value"}, rows);
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("cli", "SHA-256 computation failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int{digest[i]};
  return os.str();
}

Report run_subcommand(const RunConfig& cfg, std::string_view input_text) {
  if (cfg.depth > 64) throw ArgumentError("cli", "depth " + std::to_string(cfg.depth) + " is unreasonably large");
  if (cfg.cap == 0) throw ArgumentError("cli", "cap must be positive");
  for (const auto& d : cfg.deltas) {
    if (d.sign() <= 0) throw ArgumentError("cli", "delta values must be positive, got " + d.str());
  }
  const SpongeIFS ifs = parse_ifs(input_text);
  Report r;
  r.subcommand = cfg.subcommand;
  r.input_digest = "sha256:" + sha256_hex(input_text);
  r.config = config_json(cfg);
  if (cfg.subcommand == "validate") {
    r.payload = validate_payload(ifs, r.rejected);
  } else if (cfg.subcommand == "classify") {
    r.payload = classify_payload(ifs);
  } else if (cfg.subcommand == "tree") {
    r.payload = tree_payload(ifs);
  } else if (cfg.subcommand == "components") {
    r.payload = components_payload(ifs, cfg);
  } else if (cfg.subcommand == "premoran") {
    r.payload = premoran_payload(ifs, cfg);
  } else if (cfg.subcommand == "square") {
    r.payload = square_payload(ifs, cfg);
  } else if (cfg.subcommand == "cantor") {
    if (cfg.check != "all" && cfg.check != "tree" && cfg.check != "lipschitz" && cfg.check != "binary") {
      throw ArgumentError("cli", "unknown --check value '" + cfg.check + "'");
    }
    r.payload = cantor_payload(ifs, cfg);
  } else if (cfg.subcommand == "all") {
    r.payload = all_payload(ifs, cfg, r.rejected);
  } else {
    throw ArgumentError("cli", "unknown subcommand '" + cfg.subcommand + "'");
  }
  return r;
}

json report_document(const Report& report) {
  json doc = {{"tool", kToolName},
              {"version", kToolVersion},
              {"subcommand", report.subcommand},
              {"input_digest", report.input_digest},
              {"config", report.config},
              {"payload", report.payload}};
  doc["report_digest"] = "sha256:" + sha256_hex(doc.dump());
  if (report.timing_ms) doc["timing_ms"] = *report.timing_ms;
  return doc;
}

std::string emit(const Report& report, OutputFormat format) {
  switch (format) {
    case OutputFormat::Json:
      return report_document(report).dump(2) + "\n";
    case OutputFormat::Csv:
      return emit_csv(report);
    case OutputFormat::Text: {
      std::vector<std::pair<std::string, std::string>> flat;
      flatten(report_document(report), "", flat);
      std::string out;
      for (const auto& [k, v] : flat) out += k + ": " + v + "\n";
      return out;
    }
  }
  return {};
}

}  // namespace sponge
