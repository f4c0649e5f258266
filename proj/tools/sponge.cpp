// Command-line front end: sponge <subcommand> <input.ifs> [options]

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sponge/error.hpp"
#include "sponge/report.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kValidation = 2, kResource = 3 };

sponge::Word parse_word(const std::string& text) {
  sponge::Word w;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
      throw sponge::ArgumentError("cli", "--word expects comma-separated 0-based map indices, got '" + text + "'");
    }
    w.push_back(std::stoul(item));
  }
  return w;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw sponge::ArgumentError("cli", "cannot open input file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int report_error(const std::string& what, int code) {
  std::cerr << "sponge: " << what << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact analysis of diagonal self-affine sponges"};
  app.set_version_flag("--version", std::string(sponge::kToolVersion));

  sponge::RunConfig cfg;
  std::vector<std::string> deltas;
  std::string format = "json", word;
  bool no_timing = false;
  app.add_option("subcommand", cfg.subcommand, "validate | classify | tree | components | premoran | square | cantor | all")
      ->required()
      ->check(CLI::IsMember({"validate", "classify", "tree", "components", "premoran", "square", "cantor", "all"}));
  app.add_option("input", cfg.input_path, "IFS description file")->required();
  app.add_option("--depth", cfg.depth, "Cylinder / word / tree depth")->capture_default_str();
  app.add_option("--delta", deltas, "Scale p/q (repeatable)");
  app.add_option("--cap", cfg.cap, "Cap on enumerated objects")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--format", format, "json | csv | text")
      ->capture_default_str()
      ->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--precision", cfg.precision, "Significant digits in decimal companions")
      ->capture_default_str()
      ->check(CLI::Range(1, 200));
  app.add_option("--workers", cfg.workers, "Worker threads (results do not depend on this)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--check", cfg.check, "cantor: tree | lipschitz | binary | all")
      ->capture_default_str()
      ->check(CLI::IsMember({"tree", "lipschitz", "binary", "all"}));
  app.add_option("--word", word, "Comma-separated 0-based indices (premoran, square)");
  app.add_flag("--periodic", cfg.periodic, "square: repeat the word until every side resolves");
  app.add_flag("--no-timing", no_timing, "Omit timing_ms so output is byte-reproducible");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    for (const auto& d : deltas) cfg.deltas.push_back(sponge::Rational::parse(d));
    if (!word.empty()) cfg.word = parse_word(word);
    cfg.format = format == "csv" ? sponge::OutputFormat::Csv
                                 : (format == "text" ? sponge::OutputFormat::Text : sponge::OutputFormat::Json);
    if (cfg.format == sponge::OutputFormat::Csv && cfg.subcommand == "all") {
      throw sponge::ArgumentError("cli", "csv output is not available for 'all'; use json or text");
    }
    cfg.timing = !no_timing;

    const auto start = std::chrono::steady_clock::now();
    sponge::Report report = sponge::run_subcommand(cfg, read_file(cfg.input_path));
    if (cfg.timing) {
      report.timing_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    std::cout << sponge::emit(report, cfg.format);
    if (report.rejected) return report_error("ifs: system is not of Lalley-Gatzouras type", kValidation);
    return kOk;
  } catch (const sponge::ValidationError& e) {
    return report_error(e.what(), kValidation);
  } catch (const sponge::ResourceError& e) {
    return report_error(e.what(), kResource);
  } catch (const sponge::Error& e) {
    return report_error(e.what(), kUsage);
  } catch (const std::invalid_argument& e) {
    return report_error(std::string("cli: ") + e.what(), kUsage);
  } catch (const std::exception& e) {
    return report_error(std::string("cli: ") + e.what(), kUsage);
  }
}
