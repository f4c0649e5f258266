#include <algorithm>
#include <fstream>
#include <sstream>
#include <set>
#include <stdexcept>

#include "sponge/error.hpp"
#include "sponge/ifs.hpp"

namespace sponge {

namespace {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
    } else if (c == ';') {
      out.push_back({line.substr(i, 1), i + 1});
      ++i;
    } else {
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r' && line[j] != ';') ++j;
      out.push_back({line.substr(i, j - i), i + 1});
      i = j;
    }
  }
  return out;
}

Rational parse_scalar(const Token& tok, std::size_t line_no) {
  try {
    return Rational::parse(tok.text);
  } catch (const std::invalid_argument&) {
    throw ParseError(line_no, tok.column, "expected an integer or p/q literal, got '" + std::string(tok.text) + "'");
  } catch (const MathError&) {
    throw ParseError(line_no, tok.column, "zero denominator in '" + std::string(tok.text) + "'");
  }
}

}  // namespace

SpongeIFS parse_ifs(std::string_view text) {
  std::optional<std::size_t> dim;
  std::vector<DiagonalAffineMap> maps;
  std::set<DiagonalAffineMap> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto toks = tokenize(line);
    if (toks.empty()) continue;

    const Token& head = toks.front();
    if (head.text == "dim") {
      if (dim) throw ParseError(line_no, head.column, "duplicate dim directive");
      if (toks.size() != 2) {
        throw ParseError(line_no, toks.size() < 2 ? head.column + 3 : toks[2].column, "expected 'dim <d>'");
      }
      const Rational d = parse_scalar(toks[1], line_no);
      if (!d.is_integer() || d < Rational(1)) {
        throw ParseError(line_no, toks[1].column, "dim must be an integer >= 1, got " + d.str());
      }
      dim = static_cast<std::size_t>(d.numerator().get_ui());
    } else if (head.text == "map") {
      if (!dim) throw ParseError(line_no, head.column, "map before dim directive");
      DiagonalAffineMap m;
      std::size_t i = 1;
      while (true) {
        if (i + 1 >= toks.size() || toks[i].text == ";" || toks[i + 1].text == ";") {
          const std::size_t col = i < toks.size() ? toks[i].column : line.size() + 1;
          throw ParseError(line_no, col, "expected 'ratio offset' pair");
        }
        const Rational ratio = parse_scalar(toks[i], line_no);
        const Rational offset = parse_scalar(toks[i + 1], line_no);
        if (ratio.sign() <= 0 || ratio >= Rational(1)) {
          throw ParseError(line_no, toks[i].column, "ratio " + ratio.str() + " outside (0,1)");
        }
        m.coords.emplace_back(ratio, offset);
        i += 2;
        if (i == toks.size()) break;
        if (toks[i].text != ";") throw ParseError(line_no, toks[i].column, "expected ';' between coordinates");
        ++i;
      }
      if (m.dim() != *dim) {
        throw ParseError(line_no, head.column, "map has " + std::to_string(m.dim()) + " coordinates, expected " +
                                                   std::to_string(*dim));
      }
      if (!seen.insert(m).second) throw ParseError(line_no, head.column, "duplicate map");
      maps.push_back(std::move(m));
    } else {
      throw ParseError(line_no, head.column, "unknown directive '" + std::string(head.text) + "'");
    }
  }
  if (!dim) throw ParseError(line_no, 1, "missing dim directive");
  if (maps.empty()) throw ParseError(line_no, 1, "no map lines");
  return SpongeIFS(*dim, std::move(maps));
}

SpongeIFS parse_ifs(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_ifs(buf.str());
}

SpongeIFS load_ifs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("ifs", "cannot open '" + path + "'");
  return parse_ifs(in);
}

std::string serialize_ifs(const SpongeIFS& ifs) {
  std::string out = "dim " + std::to_string(ifs.dim()) + "\n";
  for (const auto& m : ifs.maps()) {
    out += "map";
    for (std::size_t i = 0; i < m.dim(); ++i) {
      if (i > 0) out += " ;";
      out += " " + m.coords[i].ratio.str() + " " + m.coords[i].offset.str();
    }
    out += "\n";
  }
  return out;
}

}  // namespace sponge
