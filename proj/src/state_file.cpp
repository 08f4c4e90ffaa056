#include "bps/state_file.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <vector>

#include "bps/errors.hpp"

namespace bps {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Line {
  std::size_t number;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> lines;
  std::istringstream in(text);
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    Line line{number, {}};
    std::string tok;
    while (ls >> tok) line.tokens.push_back(tok);
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

double parse_real(const Line& line, const std::string& tok) {
  double v = 0.0;
  const char* begin = tok.data();
  const char* end = begin + tok.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end)
    throw ParseError(line.number, "malformed number '" + tok + "'");
  if (!std::isfinite(v)) throw ParseError(line.number, "non-finite number '" + tok + "'");
  return v;
}

std::size_t parse_index(const Line& line, const std::string& tok) {
  if (!tok.empty() && tok[0] == '-')
    throw ParseError(line.number, "negative index '" + tok + "'");
  std::size_t v = 0;
  const char* begin = tok.data();
  const char* end = begin + tok.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end)
    throw ParseError(line.number, "malformed index '" + tok + "'");
  return v;
}

void expect_tokens(const Line& line, std::size_t count) {
  if (line.tokens.size() != count)
    throw ParseError(line.number, "expected " + std::to_string(count) +
                                      " tokens on a '" + line.tokens[0] + "' line");
}

// Sequence under construction: either geometric or an explicit list.
struct SeqBuilder {
  std::string label;  // "x", "y" or "c"
  bool declared = false;
  bool geometric = false;
  cplx first{};
  cplx ratio{};
  std::optional<std::size_t> list_len{};
  std::vector<cplx> values{};
  std::vector<bool> set{};

  void declare_geom(const Line& line, cplx f, cplx r) {
    if (declared) throw ParseError(line.number, "sequence '" + label + "' declared twice");
    declared = true;
    geometric = true;
    first = f;
    ratio = r;
    if (std::abs(r) >= 1.0)
      throw ParseError(line.number, "|ratio| must be < 1 for sequence '" + label + "'");
  }

  void declare_list(const Line& line, std::size_t len) {
    if (declared) throw ParseError(line.number, "sequence '" + label + "' declared twice");
    if (len == 0) throw ParseError(line.number, "sequence '" + label + "' must be nonempty");
    declared = true;
    list_len = len;
    values.assign(len, cplx{0.0});
    set.assign(len, false);
  }

  void set_element(const Line& line, std::size_t i, cplx v) {
    if (!declared || !list_len)
      throw ParseError(line.number, "element before '" + label + "list' declaration");
    if (i >= *list_len)
      throw ParseError(line.number, "index " + std::to_string(i) + " outside sequence '" +
                                        label + "' of length " + std::to_string(*list_len));
    if (set[i])
      throw ParseError(line.number,
                       "duplicate element " + std::to_string(i) + " in sequence '" + label + "'");
    set[i] = true;
    values[i] = v;
  }

  SequenceSpec build(std::size_t eof_line) const {
    if (!declared)
      throw ParseError(eof_line, "missing sequence '" + label + "'");
    if (geometric) return GeometricSeq{first, ratio};
    return ExplicitSeq{values};
  }
};

}  // namespace

CoefficientSource parse_state_file(const std::string& text) {
  const auto lines = tokenize(text);
  const std::size_t eof_line = lines.empty() ? 1 : lines.back().number + 1;
  if (lines.empty()) throw ParseError(1, "empty state file");

  std::size_t at = 0;
  auto next = [&]() -> const Line& {
    if (at >= lines.size()) throw ParseError(eof_line, "unexpected end of file");
    return lines[at++];
  };

  const Line& header = next();
  if (header.tokens.size() != 2 || header.tokens[0] != "bps")
    throw ParseError(header.number, "expected header 'bps 1'");
  if (header.tokens[1] != "1")
    throw ParseError(header.number, "unsupported version '" + header.tokens[1] + "'");

  const Line& kind_line = next();
  if (kind_line.tokens.size() != 2 || kind_line.tokens[0] != "kind")
    throw ParseError(kind_line.number, "expected 'kind dense|outer|schmidt|tmsv'");
  const std::string kind = kind_line.tokens[1];

  if (kind == "dense") {
    DenseFinite d;
    bool have_rows = false, have_cols = false;
    while (at < lines.size()) {
      const Line& line = next();
      const std::string& key = line.tokens[0];
      if (key == "rows") {
        expect_tokens(line, 2);
        d.rows = parse_index(line, line.tokens[1]);
        have_rows = true;
      } else if (key == "cols") {
        expect_tokens(line, 2);
        d.cols = parse_index(line, line.tokens[1]);
        have_cols = true;
      } else if (key == "tail") {
        expect_tokens(line, 2);
        d.declared_tail = parse_real(line, line.tokens[1]);
        if (d.declared_tail < 0.0)
          throw ParseError(line.number, "declared tail must be nonnegative");
      } else if (key == "e") {
        expect_tokens(line, 5);
        if (!have_rows || !have_cols)
          throw ParseError(line.number, "entry before rows/cols declaration");
        const std::size_t i = parse_index(line, line.tokens[1]);
        const std::size_t j = parse_index(line, line.tokens[2]);
        if (i >= d.rows || j >= d.cols)
          throw ParseError(line.number, "entry index (" + std::to_string(i) + "," +
                                            std::to_string(j) + ") out of range");
        const cplx v{parse_real(line, line.tokens[3]), parse_real(line, line.tokens[4])};
        if (!d.entries.emplace(std::make_pair(i, j), v).second)
          throw ParseError(line.number, "duplicate entry (" + std::to_string(i) + "," +
                                            std::to_string(j) + ")");
      } else {
        throw ParseError(line.number, "unknown directive '" + key + "' in dense state");
      }
    }
    if (!have_rows || !have_cols) throw ParseError(eof_line, "missing rows/cols");
    if (d.entries.empty()) throw ParseError(eof_line, "dense state has no entries");
    return d;
  }

  if (kind == "tmsv") {
    const Line& line = next();
    if (line.tokens[0] != "param" || line.tokens.size() != 2)
      throw ParseError(line.number, "expected 'param <lambda>'");
    const double lambda = parse_real(line, line.tokens[1]);
    if (!(lambda >= 0.0 && lambda < 1.0))
      throw ParseError(line.number, "lambda must lie in [0, 1)");
    if (at < lines.size())
      throw ParseError(lines[at].number, "unexpected directive after 'param'");
    return TwoModeSqueezed{lambda};
  }

  if (kind == "outer") {
    SeqBuilder x{"x"}, y{"y"};
    while (at < lines.size()) {
      const Line& line = next();
      const std::string& key = line.tokens[0];
      SeqBuilder* seq = nullptr;
      if (key.size() >= 2 && (key[0] == 'x' || key[0] == 'y'))
        seq = key[0] == 'x' ? &x : &y;
      if (seq && key.substr(1) == "geom") {
        expect_tokens(line, 5);
        seq->declare_geom(line,
                          {parse_real(line, line.tokens[1]), parse_real(line, line.tokens[2])},
                          {parse_real(line, line.tokens[3]), parse_real(line, line.tokens[4])});
      } else if (seq && key.substr(1) == "list") {
        expect_tokens(line, 2);
        seq->declare_list(line, parse_index(line, line.tokens[1]));
      } else if (seq && key.substr(1) == "e") {
        expect_tokens(line, 4);
        seq->set_element(line, parse_index(line, line.tokens[1]),
                         {parse_real(line, line.tokens[2]), parse_real(line, line.tokens[3])});
      } else {
        throw ParseError(line.number, "unknown directive '" + key + "' in outer state");
      }
    }
    return OuterProduct{x.build(eof_line), y.build(eof_line)};
  }

  if (kind == "schmidt") {
    SeqBuilder c{"c"};
    while (at < lines.size()) {
      const Line& line = next();
      const std::string& key = line.tokens[0];
      if (key == "cgeom") {
        expect_tokens(line, 3);
        const double f = parse_real(line, line.tokens[1]);
        const double r = parse_real(line, line.tokens[2]);
        if (f < 0.0 || r < 0.0)
          throw ParseError(line.number, "schmidt coefficients must be nonnegative");
        c.declare_geom(line, f, r);
      } else if (key == "clist") {
        expect_tokens(line, 2);
        c.declare_list(line, parse_index(line, line.tokens[1]));
      } else if (key == "ce") {
        expect_tokens(line, 3);
        const double v = parse_real(line, line.tokens[2]);
        if (v < 0.0) throw ParseError(line.number, "schmidt coefficients must be nonnegative");
        c.set_element(line, parse_index(line, line.tokens[1]), v);
      } else {
        throw ParseError(line.number, "unknown directive '" + key + "' in schmidt state");
      }
    }
    return SchmidtDiagonal{c.build(eof_line)};
  }

  throw ParseError(kind_line.number, "unknown kind '" + kind + "'");
}

namespace {

void emit_sequence(std::string& out, const SequenceSpec& seq, const std::string& label,
                   bool real_only) {
  if (const auto* g = std::get_if<GeometricSeq>(&seq)) {
    if (real_only) {
      out += label + "geom " + fmt17(g->first.real()) + " " + fmt17(g->ratio.real()) + "\n";
    } else {
      out += label + "geom " + fmt17(g->first.real()) + " " + fmt17(g->first.imag()) + " " +
             fmt17(g->ratio.real()) + " " + fmt17(g->ratio.imag()) + "\n";
    }
    return;
  }
  const auto& ex = std::get<ExplicitSeq>(seq);
  out += label + "list " + std::to_string(ex.values.size()) + "\n";
  for (std::size_t i = 0; i < ex.values.size(); ++i) {
    if (real_only) {
      out += label + "e " + std::to_string(i) + " " + fmt17(ex.values[i].real()) + "\n";
    } else {
      out += label + "e " + std::to_string(i) + " " + fmt17(ex.values[i].real()) + " " +
             fmt17(ex.values[i].imag()) + "\n";
    }
  }
}

}  // namespace

std::string emit_state_file(const CoefficientSource& src) {
  std::string out = "bps 1\n";
  if (const auto* d = std::get_if<DenseFinite>(&src)) {
    out += "kind dense\n";
    out += "rows " + std::to_string(d->rows) + "\n";
    out += "cols " + std::to_string(d->cols) + "\n";
    if (d->declared_tail != 0.0) out += "tail " + fmt17(d->declared_tail) + "\n";
    for (const auto& [idx, v] : d->entries)
      out += "e " + std::to_string(idx.first) + " " + std::to_string(idx.second) + " " +
             fmt17(v.real()) + " " + fmt17(v.imag()) + "\n";
  } else if (const auto* o = std::get_if<OuterProduct>(&src)) {
    out += "kind outer\n";
    emit_sequence(out, o->x_seq, "x", false);
    emit_sequence(out, o->y_seq, "y", false);
  } else if (const auto* s = std::get_if<SchmidtDiagonal>(&src)) {
    out += "kind schmidt\n";
    emit_sequence(out, s->coeffs, "c", true);
  } else {
    out += "kind tmsv\n";
    out += "param " + fmt17(std::get<TwoModeSqueezed>(src).lambda) + "\n";
  }
  return out;
}

}  // namespace bps
