#include "bmc/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <vector>

#include "bmc/errors.hpp"

namespace bmc {

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

long long to_int(std::string_view tok, std::size_t line, const char* what) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line, std::string("expected integer ") + what + ", got '" +
                               std::string(tok) + "'");
  }
  return value;
}

double to_real(std::string_view tok, std::size_t line, const char* what) {
  double value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(value)) {
    throw ParseError(line, std::string("expected real ") + what + ", got '" +
                               std::string(tok) + "'");
  }
  return value;
}

std::string format_real(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

/// Calls `record(tokens, line_no)` for every non-blank, non-comment line.
/// Returns the number of the last line read.
template <typename F>
std::size_t for_each_record(std::istream& in, F&& record) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    auto tokens = tokenize(view);
    if (tokens.empty()) continue;
    record(tokens, line_no);
  }
  return line_no;
}

void expect_arity(const std::vector<std::string_view>& tokens, std::size_t n, std::size_t line) {
  if (tokens.size() != n) {
    throw ParseError(line, "'" + std::string(tokens[0]) + "' record takes " +
                               std::to_string(n - 1) + " fields, got " +
                               std::to_string(tokens.size() - 1));
  }
}

}  // namespace

BmcInstance parse_instance(std::istream& in) {
  bool have_header = false;
  long long n = 0, m = 0, k = 0;
  std::vector<Edge> edges;
  std::vector<DemandPair> pairs;

  auto vertex = [&](std::string_view tok, std::size_t line) {
    long long v = to_int(tok, line, "vertex id");
    if (v < 0 || v >= n) {
      throw ParseError(line, "vertex id " + std::to_string(v) + " out of range [0, " +
                                 std::to_string(n) + ")");
    }
    return static_cast<Vertex>(v);
  };

  const std::size_t last = for_each_record(in, [&](const auto& tok, std::size_t line) {
    if (tok[0] == "p") {
      if (have_header) throw ParseError(line, "duplicate header");
      if (tok.size() != 5 || tok[1] != "bmc") {
        throw ParseError(line, "malformed header, expected 'p bmc <n> <m> <k>'");
      }
      n = to_int(tok[2], line, "n");
      m = to_int(tok[3], line, "m");
      k = to_int(tok[4], line, "k");
      if (n < 0 || m < 0 || k < 0) throw ParseError(line, "negative count in header");
      if (n > (1LL << 30)) throw ParseError(line, "vertex count too large");
      have_header = true;
      return;
    }
    if (!have_header) throw ParseError(line, "record before 'p bmc' header");
    if (tok[0] == "e") {
      expect_arity(tok, 4, line);
      if (static_cast<long long>(edges.size()) >= m) throw ParseError(line, "more than m edges");
      edges.push_back({vertex(tok[1], line), vertex(tok[2], line), to_real(tok[3], line, "weight")});
    } else if (tok[0] == "d") {
      expect_arity(tok, 3, line);
      if (static_cast<long long>(pairs.size()) >= k) throw ParseError(line, "more than k pairs");
      pairs.push_back({vertex(tok[1], line), vertex(tok[2], line)});
    } else {
      throw ParseError(line, "unknown record type '" + std::string(tok[0]) + "'");
    }
  });

  if (!have_header) throw ParseError(last, "missing 'p bmc' header");
  if (static_cast<long long>(edges.size()) != m) {
    throw ParseError(last, "header declares " + std::to_string(m) + " edges, found " +
                               std::to_string(edges.size()));
  }
  if (static_cast<long long>(pairs.size()) != k) {
    throw ParseError(last, "header declares " + std::to_string(k) + " pairs, found " +
                               std::to_string(pairs.size()));
  }
  return BmcInstance(static_cast<int>(n), std::move(edges), std::move(pairs));
}

BmcInstance parse_instance_string(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

BmcInstance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  return parse_instance(in);
}

void write_instance(std::ostream& out, const BmcInstance& inst) {
  out << "p bmc " << inst.num_vertices() << ' ' << inst.edges().size() << ' '
      << inst.num_pairs() << '\n';
  for (const auto& e : inst.edges()) {
    out << "e " << e.u << ' ' << e.v << ' ' << format_real(e.w) << '\n';
  }
  for (const auto& p : inst.pairs()) out << "d " << p.s << ' ' << p.t << '\n';
}

MinUncutInstance parse_minuncut(std::istream& in) {
  bool have_header = false;
  long long n = 0, c = 0;
  MinUncutInstance mu;

  auto variable = [&](std::string_view tok, std::size_t line) {
    long long v = to_int(tok, line, "variable");
    if (v < 0 || v >= n) {
      throw ParseError(line, "variable " + std::to_string(v) + " out of range [0, " +
                                 std::to_string(n) + ")");
    }
    return static_cast<int>(v);
  };

  const std::size_t last = for_each_record(in, [&](const auto& tok, std::size_t line) {
    if (tok[0] == "p") {
      if (have_header) throw ParseError(line, "duplicate header");
      if (tok.size() != 4 || tok[1] != "minuncut") {
        throw ParseError(line, "malformed header, expected 'p minuncut <n> <c>'");
      }
      n = to_int(tok[2], line, "n");
      c = to_int(tok[3], line, "c");
      if (n < 0 || c < 0) throw ParseError(line, "negative count in header");
      if (n > (1LL << 29)) throw ParseError(line, "variable count too large");
      have_header = true;
      return;
    }
    if (!have_header) throw ParseError(line, "record before 'p minuncut' header");
    if (tok[0] != "c") throw ParseError(line, "unknown record type '" + std::string(tok[0]) + "'");
    expect_arity(tok, 4, line);
    if (static_cast<long long>(mu.constraints.size()) >= c) {
      throw ParseError(line, "more than c constraints");
    }
    const int i = variable(tok[1], line);
    const int j = variable(tok[2], line);
    const long long parity = to_int(tok[3], line, "parity");
    if (parity != 0 && parity != 1) throw ParseError(line, "parity must be 0 or 1");
    mu.constraints.push_back({i, j, static_cast<int>(parity)});
  });

  if (!have_header) throw ParseError(last, "missing 'p minuncut' header");
  if (static_cast<long long>(mu.constraints.size()) != c) {
    throw ParseError(last, "header declares " + std::to_string(c) + " constraints, found " +
                               std::to_string(mu.constraints.size()));
  }
  mu.num_vars = static_cast<int>(n);
  return mu;
}

MinUncutInstance parse_minuncut_string(const std::string& text) {
  std::istringstream in(text);
  return parse_minuncut(in);
}

MinUncutInstance read_minuncut_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  return parse_minuncut(in);
}

void write_minuncut(std::ostream& out, const MinUncutInstance& mu) {
  out << "p minuncut " << mu.num_vars << ' ' << mu.constraints.size() << '\n';
  for (const auto& c : mu.constraints) out << "c " << c.i << ' ' << c.j << ' ' << c.parity << '\n';
}

}  // namespace bmc
