#include "bmc/report.hpp"

#include <cctype>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "bmc/errors.hpp"
#include "bmc/exact.hpp"
#include "bmc/lp_relaxation.hpp"
#include "bmc/sdp_relaxation.hpp"
#include "json.hpp"

namespace bmc {

namespace {

using json = nlohmann::ordered_json;
constexpr double kBoundTolerance = 1e-6;

void require_clean(const TraceReport& rep) {
  if (rep.ok()) return;
  std::string msg = "rounding trace failed replay:";
  for (const auto& f : rep.failures) msg += "\n  " + f;
  throw InternalError(msg);
}

}  // namespace

std::string to_string(SolveMethod method) {
  switch (method) {
    case SolveMethod::Brute: return "brute";
    case SolveMethod::Exact: return "exact";
    case SolveMethod::Lp: return "lp";
    case SolveMethod::Sdp: return "sdp";
  }
  return "?";
}

SolveMethod parse_solve_method(const std::string& name) {
  if (name == "brute") return SolveMethod::Brute;
  if (name == "exact") return SolveMethod::Exact;
  if (name == "lp") return SolveMethod::Lp;
  if (name == "sdp") return SolveMethod::Sdp;
  throw std::invalid_argument("unknown method '" + name + "'");
}

SolveReport run_solve(const BmcInstance& inst, const SolveOptions& opt) {
  require_valid(inst);
  const auto t0 = std::chrono::steady_clock::now();

  SolveReport rep;
  rep.method = opt.method;
  rep.num_vertices = inst.num_vertices();
  rep.num_pairs = inst.num_pairs();

  if (opt.method == SolveMethod::Brute) {
    rep.partition = brute_force(inst);
  } else {
    const FusedInstance fused = fuse_demands(inst);
    const BmcInstance& fi = fused.instance;
    Bipartition part;
    if (opt.method == SolveMethod::Exact) {
      part = solve_exact(fi);
    } else if (opt.method == SolveMethod::Lp) {
      const LpSolution lp = build_and_solve_lp(fi);
      RoundingResult r = round_lp(fi, lp, {opt.greedy_leftovers});
      require_clean(verify_trace(fi, lp.metric, r.trace, r.partition));
      rep.lower_bound = lp.value;
      part = std::move(r.partition);
      if (opt.keep_trace) rep.trace = std::move(r.trace);
    } else {
      const GramSolution g = build_and_solve_sdp(fi);
      const VectorEmbedding emb = extract_vectors(g);
      SdpRoundingConfig cfg;
      cfg.seed = opt.seed;
      cfg.greedy_leftovers = opt.greedy_leftovers;
      RoundingResult r = round_sdp(fi, emb, cfg);
      require_clean(verify_trace(fi, emb.metric, r.trace, r.partition));
      rep.lower_bound = g.value;
      rep.seed = opt.seed;
      part = std::move(r.partition);
      if (opt.keep_trace) rep.trace = std::move(r.trace);
    }
    rep.partition = fused.lift(inst, part);
  }

  if (!is_feasible(inst, rep.partition.side)) {
    throw InternalError("solver returned a partition that leaves a pair unseparated");
  }
  rep.cut_value = cut_value(inst, rep.partition.side);
  rep.partition.cut_value = rep.cut_value;
  // Relaxation values at or below the solver tolerance count as zero.
  if (rep.lower_bound && *rep.lower_bound > kBoundTolerance) {
    rep.ratio = rep.cut_value / *rep.lower_bound;
    if (*rep.ratio < 1.0 - 1e-6) throw InternalError("cut value below the relaxation bound");
  }
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::string report_json(const SolveReport& report, bool with_time) {
  json j;
  j["method"] = to_string(report.method);
  j["num_vertices"] = report.num_vertices;
  j["num_pairs"] = report.num_pairs;
  j["cut_value"] = report.cut_value;
  j["lower_bound"] = report.lower_bound ? json(*report.lower_bound) : json(nullptr);
  j["ratio"] = report.ratio ? json(*report.ratio) : json(nullptr);
  j["seed"] = report.seed ? json(*report.seed) : json(nullptr);
  json sides = json::array();
  for (Side s : report.partition.side) sides.push_back(s == Side::X ? 0 : 1);
  j["partition"] = std::move(sides);
  if (report.trace) j["iterations"] = report.trace->steps.size();
  if (with_time) j["wall_time"] = report.wall_time;
  return j.dump(2);
}

std::string report_table(const SolveReport& report, bool with_time) {
  std::ostringstream os;
  os << std::setprecision(10);
  auto row = [&os](const char* key, const auto& value) {
    os << std::left << std::setw(13) << key << value << '\n';
  };
  row("method", to_string(report.method));
  row("vertices", report.num_vertices);
  row("pairs", report.num_pairs);
  row("cut", report.cut_value);
  if (report.lower_bound) row("lower bound", *report.lower_bound);
  if (report.ratio) row("ratio", *report.ratio);
  if (report.seed) row("seed", *report.seed);
  if (report.trace) row("iterations", report.trace->steps.size());
  if (with_time) row("time (s)", report.wall_time);
  std::string x, xbar;
  for (Vertex v = 0; v < static_cast<Vertex>(report.partition.side.size()); ++v) {
    std::string& dst = report.partition.side[v] == Side::X ? x : xbar;
    if (!dst.empty()) dst += ' ';
    dst += std::to_string(v);
  }
  row("X", x);
  row("Xbar", xbar);
  return os.str();
}

std::vector<Side> parse_partition(const std::string& text, int n) {
  std::vector<Side> side;
  std::size_t first = 0;
  while (first < text.size() && std::isspace(static_cast<unsigned char>(text[first]))) ++first;
  if (first < text.size() && text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
      for (const auto& s : j.at("partition")) {
        const int v = s.get<int>();
        if (v != 0 && v != 1) throw ParseError(0, "partition entries must be 0 or 1");
        side.push_back(v == 0 ? Side::X : Side::Xbar);
      }
    } catch (const json::exception& e) {
      throw ParseError(0, std::string("bad partition JSON: ") + e.what());
    }
  } else {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      std::istringstream tokens(line);
      std::string tok;
      while (tokens >> tok) {
        if (tok != "0" && tok != "1") {
          throw ParseError(line_no, "expected side 0 or 1, got '" + tok + "'");
        }
        side.push_back(tok == "0" ? Side::X : Side::Xbar);
      }
    }
  }
  if (static_cast<int>(side.size()) != n) {
    throw ParseError(0, "partition has " + std::to_string(side.size()) + " entries, instance has " +
                            std::to_string(n) + " vertices");
  }
  return side;
}

std::vector<Side> read_partition_file(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_partition(buf.str(), n);
}

}  // namespace bmc
