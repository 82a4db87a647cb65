#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "bmc/errors.hpp"
#include "bmc/io.hpp"
#include "bmc/reductions.hpp"
#include "bmc/report.hpp"
#include "bmc/rounding.hpp"
#include "json.hpp"

namespace {

enum Exit { kOk = 0, kInfeasible = 1, kUsage = 2, kInternal = 3 };

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write '" + path + "'");
  return out;
}

int cmd_solve(const std::string& input, const std::string& method, std::uint64_t seed,
              const std::string& trace_path, bool as_json, bool with_time, bool greedy) {
  const bmc::BmcInstance inst = bmc::read_instance_file(input);
  bmc::SolveOptions opt;
  opt.method = bmc::parse_solve_method(method);
  opt.seed = seed;
  opt.greedy_leftovers = greedy;
  opt.keep_trace = !trace_path.empty();
  if (opt.keep_trace && opt.method != bmc::SolveMethod::Lp && opt.method != bmc::SolveMethod::Sdp) {
    throw std::invalid_argument("--trace needs --method lp or sdp");
  }
  const bmc::SolveReport rep = bmc::run_solve(inst, opt);
  if (rep.trace) {
    auto out = open_output(trace_path);
    bmc::write_trace(out, *rep.trace);
  }
  if (as_json) {
    std::cout << bmc::report_json(rep, with_time) << '\n';
  } else {
    std::cout << bmc::report_table(rep, with_time);
  }
  return kOk;
}

int cmd_reduce(const std::string& kind, const std::string& input, const std::string& output) {
  if (kind == "minuncut") {
    const bmc::MinUncutInstance mu = bmc::read_minuncut_file(input);
    const bmc::BmcInstance inst = bmc::minuncut_to_bmc(mu);
    auto out = open_output(output);
    bmc::write_instance(out, inst);
    std::cout << "wrote BMC instance with " << inst.num_vertices() << " vertices, "
              << inst.edges().size() << " edges, " << inst.num_pairs() << " pairs\n";
    return kOk;
  }
  const bmc::BmcInstance inst = bmc::read_instance_file(input);
  bmc::require_valid(inst);
  if (!inst.has_matching_demands()) {
    throw std::invalid_argument("euler-path needs every vertex in at most one pair");
  }
  const bmc::PathReduction red = bmc::bmc_to_path(inst);
  auto out = open_output(output);
  bmc::write_instance(out, red.path);
  std::cout << "wrote path instance with " << red.path.num_vertices() << " vertices, "
            << red.path.num_pairs() << " pairs\n";
  return kOk;
}

int cmd_path_multicut(const std::string& input, bool as_json) {
  const bmc::BmcInstance inst = bmc::read_instance_file(input);
  bmc::require_valid(inst);
  std::vector<bmc::Vertex> order;
  const bmc::PathInstance path = bmc::path_from_instance(inst, &order);
  const bmc::PathMulticut mc = bmc::path_multicut_dp(path);
  // Edge e_i joins path indices i and i-1.
  nlohmann::ordered_json cut = nlohmann::ordered_json::array();
  for (int i : mc.edges) cut.push_back({order[i], order[i - 1]});
  if (as_json) {
    nlohmann::ordered_json j;
    j["value"] = mc.value;
    j["cut_edges"] = cut;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "value      " << mc.value << '\n' << "cut edges ";
    for (const auto& e : cut) std::cout << ' ' << e[0] << '-' << e[1];
    std::cout << '\n';
  }
  return kOk;
}

int cmd_verify(const std::string& input, const std::string& partition) {
  const bmc::BmcInstance inst = bmc::read_instance_file(input);
  bmc::require_valid(inst);
  const auto side = bmc::read_partition_file(partition, inst.num_vertices());
  const double cut = bmc::cut_value(inst, side);
  if (!bmc::is_feasible(inst, side)) {
    std::cout << "infeasible: some pair has both terminals on one side\n";
    return kInfeasible;
  }
  std::cout << "feasible, cut " << cut << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bipartite multicut solver"};
  app.require_subcommand(1);

  std::string input, output, method = "exact", trace_path, partition, kind;
  std::uint64_t seed = 1;
  bool as_json = false, with_time = false, greedy = false;

  auto* solve = app.add_subcommand("solve", "Solve an instance");
  solve->add_option("--method", method, "brute | exact | lp | sdp")
      ->check(CLI::IsMember({"brute", "exact", "lp", "sdp"}));
  solve->add_option("--input", input, "Instance file")->required();
  solve->add_option("--seed", seed, "Seed for the sdp rounding");
  solve->add_option("--trace", trace_path, "Write the rounding trace here (JSON lines)");
  solve->add_flag("--json", as_json, "Print the report as JSON");
  solve->add_flag("--time", with_time, "Include wall time in JSON output");
  solve->add_flag("--greedy-leftovers", greedy, "Place leftover non-terminals greedily");

  auto* reduce = app.add_subcommand("reduce", "Write a reduced instance");
  reduce->add_option("kind", kind, "minuncut | euler-path")
      ->required()
      ->check(CLI::IsMember({"minuncut", "euler-path"}));
  reduce->add_option("--input", input, "Input file")->required();
  reduce->add_option("--output", output, "Output instance file")->required();

  auto* pmc = app.add_subcommand("path-multicut", "Multicut on a path-shaped instance");
  pmc->add_option("--input", input, "Instance file")->required();
  pmc->add_flag("--json", as_json, "Print JSON");

  auto* verify = app.add_subcommand("verify", "Check a partition against an instance");
  verify->add_option("--input", input, "Instance file")->required();
  verify->add_option("--partition", partition, "Partition file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*solve) return cmd_solve(input, method, seed, trace_path, as_json, with_time, greedy);
    if (*reduce) return cmd_reduce(kind, input, output);
    if (*pmc) return cmd_path_multicut(input, as_json);
    if (*verify) return cmd_verify(input, partition);
  } catch (const bmc::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const bmc::InfeasibleInstance& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const bmc::InternalError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  } catch (const bmc::SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kInternal;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}
