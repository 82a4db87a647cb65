#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "bmc/errors.hpp"
#include "bmc/exact.hpp"
#include "bmc/instance.hpp"
#include "bmc/io.hpp"
#include "bmc/lp_relaxation.hpp"
#include "bmc/reductions.hpp"
#include "bmc/report.hpp"
#include "bmc/sdp_relaxation.hpp"

namespace py = pybind11;
using namespace bmc;

namespace {

BmcInstance make_instance(int n, const std::vector<std::tuple<int, int, double>>& edges,
                          const std::vector<std::pair<int, int>>& pairs) {
  std::vector<Edge> es;
  for (auto [u, v, w] : edges) es.push_back({u, v, w});
  std::vector<DemandPair> ps;
  for (auto [s, t] : pairs) ps.push_back({s, t});
  BmcInstance inst(n, std::move(es), std::move(ps));
  require_valid(inst);
  return inst;
}

std::vector<int> sides(const std::vector<Side>& side) {
  std::vector<int> out;
  for (Side s : side) out.push_back(static_cast<int>(s));
  return out;
}

std::vector<Side> to_sides(const std::vector<int>& bits) {
  std::vector<Side> out;
  for (int b : bits) {
    if (b != 0 && b != 1) throw std::invalid_argument("sides must be 0 or 1");
    out.push_back(b ? Side::Xbar : Side::X);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bipartite multicut solvers and relaxations.";

  py::register_exception<InfeasibleInstance>(m, "InfeasibleInstance", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<InternalError>(m, "InternalError", PyExc_RuntimeError);

  py::class_<BmcInstance>(m, "Instance")
      .def(py::init(&make_instance), py::arg("n"), py::arg("edges"), py::arg("pairs"))
      .def_static("parse", &parse_instance_string, py::arg("text"))
      .def_property_readonly("num_vertices", &BmcInstance::num_vertices)
      .def_property_readonly("num_pairs", &BmcInstance::num_pairs)
      .def_property_readonly("edges",
                             [](const BmcInstance& inst) {
                               std::vector<std::tuple<int, int, double>> out;
                               for (const auto& e : inst.edges()) out.emplace_back(e.u, e.v, e.w);
                               return out;
                             })
      .def_property_readonly("pairs",
                             [](const BmcInstance& inst) {
                               std::vector<std::pair<int, int>> out;
                               for (const auto& p : inst.pairs()) out.emplace_back(p.s, p.t);
                               return out;
                             })
      .def("to_text",
           [](const BmcInstance& inst) {
             std::ostringstream os;
             write_instance(os, inst);
             return os.str();
           })
      .def("cut_value",
           [](const BmcInstance& inst, const std::vector<int>& side) {
             return cut_value(inst, to_sides(side));
           })
      .def("is_feasible", [](const BmcInstance& inst, const std::vector<int>& side) {
        return is_feasible(inst, to_sides(side));
      });

  m.def(
      "solve_json",
      [](const BmcInstance& inst, const std::string& method, std::uint64_t seed) {
        SolveOptions opt;
        opt.method = parse_solve_method(method);
        opt.seed = seed;
        opt.keep_trace = true;
        return report_json(run_solve(inst, opt));
      },
      py::arg("instance"), py::arg("method") = "exact", py::arg("seed") = 1,
      "Solve and return the JSON report.");

  m.def("exact_cut", [](const BmcInstance& inst) {
    const auto fused = fuse_demands(inst);
    const auto p = fused.lift(inst, solve_exact(fused.instance));
    return py::make_tuple(p.cut_value, sides(p.side));
  });
  m.def("brute_force_cut", [](const BmcInstance& inst) {
    const auto p = brute_force(inst);
    return py::make_tuple(p.cut_value, sides(p.side));
  });
  m.def("lp_value", [](const BmcInstance& inst) {
    return build_and_solve_lp(fuse_demands(inst).instance).value;
  });
  m.def("sdp_value", [](const BmcInstance& inst) {
    return build_and_solve_sdp(fuse_demands(inst).instance).value;
  });

  m.def(
      "minuncut_to_bmc",
      [](int num_vars, const std::vector<std::tuple<int, int, int>>& constraints) {
        MinUncutInstance mu{num_vars, {}};
        for (auto [i, j, parity] : constraints) mu.constraints.push_back({i, j, parity});
        return minuncut_to_bmc(mu);
      },
      py::arg("num_vars"), py::arg("constraints"));

  m.def(
      "path_multicut",
      [](const std::vector<double>& weights, const std::vector<std::pair<int, int>>& pairs) {
        const auto mc = path_multicut_dp(PathInstance{weights, pairs});
        return py::make_tuple(mc.value, mc.edges);
      },
      py::arg("weights"), py::arg("pairs"));
}
