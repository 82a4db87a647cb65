#include <istream>
#include <ostream>
#include <string>

#include "bmc/errors.hpp"
#include "bmc/rounding.hpp"
#include "json.hpp"

namespace bmc {

namespace {

using json = nlohmann::ordered_json;

json cert_json(const RadiusCertificate& c) {
  return {{"radius", c.radius},     {"kind", to_string(c.kind)}, {"parameter", c.parameter},
          {"cut", c.cut_at_r},      {"volume", c.volume_at_r},   {"bound", c.bound},
          {"lo", c.lo},             {"hi", c.hi}};
}

RadiusCertificate cert_from(const json& j) {
  RadiusCertificate c;
  c.radius = j.at("radius").get<double>();
  const auto kind = j.at("kind").get<std::string>();
  if (kind == to_string(RadiusKind::TotalCharged)) {
    c.kind = RadiusKind::TotalCharged;
  } else if (kind == to_string(RadiusKind::VolumeCharged)) {
    c.kind = RadiusKind::VolumeCharged;
  } else {
    throw std::invalid_argument("unknown certificate kind '" + kind + "'");
  }
  c.parameter = j.at("parameter").get<double>();
  c.cut_at_r = j.at("cut").get<double>();
  c.volume_at_r = j.at("volume").get<double>();
  c.bound = j.at("bound").get<double>();
  c.lo = j.at("lo").get<double>();
  c.hi = j.at("hi").get<double>();
  return c;
}

}  // namespace

void write_trace(std::ostream& out, const RunTrace& trace) {
  json head = {{"type", "run"},
               {"method", to_string(trace.method)},
               {"num_pairs", trace.num_pairs},
               {"v_star", trace.v_star}};
  if (trace.method == RoundingMethod::Sdp) {
    head["seed"] = trace.seed;
    head["beta"] = trace.beta;
    head["c_total"] = trace.c_total;
    head["c_volume"] = trace.c_volume;
  }
  out << head.dump() << '\n';
  for (const auto& st : trace.steps) {
    json j = {{"type", "step"},
              {"iteration", st.iteration},
              {"pair", st.pair},
              {"centers_x", st.centers_x},
              {"centers_xbar", st.centers_xbar},
              {"initial_volume", st.initial_volume},
              {"delta", st.delta},
              {"regime", st.regime},
              {"radius", st.radius},
              {"cert_x", cert_json(st.cert_x)},
              {"cert_xbar", cert_json(st.cert_xbar)},
              {"to_x", st.to_x},
              {"to_xbar", st.to_xbar},
              {"remaining_pairs", st.remaining_pairs}};
    out << j.dump() << '\n';
  }
  json tail = {{"type", "result"},
               {"leftovers", trace.leftovers},
               {"greedy_leftovers", trace.greedy_leftovers},
               {"cut_value", trace.cut_value}};
  out << tail.dump() << '\n';
}

RunTrace read_trace(std::istream& in) {
  RunTrace trace;
  std::string line;
  std::size_t line_no = 0;
  bool have_head = false, have_tail = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      const auto type = j.at("type").get<std::string>();
      if (type == "run") {
        const auto method = j.at("method").get<std::string>();
        if (method != "lp" && method != "sdp") throw ParseError(line_no, "unknown method");
        trace.method = method == "lp" ? RoundingMethod::Lp : RoundingMethod::Sdp;
        trace.num_pairs = j.at("num_pairs").get<int>();
        trace.v_star = j.at("v_star").get<double>();
        trace.seed = j.value("seed", std::uint64_t{0});
        trace.beta = j.value("beta", 0.125);
        trace.c_total = j.value("c_total", 64.0);
        trace.c_volume = j.value("c_volume", 64.0);
        have_head = true;
      } else if (type == "step") {
        TraceStep st;
        st.iteration = j.at("iteration").get<int>();
        st.pair = j.at("pair").get<int>();
        st.centers_x = j.at("centers_x").get<std::vector<Vertex>>();
        st.centers_xbar = j.at("centers_xbar").get<std::vector<Vertex>>();
        st.initial_volume = j.at("initial_volume").get<double>();
        st.delta = j.at("delta").get<double>();
        st.regime = j.at("regime").get<std::string>();
        st.radius = j.at("radius").get<double>();
        st.cert_x = cert_from(j.at("cert_x"));
        st.cert_xbar = cert_from(j.at("cert_xbar"));
        st.to_x = j.at("to_x").get<std::vector<Vertex>>();
        st.to_xbar = j.at("to_xbar").get<std::vector<Vertex>>();
        st.remaining_pairs = j.at("remaining_pairs").get<int>();
        trace.steps.push_back(std::move(st));
      } else if (type == "result") {
        trace.leftovers = j.at("leftovers").get<std::vector<Vertex>>();
        trace.greedy_leftovers = j.at("greedy_leftovers").get<bool>();
        trace.cut_value = j.at("cut_value").get<double>();
        have_tail = true;
      } else {
        throw ParseError(line_no, "unknown record type '" + type + "'");
      }
    } catch (const json::exception& e) {
      throw ParseError(line_no, e.what());
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (!have_head || !have_tail) throw ParseError(line_no, "trace lacks its run or result record");
  return trace;
}

}  // namespace bmc
