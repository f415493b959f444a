#include "dualtree/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace dualtree {

nlohmann::json counters_to_json(const TraversalCounters& c) {
  return {
      {"query_recursions", c.query_recursions},
      {"reference_recursions", c.reference_recursions},
      {"ref_recursions_before_first_query",
       c.ref_recursions_before_first_query},
      {"ref_recursions_after_last_query", c.ref_recursions_after_last_query},
      {"base_case_calls", c.base_case_calls},
      {"score_calls", c.score_calls},
      {"prunes", c.prunes},
      {"max_reference_set_size", c.max_reference_set_size},
      {"separation_audit_checks", c.separation_audit_checks},
      {"separation_audit_violations", c.separation_audit_violations},
      {"expansion_conservation_violations",
       c.expansion_conservation_violations},
  };
}

nlohmann::json bound_report_to_json(const BoundReport& rep) {
  nlohmann::json j;
  j["c_r"] = rep.c_r;
  if (rep.c_qr) j["c_qr"] = *rep.c_qr;
  j["i_t_query"] = rep.i_t_query;
  j["monochromatic"] = rep.monochromatic;
  if (!rep.monochromatic)
    j["theta"] = {{"value", rep.theta}, {"surrogate_constants", true}};
  j["chi"] = rep.chi;
  j["psi"] = rep.psi;
  j["r_star"] = {
      {"value", rep.r_star},
      {"policy",
       rep.r_star_policy == RStarPolicy::measured ? "measured" : "supplied"},
      {"measured", rep.r_star_measured},
  };
  if (rep.r_star_theoretical)
    j["r_star"]["theoretical"] = *rep.r_star_theoretical;
  j["formula_value"] = rep.formula_value;
  j["formula_text"] = rep.formula_text;
  return j;
}

nlohmann::json tree_stats_to_json(const TreeStats& st) {
  nlohmann::json j;
  j["node_count"] = st.node_count;
  j["max_children"] = st.max_children;
  j["max_depth"] = st.max_depth;
  j["s_top"] = st.s_top.is_leaf() ? nlohmann::json(nullptr)
                                  : nlohmann::json(st.s_top.value());
  j["s_min"] = st.s_min.is_leaf() ? nlohmann::json(nullptr)
                                  : nlohmann::json(st.s_min.value());
  j["leaf_count"] = st.leaf_count;
  if (st.width_bound) j["width_bound_c4"] = *st.width_bound;
  if (st.depth_comparator) j["depth_comparator_c2_log_n"] = *st.depth_comparator;
  return j;
}

namespace {
std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

std::string neighbors_to_csv(std::span<const NeighborAnswer> answers) {
  std::string out = "query_id,neighbor_id,distance\n";
  for (size_t q = 0; q < answers.size(); ++q) {
    out += std::to_string(q);
    out += ',';
    out += std::to_string(answers[q].neighbor);
    out += ',';
    out += format_double(answers[q].dist);
    out += '\n';
  }
  return out;
}

std::string estimates_to_csv(std::span<const double> estimates) {
  std::string out = "query_id,estimate\n";
  for (size_t q = 0; q < estimates.size(); ++q) {
    out += std::to_string(q);
    out += ',';
    out += format_double(estimates[q]);
    out += '\n';
  }
  return out;
}

std::string range_results_to_jsonl(
    const std::vector<std::vector<int>>& results) {
  std::string out;
  for (size_t q = 0; q < results.size(); ++q) {
    nlohmann::json line;
    line["query"] = q;
    line["ids"] = results[q];
    out += line.dump();
    out += '\n';
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace dualtree
