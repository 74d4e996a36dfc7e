#include "adhm/json_io.hpp"

#include "adhm/errors.hpp"

namespace Eigen {

void to_json(nlohmann::json& j, const MatrixXcd& m) {
  std::vector<double> re, im;
  re.reserve(m.size());
  im.reserve(m.size());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index k = 0; k < m.cols(); ++k) {
      re.push_back(m(i, k).real());
      im.push_back(m(i, k).imag());
    }
  }
  j = {{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

void from_json(const nlohmann::json& j, MatrixXcd& m) {
  const auto rows = j.at("rows").get<Index>();
  const auto cols = j.at("cols").get<Index>();
  const auto re = j.at("re").get<std::vector<double>>();
  const auto im = j.contains("im") ? j.at("im").get<std::vector<double>>()
                                   : std::vector<double>(re.size(), 0.0);
  if (rows < 0 || cols < 0 || re.size() != static_cast<std::size_t>(rows * cols) ||
      im.size() != re.size()) {
    throw adhm::DimensionError("matrix JSON: entry count does not match rows x cols");
  }
  m.resize(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index k = 0; k < cols; ++k) {
      const auto p = static_cast<std::size_t>(i * cols + k);
      m(i, k) = {re[p], im[p]};
    }
  }
}

}  // namespace Eigen

namespace adhm {

void to_json(json& j, const AdhmDatumS4& m) {
  j = {{"k", m.k}, {"r", m.r}, {"a1", m.a1}, {"a2", m.a2}, {"b", m.b}, {"c", m.c}};
}

void from_json(const json& j, AdhmDatumS4& m) {
  m.k = j.at("k").get<int>();
  m.r = j.at("r").get<int>();
  j.at("a1").get_to(m.a1);
  j.at("a2").get_to(m.a2);
  j.at("b").get_to(m.b);
  j.at("c").get_to(m.c);
  m.validate();
}

void to_json(json& j, const MonadDatumP2& m) {
  j = {{"k", m.k}, {"r", m.r}, {"a1", m.a1}, {"a2", m.a2},
       {"d", m.d}, {"b", m.b}, {"c", m.c}};
}

void from_json(const json& j, MonadDatumP2& m) {
  m.k = j.at("k").get<int>();
  m.r = j.at("r").get<int>();
  j.at("a1").get_to(m.a1);
  j.at("a2").get_to(m.a2);
  j.at("d").get_to(m.d);
  j.at("b").get_to(m.b);
  j.at("c").get_to(m.c);
  m.validate();
}

void to_json(json& j, const Subspace& s) {
  j = {{"ambient_dim", s.ambient_dim}, {"dim", s.dim()}, {"basis", s.basis}};
}

void to_json(json& j, const CheckResult& c) {
  j = {{"verdict", to_string(c.verdict)}};
  if (!c.witness.empty()) j["witness"] = c.witness;
  if (c.witness_map) j["witness_map"] = *c.witness_map;
}

void to_json(json& j, const FlowReport& r) {
  j = {{"converged", r.converged},
       {"iterations", r.iterations},
       {"final_residual", r.final_residual},
       {"group_norm", r.group_norm},
       {"instability_flag", r.instability_flag},
       {"integrability_drift", r.integrability_drift}};
}

void to_json(json& j, const LevelSample& s) {
  j = {{"seed", s.seed}, {"attempts", s.attempts}, {"flow", s.report}};
}

void to_json(json& j, const HomotopyReport& r) {
  j = {{"geometry", to_string(r.geometry)},
       {"zeta", r.zeta},
       {"grid", r.grid},
       {"max_level_residual", r.max_level_residual},
       {"max_integrability_residual", r.max_integrability_residual},
       {"residual_bound", r.residual_bound},
       {"start_is_embedding", r.start_is_embedding},
       {"endpoint_distance", r.endpoint_distance},
       {"endpoint_constancy", r.endpoint_constancy},
       {"regularity_failures", r.regularity_failures},
       {"regularity_unknown", r.regularity_unknown},
       {"regularity_checks", r.regularity_checks}};
}

void to_json(json& j, const ResolutionRecord& r) {
  j = {{"representative", r.representative},
       {"flow", r.report},
       {"p_image", r.p_image},
       {"p_norm_initial", r.p_norm_trace.empty() ? 0.0 : r.p_norm_trace.front()},
       {"p_norm_final", r.p_norm_trace.empty() ? 0.0 : r.p_norm_trace.back()},
       {"p_norm_monotone_growth", r.p_norm_monotone_growth},
       {"c1p_before", to_string(r.c1p_before)},
       {"c2p_before", to_string(r.c2p_before)},
       {"c1p_after", to_string(r.c1p_after)},
       {"c2p_after", to_string(r.c2p_after)},
       {"boundary", r.boundary}};
}

void to_json(json& j, const BoundednessTrace& t) {
  j = {{"a1_sq", t.a1_sq},
       {"a2_sq", t.a2_sq},
       {"b_sq", t.b_sq},
       {"mixed", t.mixed},
       {"sum_rule_residual", t.sum_rule_residual},
       {"mixed_rule_residual", t.mixed_rule_residual}};
}

void to_json(json& j, const ChargeReport& r) {
  j = {{"charge", r.charge},
       {"stderr", r.stderr_},
       {"tail", r.tail},
       {"asd_max", r.asd_max},
       {"radius", r.radius},
       {"samples", r.samples},
       {"h", r.h},
       {"importance", r.importance}};
}

}  // namespace adhm
