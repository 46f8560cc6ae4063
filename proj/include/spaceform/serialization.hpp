#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "spaceform/errors.hpp"
#include "spaceform/geometry.hpp"
#include "spaceform/harness.hpp"
#include "spaceform/projections.hpp"

namespace spaceform {

// ordered_json keeps insertion order, so serialized objects have a stable
// key layout and report files are reproducible byte for byte.
using json = nlohmann::ordered_json;

inline const char* model_code(ModelKind k) {
  switch (k) {
    case ModelKind::Spherical: return "S";
    case ModelKind::Euclidean: return "E";
    case ModelKind::Hyperbolic: return "H";
  }
  return "?";
}

inline ModelKind model_from_code(const std::string& code) {
  if (code == "S") return ModelKind::Spherical;
  if (code == "E") return ModelKind::Euclidean;
  if (code == "H") return ModelKind::Hyperbolic;
  raise(Err::BadParameter, "unknown model code '" + code + "' (expected S, E or H)");
}

namespace detail {

inline const json& require_field(const json& j, const char* field) {
  if (!j.is_object() || !j.contains(field))
    raise(Err::BadParameter, std::string("missing field '") + field + "'");
  return j.at(field);
}

inline int require_int(const json& j, const char* field) {
  const json& v = require_field(j, field);
  if (!v.is_number_integer())
    raise(Err::BadParameter, std::string("field '") + field + "' must be an integer");
  return v.get<int>();
}

inline std::string require_string(const json& j, const char* field) {
  const json& v = require_field(j, field);
  if (!v.is_string())
    raise(Err::BadParameter, std::string("field '") + field + "' must be a string");
  return v.get<std::string>();
}

inline Vec require_vec(const json& v, const char* what) {
  if (!v.is_array())
    raise(Err::BadParameter, std::string(what) + " must be an array of numbers");
  Vec out;
  out.reserve(v.size());
  for (const json& c : v) {
    if (!c.is_number())
      raise(Err::BadParameter, std::string(what) + " must be an array of numbers");
    out.push_back(c.get<double>());
  }
  return out;
}

}  // namespace detail

inline json to_json(const ModelPoint& x) {
  return json{{"model", model_code(x.model.kind)}, {"n", x.model.n}, {"v", x.v}};
}

inline ModelPoint point_from_json(const json& j) {
  const Model model{model_from_code(detail::require_string(j, "model")),
                    detail::require_int(j, "n")};
  return make_point(model, detail::require_vec(detail::require_field(j, "v"), "'v'"));
}

inline json to_json(const PSpace& ps) {
  json j{{"model", model_code(ps.model.kind)},
         {"n", ps.model.n},
         {"p", ps.p},
         {"span", ps.span.basis}};
  if (ps.model.kind == ModelKind::Euclidean) j["base"] = ps.base;
  return j;
}

inline PSpace pspace_from_json(const json& j) {
  const Model model{model_from_code(detail::require_string(j, "model")),
                    detail::require_int(j, "n")};
  const int p = detail::require_int(j, "p");
  const json& span = detail::require_field(j, "span");
  if (!span.is_array() || span.empty())
    raise(Err::BadParameter, "'span' must be a non-empty array of vectors");
  std::vector<Vec> rows;
  rows.reserve(span.size());
  for (const json& row : span) rows.push_back(detail::require_vec(row, "'span' row"));

  PSpace ps;
  if (model.kind == ModelKind::Euclidean) {
    const ModelPoint base = make_point(
        model, detail::require_vec(detail::require_field(j, "base"), "'base'"));
    ps = make_pspace(model, base, rows);
  } else {
    ps = make_pspace(model, rows);
  }
  if (ps.p != p)
    raise(Err::BadParameter, "declared p = " + std::to_string(p) +
                                 " but the span has dimension " + std::to_string(ps.p));
  return ps;
}

inline json to_json(const ProjectionResult& r) {
  return json{{"foot", to_json(r.foot)},
              {"dist", r.dist},
              {"ortho_residual", r.ortho_residual},
              {"low_confidence", r.low_confidence}};
}

inline json to_json(const TrialReport& r) {
  return json{{"trial", r.trial},
              {"seed", r.seed},
              {"model", model_code(r.model.kind)},
              {"n", r.model.n},
              {"p", r.p},
              {"q", r.q},
              {"residual", r.residual},
              {"probe_residual", r.probe_residual},
              {"n_probe", r.n_probe},
              {"d_xy", r.d_xy},
              {"d_yz", r.d_yz},
              {"d_xz", r.d_xz},
              {"pass", r.pass}};
}

inline json to_json(const CounterexampleReport& r) {
  return json{{"trial", r.trial},
              {"hyp_residual", r.hyp_residual},
              {"angles", r.yzu_angles},
              {"min_defect", r.min_defect},
              {"non_right", r.non_right}};
}

inline json suite_header(const SuiteParams& sp) {
  return json{{"version", 1},
              {"model", model_code(sp.model.kind)},
              {"n", sp.model.n},
              {"p", sp.p},
              {"q", sp.q},
              {"seeds", json::array({sp.seed})},
              {"tol", sp.tolerance}};
}

// Report file layout: one header object, then one report object per line.
inline void write_report_lines(std::ostream& os, const json& header,
                               const std::vector<TrialReport>& reports) {
  os << header.dump() << '\n';
  for (const TrialReport& r : reports) os << to_json(r).dump() << '\n';
}

}  // namespace spaceform
