#pragma once
// JSON state specifications and analysis reports.
//
// StateSpecFile: either
//   {"dims": [...], "labels": [...], "ensemble": [{"weight": w,
//     "amplitudes": [[re,im], ...]}, ...]}
// with an optional "exact": true, in which case amplitudes are rational
// pairs [[p,q],[r,s]] meaning p/q + (r/s) i (they may be unnormalized),
// or {"family": name, "params": {...}}.

#include <string>

#include <json.hpp>

#include "entloc/analysis.hpp"
#include "entloc/ensemble.hpp"

namespace entloc {

struct LoadedState {
  Ensemble ensemble;
  std::string description;
};

LoadedState parse_state_spec(const nlohmann::json& j);
LoadedState read_state_spec(const std::string& path);

nlohmann::ordered_json state_spec_json(const Ensemble& e);
void write_state_spec(const std::string& path, const Ensemble& e);

// Report pieces. Reports embed seeds, tolerances, the resolved transport
// convention, and the tool version, so a run can be audited and replayed.
nlohmann::ordered_json report_header(const std::string& command, Seed seed);
nlohmann::ordered_json point_json(const PointPP& p);
nlohmann::ordered_json poly_json(const MultiPoly<Cx>& q);          // sorted monomial order
nlohmann::ordered_json poly_json(const MultiPoly<GaussianRational>& q);
nlohmann::ordered_json screen_report_json(const ScreenReport& r);
void write_report(const std::string& path, const nlohmann::ordered_json& report);

}  // namespace entloc
