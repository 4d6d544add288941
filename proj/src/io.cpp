#include "entloc/io.hpp"

#include "entloc/version.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace entloc {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::vector<std::string> default_labels(size_t n) {
  std::vector<std::string> labels;
  for (size_t i = 0; i < n; ++i) {
    if (i < 26)
      labels.push_back(std::string(1, static_cast<char>('A' + i)));
    else
      labels.push_back("P" + std::to_string(i));
  }
  return labels;
}

BigRational rational_from_json(const json& pair) {
  if (!pair.is_array() || pair.size() != 2)
    throw InvalidParams("rational values are [numerator, denominator] pairs");
  const long long num = pair[0].get<long long>();
  const long long den = pair[1].get<long long>();
  if (den == 0) throw InvalidParams("rational denominator is zero");
  return BigRational(num, den);
}

Ensemble single_member(PureStateVec psi) {
  PartySystem sys = psi.system;
  return Ensemble(sys, {{1.0, std::move(psi), std::nullopt}});
}

LoadedState parse_family_spec(const json& j) {
  const std::string family = j.at("family").get<std::string>();
  const json params = j.value("params", json::object());
  if (family == "smolin" && !params.contains("seed")) {
    SmolinFamily fam = generalized_smolin(SmolinParams::standard());
    return {fam.ensemble, "smolin (standard parameters)"};
  }
  if (family == "smolin") {
    const Seed seed = params.at("seed").get<Seed>();
    SmolinFamily fam = generalized_smolin(SmolinParams::random(seed));
    return {fam.ensemble, "smolin (random parameters, seed " + std::to_string(seed) + ")"};
  }
  if (family == "example2") {
    std::vector<double> eta = params.value("eta", std::vector<double>{0.0, 0.0, 0.0});
    if (eta.size() != 3) throw InvalidParams("example2 takes an eta triple");
    PureStateVec psi = example2_state(EtaParams{eta[0], eta[1], eta[2]});
    return {single_member(std::move(psi)), "example2 eta family"};
  }
  std::vector<int> dims = params.value("dims", std::vector<int>{2, 2});
  std::vector<std::string> labels =
      params.value("labels", default_labels(dims.size()));
  PartySystem sys(labels, dims);
  std::variant<PureStateVec, MixedState> state = standard_states(family, sys);
  if (std::holds_alternative<PureStateVec>(state))
    return {single_member(std::get<PureStateVec>(std::move(state))), family};
  return {ensemble_from_state(std::get<MixedState>(state)), family};
}

}  // namespace

LoadedState parse_state_spec(const json& j) {
  if (!j.is_object()) throw InvalidParams("state spec must be a json object");
  if (j.contains("family")) return parse_family_spec(j);

  std::vector<int> dims = j.at("dims").get<std::vector<int>>();
  std::vector<std::string> labels = j.at("labels").get<std::vector<std::string>>();
  PartySystem sys(labels, dims);
  const bool exact = j.value("exact", false);
  const json& members_json = j.at("ensemble");
  if (!members_json.is_array() || members_json.empty())
    throw InvalidParams("ensemble must be a nonempty array");

  std::vector<EnsembleMember> members;
  for (const json& mj : members_json) {
    const double weight = mj.at("weight").get<double>();
    const json& amps = mj.at("amplitudes");
    if (!amps.is_array() || static_cast<long>(amps.size()) != sys.total_dim())
      throw InvalidParams("amplitude count does not match the system dimension");
    VectorXcd v(sys.total_dim());
    if (exact) {
      std::vector<GaussianRational> ex;
      ex.reserve(amps.size());
      for (long i = 0; i < sys.total_dim(); ++i) {
        const json& a = amps[i];
        if (!a.is_array() || a.size() != 2)
          throw InvalidParams("exact amplitudes are [re, im] rational pairs");
        ex.emplace_back(rational_from_json(a[0]), rational_from_json(a[1]));
        v(i) = ex.back().to_cx();
      }
      const double nv = v.norm();
      if (!(nv > 0.0)) throw InvalidParams("exact amplitudes are identically zero");
      v /= nv;
      members.push_back({weight, PureStateVec(sys, v), std::move(ex)});
    } else {
      for (long i = 0; i < sys.total_dim(); ++i) {
        const json& a = amps[i];
        if (!a.is_array() || a.size() != 2)
          throw InvalidParams("amplitudes are [re, im] pairs");
        v(i) = Cx(a[0].get<double>(), a[1].get<double>());
      }
      members.push_back({weight, PureStateVec(sys, v), std::nullopt});
    }
  }
  return {Ensemble(sys, members), "ensemble spec"};
}

LoadedState read_state_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw InvalidParams("cannot open state spec: " + path);
  json j;
  in >> j;
  return parse_state_spec(j);
}

namespace {

std::string rational_string(const BigRational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

long long small_int(const boost::multiprecision::cpp_int& v) {
  return v.convert_to<long long>();
}

}  // namespace

ordered_json state_spec_json(const Ensemble& e) {
  ordered_json j;
  j["dims"] = e.system().dims();
  j["labels"] = e.system().labels();
  const bool exact = e.exact();
  if (exact) j["exact"] = true;
  ordered_json members = ordered_json::array();
  for (const EnsembleMember& m : e.members()) {
    ordered_json mj;
    mj["weight"] = m.weight;
    ordered_json amps = ordered_json::array();
    if (exact) {
      for (const GaussianRational& g : *m.exact) {
        ordered_json re = ordered_json::array(
            {small_int(numerator(g.re)), small_int(denominator(g.re))});
        ordered_json im = ordered_json::array(
            {small_int(numerator(g.im)), small_int(denominator(g.im))});
        amps.push_back(ordered_json::array({std::move(re), std::move(im)}));
      }
    } else {
      for (long i = 0; i < m.state.amplitudes.size(); ++i) {
        const Cx a = m.state.amplitudes(i);
        amps.push_back(ordered_json::array({a.real(), a.imag()}));
      }
    }
    mj["amplitudes"] = std::move(amps);
    members.push_back(std::move(mj));
  }
  j["ensemble"] = std::move(members);
  return j;
}

void write_state_spec(const std::string& path, const Ensemble& e) {
  std::ofstream out(path);
  if (!out.good()) throw InvalidParams("cannot write state spec: " + path);
  out << state_spec_json(e).dump(2) << '\n';
}

ordered_json report_header(const std::string& command, Seed seed) {
  ordered_json h;
  h["tool"] = "entloc";
  h["version"] = kVersion;
  h["command"] = command;
  h["seed"] = seed;
  h["convention"] =
      "local-unitary point transport: Forward maps each measured block b to conj(U) b, "
      "Inverse applies U^T; asserted by the covariance audit";
  ordered_json tols;
  tols["tau_rank"] = tol::rank_rel;
  tols["ppt_tau"] = 1e-10;
  tols["unitary"] = tol::unitary;
  tols["fingerprint_rel"] = tol::fingerprint_rel;
  h["tolerances"] = std::move(tols);
  return h;
}

ordered_json point_json(const PointPP& p) {
  ordered_json blocks = ordered_json::array();
  for (const VectorXcd& b : p.blocks) {
    ordered_json vec = ordered_json::array();
    for (long i = 0; i < b.size(); ++i)
      vec.push_back(ordered_json::array({b(i).real(), b(i).imag()}));
    blocks.push_back(std::move(vec));
  }
  ordered_json j;
  j["blocks"] = std::move(blocks);
  return j;
}

namespace {

std::vector<std::vector<int>> nested_exponents(const std::vector<std::uint16_t>& flat,
                                               const std::vector<int>& group_sizes) {
  std::vector<std::vector<int>> nested;
  size_t at = 0;
  for (int sz : group_sizes) {
    std::vector<int> g;
    for (int i = 0; i < sz; ++i) g.push_back(static_cast<int>(flat[at++]));
    nested.push_back(std::move(g));
  }
  return nested;
}

template <class K, class CoeffFn>
ordered_json poly_json_impl(const MultiPoly<K>& q, CoeffFn coeff) {
  ordered_json j;
  j["group_sizes"] = q.group_sizes();
  j["multidegree"] = q.multidegree();
  ordered_json terms = ordered_json::array();
  // the term map is keyed by the concatenated exponent vector, so iteration
  // is already the sorted monomial order
  for (const auto& [e, c] : q.terms()) {
    ordered_json t;
    t["exponents"] = nested_exponents(e, q.group_sizes());
    t["coeff"] = coeff(c);
    terms.push_back(std::move(t));
  }
  j["terms"] = std::move(terms);
  return j;
}

}  // namespace

ordered_json poly_json(const MultiPoly<Cx>& q) {
  return poly_json_impl(q, [](const Cx& c) {
    return ordered_json::array({c.real(), c.imag()});
  });
}

ordered_json poly_json(const MultiPoly<GaussianRational>& q) {
  return poly_json_impl(q, [](const GaussianRational& c) {
    return ordered_json::array({rational_string(c.re), rational_string(c.im)});
  });
}

namespace {

const char* verdict_name(CutVerdictTag v) {
  switch (v) {
    case CutVerdictTag::Entangled: return "Entangled";
    case CutVerdictTag::ConsistentWithSeparable: return "ConsistentWithSeparable";
    case CutVerdictTag::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

const char* linearity_name(LinearityTag t) {
  switch (t) {
    case LinearityTag::Linear: return "Linear";
    case LinearityTag::NonlinearWitness: return "NonlinearWitness";
    case LinearityTag::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

ordered_json linearity_json(const LinearityVerdict& v) {
  ordered_json j;
  j["tag"] = linearity_name(v.tag);
  j["components_found"] = v.components_found;
  ordered_json comps = ordered_json::array();
  for (const ComponentSample& c : v.components) {
    ordered_json cj;
    cj["points"] = static_cast<int>(c.points.size());
    cj["local_dim"] = c.local_dim;
    cj["span_product_dim"] = c.span_product_dim;
    cj["fitted_coefficient_rank"] = c.fitted_coefficient_rank;
    if (c.fitted_form) cj["fitted_form"] = poly_json(*c.fitted_form);
    comps.push_back(std::move(cj));
  }
  j["components"] = std::move(comps);
  if (v.witness) {
    ordered_json w;
    w["component"] = v.witness->component;
    w["locus_point"] = point_json(v.witness->locus_point);
    w["escape_point"] = point_json(v.witness->escape_point);
    w["detail"] = v.witness->detail;
    j["witness"] = std::move(w);
  } else {
    j["witness"] = nullptr;
  }
  j["note"] = v.note;
  return j;
}

}  // namespace

ordered_json screen_report_json(const ScreenReport& r) {
  ordered_json j;
  j["seed"] = r.seed;
  j["tau_rank"] = r.tau_rank;
  j["any_inconclusive"] = r.any_inconclusive;
  ordered_json cuts = ordered_json::array();
  for (const CutReport& cr : r.cuts) {
    ordered_json cj;
    cj["cut"] = cr.cut.to_string();
    if (cr.ppt) {
      ordered_json pj;
      pj["min_eigenvalue"] = cr.ppt->min_eigenvalue;
      pj["is_ppt"] = cr.ppt->is_ppt;
      cj["ppt"] = std::move(pj);
    } else {
      cj["ppt"] = nullptr;
    }
    ordered_json loci = ordered_json::array();
    for (const LocusFinding& lf : cr.loci) {
      ordered_json lj;
      lj["k"] = lf.k;
      lj["empty_locus"] = lf.empty_locus;
      lj["sample_attempts"] = lf.sample_attempts;
      lj["sample_successes"] = lf.sample_successes;
      lj["linearity"] = linearity_json(lf.linearity);
      loci.push_back(std::move(lj));
    }
    cj["loci"] = std::move(loci);
    cj["verdict"] = verdict_name(cr.verdict);
    cj["justification"] = cr.justification;
    cuts.push_back(std::move(cj));
  }
  j["cuts"] = std::move(cuts);
  return j;
}

void write_report(const std::string& path, const ordered_json& report) {
  std::ofstream out(path);
  if (!out.good()) throw InvalidParams("cannot write report: " + path);
  out << report.dump(2) << '\n';
}

}  // namespace entloc
