#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "entloc/cli.hpp"
#include "entloc/io.hpp"
#include "entloc/random.hpp"

using namespace entloc;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch_dir() {
  fs::path d = fs::temp_directory_path() / "entloc_io_tests";
  fs::create_directories(d);
  return d;
}

PartySystem qubits(int n) {
  std::vector<std::string> labels;
  std::vector<int> dims(n, 2);
  for (int i = 0; i < n; ++i) labels.push_back(std::string(1, static_cast<char>('A' + i)));
  return PartySystem(labels, dims);
}

Ensemble random_ensemble(Seed seed, int members) {
  Rng rng(seed);
  PartySystem sys = qubits(3);
  std::vector<EnsembleMember> ms;
  std::vector<double> w(members);
  double total = 0.0;
  for (auto& x : w) {
    x = 0.3 + rng.uniform();
    total += x;
  }
  for (int f = 0; f < members; ++f)
    ms.push_back({w[f] / total, random_pure_state(sys, rng), std::nullopt});
  return Ensemble(sys, ms);
}

Ensemble product_mixture_3(Seed seed) {
  Rng rng(seed);
  PartySystem sys = qubits(3);
  std::vector<EnsembleMember> ms;
  for (int f = 0; f < 3; ++f) {
    VectorXcd amp(8);
    VectorXcd u(2), v(2), w(2);
    for (int i = 0; i < 2; ++i) {
      u(i) = rng.cgauss();
      v(i) = rng.cgauss();
      w(i) = rng.cgauss();
    }
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c) amp(4 * a + 2 * b + c) = u(a) * v(b) * w(c);
    amp /= amp.norm();
    ms.push_back({1.0 / 3.0, PureStateVec(sys, amp), std::nullopt});
  }
  return Ensemble(sys, ms);
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  json j;
  in >> j;
  return j;
}

}  // namespace

TEST_CASE("state spec json round trip") {
  Ensemble e = random_ensemble(2024, 2);
  nlohmann::ordered_json j = state_spec_json(e);
  REQUIRE(j.contains("dims"));
  REQUIRE(j.contains("labels"));
  REQUIRE(j.contains("ensemble"));
  LoadedState back = parse_state_spec(j);
  MatrixXcd a = e.to_mixed_state().matrix;
  MatrixXcd b = back.ensemble.to_mixed_state().matrix;
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);

  fs::path p = scratch_dir() / "roundtrip.json";
  write_state_spec(p.string(), e);
  LoadedState again = read_state_spec(p.string());
  MatrixXcd c = again.ensemble.to_mixed_state().matrix;
  CHECK((a - c).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("exact rational amplitudes parse unnormalized") {
  json one = json::array({json::array({1, 1}), json::array({0, 1})});
  json zero = json::array({json::array({0, 1}), json::array({0, 1})});
  json member;
  member["weight"] = 1.0;
  member["amplitudes"] = json::array({one, zero, zero, one});
  json j;
  j["dims"] = {2, 2};
  j["labels"] = {"A", "B"};
  j["exact"] = true;
  j["ensemble"] = json::array({member});
  LoadedState st = parse_state_spec(j);
  REQUIRE(st.ensemble.members().size() == 1);
  const EnsembleMember& m = st.ensemble.members()[0];
  REQUIRE(m.exact.has_value());
  CHECK((*m.exact)[0].to_cx() == Cx(1.0, 0.0));
  CHECK((*m.exact)[1].is_zero());
  CHECK((*m.exact)[3].to_cx() == Cx(1.0, 0.0));
  CHECK(std::abs(m.state.amplitudes(0) - Cx(1.0 / std::sqrt(2.0), 0.0)) < 1e-12);
  CHECK(st.ensemble.exact());
}

TEST_CASE("state spec validation") {
  json member;
  member["weight"] = 0.5;
  member["amplitudes"] =
      json::array({json::array({1.0, 0.0}), json::array({0.0, 0.0}), json::array({0.0, 0.0}),
                   json::array({0.0, 0.0})});
  json j;
  j["dims"] = {2, 2};
  j["labels"] = {"A", "B"};
  j["ensemble"] = json::array({member});
  CHECK_THROWS_AS(parse_state_spec(j), InvalidParams);  // weights sum to 0.5

  json missing;
  missing["labels"] = {"A", "B"};
  CHECK_THROWS(parse_state_spec(missing));
}

TEST_CASE("family mode state specs") {
  json smolin = {{"family", "smolin"}};
  LoadedState st = parse_state_spec(smolin);
  SmolinFamily fam = generalized_smolin(SmolinParams::standard());
  CHECK((st.ensemble.to_mixed_state().matrix - fam.rho.matrix).cwiseAbs().maxCoeff() <
        1e-12);

  json ex2 = {{"family", "example2"}, {"params", {{"eta", {0.3, 0.7, 1.1}}}}};
  LoadedState st2 = parse_state_spec(ex2);
  PureStateVec psi = example2_state(EtaParams{0.3, 0.7, 1.1});
  MatrixXcd expect = psi.amplitudes * psi.amplitudes.adjoint();
  CHECK((st2.ensemble.to_mixed_state().matrix - expect).cwiseAbs().maxCoeff() < 1e-12);

  json ghz = {{"family", "ghz"}, {"params", {{"dims", {2, 2, 2}}}}};
  LoadedState st3 = parse_state_spec(ghz);
  CHECK(st3.ensemble.members().size() == 1);
  CHECK(std::abs(st3.ensemble.members()[0].state.amplitudes(0) -
                 Cx(1.0 / std::sqrt(2.0), 0.0)) < 1e-12);

  json bogus = {{"family", "unheard-of"}};
  CHECK_THROWS_AS(parse_state_spec(bogus), UnknownFamily);
}

TEST_CASE("report header carries version, convention, tolerances") {
  nlohmann::ordered_json h = report_header("analyze", 7);
  CHECK(h["version"] == "0.1.0");
  CHECK(h["command"] == "analyze");
  CHECK(h["seed"] == 7);
  std::string conv = h["convention"];
  CHECK(conv.find("conj(U)") != std::string::npos);
  CHECK(h["tolerances"]["tau_rank"] == 1e-8);
}

TEST_CASE("poly json uses sorted monomial order") {
  MultiPoly<Cx> q(std::vector<int>{2, 2}, std::vector<int>{1, 1});
  q.add_term({1, 0, 0, 1}, Cx(2.0, 0.0));
  q.add_term({0, 1, 1, 0}, Cx(1.0, 0.0));
  q.add_term({0, 1, 0, 1}, Cx(3.0, -1.0));
  nlohmann::ordered_json pj = poly_json(q);
  REQUIRE(pj["terms"].size() == 3);
  std::vector<std::vector<std::vector<int>>> seen;
  for (const auto& t : pj["terms"])
    seen.push_back(t["exponents"].get<std::vector<std::vector<int>>>());
  for (size_t i = 1; i < seen.size(); ++i) CHECK(seen[i - 1] < seen[i]);

  MultiPoly<GaussianRational> qe(std::vector<int>{2}, std::vector<int>{1});
  qe.add_term({1, 0}, GaussianRational(BigRational(1, 2), BigRational(-1, 3)));
  nlohmann::ordered_json ej = poly_json(qe);
  std::string re = ej["terms"][0]["coeff"][0];
  std::string im = ej["terms"][0]["coeff"][1];
  CHECK(re == "1/2");
  CHECK(im == "-1/3");
}

TEST_CASE("cli usage errors exit 1") {
  CHECK(run_cli({}) == 1);
  CHECK(run_cli({"frobnicate"}) == 1);
  CHECK(run_cli({"analyze", "/nonexistent/state.json", "--cut", "A|B"}) == 1);
  CHECK(run_cli({"reproduce", "--example", "bogus"}) == 1);
  CHECK(run_cli({"fingerprint"}) == 1);
  CHECK(run_cli({"fingerprint", "--eta", "0,0,0", "--lambda", "1,1,1,2"}) == 1);

  fs::path ghz = scratch_dir() / "ghz_spec.json";
  {
    std::ofstream out(ghz);
    out << R"({"family":"ghz","params":{"dims":[2,2,2]}})";
  }
  CHECK(run_cli({"analyze", ghz.string(), "--cut", "A::B"}) == 1);
  CHECK(run_cli({"analyze", ghz.string(), "--cut", "A:Q|C"}) == 1);
}

TEST_CASE("cli analyze ghz is deterministic and exits 0") {
  fs::path ghz = scratch_dir() / "ghz_spec.json";
  {
    std::ofstream out(ghz);
    out << R"({"family":"ghz","params":{"dims":[2,2,2]}})";
  }
  fs::path r1 = scratch_dir() / "ghz_report1.json";
  fs::path r2 = scratch_dir() / "ghz_report2.json";
  std::vector<std::string> args = {"analyze",   ghz.string(), "--cut", "A:B|C",
                                   "--k",       "0",          "--samples", "10",
                                   "--seed",    "11",         "--out"};
  std::vector<std::string> a1 = args;
  a1.push_back(r1.string());
  std::vector<std::string> a2 = args;
  a2.push_back(r2.string());
  CHECK(run_cli(a1) == 0);
  CHECK(run_cli(a2) == 0);

  json j1 = read_json(r1);
  json j2 = read_json(r2);
  REQUIRE(j1["cuts"].size() == 1);
  CHECK(j1["cuts"][0]["verdict"] == j2["cuts"][0]["verdict"]);
  CHECK(j1["cuts"][0]["loci"][0]["linearity"]["tag"] == "Linear");
  CHECK(j1["cuts"][0]["loci"][0]["linearity"]["tag"] ==
        j2["cuts"][0]["loci"][0]["linearity"]["tag"]);
  CHECK(j1["version"] == "0.1.0");
  CHECK(j1["seed"] == 11);
}

TEST_CASE("cli analyze reports inconclusive as exit 2 when nothing fires") {
  // Three-product mixture at the split cut A:B|C with k = 0: no PPT block
  // structure, and the rank-0 locus is generically empty, so no criterion
  // can fire.
  Ensemble e = product_mixture_3(321);
  fs::path sp = scratch_dir() / "mix3_spec.json";
  write_state_spec(sp.string(), e);
  fs::path rp = scratch_dir() / "mix3_report.json";
  int code = run_cli({"analyze", sp.string(), "--cut", "A:B|C", "--k", "0", "--samples", "8",
                      "--seed", "5", "--out", rp.string()});
  CHECK(code == 2);
  json j = read_json(rp);
  CHECK(j["cuts"][0]["verdict"] == "Inconclusive");
  CHECK(j["cuts"][0]["loci"][0]["empty_locus"] == true);
}

TEST_CASE("cli fingerprint verdicts") {
  CHECK(run_cli({"fingerprint", "--eta", "0.3,0.7,1.1", "--eta2", "0.1,0.2,0.4"}) == 0);
  CHECK(run_cli({"fingerprint", "--lambda", "1,1,1,2", "--lambda2", "1,1,1,3"}) == 0);
  fs::path rp = scratch_dir() / "fp_report.json";
  CHECK(run_cli({"fingerprint", "--eta", "0,0,0", "--out", rp.string()}) == 0);
  json j = read_json(rp);
  CHECK(j["fingerprint"]["infinite"] == true);

  fs::path rp2 = scratch_dir() / "fp_verdict.json";
  CHECK(run_cli({"fingerprint", "--lambda", "1,1,1,2", "--lambda2", "1,1,1,3", "--out",
                 rp2.string()}) == 0);
  CHECK(read_json(rp2)["verdict"] == "Inequivalent");
}

TEST_CASE("cli reproduce thm5 passes") {
  fs::path rp = scratch_dir() / "thm5_report.json";
  CHECK(run_cli({"reproduce", "--example", "thm5", "--seed", "3", "--out", rp.string()}) == 0);
  json j = read_json(rp);
  CHECK(j["example"] == "thm5");
  CHECK(j["all_pass"] == true);
}
