#include "entloc/cli.hpp"

#include <array>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "entloc/analysis.hpp"
#include "entloc/io.hpp"

namespace entloc {

namespace {

using nlohmann::ordered_json;

std::vector<double> parse_csv_reals(const std::string& text, size_t expected,
                                    const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      double v = std::stod(item, &used);
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw InvalidParams(what + ": trailing junk in '" + item + "'");
      out.push_back(v);
    } catch (const std::logic_error&) {
      throw InvalidParams(what + ": '" + item + "' is not a real number");
    }
  }
  if (out.size() != expected)
    throw InvalidParams(what + " takes " + std::to_string(expected) + " comma-separated reals");
  return out;
}

void emit(const ordered_json& report, const std::string& out_path) {
  if (out_path.empty())
    std::cout << report.dump(2) << std::endl;
  else
    write_report(out_path, report);
}

ordered_json fingerprint_json(const Fingerprint& f) {
  ordered_json j;
  j["num"] = ordered_json::array({f.num.real(), f.num.imag()});
  j["den"] = ordered_json::array({f.den.real(), f.den.imag()});
  const bool inf = f.infinite();
  j["infinite"] = inf;
  if (!inf) {
    const Cx v = f.num / f.den;
    j["value"] = ordered_json::array({v.real(), v.imag()});
  }
  return j;
}

const char* lu_verdict_name(LuVerdict v) {
  return v == LuVerdict::Inequivalent ? "Inequivalent" : "Undetermined";
}

ordered_json obstruction_json(const ObstructionReport& r) {
  ordered_json j;
  j["verdict"] = lu_verdict_name(r.verdict);
  j["feasible_matchings"] = r.feasible_matchings;
  j["best_residual"] = r.best_residual;
  ordered_json rel = ordered_json::array();
  for (bool b : r.relation_violated) rel.push_back(b);
  j["relation_violated"] = std::move(rel);
  return j;
}

ordered_json ppt_json(const PPTReport& r) {
  ordered_json j;
  j["min_eigenvalue"] = r.min_eigenvalue;
  j["is_ppt"] = r.is_ppt;
  return j;
}

struct AnalyzeArgs {
  std::string state_path;
  std::vector<std::string> cuts;
  std::vector<int> ks;
  int samples = 24;
  Seed seed = 20240819;
  double tolerance = tol::rank_rel;
  std::string out;
};

int run_analyze(const AnalyzeArgs& a) {
  LoadedState st = read_state_spec(a.state_path);
  std::vector<Cut> cuts;
  for (const std::string& cs : a.cuts) cuts.push_back(Cut::parse(st.ensemble.system(), cs));
  const std::vector<std::vector<int>> ks(cuts.size(), a.ks);
  ScreenOptions opts;
  opts.samples = a.samples;
  opts.tau_rank = a.tolerance;
  ScreenReport rep = separability_screen(st.ensemble, cuts, ks, a.seed, opts);
  ordered_json report = report_header("analyze", a.seed);
  report["state"] = st.description;
  report["tolerances"]["tau_rank"] = a.tolerance;
  report.update(screen_report_json(rep));
  emit(report, a.out);
  return rep.any_inconclusive ? 2 : 0;
}

struct ReproduceArgs {
  std::string example;
  Seed seed = 20240819;
  std::string out;
};

int reproduce_example1(const ReproduceArgs& a) {
  SmolinFamily fam = generalized_smolin(SmolinParams::standard());
  const PartySystem& sys = fam.ensemble.system();
  ordered_json report = report_header("reproduce", a.seed);
  report["example"] = "1";
  ordered_json pair_cuts = ordered_json::array();
  for (const char* s : {"AB|CD", "AC|BD", "AD|BC"}) {
    PPTReport r = ppt_check(fam.rho, Cut::parse(sys, s));
    ordered_json cj;
    cj["cut"] = s;
    cj.update(ppt_json(r));
    pair_cuts.push_back(std::move(cj));
  }
  report["pair_cuts_ppt"] = std::move(pair_cuts);
  std::vector<Cut> cuts = {Cut::parse(sys, "BCD|A"), Cut::parse(sys, "ACD|B"),
                           Cut::parse(sys, "ABD|C"), Cut::parse(sys, "ABC|D")};
  ScreenReport rep =
      separability_screen(fam.ensemble, cuts, std::vector<std::vector<int>>(4, {1}), a.seed);
  report.update(screen_report_json(rep));
  emit(report, a.out);
  return rep.any_inconclusive ? 2 : 0;
}

int reproduce_example2(const ReproduceArgs& a) {
  const EtaParams base{0.3, 0.7, 1.1};
  PureStateVec psi = example2_state(base);
  const std::vector<std::vector<std::string>> traced_sets = {{"B", "C"}, {"A", "C"}, {"A", "B"},
                                                             {"C"},      {"B"},      {"A"}};
  double worst = 0.0;
  for (const auto& traced : traced_sets) {
    MixedState red = partial_trace(psi, traced);
    Spectrum sp = hermitian_spectrum(red.matrix);
    for (long j = 0; j < sp.eigenvalues.size(); ++j) {
      const double lam = sp.eigenvalues(j);
      if (lam > 1e-6) worst = std::max(worst, std::abs(lam - 1.0 / 3.0));
    }
  }
  ordered_json report = report_header("reproduce", a.seed);
  report["example"] = "2";
  report["eta"] = ordered_json::array({base.eta1, base.eta2, base.eta3});
  report["max_reduced_eigenvalue_deviation"] = worst;
  report["spectra_flat"] = worst <= 1e-9;
  report["fingerprint"] = fingerprint_json(moduli_fingerprint(base));
  ordered_json comparisons = ordered_json::array();
  {
    ordered_json c;
    const EtaParams other{0.1, 0.2, 0.4};
    c["eta2"] = ordered_json::array({other.eta1, other.eta2, other.eta3});
    c["verdict"] = lu_verdict_name(compare_fingerprints(base, other));
    comparisons.push_back(std::move(c));
  }
  {
    ordered_json c;
    const EtaParams cyc{base.eta2, base.eta3, base.eta1};
    c["eta2"] = ordered_json::array({cyc.eta1, cyc.eta2, cyc.eta3});
    c["verdict"] = lu_verdict_name(compare_fingerprints(base, cyc));
    comparisons.push_back(std::move(c));
  }
  report["comparisons"] = std::move(comparisons);
  emit(report, a.out);
  return 0;
}

int reproduce_thm4(const ReproduceArgs& a) {
  const std::array<Cx, 4> l1 = {Cx(1, 0), Cx(1, 0), Cx(1, 0), Cx(2, 0)};
  const std::array<Cx, 4> l2 = {Cx(1, 0), Cx(1, 0), Cx(1, 0), Cx(3, 0)};
  ordered_json report = report_header("reproduce", a.seed);
  report["example"] = "thm4";
  report["lambda"] = ordered_json::array({1.0, 1.0, 1.0, 2.0});
  report["lambda2"] = ordered_json::array({1.0, 1.0, 1.0, 3.0});
  report["pair"] = obstruction_json(smolin_lu_obstruction_report(l1, l2, 1e-6, a.seed));
  report["identity_control"] = obstruction_json(smolin_lu_obstruction_report(l1, l1, 1e-6, a.seed));
  emit(report, a.out);
  return 0;
}

int reproduce_thm5(const ReproduceArgs& a) {
  Theorem5Report r = theorem5_experiment(2, 20, a.seed);
  ordered_json report = report_header("reproduce", a.seed);
  report["example"] = "thm5";
  report["n"] = r.n;
  report["trials"] = r.trials;
  report["min_max_rank"] = r.min_max_rank;
  report["histogram"] = r.histogram;
  report["non_generic"] = r.non_generic;
  report["all_pass"] = r.all_pass;
  emit(report, a.out);
  return 0;
}

int run_reproduce(const ReproduceArgs& a) {
  if (a.example == "1") return reproduce_example1(a);
  if (a.example == "2") return reproduce_example2(a);
  if (a.example == "thm4") return reproduce_thm4(a);
  if (a.example == "thm5") return reproduce_thm5(a);
  throw InvalidParams("unknown example '" + a.example + "' (choose 1, 2, thm4, thm5)");
}

struct FingerprintArgs {
  std::string eta, eta2, lambda, lambda2;
  Seed seed = 20240817;
  std::string out;
};

int run_fingerprint(const FingerprintArgs& a) {
  const bool has_eta = !a.eta.empty();
  const bool has_lambda = !a.lambda.empty();
  if (has_eta == has_lambda)
    throw InvalidParams("provide exactly one of --eta or --lambda");
  if (!has_eta && !a.eta2.empty()) throw InvalidParams("--eta2 needs --eta");
  if (!has_lambda && !a.lambda2.empty()) throw InvalidParams("--lambda2 needs --lambda");

  ordered_json report = report_header("fingerprint", a.seed);
  if (has_eta) {
    std::vector<double> e = parse_csv_reals(a.eta, 3, "--eta");
    const EtaParams p{e[0], e[1], e[2]};
    report["eta"] = e;
    report["fingerprint"] = fingerprint_json(moduli_fingerprint(p));
    if (!a.eta2.empty()) {
      std::vector<double> e2 = parse_csv_reals(a.eta2, 3, "--eta2");
      const EtaParams p2{e2[0], e2[1], e2[2]};
      report["eta2"] = e2;
      report["fingerprint2"] = fingerprint_json(moduli_fingerprint(p2));
      report["verdict"] = lu_verdict_name(compare_fingerprints(p, p2));
    }
  } else {
    std::vector<double> l = parse_csv_reals(a.lambda, 4, "--lambda");
    const std::array<Cx, 4> L = {Cx(l[0], 0), Cx(l[1], 0), Cx(l[2], 0), Cx(l[3], 0)};
    report["lambda"] = l;
    if (!a.lambda2.empty()) {
      std::vector<double> m = parse_csv_reals(a.lambda2, 4, "--lambda2");
      const std::array<Cx, 4> M = {Cx(m[0], 0), Cx(m[1], 0), Cx(m[2], 0), Cx(m[3], 0)};
      report["lambda2"] = m;
      ObstructionReport ob = smolin_lu_obstruction_report(L, M, 1e-6, a.seed);
      report.update(obstruction_json(ob));
    }
  }
  emit(report, a.out);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"algebraic-set entanglement analysis", "entloc"};
  app.require_subcommand(1);

  AnalyzeArgs an_args;
  CLI::App* an = app.add_subcommand("analyze", "separability screen on a state spec");
  an->add_option("state", an_args.state_path, "state spec json file")->required();
  an->add_option("--cut", an_args.cuts, "cut, e.g. A:B|CD (repeatable)")->required();
  an->add_option("--k", an_args.ks, "rank bound k (repeatable; default: derived from the cut)");
  an->add_option("--samples", an_args.samples, "locus samples per k");
  an->add_option("--seed", an_args.seed, "rng seed");
  an->add_option("--tolerance", an_args.tolerance, "relative rank tolerance");
  an->add_option("--out", an_args.out, "report path (stdout when omitted)");

  ReproduceArgs re_args;
  CLI::App* re = app.add_subcommand("reproduce", "re-run a built-in worked example");
  re->add_option("--example", re_args.example, "1 | 2 | thm4 | thm5")->required();
  re->add_option("--seed", re_args.seed, "rng seed");
  re->add_option("--out", re_args.out, "report path (stdout when omitted)");

  FingerprintArgs fp_args;
  CLI::App* fp = app.add_subcommand("fingerprint", "moduli fingerprints and curve-parameter verdicts");
  fp->add_option("--eta", fp_args.eta, "eta triple a,b,c");
  fp->add_option("--eta2", fp_args.eta2, "second eta triple to compare");
  fp->add_option("--lambda", fp_args.lambda, "curve-parameter tuple a,b,c,d");
  fp->add_option("--lambda2", fp_args.lambda2, "second tuple to compare");
  fp->add_option("--seed", fp_args.seed, "rng seed for the matching search");
  fp->add_option("--out", fp_args.out, "report path (stdout when omitted)");

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.push_back("entloc");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(argv_store.size());
  for (const std::string& s : argv_store) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (an->parsed()) return run_analyze(an_args);
    if (re->parsed()) return run_reproduce(re_args);
    if (fp->parsed()) return run_fingerprint(fp_args);
    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "entloc: " << e.what() << std::endl;
    return 1;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  args.reserve(argc > 0 ? argc - 1 : 0);
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args);
}

}  // namespace entloc
