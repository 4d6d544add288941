#include "entloc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>

#include "entloc/locus.hpp"

namespace entloc {

namespace {

// Defaults: the full-drop k = residual_dim - 1, plus k = 1 for a merged
// multi-party group (where the rank-1 stratum carries the Segre geometry).
std::vector<int> resolve_ks(const Cut& cut, const std::vector<int>* requested) {
  std::set<int> ks;
  if (requested && !requested->empty()) {
    ks.insert(requested->begin(), requested->end());
  } else {
    ks.insert(static_cast<int>(cut.residual_dim()) - 1);
    if (cut.two_block() && cut.groups()[0].size() >= 2 && cut.residual_dim() > 1) ks.insert(1);
  }
  return {ks.begin(), ks.end()};
}

MatrixXcd kron(const MatrixXcd& A, const MatrixXcd& B) {
  MatrixXcd R(A.rows() * B.rows(), A.cols() * B.cols());
  for (long i = 0; i < A.rows(); ++i)
    for (long j = 0; j < A.cols(); ++j) R.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return R;
}

}  // namespace

ScreenReport separability_screen(const Ensemble& ensemble, const std::vector<Cut>& cuts,
                                 const std::vector<std::vector<int>>& ks, Seed seed,
                                 const ScreenOptions& opts) {
  ScreenReport rep;
  rep.seed = seed;
  rep.tau_rank = opts.tau_rank;
  std::optional<MixedState> rho;  // built once, only if some cut wants PPT
  for (size_t ci = 0; ci < cuts.size(); ++ci) {
    const Cut& cut = cuts[ci];
    CutReport cr{cut};
    if (cut.two_block()) {
      if (!rho) rho = ensemble.to_mixed_state();
      cr.ppt = ppt_check(*rho, cut, opts.ppt_tau);
    }

    // The loci always run, even when PPT already failed: a verified
    // nonlinear witness is the stronger finding and wins the justification.
    bool witness = false, undecided = false, linear = false;
    const std::vector<int>* req = ci < ks.size() ? &ks[ci] : nullptr;
    for (int k : resolve_ks(cut, req)) {
      LocusFinding lf;
      lf.k = k;
      LocusSpec spec(ensemble, cut, k, opts.tau_rank);
      Seed s0 = derive_seed(seed, static_cast<Seed>(ci) * 64 + static_cast<Seed>(k));
      try {
        SampleResult sr = sample_locus(spec, opts.samples, s0, opts.sample);
        lf.sample_attempts = sr.attempts;
        lf.sample_successes = sr.successes;
        lf.linearity = linearity_test(spec, sr.points, derive_seed(s0, 1), opts.linearity);
        switch (lf.linearity.tag) {
          case LinearityTag::NonlinearWitness: witness = true; break;
          case LinearityTag::Inconclusive: undecided = true; break;
          case LinearityTag::Linear: linear = true; break;
        }
      } catch (const EmptyOrNotFound&) {
        // an empty locus is vacuously a union of linear pieces; it is
        // recorded but contributes no evidence either way
        lf.empty_locus = true;
        lf.sample_attempts = opts.sample.restarts;
        lf.linearity.note = "no locus points found within the restart budget";
      }
      cr.loci.push_back(std::move(lf));
    }

    if (witness) {
      cr.verdict = CutVerdictTag::Entangled;
      cr.justification = "nonlinear_locus";
    } else if (cr.ppt && !cr.ppt->is_ppt) {
      cr.verdict = CutVerdictTag::Entangled;
      cr.justification = "ppt";
    } else if (undecided) {
      cr.verdict = CutVerdictTag::Inconclusive;
      cr.justification = "linearity test inconclusive";
    } else if (linear || cr.ppt.has_value()) {
      cr.verdict = CutVerdictTag::ConsistentWithSeparable;
      cr.justification = "all computed criteria consistent";
    } else {
      cr.verdict = CutVerdictTag::Inconclusive;
      cr.justification = "no criterion fired";
    }
    rep.any_inconclusive = rep.any_inconclusive || cr.verdict == CutVerdictTag::Inconclusive;
    rep.cuts.push_back(std::move(cr));
  }
  return rep;
}

ScreenReport separability_screen(const MixedState& rho, const std::vector<Cut>& cuts,
                                 const std::vector<std::vector<int>>& ks, Seed seed,
                                 const ScreenOptions& opts) {
  return separability_screen(ensemble_from_state(rho), cuts, ks, seed, opts);
}

AuditReport lu_covariance_audit(const MixedState& rho, const Cut& cut, int trials, Seed seed,
                                double tau_rank, bool mismatched_convention) {
  if (trials < 1) throw InvalidParams("audit needs at least one trial");
  AuditReport rep;
  rep.trials = trials;
  rep.points_per_trial = 100;

  Ensemble e = ensemble_from_state(rho);
  WMatrix W(e, cut);
  const PartySystem& sys = rho.system;

  // Shared pool: locus points first (they carry the degenerate ranks the
  // audit is really about), random points to fill up.
  std::vector<PointPP> pool;
  {
    LocusSpec spec(e, cut, static_cast<int>(cut.residual_dim()) - 1, tau_rank);
    try {
      SampleResult sr = sample_locus(spec, rep.points_per_trial / 2, derive_seed(seed, 1));
      pool = sr.points;
    } catch (const EmptyOrNotFound&) {
    }
    Rng rng(derive_seed(seed, 2));
    while (static_cast<int>(pool.size()) < rep.points_per_trial)
      pool.push_back(random_point(cut.group_dims(), rng));
  }

  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, 100 + static_cast<Seed>(t)));
    std::vector<MatrixXcd> party_units;
    party_units.reserve(sys.party_count());
    for (int pos = 0; pos < sys.party_count(); ++pos)
      party_units.push_back(random_haar_unitary(sys.dim(pos), rng));
    MixedState rho2 = apply_local_unitaries(rho, party_units);
    WMatrix W2(ensemble_from_state(rho2), cut);

    std::vector<MatrixXcd> group_units;
    for (const auto& group : cut.groups()) {
      MatrixXcd G = MatrixXcd::Identity(1, 1);
      for (int pos : group) G = kron(G, party_units[pos]);
      group_units.push_back(std::move(G));
    }

    for (const PointPP& p : pool) {
      PointPP q = mismatched_convention ? covariance_point_map_mismatched(p, group_units)
                                        : covariance_point_map(p, group_units);
      int r1 = rank_at(W, p, tau_rank);
      int r2 = rank_at(W2, q, tau_rank);
      if (r1 != r2) {
        ++rep.mismatches;
        rep.max_rank_deviation = std::max(rep.max_rank_deviation, std::abs(r1 - r2));
      }
    }
  }
  rep.pass = rep.mismatches == 0;
  return rep;
}

Theorem5Report theorem5_experiment(int n, int trials, Seed seed, double tau) {
  if (n < 1) throw InvalidParams("n must be at least 1");
  if (trials < 1) throw InvalidParams("trials must be at least 1");
  const double total = std::pow(static_cast<double>(n), 6);
  if (total > 4096.0) throw ScaleLimit("n^6 exceeds the 4096-dimensional working limit");
  const int d = n * n;
  PartySystem sys({"A", "B", "C"}, {d, d, d});
  PartySystem pair({"A", "B"}, {d, d});
  Cut bip = Cut::parse(pair, "A|B");

  Theorem5Report rep;
  rep.n = n;
  rep.trials = trials;
  rep.histogram.assign(d + 1, 0);
  rep.all_pass = true;
  bool seen = false;
  for (int t = 0; t < trials; ++t) {
    PureStateVec psi = random_pure_state(sys, derive_seed(seed, static_cast<Seed>(t)));
    MixedState red = partial_trace(psi, {"C"});
    Spectrum sp = hermitian_spectrum(red.matrix);
    int significant = 0;
    while (significant < sp.eigenvalues.size() && sp.eigenvalues(significant) > tau)
      ++significant;
    if (significant < d) {
      ++rep.non_generic;
      continue;
    }
    int max_rank = 0;
    for (int j = 0; j < significant; ++j) {
      VectorXcd v = sp.eigenvectors.col(j);
      v /= v.norm();
      max_rank = std::max(max_rank, schmidt_rank(PureStateVec(pair, v), bip));
    }
    ++rep.histogram[max_rank];
    rep.min_max_rank = seen ? std::min(rep.min_max_rank, max_rank) : max_rank;
    seen = true;
    rep.all_pass = rep.all_pass && max_rank >= n;
  }
  return rep;
}

LuVerdict compare_fingerprints(const EtaParams& eta, const EtaParams& eta2, double rel) {
  return fingerprints_equal(moduli_fingerprint(eta), moduli_fingerprint(eta2), rel)
             ? LuVerdict::Undetermined
             : LuVerdict::Inequivalent;
}

}  // namespace entloc
