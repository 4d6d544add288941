#pragma once
// End-to-end pipelines: per-cut separability screening, covariance audits,
// the random-state Schmidt-rank floor experiment, fingerprint comparison.

#include <optional>
#include <string>
#include <vector>

#include "entloc/families.hpp"
#include "entloc/linearity.hpp"

namespace entloc {

enum class CutVerdictTag { Entangled, ConsistentWithSeparable, Inconclusive };

struct LocusFinding {
  int k = 0;
  bool empty_locus = false;  // sampler exhausted its budget without a point
  int sample_attempts = 0;
  int sample_successes = 0;
  LinearityVerdict linearity;
};

struct CutReport {
  Cut cut;
  std::optional<PPTReport> ppt;  // two-block cuts only
  std::vector<LocusFinding> loci;
  CutVerdictTag verdict = CutVerdictTag::Inconclusive;
  std::string justification;  // "ppt" | "nonlinear_locus" | "no criterion fired" | ...
};

struct ScreenReport {
  std::vector<CutReport> cuts;
  Seed seed = 0;
  double tau_rank = tol::rank_rel;
  bool any_inconclusive = false;
};

struct ScreenOptions {
  int samples = 24;
  SampleOptions sample{};
  LinearityOptions linearity{};
  double tau_rank = tol::rank_rel;
  double ppt_tau = 1e-10;
};

// For each cut: PPT when two-block, then per requested k sample the locus
// and run the linearity test. Entangled iff PPT fails or a verified
// NonlinearWitness exists; never claims full separability. An empty ks entry
// selects the defaults: k = residual_dim - 1, plus k = 1 when the cut is one
// merged multi-party group.
ScreenReport separability_screen(const MixedState& rho, const std::vector<Cut>& cuts,
                                 const std::vector<std::vector<int>>& ks, Seed seed,
                                 const ScreenOptions& opts = {});
ScreenReport separability_screen(const Ensemble& ensemble, const std::vector<Cut>& cuts,
                                 const std::vector<std::vector<int>>& ks, Seed seed,
                                 const ScreenOptions& opts = {});

struct AuditReport {
  int trials = 0;
  int points_per_trial = 0;
  int mismatches = 0;
  int max_rank_deviation = 0;
  bool pass = false;
};

// Per trial: draw random local unitaries on the measured groups (plus the
// residual parties), transport 100 points (a mix of random and locus-sampled
// ones) through covariance_point_map, and compare rank_at on both sides.
// `mismatched_convention` switches to the deliberately wrong transport as a
// negative control.
AuditReport lu_covariance_audit(const MixedState& rho, const Cut& cut, int trials, Seed seed,
                                double tau_rank = tol::rank_rel,
                                bool mismatched_convention = false);

struct Theorem5Report {
  int n = 0;
  int trials = 0;
  int min_max_rank = 0;            // min over trials of (max Schmidt rank)
  std::vector<int> histogram;      // histogram[r] = trials whose max rank is r
  bool all_pass = false;           // max rank >= n in every generic trial
  int non_generic = 0;             // trials flagged non-generic and excluded
};

// Random pure states on n^2 x n^2 x n^2; eigen-decompose the trace over the
// third party and take the max Schmidt rank among eigenvectors with
// eigenvalue > tau. Trials whose traced state has deficient rank are flagged
// non-generic. Guard: n^6 <= 4096, else ScaleLimit.
Theorem5Report theorem5_experiment(int n, int trials, Seed seed, double tau = 1e-8);

LuVerdict compare_fingerprints(const EtaParams& eta, const EtaParams& eta2,
                               double rel = tol::fingerprint_rel);

}  // namespace entloc
