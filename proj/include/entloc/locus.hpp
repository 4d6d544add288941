#pragma once
// Degeneracy-locus queries: membership, point sampling, local dimension,
// local-unitary transport of points.

#include <optional>
#include <vector>

#include "entloc/wmatrix.hpp"

namespace entloc {

struct LocusSpec {
  Ensemble ensemble;
  Cut cut;
  int k;
  double tau_rank = tol::rank_rel;

  LocusSpec(Ensemble e, Cut c, int k_, double tau = tol::rank_rel);
};

// true iff rank_at(p) <= k at spec.tau_rank.
bool membership(const LocusSpec& spec, const PointPP& p);

// Membership at tau/10, tau, tau*10; verdict layers treat disagreement as
// threshold noise.
struct MembershipBand {
  bool strict, mid, loose;
  bool unanimous_in() const { return strict && mid && loose; }
  bool unanimous_out() const { return !strict && !mid && !loose; }
};
MembershipBand membership_band(const WMatrix& W, int k, double tau_rank, const PointPP& p);

struct SampleOptions {
  int restarts = 200;
  int iterations = 500;
  int chunk = 16;  // deterministic early-stop granularity, thread-count independent
};

struct SampleResult {
  std::vector<PointPP> points;  // canonicalized, ordered by restart index
  int attempts = 0;
  int successes = 0;
  double success_ratio() const {
    return attempts ? static_cast<double>(successes) / attempts : 0.0;
  }
};

// Minimizes sigma_{k+1}/sigma_1 of the weighted W(p) (||W(p)||_F for k=0)
// over the product of unit spheres by Riemannian gradient descent from
// random starts; accepts on the rank_at condition. Throws EmptyOrNotFound
// when no restart succeeds.
SampleResult sample_locus(const LocusSpec& spec, int count, Seed seed,
                          const SampleOptions& opts = {});

// Projective dimension estimate at a member point p:
//   (sum of group dims - number of groups) - numerical rank of the Jacobian
// of the (k+1)-minors at p. Full space when the minor set is empty.
int local_dimension_estimate(const LocusSpec& spec, const PointPP& p, double jac_tol = 1e-6);

enum class MapDirection { Forward, Inverse };

// Transport of measured-side coordinates under per-group local unitaries:
// for T = (tensor of U_g on measured groups) x (anything on the residual),
// p in V^k(rho) iff forward(p) in V^k(T rho T^dagger).
//
// Convention (fixed once by a 2x2x2 brute-force oracle over the four
// U-vs-conj(U) placements, then asserted by the covariance audits):
//   Forward: p_g -> conj(U_g) p_g    Inverse: p_g -> U_g^T p_g.
PointPP covariance_point_map(const PointPP& p, const std::vector<MatrixXcd>& units,
                             MapDirection dir = MapDirection::Forward);

// Test hook: a deliberately wrong placement (U_g in place of conj(U_g));
// the audit's negative control expects rank mismatches with this map.
PointPP covariance_point_map_mismatched(const PointPP& p, const std::vector<MatrixXcd>& units);

// Re-projects a drifted point onto the locus by a short descent run, but
// refuses moves beyond `trust` in gauge distance (returns nullopt). The
// continuation clustering in the linearity test depends on this bound to
// avoid teleporting between components.
std::optional<PointPP> reproject(const WMatrix& W, int k, double tau_rank, const PointPP& start,
                                 double trust, int iterations = 80);

}  // namespace entloc
