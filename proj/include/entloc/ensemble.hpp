#pragma once
// Weighted pure-state ensembles: the eigenvalue-free carrier of the locus
// invariants. Optional exact Gaussian-rational amplitudes ride along for
// exact minor polynomials; they may be unnormalized (a positive row scale
// never moves the locus) but must be parallel to the float amplitudes.

#include <optional>
#include <vector>

#include "entloc/common.hpp"
#include "entloc/poly.hpp"
#include "entloc/system.hpp"
#include "entloc/tensor.hpp"

namespace entloc {

struct EnsembleMember {
  double weight;
  PureStateVec state;
  std::optional<std::vector<GaussianRational>> exact;
};

class Ensemble {
 public:
  Ensemble(PartySystem sys, std::vector<EnsembleMember> members);

  const PartySystem& system() const { return sys_; }
  const std::vector<EnsembleMember>& members() const { return members_; }
  int size() const { return static_cast<int>(members_.size()); }
  bool exact() const;  // all members carry exact amplitudes

  MixedState to_mixed_state() const;

 private:
  PartySystem sys_;
  std::vector<EnsembleMember> members_;
};

// Eigen-decomposition realization: members are the eigenvectors with
// eigenvalue > tau, weighted by their eigenvalues.
Ensemble ensemble_from_state(const MixedState& rho, double tau = 1e-10);

}  // namespace entloc
