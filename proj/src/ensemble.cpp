#include "entloc/ensemble.hpp"

#include <cmath>
#include <utility>

namespace entloc {

Ensemble::Ensemble(PartySystem sys, std::vector<EnsembleMember> members)
    : sys_(std::move(sys)), members_(std::move(members)) {
  if (members_.empty()) throw InvalidParams("ensemble needs at least one member");
  double total = 0.0;
  for (const EnsembleMember& m : members_) {
    if (!(m.weight > 0.0)) throw InvalidParams("member weights must be positive");
    total += m.weight;
    if (!(m.state.system == sys_)) throw InvalidDimension("member state on a different system");
    if (m.exact) {
      const long d = sys_.total_dim();
      if (static_cast<long>(m.exact->size()) != d)
        throw InvalidParams("exact amplitude length mismatch");
      VectorXcd ex(d);
      for (long i = 0; i < d; ++i) ex(i) = (*m.exact)[static_cast<size_t>(i)].to_cx();
      const double nx = ex.norm();
      if (nx <= 0.0) throw InvalidParams("exact amplitudes are all zero");
      // exact is allowed to be unnormalized, but only by a positive real scale
      const Cx c = m.state.amplitudes.dot(ex);
      if ((ex - c * m.state.amplitudes).norm() > 1e-9 * nx)
        throw InvalidParams("exact amplitudes not parallel to the float amplitudes");
      if (!(c.real() > 0.0) || std::abs(c.imag()) > 1e-9 * std::abs(c))
        throw InvalidParams("exact/float ratio must be a positive real scale");
    }
  }
  if (std::abs(total - 1.0) > tol::norm) throw InvalidParams("member weights must sum to 1");
}

bool Ensemble::exact() const {
  for (const EnsembleMember& m : members_)
    if (!m.exact) return false;
  return true;
}

MixedState Ensemble::to_mixed_state() const {
  const long d = sys_.total_dim();
  MatrixXcd rho = MatrixXcd::Zero(d, d);
  for (const EnsembleMember& m : members_)
    rho.noalias() += m.weight * (m.state.amplitudes * m.state.amplitudes.adjoint());
  rho = (0.5 * (rho + rho.adjoint())).eval();
  return MixedState(sys_, rho);
}

Ensemble ensemble_from_state(const MixedState& rho, double tau) {
  Spectrum sp = hermitian_spectrum(rho.matrix);
  double kept = 0.0;
  for (long j = 0; j < sp.eigenvalues.size(); ++j)
    if (sp.eigenvalues(j) > tau) kept += sp.eigenvalues(j);
  if (kept <= 0.0) throw InvalidParams("state has no eigenvalue above tau");
  std::vector<EnsembleMember> members;
  for (long j = 0; j < sp.eigenvalues.size(); ++j) {
    const double lam = sp.eigenvalues(j);
    if (lam <= tau) continue;
    members.push_back(
        {lam / kept, PureStateVec(rho.system, sp.eigenvectors.col(j)), std::nullopt});
  }
  return Ensemble(rho.system, std::move(members));
}

}  // namespace entloc
