#pragma once
// Multipartite linear algebra: states, partial trace/transpose, spectra,
// Schmidt analysis, local unitaries.

#include <vector>

#include "entloc/common.hpp"
#include "entloc/system.hpp"

namespace entloc {

// Normalized pure state; amplitudes indexed row-major by party digits.
struct PureStateVec {
  PartySystem system;
  VectorXcd amplitudes;

  PureStateVec(PartySystem sys, VectorXcd amp);
};

// Hermitian PSD trace-1 operator. Construction validates all three.
struct MixedState {
  PartySystem system;
  MatrixXcd matrix;

  MixedState(PartySystem sys, MatrixXcd mat);
};

// Descending eigenvalues with matching eigenvector columns. Vectors inside a
// degenerate cluster are an arbitrary orthonormal basis of the eigenspace.
struct Spectrum {
  VectorXd eigenvalues;
  MatrixXcd eigenvectors;
};

struct PPTReport {
  double min_eigenvalue = 0.0;
  bool is_ppt = false;
};

MixedState pure_density(const PureStateVec& psi);

// Kronecker product over concatenated party lists; labels must stay distinct.
PureStateVec tensor_product(const std::vector<PureStateVec>& factors);

MixedState partial_trace(const MixedState& rho, const std::vector<std::string>& traced);
// Same result as tracing the pure density, without forming the full matrix.
MixedState partial_trace(const PureStateVec& psi, const std::vector<std::string>& traced);

// Transposes the indices of `subset` parties only. The result need not be
// PSD, so it is returned as a bare matrix.
MatrixXcd partial_transpose(const MixedState& rho, const std::vector<std::string>& subset);

// Bipartition semantics: the cut must have exactly one measured group.
PPTReport ppt_check(const MixedState& rho, const Cut& cut, double tau = 1e-10);

Spectrum hermitian_spectrum(const MatrixXcd& M, double tau_herm = tol::herm);

// Rank of the coefficient matrix reshaped across the bipartition, counting
// singular values > tau * sigma_max. tau < 0 selects the default cutoff
// 1e-8 * side.
int schmidt_rank(const PureStateVec& psi, const Cut& bipartition, double tau = -1.0);

MixedState apply_local_unitaries(const MixedState& rho, const std::vector<MatrixXcd>& units);
PureStateVec apply_local_unitaries(const PureStateVec& psi, const std::vector<MatrixXcd>& units);

}  // namespace entloc
