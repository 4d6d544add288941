#include "entloc/tensor.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace entloc {

namespace {

void check_labels_known(const PartySystem& sys, const std::vector<std::string>& labels) {
  for (const auto& l : labels) sys.position(l);  // UnknownParty on miss
}

// Partition the party positions into (subset, rest), preserving system order.
std::pair<std::vector<int>, std::vector<int>> split_positions(
    const PartySystem& sys, const std::vector<std::string>& subset) {
  std::set<int> chosen;
  for (const auto& l : subset) {
    if (!chosen.insert(sys.position(l)).second)
      throw InvalidCut("party listed twice: " + l);
  }
  std::vector<int> in, out;
  for (int p = 0; p < sys.party_count(); ++p)
    (chosen.count(p) ? in : out).push_back(p);
  return {in, out};
}

// joint dimension and, for every full basis index, the partial index over
// `positions` (row-major in the given order) so loops over subsystems reduce
// to table lookups.
long joint_dim(const PartySystem& sys, const std::vector<int>& positions) {
  long d = 1;
  for (int p : positions) d *= sys.dim(p);
  return d;
}

// full index = scatter(sub digits) + scatter(rest digits); returns the
// stride tables so idx(a, b) = sub_offset[a] + rest_offset[b].
std::vector<long> offsets_of(const PartySystem& sys, const std::vector<int>& positions) {
  long d = joint_dim(sys, positions);
  std::vector<long> strides(positions.size(), 1);
  for (int i = static_cast<int>(positions.size()) - 2; i >= 0; --i)
    strides[i] = strides[i + 1] * sys.dim(positions[i + 1]);
  std::vector<long> offsets(static_cast<size_t>(d), 0);
  for (long a = 0; a < d; ++a) {
    long off = 0;
    for (size_t j = 0; j < positions.size(); ++j) {
      long digit = (a / strides[j]) % sys.dim(positions[j]);
      off += digit * sys.stride(positions[j]);
    }
    offsets[static_cast<size_t>(a)] = off;
  }
  return offsets;
}

}  // namespace

PureStateVec::PureStateVec(PartySystem sys, VectorXcd amp)
    : system(std::move(sys)), amplitudes(std::move(amp)) {
  if (amplitudes.size() != system.total_dim())
    throw InvalidDimension("amplitude length does not match system dimension");
  if (std::abs(amplitudes.norm() - 1.0) > tol::norm)
    throw InvalidDimension("state vector is not normalized");
}

MixedState::MixedState(PartySystem sys, MatrixXcd mat)
    : system(std::move(sys)), matrix(std::move(mat)) {
  long d = system.total_dim();
  if (matrix.rows() != d || matrix.cols() != d)
    throw InvalidDimension("density matrix shape does not match system dimension");
  double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
  if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > tol::herm * scale)
    throw NotHermitian("density matrix is not Hermitian");
  if (std::abs(matrix.trace().real() - 1.0) > tol::norm ||
      std::abs(matrix.trace().imag()) > tol::norm)
    throw InvalidDimension("density matrix trace is not 1");
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(matrix, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol::psd)
    throw InvalidDimension("density matrix is not positive semidefinite");
}

MixedState pure_density(const PureStateVec& psi) {
  return MixedState(psi.system, psi.amplitudes * psi.amplitudes.adjoint());
}

PureStateVec tensor_product(const std::vector<PureStateVec>& factors) {
  if (factors.empty()) throw InvalidDimension("tensor product of zero factors");
  std::vector<std::string> labels;
  std::vector<int> dims;
  for (const auto& f : factors) {
    for (int p = 0; p < f.system.party_count(); ++p) {
      labels.push_back(f.system.label(p));
      dims.push_back(f.system.dim(p));
    }
  }
  PartySystem joint(labels, dims);  // throws InvalidDimension on label collision
  VectorXcd amp = factors[0].amplitudes;
  for (size_t i = 1; i < factors.size(); ++i) {
    const VectorXcd& b = factors[i].amplitudes;
    VectorXcd next(amp.size() * b.size());
    for (long r = 0; r < amp.size(); ++r)
      next.segment(r * b.size(), b.size()) = amp(r) * b;
    amp = std::move(next);
  }
  return PureStateVec(std::move(joint), std::move(amp));
}

namespace {

// shared kernel for both partial traces
MixedState trace_out(const PartySystem& sys,
                     const std::function<Cx(long, long)>& rho_entry,
                     const std::vector<std::string>& traced) {
  check_labels_known(sys, traced);
  auto [gone, kept] = split_positions(sys, traced);
  if (kept.empty()) throw InvalidCut("cannot trace out every party");
  std::vector<std::string> kept_labels;
  std::vector<int> kept_dims;
  for (int p : kept) {
    kept_labels.push_back(sys.label(p));
    kept_dims.push_back(sys.dim(p));
  }
  auto kept_off = offsets_of(sys, kept);
  auto gone_off = offsets_of(sys, gone);
  long dk = static_cast<long>(kept_off.size());
  MatrixXcd out = MatrixXcd::Zero(dk, dk);
  for (long i = 0; i < dk; ++i)
    for (long j = 0; j < dk; ++j) {
      Cx acc = 0.0;
      for (long t : gone_off) acc += rho_entry(kept_off[i] + t, kept_off[j] + t);
      out(i, j) = acc;
    }
  // symmetrize away roundoff so the constructor's checks see clean input
  out = ((out + out.adjoint()) / 2.0).eval();
  return MixedState(PartySystem(kept_labels, kept_dims), std::move(out));
}

}  // namespace

MixedState partial_trace(const MixedState& rho, const std::vector<std::string>& traced) {
  return trace_out(
      rho.system, [&](long i, long j) { return rho.matrix(i, j); }, traced);
}

MixedState partial_trace(const PureStateVec& psi, const std::vector<std::string>& traced) {
  return trace_out(
      psi.system,
      [&](long i, long j) { return psi.amplitudes(i) * std::conj(psi.amplitudes(j)); },
      traced);
}

MatrixXcd partial_transpose(const MixedState& rho, const std::vector<std::string>& subset) {
  check_labels_known(rho.system, subset);
  auto [in, rest] = split_positions(rho.system, subset);
  (void)rest;
  long d = rho.system.total_dim();
  // sub_part[i]: portion of full index i contributed by the transposed parties
  std::vector<long> sub_part(static_cast<size_t>(d), 0);
  for (long i = 0; i < d; ++i) {
    auto digits = rho.system.digits_of(i);
    long s = 0;
    for (int p : in) s += digits[p] * rho.system.stride(p);
    sub_part[static_cast<size_t>(i)] = s;
  }
  MatrixXcd out(d, d);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) {
      long ip = i - sub_part[i] + sub_part[j];
      long jp = j - sub_part[j] + sub_part[i];
      out(ip, jp) = rho.matrix(i, j);
    }
  return out;
}

PPTReport ppt_check(const MixedState& rho, const Cut& cut, double tau) {
  if (!cut.two_block())
    throw InvalidCut("ppt_check needs a bipartition (exactly one measured group)");
  std::vector<std::string> subset;
  for (int p : cut.groups()[0]) subset.push_back(rho.system.label(p));
  MatrixXcd pt = partial_transpose(rho, subset);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(((pt + pt.adjoint()) / 2.0).eval(),
                                              Eigen::EigenvaluesOnly);
  PPTReport rep;
  rep.min_eigenvalue = es.eigenvalues().minCoeff();
  rep.is_ppt = rep.min_eigenvalue >= -tau;
  return rep;
}

Spectrum hermitian_spectrum(const MatrixXcd& M, double tau_herm) {
  if (M.rows() != M.cols()) throw NotHermitian("matrix is not square");
  double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if ((M - M.adjoint()).cwiseAbs().maxCoeff() > tau_herm * scale)
    throw NotHermitian("matrix is not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(((M + M.adjoint()) / 2.0).eval());
  long d = M.rows();
  Spectrum sp;
  sp.eigenvalues = es.eigenvalues().reverse();
  sp.eigenvectors = MatrixXcd(d, d);
  for (long c = 0; c < d; ++c) {
    VectorXcd v = es.eigenvectors().col(d - 1 - c);
    // gauge: first non-negligible entry real positive
    for (long r = 0; r < d; ++r) {
      if (std::abs(v(r)) > 1e-12) {
        v *= std::conj(v(r)) / std::abs(v(r));
        break;
      }
    }
    sp.eigenvectors.col(c) = v;
  }
  return sp;
}

int schmidt_rank(const PureStateVec& psi, const Cut& bipartition, double tau) {
  if (!bipartition.two_block())
    throw InvalidCut("schmidt_rank needs a bipartition (exactly one measured group)");
  long rows = bipartition.group_dim(0);
  long cols = bipartition.residual_dim();
  MatrixXcd C(rows, cols);
  for (long m = 0; m < rows; ++m)
    for (long r = 0; r < cols; ++r)
      C(m, r) = psi.amplitudes(bipartition.full_index({m}, r));
  Eigen::JacobiSVD<MatrixXcd> svd(C);
  const VectorXd& sv = svd.singularValues();
  double smax = sv.size() ? sv(0) : 0.0;
  if (smax == 0.0) return 0;
  double cutoff = tau < 0 ? zero_cutoff(smax, std::min(rows, cols)) : tau * smax;
  int rank = 0;
  for (long i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  return rank;
}

namespace {

void check_units(const PartySystem& sys, const std::vector<MatrixXcd>& units) {
  if (static_cast<int>(units.size()) != sys.party_count())
    throw InvalidDimension("need one unitary per party");
  for (int p = 0; p < sys.party_count(); ++p) {
    long d = sys.dim(p);
    if (units[p].rows() != d || units[p].cols() != d)
      throw InvalidDimension("unitary shape does not match party dimension");
    MatrixXcd gram = units[p].adjoint() * units[p];
    if ((gram - MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() > tol::unitary)
      throw InvalidParams("matrix is not unitary within tolerance");
  }
}

// Apply U on one party of a flat vector: reshape as (left, d, right).
void apply_one_party(VectorXcd& v, const PartySystem& sys, int party, const MatrixXcd& U) {
  long d = sys.dim(party);
  long right = sys.stride(party);
  long left = sys.total_dim() / (d * right);
  VectorXcd tmp(d);
  for (long l = 0; l < left; ++l)
    for (long r = 0; r < right; ++r) {
      long base = l * d * right + r;
      for (long a = 0; a < d; ++a) tmp(a) = v(base + a * right);
      tmp = (U * tmp).eval();
      for (long a = 0; a < d; ++a) v(base + a * right) = tmp(a);
    }
}

}  // namespace

PureStateVec apply_local_unitaries(const PureStateVec& psi,
                                   const std::vector<MatrixXcd>& units) {
  check_units(psi.system, units);
  VectorXcd v = psi.amplitudes;
  for (int p = 0; p < psi.system.party_count(); ++p)
    apply_one_party(v, psi.system, p, units[p]);
  return PureStateVec(psi.system, std::move(v));
}

MixedState apply_local_unitaries(const MixedState& rho, const std::vector<MatrixXcd>& units) {
  check_units(rho.system, units);
  MatrixXcd M = rho.matrix;
  for (int p = 0; p < rho.system.party_count(); ++p) {
    // rows: (U x I) M, columns: ... (U x I)^dagger
    for (long c = 0; c < M.cols(); ++c) {
      VectorXcd col = M.col(c);
      apply_one_party(col, rho.system, p, units[p]);
      M.col(c) = col;
    }
    for (long r = 0; r < M.rows(); ++r) {
      VectorXcd row = M.row(r).transpose().conjugate();
      apply_one_party(row, rho.system, p, units[p]);
      M.row(r) = row.conjugate().transpose();
    }
  }
  M = ((M + M.adjoint()) / 2.0).eval();
  return MixedState(rho.system, std::move(M));
}

}  // namespace entloc
