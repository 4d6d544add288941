#pragma once
// The W-matrix of a (ensemble, cut) pair: rows = ensemble members, columns =
// residual basis states, entry (f,b) the multidegree-(1,...,1) form
//   w_f(r)_b = sum over measured multi-indices mu of
//              (product over groups of r-coordinates of mu) * amplitude_f(mu, b).
// The rank of the weighted evaluated matrix at a point equals the rank of the
// Gram form there, so V^k = { p : rank W(p) <= k }.

#include <optional>
#include <vector>

#include "entloc/ensemble.hpp"
#include "entloc/point.hpp"
#include "entloc/poly.hpp"

namespace entloc {

class WMatrix {
 public:
  WMatrix(const Ensemble& e, const Cut& cut);

  int rows() const { return static_cast<int>(coef_.size()); }
  long cols() const { return cols_; }
  const Cut& cut() const { return cut_; }
  const Ensemble& ensemble() const { return ensemble_; }
  const std::vector<long>& group_dims() const { return cut_.group_dims(); }
  const std::vector<double>& row_weights() const { return row_weights_; }  // sqrt(weights)
  bool exact() const { return exact_coef_.has_value(); }

  // Weighted Frobenius norm of the coefficient tensor; the absolute scale
  // behind rank-0 decisions and minor tolerances.
  double coeff_scale() const { return coeff_scale_; }

  // Row f as a (measured_dim x cols) coefficient matrix; monomial index mu is
  // the row-major joint index over the cut's group order.
  const MatrixXcd& row_coefficients(int f) const { return coef_.at(f); }

  MatrixXcd evaluate(const PointPP& p) const;           // unweighted W(p)
  MatrixXcd evaluate_weighted(const PointPP& p) const;  // diag(sqrt(w)) W(p)

  MultiPoly<Cx> entry(int f, long b) const;
  std::optional<MultiPoly<GaussianRational>> entry_exact(int f, long b) const;

 private:
  Ensemble ensemble_;
  Cut cut_;
  long cols_ = 0;
  std::vector<MatrixXcd> coef_;
  std::optional<std::vector<std::vector<std::vector<GaussianRational>>>> exact_coef_;
  std::vector<double> row_weights_;
  double coeff_scale_ = 0.0;
};

WMatrix build_w_matrix(const Ensemble& e, const Cut& cut);

// M(p) = sum_f w_f w_f(p) w_f(p)^dagger; PSD Hermitian on the residual space.
MatrixXcd gram_form_at(const Ensemble& e, const Cut& cut, const PointPP& p);

// Numerical rank of the weighted W(p): singular values > tau_rank * sigma_1,
// with sigma_1 itself tested against tau_rank * coeff_scale (an all-zero
// matrix has rank 0).
int rank_at(const WMatrix& W, const PointPP& p, double tau_rank = tol::rank_rel);
int rank_at(const Ensemble& e, const Cut& cut, const PointPP& p, double tau_rank = tol::rank_rel);

// All (k+1)x(k+1) minors of the unweighted W as expanded polynomials; empty
// when k+1 exceeds min(rows, cols) (V^k is everything). Exact minors are
// included when the ensemble carries exact amplitudes; their float images are
// then used for the float set, so the two agree up to row scaling.
struct MinorSet {
  int k = 0;
  std::vector<MultiPoly<Cx>> floats;
  std::optional<std::vector<MultiPoly<GaussianRational>>> exact;
};
MinorSet minor_polynomials(const WMatrix& W, int k);

// Merged version of a cut: all measured parties as one group, order
// preserved, so the grouped coordinates are exactly the Segre image.
Cut merged_cut(const Cut& cut);

}  // namespace entloc
