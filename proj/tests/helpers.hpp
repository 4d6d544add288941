#pragma once
// Shared assertions and small oracles for the test binaries.

#include <doctest.h>

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace testutil {

using Cx = std::complex<double>;

inline double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  REQUIRE(a.rows() == b.rows());
  REQUIRE(a.cols() == b.cols());
  return (a - b).cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  REQUIRE(a.size() == b.size());
  return (a - b).cwiseAbs().maxCoeff();
}

// Characteristic polynomial coefficients by Faddeev-LeVerrier, then roots as
// eigenvalues of the companion matrix. Independent of the self-adjoint
// solver used by the library; d <= 6.
inline std::vector<double> char_poly_roots_hermitian(const Eigen::MatrixXcd& M) {
  const int d = static_cast<int>(M.rows());
  // power traces p_j = tr(M^j), then Newton identities k*c_k = -sum c_{k-j} p_j
  std::vector<Cx> p(d + 1);
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Identity(d, d);
  for (int j = 1; j <= d; ++j) {
    P = M * P;
    p[j] = P.trace();
  }
  std::vector<Cx> c(d + 1);
  c[0] = 1.0;
  for (int k = 1; k <= d; ++k) {
    Cx ck(0.0, 0.0);
    for (int j = 1; j <= k; ++j) ck += c[k - j] * p[j];
    c[k] = -ck / static_cast<double>(k);
  }
  // companion matrix of x^d + c1 x^{d-1} + ... + cd
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) comp(i, d - 1) = -c[d - i];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp);
  std::vector<double> roots(d);
  for (int i = 0; i < d; ++i) roots[i] = es.eigenvalues()[i].real();
  std::sort(roots.begin(), roots.end(), std::greater<double>());
  return roots;
}

}  // namespace testutil
