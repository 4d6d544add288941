#pragma once
// Shared aliases, error taxonomy, and default tolerances.

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace entloc {

using Cx = std::complex<double>;
using Seed = std::uint64_t;

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

// Every throwing precondition in the library uses one of these.
struct InvalidDimension : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InvalidCut : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct UnknownParty : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NotHermitian : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InvalidParams : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InvalidForm : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct UnknownFamily : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ScaleLimit : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Locus sampling found no point within its retry budget; the locus may be empty.
struct EmptyOrNotFound : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace tol {
inline constexpr double norm = 1e-9;       // state normalization / trace
inline constexpr double herm = 1e-9;       // Hermiticity, max-abs
inline constexpr double psd = 1e-9;        // PSD slack on construction
inline constexpr double recon = 1e-9;      // eigendecomposition reconstruction
inline constexpr double rank_rel = 1e-8;   // relative SVD rank threshold
inline constexpr double unitary = 1e-8;    // ||U U^dagger - I|| max-abs
inline constexpr double coeff_cutoff = 1e-12;  // float polynomial coefficient prune
inline constexpr double fingerprint_rel = 1e-9;
}  // namespace tol

// Values below 1e-8 * (largest value) * (matrix side) count as zero in
// generic spectra/SVD rank decisions (overridable per call).
inline double zero_cutoff(double largest, long side) {
  return 1e-8 * largest * static_cast<double>(side);
}

}  // namespace entloc
