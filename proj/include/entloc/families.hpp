#pragma once
// The worked state families: the generalized four-qubit construction from a
// 16x4 support matrix, the three-qutrit eta family with its moduli
// fingerprint, the local-unitary inequivalence obstruction on curve
// parameters, and a small zoo of standard states.

#include <array>
#include <string>
#include <variant>

#include "entloc/ensemble.hpp"
#include "entloc/random.hpp"
#include "entloc/system.hpp"
#include "entloc/tensor.hpp"

namespace entloc {

// h: four orthonormal vectors in C^4. a: eight nonzero amplitudes placed on
// the doubly-even/odd support strings. Validity additionally requires the
// compatibility chain
//   a1 conj(a8) = a2 conj(a7) = a3 conj(a6) = a4 conj(a5),
// which is exactly what makes the state invariant under partial transposes
// of all three 2:2 cuts (and cuts the family down to 4 free parameters).
struct SmolinParams {
  std::array<Eigen::Vector4cd, 4> h;
  std::array<Cx, 8> a;

  static SmolinParams standard();
  static SmolinParams random(Seed seed);

  // Curve-parameter tuple (-a1/a7, -a3/a5, -a4/a6, -a2/a8) attached to the
  // four determinant components at the split pair cut.
  std::array<Cx, 4> lambda() const;

  void validate() const;  // InvalidParams on any violated invariant
};

struct SmolinFamily {
  MixedState rho;
  Ensemble ensemble;
};

// T rows: |0000>:a1h1 |0011>:a2h2 |0101>:a3h3 |0110>:a4h4 and on the
// complementary strings the same h with the paired amplitude:
// |1001>:a5h4 |1010>:a6h3 |1100>:a7h2 |1111>:a8h1. Columns, normalized, are
// the ensemble members; weights are proportional to the squared column
// norms (all 1/4 at standard parameters). rho = T T^dagger / tr.
SmolinFamily generalized_smolin(const SmolinParams& params);

// true iff partial transpose across the given 2:2 cut leaves rho unchanged
// within tol; the cut must be one measured pair against a residual pair.
bool block_pt_invariance_check(const SmolinParams& params, const Cut& cut, double tol = 1e-10);

struct EtaParams {
  double eta1 = 0.0, eta2 = 0.0, eta3 = 0.0;
};

// Three-qutrit pure state (|v1>|0> + |v2>|1> + |v3>|2>)/sqrt(3) with
//   v1 = (e^{i eta1}|00> + |11> + |22>)/sqrt(3)
//   v2 = (e^{i eta2}|01> + |12> + |20>)/sqrt(3)
//   v3 = (e^{i eta3}|02> + |10> + |21>)/sqrt(3).
PureStateVec example2_state(const EtaParams& eta);

// Extended complex value as a projective pair (never both zero).
struct Fingerprint {
  Cx num{0.0, 0.0};
  Cx den{1.0, 0.0};
  bool infinite(double rel = tol::fingerprint_rel) const;
};

// k(x) = x^3 (x^3 + 216)^3 / (27 - x^3)^3 evaluated as a projective pair.
Fingerprint moduli_of(Cx x);

// x = g(eta) = (e^{i eta1} + e^{i eta2} + e^{i eta3}) / e^{i (eta1+eta2+eta3)/3},
// then moduli_of(x). Permutation- and common-shift-invariant.
Fingerprint moduli_fingerprint(const EtaParams& eta);

// Cross-multiplied projective comparison at relative tolerance.
bool fingerprints_equal(const Fingerprint& f1, const Fingerprint& f2,
                        double rel = tol::fingerprint_rel);

enum class LuVerdict { Inequivalent, Undetermined };

struct ObstructionReport {
  LuVerdict verdict = LuVerdict::Undetermined;
  int feasible_matchings = 0;
  double best_residual = 0.0;
  // identity-style closed-form relation for the four within-type matchings;
  // true = violated
  std::array<bool, 4> relation_violated{};
};

// Sound for Inequivalent only: curves D1,D4 (x1 x2 = lambda type) and X2,X3
// (x1 = lambda x2 type) from each tuple are matched in all 4! bijections;
// each matching is scored by a product-Moebius least-squares fit (3 sample
// points per curve, 20 restarts). Any feasible matching -> Undetermined.
// Inequivalent additionally requires all four within-type closed-form
// relations lambda_1 l'_{j3} l'_{i4} = l'_{i1} l'_{j2} lambda_4 to fail.
ObstructionReport smolin_lu_obstruction_report(const std::array<Cx, 4>& lambda,
                                               const std::array<Cx, 4>& lambda2,
                                               double tau = 1e-6, Seed seed = 20240817);
LuVerdict smolin_lu_obstruction(const std::array<Cx, 4>& lambda,
                                const std::array<Cx, 4>& lambda2, double tau = 1e-6);

// Names: "ghz", "w", "bell-phi+", "bell-phi-", "bell-psi+", "bell-psi-",
// "product-zero", "maximally-mixed", "smolin". Dims must match the family.
std::variant<PureStateVec, MixedState> standard_states(const std::string& name,
                                                       const PartySystem& system);

}  // namespace entloc
