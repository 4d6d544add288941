#pragma once
// Seeded randomness. Every stochastic operation takes an explicit seed so
// parallel runs stay reproducible; derive_seed splits independent streams.

#include <random>

#include "entloc/common.hpp"
#include "entloc/system.hpp"
#include "entloc/tensor.hpp"

namespace entloc {

Seed derive_seed(Seed base, Seed stream);

class Rng {
 public:
  explicit Rng(Seed seed) : eng_(seed) {}

  double uniform();            // [0,1)
  double normal();             // standard normal
  Cx cgauss();                 // complex standard normal (unit variance)
  int uniform_int(int lo, int hi);  // inclusive bounds
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> unif_{0.0, 1.0};
};

// Haar distribution via QR of a complex Ginibre matrix with the R diagonal
// phase-fixed positive.
MatrixXcd random_haar_unitary(int d, Seed seed);
MatrixXcd random_haar_unitary(int d, Rng& rng);

PureStateVec random_pure_state(const PartySystem& sys, Seed seed);
PureStateVec random_pure_state(const PartySystem& sys, Rng& rng);

}  // namespace entloc
