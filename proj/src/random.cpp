#include "entloc/random.hpp"

#include <Eigen/QR>
#include <cmath>

namespace entloc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

Seed derive_seed(Seed base, Seed stream) {
  return splitmix64(splitmix64(base) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

double Rng::uniform() { return unif_(eng_); }
double Rng::normal() { return normal_(eng_); }

Cx Rng::cgauss() {
  double re = normal_(eng_);
  double im = normal_(eng_);
  return Cx(re, im) / std::sqrt(2.0);
}

int Rng::uniform_int(int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(eng_);
}

MatrixXcd random_haar_unitary(int d, Rng& rng) {
  if (d < 1) throw InvalidDimension("unitary dimension must be positive");
  MatrixXcd G(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) G(i, j) = rng.cgauss();
  Eigen::HouseholderQR<MatrixXcd> qr(G);
  MatrixXcd Q = qr.householderQ() * MatrixXcd::Identity(d, d);
  MatrixXcd R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    Cx r = R(i, i);
    Cx phase = std::abs(r) > 0 ? r / std::abs(r) : Cx(1.0, 0.0);
    Q.col(i) *= phase;
  }
  return Q;
}

MatrixXcd random_haar_unitary(int d, Seed seed) {
  Rng rng(seed);
  return random_haar_unitary(d, rng);
}

PureStateVec random_pure_state(const PartySystem& sys, Rng& rng) {
  VectorXcd v(sys.total_dim());
  double n = 0.0;
  do {
    for (long i = 0; i < v.size(); ++i) v(i) = rng.cgauss();
    n = v.norm();
  } while (n == 0.0);
  return PureStateVec(sys, v / n);
}

PureStateVec random_pure_state(const PartySystem& sys, Seed seed) {
  Rng rng(seed);
  return random_pure_state(sys, rng);
}

}  // namespace entloc
