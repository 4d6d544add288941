#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "entloc/random.hpp"
#include "entloc/system.hpp"
#include "entloc/tensor.hpp"
#include "helpers.hpp"

using namespace entloc;
using testutil::max_abs_diff;

namespace {

PartySystem qubits(int n) {
  std::vector<std::string> labels;
  std::vector<int> dims;
  for (int i = 0; i < n; ++i) {
    labels.push_back(std::string(1, static_cast<char>('A' + i)));
    dims.push_back(2);
  }
  return PartySystem(labels, dims);
}

PureStateVec basis_state(const PartySystem& sys, long index) {
  VectorXcd v = VectorXcd::Zero(sys.total_dim());
  v[index] = 1.0;
  return PureStateVec(sys, v);
}

PureStateVec ghz3() {
  PartySystem sys = qubits(3);
  VectorXcd v = VectorXcd::Zero(8);
  v[0] = v[7] = 1.0 / std::sqrt(2.0);
  return PureStateVec(sys, v);
}

PureStateVec bell_phi_plus() {
  PartySystem sys = qubits(2);
  VectorXcd v = VectorXcd::Zero(4);
  v[0] = v[3] = 1.0 / std::sqrt(2.0);
  return PureStateVec(sys, v);
}

MixedState maximally_mixed(const PartySystem& sys) {
  long d = sys.total_dim();
  return MixedState(sys, MatrixXcd::Identity(d, d) / static_cast<double>(d));
}

}  // namespace

TEST_CASE("party system indexing round-trips") {
  PartySystem sys({"A", "B", "C"}, {2, 3, 2});
  CHECK(sys.total_dim() == 12);
  CHECK(sys.position("B") == 1);
  CHECK_THROWS_AS((void)sys.position("X"), UnknownParty);
  for (long i = 0; i < sys.total_dim(); ++i) {
    auto digits = sys.digits_of(i);
    CHECK(sys.index_of(digits) == i);
  }
  // row-major: first party slowest
  CHECK(sys.index_of({1, 0, 0}) == 6);
  CHECK(sys.index_of({0, 2, 1}) == 5);
}

TEST_CASE("party system rejects bad shapes") {
  CHECK_THROWS_AS(PartySystem({"A"}, {0}), InvalidDimension);
  CHECK_THROWS_AS(PartySystem({"A", "A"}, {2, 2}), InvalidDimension);
  CHECK_THROWS_AS(PartySystem({"A", "B"}, {2}), InvalidDimension);
  CHECK_THROWS_AS(PartySystem({}, {}), InvalidDimension);
  CHECK_THROWS_AS(PartySystem({"A", "B"}, {100, 100}), InvalidDimension);  // > 4096 total
}

TEST_CASE("cut parsing: split, grouped, implicit residual") {
  PartySystem sys = qubits(4);

  Cut c1 = Cut::parse(sys, "A:B|CD");
  CHECK(c1.group_count() == 2);
  CHECK(c1.groups()[0] == std::vector<int>{0});
  CHECK(c1.groups()[1] == std::vector<int>{1});
  CHECK(c1.residual() == std::vector<int>{2, 3});
  CHECK(c1.residual_dim() == 4);
  CHECK(c1.measured_dim() == 4);

  Cut c2 = Cut::parse(sys, "BCD|A");
  CHECK(c2.group_count() == 1);
  CHECK(c2.groups()[0] == std::vector<int>{1, 2, 3});
  CHECK(c2.group_dim(0) == 8);
  CHECK(c2.residual() == std::vector<int>{0});

  Cut c3 = Cut::parse(sys, "A:B");  // implicit residual: the complement
  CHECK(c3.group_count() == 2);
  CHECK(c3.residual() == std::vector<int>{2, 3});

  CHECK_THROWS_AS(Cut::parse(sys, "AB:CD"), InvalidCut);  // nothing left for the residual
}

TEST_CASE("cut parsing errors") {
  PartySystem sys = qubits(4);
  CHECK_THROWS_AS(Cut::parse(sys, "A::B"), InvalidCut);
  CHECK_THROWS_AS(Cut::parse(sys, "A:B|C"), InvalidCut);   // residual incomplete
  CHECK_THROWS_AS(Cut::parse(sys, "A:B|CDX"), UnknownParty);
  CHECK_THROWS_AS(Cut::parse(sys, "A:A|BCD"), InvalidCut);  // duplicate party
  CHECK_THROWS_AS(Cut::parse(sys, "ABCD"), InvalidCut);     // empty residual
  CHECK_THROWS_AS(Cut::parse(sys, ""), InvalidCut);
  PartySystem two = qubits(2);
  CHECK_THROWS_AS(Cut::parse(two, "A:B"), InvalidCut);  // empty residual
}

TEST_CASE("cut tokenization is longest-match") {
  PartySystem sys({"A", "AB", "C"}, {2, 2, 2});
  Cut c = Cut::parse(sys, "AAB|C");
  CHECK(c.group_count() == 1);
  CHECK(c.groups()[0] == std::vector<int>{0, 1});
}

TEST_CASE("cut full_index scatters digits") {
  PartySystem sys = qubits(4);
  Cut c = Cut::parse(sys, "A:B|CD");
  // measured (a=1, b=0), residual cd = 3 (c=1,d=1) -> |1011> = 8+0+2+1 = 11
  CHECK(c.full_index({1, 0}, 3) == 11);
  Cut g = Cut::parse(sys, "BCD|A");
  // group joint index 5 = digits (b,c,d)=(1,0,1), residual a=1 -> |1101> = 13
  CHECK(g.full_index({5}, 1) == 13);
}

TEST_CASE("tensor product basis and superposition cases") {
  PartySystem one = PartySystem({"A"}, {2});
  PureStateVec zero = basis_state(one, 0);
  VectorXcd plus_v(2);
  plus_v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  PureStateVec plus(one, plus_v);

  PartySystem oneB = PartySystem({"B"}, {2});
  PureStateVec zeroB = basis_state(oneB, 0);

  PureStateVec p00 = tensor_product({zero, zeroB});
  CHECK(p00.system.total_dim() == 4);
  CHECK(std::abs(p00.amplitudes[0] - 1.0) < 1e-15);

  PureStateVec pPlus0 = tensor_product({plus, zeroB});
  CHECK(std::abs(pPlus0.amplitudes[0] - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(pPlus0.amplitudes[2] - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(pPlus0.amplitudes[1]) < 1e-15);
  CHECK(std::abs(pPlus0.amplitudes[3]) < 1e-15);
}

TEST_CASE("tensor product of three random qubit factors stays normalized") {
  for (Seed s = 0; s < 5; ++s) {
    auto f1 = random_pure_state(PartySystem({"A"}, {2}), derive_seed(11, s));
    auto f2 = random_pure_state(PartySystem({"B"}, {2}), derive_seed(12, s));
    auto f3 = random_pure_state(PartySystem({"C"}, {2}), derive_seed(13, s));
    auto prod = tensor_product({f1, f2, f3});
    CHECK(std::abs(prod.amplitudes.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("tensor product rejects label collisions") {
  PartySystem one = PartySystem({"A"}, {2});
  PureStateVec zero = basis_state(one, 0);
  CHECK_THROWS_AS(tensor_product({zero, zero}), InvalidDimension);
}

TEST_CASE("partial trace of GHZ over C") {
  MixedState rho = pure_density(ghz3());
  MixedState red = partial_trace(rho, {"C"});
  MatrixXcd expect = MatrixXcd::Zero(4, 4);
  expect(0, 0) = 0.5;
  expect(3, 3) = 0.5;
  CHECK(max_abs_diff(red.matrix, expect) < 1e-14);
  CHECK(red.system.labels() == std::vector<std::string>{"A", "B"});
}

TEST_CASE("partial trace preserves trace and PSD; commutes over blocks") {
  Rng rng(421);
  for (int t = 0; t < 5; ++t) {
    PureStateVec psi = random_pure_state(qubits(4), derive_seed(77, t));
    MixedState rho = pure_density(psi);
    MixedState r1 = partial_trace(rho, {"B"});
    CHECK(std::abs(r1.matrix.trace().real() - 1.0) < 1e-12);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(r1.matrix);
    CHECK(es.eigenvalues().minCoeff() > -1e-10);
    // tr_B then tr_D == tr_{B,D}
    MixedState r2 = partial_trace(r1, {"D"});
    MixedState r12 = partial_trace(rho, {"B", "D"});
    CHECK(max_abs_diff(r2.matrix, r12.matrix) < 1e-12);
  }
}

TEST_CASE("partial trace of a product pure state is rank one") {
  auto f1 = random_pure_state(PartySystem({"A"}, {2}), 5);
  auto f2 = random_pure_state(PartySystem({"B"}, {3}), 6);
  auto f3 = random_pure_state(PartySystem({"C"}, {2}), 7);
  MixedState red = partial_trace(tensor_product({f1, f2, f3}), {"A", "C"});
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(red.matrix);
  VectorXd ev = es.eigenvalues();
  CHECK(ev.maxCoeff() > 1.0 - 1e-12);
  // all other eigenvalues vanish
  for (int i = 0; i < ev.size() - 1; ++i) CHECK(std::abs(ev[i]) < 1e-12);
}

TEST_CASE("partial trace rejects tracing everything") {
  MixedState rho = pure_density(ghz3());
  CHECK_THROWS_AS(partial_trace(rho, {"A", "B", "C"}), InvalidCut);
}

TEST_CASE("partial transpose: frozen Bell oracle") {
  MixedState bell = pure_density(bell_phi_plus());
  MatrixXcd pt = partial_transpose(bell, {"A"});
  // hand-derived: swapping the A index moves the coherences onto the
  // antidiagonal of the middle block
  MatrixXcd expect(4, 4);
  expect << 0.5, 0, 0, 0,
            0, 0, 0.5, 0,
            0, 0.5, 0, 0,
            0, 0, 0, 0.5;
  CHECK(max_abs_diff(pt, expect) < 1e-15);
  Spectrum sp = hermitian_spectrum(pt);
  CHECK(std::abs(sp.eigenvalues.minCoeff() + 0.5) < 1e-12);
}

TEST_CASE("partial transpose is an involution and fixes diagonal states") {
  // a product state keeps the partial transpose PSD, so it can be rewrapped
  Rng rng(99);
  std::vector<PureStateVec> factors;
  for (int i = 0; i < 4; ++i) {
    PartySystem one({std::string(1, static_cast<char>('A' + i))}, {2});
    factors.push_back(random_pure_state(one, rng));
  }
  PureStateVec psi = tensor_product(factors);
  MixedState rho = pure_density(psi);
  MatrixXcd pt = partial_transpose(rho, {"A", "C"});
  MixedState ptstate(rho.system, 0.5 * (pt + pt.adjoint()));  // pt is Hermitian already
  MatrixXcd back = partial_transpose(ptstate, {"A", "C"});
  CHECK(max_abs_diff(back, rho.matrix) == 0.0);  // pure index permutation

  MixedState mm = maximally_mixed(qubits(4));
  CHECK(max_abs_diff(partial_transpose(mm, {"A", "B"}), mm.matrix) == 0.0);
}

TEST_CASE("partial transpose rejects unknown labels") {
  MixedState rho = pure_density(ghz3());
  CHECK_THROWS_AS(partial_transpose(rho, {"Q"}), UnknownParty);
}

TEST_CASE("ppt_check on Bell and maximally mixed") {
  MixedState bell = pure_density(bell_phi_plus());
  Cut ab = Cut::parse(bell.system, "A|B");
  PPTReport r = ppt_check(bell, ab);
  CHECK_FALSE(r.is_ppt);
  CHECK(std::abs(r.min_eigenvalue + 0.5) < 1e-12);

  MixedState mm = maximally_mixed(qubits(2));
  PPTReport r2 = ppt_check(mm, ab);
  CHECK(r2.is_ppt);
  CHECK(r2.min_eigenvalue > 0.2);

  // bipartition semantics: more than one measured group is rejected
  PartySystem sys3 = qubits(3);
  MixedState mm3 = maximally_mixed(sys3);
  CHECK_THROWS_AS(ppt_check(mm3, Cut::parse(sys3, "A:B|C")), InvalidCut);
}

TEST_CASE("hermitian_spectrum: frozen and oracle cases") {
  MatrixXcd q = MatrixXcd::Identity(4, 4) * 0.25;
  Spectrum sp = hermitian_spectrum(q);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(sp.eigenvalues[i] - 0.25) < 1e-14);

  // random Hermitian vs characteristic-polynomial roots
  Rng rng(2024);
  for (int t = 0; t < 6; ++t) {
    int d = 2 + (t % 3);
    MatrixXcd g(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) g(i, j) = rng.cgauss();
    MatrixXcd h = 0.5 * (g + g.adjoint());
    Spectrum s = hermitian_spectrum(h);
    auto roots = testutil::char_poly_roots_hermitian(h);
    for (int i = 0; i < d; ++i) CHECK(std::abs(s.eigenvalues[i] - roots[i]) < 1e-8);
    // descending order + reconstruction
    for (int i = 0; i + 1 < d; ++i) CHECK(s.eigenvalues[i] >= s.eigenvalues[i + 1]);
    MatrixXcd rec = s.eigenvectors * s.eigenvalues.asDiagonal() * s.eigenvectors.adjoint();
    CHECK(max_abs_diff(rec, h) < 1e-9);
  }

  MatrixXcd bad(2, 2);
  bad << 0, 1, 0, 0;
  CHECK_THROWS_AS(hermitian_spectrum(bad), NotHermitian);
}

TEST_CASE("schmidt rank basics") {
  PartySystem sys2 = qubits(2);
  Cut ab = Cut::parse(sys2, "A|B");
  CHECK(schmidt_rank(basis_state(sys2, 0), ab) == 1);
  CHECK(schmidt_rank(bell_phi_plus(), ab) == 2);
}

TEST_CASE("schmidt rank is a local-unitary invariant") {
  PartySystem sys = qubits(3);
  int checked = 0;
  for (int t = 0; t < 34; ++t) {
    PureStateVec psi = random_pure_state(sys, derive_seed(31337, t));
    std::vector<MatrixXcd> us;
    for (int p = 0; p < 3; ++p)
      us.push_back(random_haar_unitary(2, derive_seed(derive_seed(404, t), p)));
    PureStateVec moved = apply_local_unitaries(psi, us);
    for (const char* cut : {"A|BC", "B|AC", "C|AB"}) {
      Cut c = Cut::parse(sys, cut);
      CHECK(schmidt_rank(psi, c) == schmidt_rank(moved, c));
      ++checked;
    }
  }
  CHECK(checked >= 100);
}

TEST_CASE("apply_local_unitaries: identity, spectrum preservation, dim guard") {
  PureStateVec psi = random_pure_state(qubits(3), 8);
  MixedState rho = pure_density(psi);
  std::vector<MatrixXcd> ids(3, MatrixXcd::Identity(2, 2));
  CHECK(max_abs_diff(apply_local_unitaries(rho, ids).matrix, rho.matrix) < 1e-15);

  std::vector<MatrixXcd> us;
  for (int p = 0; p < 3; ++p) us.push_back(random_haar_unitary(2, 100 + p));
  MixedState moved = apply_local_unitaries(rho, us);
  Spectrum s1 = hermitian_spectrum(rho.matrix);
  Spectrum s2 = hermitian_spectrum(moved.matrix);
  CHECK((s1.eigenvalues - s2.eigenvalues).cwiseAbs().maxCoeff() < 1e-10);

  std::vector<MatrixXcd> wrong(3, MatrixXcd::Identity(3, 3));
  CHECK_THROWS_AS(apply_local_unitaries(rho, wrong), InvalidDimension);
}

TEST_CASE("state constructors validate") {
  PartySystem sys = qubits(2);
  VectorXcd v = VectorXcd::Ones(4);  // norm 2
  CHECK_THROWS_AS(PureStateVec(sys, v), InvalidDimension);
  MatrixXcd m = MatrixXcd::Identity(4, 4);  // trace 4
  CHECK_THROWS_AS(MixedState(sys, m), InvalidDimension);
  MatrixXcd nh = MatrixXcd::Zero(4, 4);
  nh(0, 1) = 1.0;
  nh(0, 0) = 1.0;
  CHECK_THROWS_AS(MixedState(sys, nh), NotHermitian);
}
