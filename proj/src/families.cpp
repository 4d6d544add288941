#include "entloc/families.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace entloc {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

PartySystem four_qubits() { return PartySystem({"A", "B", "C", "D"}, {2, 2, 2, 2}); }

// support rows of the 16x4 T matrix: (basis index, h column, amplitude slot)
struct SupportRow {
  int basis;
  int h;
  int a;
};
constexpr std::array<SupportRow, 8> kSupport = {{{0, 0, 0},
                                                 {3, 1, 1},
                                                 {5, 2, 2},
                                                 {6, 3, 3},
                                                 {9, 3, 4},
                                                 {10, 2, 5},
                                                 {12, 1, 6},
                                                 {15, 0, 7}}};

bool is_standard(const SmolinParams& p) {
  const SmolinParams s = SmolinParams::standard();
  for (int i = 0; i < 8; ++i)
    if (std::abs(p.a[static_cast<size_t>(i)] - s.a[static_cast<size_t>(i)]) > 1e-15) return false;
  for (int j = 0; j < 4; ++j)
    if ((p.h[static_cast<size_t>(j)] - s.h[static_cast<size_t>(j)]).cwiseAbs().maxCoeff() > 1e-15)
      return false;
  return true;
}

}  // namespace

SmolinParams SmolinParams::standard() {
  SmolinParams p;
  p.h[0] << Cx(kInvSqrt2, 0), Cx(kInvSqrt2, 0), Cx(0, 0), Cx(0, 0);
  p.h[1] << Cx(kInvSqrt2, 0), Cx(-kInvSqrt2, 0), Cx(0, 0), Cx(0, 0);
  p.h[2] << Cx(0, 0), Cx(0, 0), Cx(kInvSqrt2, 0), Cx(kInvSqrt2, 0);
  p.h[3] << Cx(0, 0), Cx(0, 0), Cx(kInvSqrt2, 0), Cx(-kInvSqrt2, 0);
  p.a.fill(Cx(kInvSqrt2, 0));
  return p;
}

SmolinParams SmolinParams::random(Seed seed) {
  Rng rng(seed);
  SmolinParams p;
  const MatrixXcd U = random_haar_unitary(4, rng);
  for (int j = 0; j < 4; ++j) p.h[static_cast<size_t>(j)] = U.col(j);
  auto draw = [&rng] {
    Cx v;
    do {
      v = rng.cgauss();
    } while (std::abs(v) < 0.3);
    return v;
  };
  for (int i = 0; i < 4; ++i) p.a[static_cast<size_t>(i)] = draw();
  // the chain value must be real for the state to be a partial-transpose
  // fixed point on every 2:2 cut; a complex value keeps the products equal
  // but breaks the Hermiticity of the cross-block Grams
  const Cx mu(std::abs(draw()), 0.0);
  p.a[7] = std::conj(mu / p.a[0]);
  p.a[6] = std::conj(mu / p.a[1]);
  p.a[5] = std::conj(mu / p.a[2]);
  p.a[4] = std::conj(mu / p.a[3]);
  return p;
}

std::array<Cx, 4> SmolinParams::lambda() const {
  return {-a[0] / a[6], -a[2] / a[4], -a[3] / a[5], -a[1] / a[7]};
}

void SmolinParams::validate() const {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const Cx ip = h[static_cast<size_t>(i)].dot(h[static_cast<size_t>(j)]);
      const Cx want = i == j ? Cx(1, 0) : Cx(0, 0);
      if (std::abs(ip - want) > 1e-8) throw InvalidParams("h vectors are not orthonormal");
    }
  for (const Cx& v : a)
    if (std::abs(v) < 1e-12) throw InvalidParams("amplitudes must be nonzero");
  const std::array<Cx, 4> chain = {a[0] * std::conj(a[7]), a[1] * std::conj(a[6]),
                                   a[2] * std::conj(a[5]), a[3] * std::conj(a[4])};
  double scale = 0.0;
  for (const Cx& c : chain) scale = std::max(scale, std::abs(c));
  for (int i = 1; i < 4; ++i)
    if (std::abs(chain[static_cast<size_t>(i)] - chain[0]) > 1e-9 * std::max(scale, 1e-300))
      throw InvalidParams("compatibility chain violated");
  // real chain value <=> rho is a partial-transpose fixed point on 2:2 cuts
  if (std::abs(chain[0].imag()) > 1e-9 * std::max(scale, 1e-300))
    throw InvalidParams("compatibility chain violated");
}

SmolinFamily generalized_smolin(const SmolinParams& params) {
  params.validate();
  const PartySystem sys = four_qubits();
  MatrixXcd T = MatrixXcd::Zero(16, 4);
  for (const SupportRow& row : kSupport)
    T.row(row.basis) = params.a[static_cast<size_t>(row.a)] *
                       params.h[static_cast<size_t>(row.h)].transpose();

  const bool exact = is_standard(params);
  const double total = T.squaredNorm();
  std::vector<EnsembleMember> members;
  for (int j = 0; j < 4; ++j) {
    VectorXcd col = T.col(j);
    const double n2 = col.squaredNorm();
    EnsembleMember m{n2 / total, PureStateVec(sys, col / std::sqrt(n2)), std::nullopt};
    if (exact) {
      std::vector<GaussianRational> ex(16);
      for (int r = 0; r < 16; ++r) {
        const Cx v = col(r);
        if (std::abs(v) > 0.25)
          ex[static_cast<size_t>(r)] = GaussianRational(
              BigRational(v.real() > 0 ? 1 : -1, 2), BigRational(0));
      }
      m.exact = std::move(ex);
    }
    members.push_back(std::move(m));
  }

  MatrixXcd rho = T * T.adjoint() / total;
  rho = (0.5 * (rho + rho.adjoint())).eval();
  return SmolinFamily{MixedState(sys, rho), Ensemble(sys, std::move(members))};
}

bool block_pt_invariance_check(const SmolinParams& params, const Cut& cut, double tol) {
  if (!cut.two_block() || cut.groups()[0].size() != 2 || cut.residual().size() != 2)
    throw InvalidCut("invariance check needs one measured pair against a residual pair");
  const SmolinFamily fam = generalized_smolin(params);
  std::vector<std::string> labels;
  for (int pos : cut.groups()[0]) labels.push_back(cut.system().label(pos));
  const MatrixXcd pt = partial_transpose(fam.rho, labels);
  return (pt - fam.rho.matrix).cwiseAbs().maxCoeff() <= tol;
}

PureStateVec example2_state(const EtaParams& eta) {
  const PartySystem sys({"A", "B", "C"}, {3, 3, 3});
  VectorXcd amp = VectorXcd::Zero(27);
  auto idx = [](int a, int b, int c) { return 9 * a + 3 * b + c; };
  const Cx third(1.0 / 3.0, 0.0);
  // v1 on |ab>|0>
  amp(idx(0, 0, 0)) = std::exp(Cx(0, eta.eta1)) * third;
  amp(idx(1, 1, 0)) = third;
  amp(idx(2, 2, 0)) = third;
  // v2 on |ab>|1>
  amp(idx(0, 1, 1)) = std::exp(Cx(0, eta.eta2)) * third;
  amp(idx(1, 2, 1)) = third;
  amp(idx(2, 0, 1)) = third;
  // v3 on |ab>|2>
  amp(idx(0, 2, 2)) = std::exp(Cx(0, eta.eta3)) * third;
  amp(idx(1, 0, 2)) = third;
  amp(idx(2, 1, 2)) = third;
  return PureStateVec(sys, amp);
}

bool Fingerprint::infinite(double rel) const {
  return std::abs(den) <= rel * (std::abs(num) + std::abs(den));
}

Fingerprint moduli_of(Cx x) {
  const Cx x3 = x * x * x;
  const Cx up = x3 + Cx(216.0, 0.0);
  const Cx dn = Cx(27.0, 0.0) - x3;
  return Fingerprint{x3 * up * up * up, dn * dn * dn};
}

Fingerprint moduli_fingerprint(const EtaParams& eta) {
  const Cx sum = std::exp(Cx(0, eta.eta1)) + std::exp(Cx(0, eta.eta2)) + std::exp(Cx(0, eta.eta3));
  const Cx center = std::exp(Cx(0, (eta.eta1 + eta.eta2 + eta.eta3) / 3.0));
  return moduli_of(sum / center);
}

bool fingerprints_equal(const Fingerprint& f1, const Fingerprint& f2, double rel) {
  const Cx cross = f1.num * f2.den - f2.num * f1.den;
  const double scale = std::max(std::abs(f1.num), std::abs(f1.den)) *
                       std::max(std::abs(f2.num), std::abs(f2.den));
  return std::abs(cross) <= rel * std::max(scale, 1e-300);
}

namespace {

// Curve slots 0..3 carry types D, X, X, D; D is x1 x2 = lambda and X is
// x1 = lambda x2. Homogeneous pair samples of a source curve.
bool slot_is_d(int slot) { return slot == 0 || slot == 3; }

struct CurveSample {
  Eigen::Vector2cd p, q;
};

std::vector<CurveSample> sample_curve(int slot, Cx lam, Seed seed) {
  std::vector<CurveSample> out;
  Rng rng(seed);
  for (int s = 0; s < 3; ++s) {
    const double mag = 0.6 + 0.9 * rng.uniform();
    const double ph = 2.0 * M_PI * rng.uniform();
    const Cx t = mag * Cx(std::cos(ph), std::sin(ph));
    Cx x1, x2;
    if (slot_is_d(slot)) {
      x1 = t;
      x2 = lam / t;
    } else {
      x2 = t;
      x1 = lam * t;
    }
    CurveSample cs;
    cs.p << x1, Cx(1, 0);
    cs.q << x2, Cx(1, 0);
    cs.p /= cs.p.norm();
    cs.q /= cs.q.norm();
    out.push_back(cs);
  }
  return out;
}

// F(y1, y2) for the target slot: D: y10 y20 - lam y11 y21, X: y10 y21 - lam y11 y20.
Cx target_form(int slot, Cx lam, const Eigen::Vector2cd& y1, const Eigen::Vector2cd& y2) {
  if (slot_is_d(slot)) return y1(0) * y2(0) - lam * y1(1) * y2(1);
  return y1(0) * y2(1) - lam * y1(1) * y2(0);
}

Eigen::Vector2cd apply_moebius(const Eigen::Vector4cd& th, const Eigen::Vector2cd& v) {
  Eigen::Vector2cd out;
  out << th(0) * v(0) + th(1) * v(1), th(2) * v(0) + th(3) * v(1);
  return out;
}

Cx moebius_det(const Eigen::Vector4cd& th) { return th(0) * th(3) - th(1) * th(2); }

double matching_rms(const std::array<std::vector<CurveSample>, 4>& samples,
                    const std::array<int, 4>& match, const std::array<Cx, 4>& lam2,
                    const Eigen::Vector4cd& th1, const Eigen::Vector4cd& th2) {
  double acc = 0.0;
  int count = 0;
  for (int c = 0; c < 4; ++c) {
    const int j = match[static_cast<size_t>(c)];
    const double w = std::sqrt(1.0 + std::norm(lam2[static_cast<size_t>(j)]));
    for (const CurveSample& cs : samples[static_cast<size_t>(c)]) {
      const Cx r = target_form(j, lam2[static_cast<size_t>(j)], apply_moebius(th1, cs.p),
                               apply_moebius(th2, cs.q)) /
                   w;
      acc += std::norm(r);
      ++count;
    }
  }
  return std::sqrt(acc / count);
}

// Linear least-squares half-step of the alternation: residuals are linear in
// the factor being updated, so the unit minimizer is the smallest right
// singular vector of the stacked system.
Eigen::Vector4cd half_step(const std::array<std::vector<CurveSample>, 4>& samples,
                           const std::array<int, 4>& match, const std::array<Cx, 4>& lam2,
                           const Eigen::Vector4cd& fixed, bool update_first) {
  MatrixXcd A(12, 4);
  int row = 0;
  for (int c = 0; c < 4; ++c) {
    const int j = match[static_cast<size_t>(c)];
    const Cx lam = lam2[static_cast<size_t>(j)];
    const double w = std::sqrt(1.0 + std::norm(lam));
    for (const CurveSample& cs : samples[static_cast<size_t>(c)]) {
      // F = alpha * y_upd(0) + beta * y_upd(1) with (alpha, beta) from the
      // fixed factor's image and the target form
      const Eigen::Vector2cd yf = apply_moebius(fixed, update_first ? cs.q : cs.p);
      Cx alpha, beta;
      if (slot_is_d(j)) {
        alpha = yf(0);
        beta = -lam * yf(1);
      } else if (update_first) {
        alpha = yf(1);
        beta = -lam * yf(0);
      } else {
        // updating the second factor of an X form: F = y1(0) y2(1) - lam y1(1) y2(0)
        alpha = -lam * yf(1);
        beta = yf(0);
      }
      const Eigen::Vector2cd v = update_first ? cs.p : cs.q;
      A(row, 0) = alpha * v(0) / w;
      A(row, 1) = alpha * v(1) / w;
      A(row, 2) = beta * v(0) / w;
      A(row, 3) = beta * v(1) / w;
      ++row;
    }
  }
  Eigen::JacobiSVD<MatrixXcd> svd(A, Eigen::ComputeThinV);
  return svd.matrixV().col(3);
}

}  // namespace

ObstructionReport smolin_lu_obstruction_report(const std::array<Cx, 4>& lambda,
                                               const std::array<Cx, 4>& lambda2, double tau,
                                               Seed seed) {
  for (const auto& tuple : {lambda, lambda2})
    for (const Cx& l : tuple) {
      if (!std::isfinite(l.real()) || !std::isfinite(l.imag()))
        throw InvalidParams("curve parameters must be finite");
      if (std::abs(l) < 1e-12) throw InvalidParams("curve parameters must be nonzero");
    }

  std::array<std::vector<CurveSample>, 4> samples;
  for (int c = 0; c < 4; ++c)
    samples[static_cast<size_t>(c)] =
        sample_curve(c, lambda[static_cast<size_t>(c)], derive_seed(seed, 100 + c));

  ObstructionReport rep;
  rep.best_residual = 1e300;
  std::array<int, 4> match = {0, 1, 2, 3};
  std::array<int, 4> perm = {0, 1, 2, 3};
  do {
    match = perm;
    double best = 1e300;
    bool feasible = false;
    // restart -1 starts at the identity pair: within-type relabelings of the
    // same tuple are matched immediately instead of through the alternation
    for (int restart = -1; restart < 20; ++restart) {
      Eigen::Vector4cd th1, th2;
      if (restart < 0) {
        th1 << Cx(1, 0), Cx(0, 0), Cx(0, 0), Cx(1, 0);
        th2 = th1;
      } else {
        Rng rng(derive_seed(seed, 1000 + 64 * static_cast<Seed>(restart) +
                                      static_cast<Seed>(match[0] + 4 * match[1] + 16 * match[2])));
        for (int i = 0; i < 4; ++i) {
          th1(i) = rng.cgauss();
          th2(i) = rng.cgauss();
        }
      }
      th1 /= th1.norm();
      th2 /= th2.norm();
      double prev = matching_rms(samples, match, lambda2, th1, th2);
      for (int sweep = 0; sweep < 150 && prev >= 1e-14; ++sweep) {
        th1 = half_step(samples, match, lambda2, th2, true);
        th2 = half_step(samples, match, lambda2, th1, false);
        const double rms = matching_rms(samples, match, lambda2, th1, th2);
        if (rms < 1e-14 || prev - rms < 1e-15) {
          prev = rms;
          break;
        }
        prev = rms;
      }
      best = std::min(best, prev);
      if (prev < tau && std::abs(moebius_det(th1)) > 1e-3 && std::abs(moebius_det(th2)) > 1e-3) {
        feasible = true;
        break;
      }
    }
    if (feasible) ++rep.feasible_matchings;
    rep.best_residual = std::min(rep.best_residual, best);
  } while (std::next_permutation(perm.begin(), perm.end()));

  // within-type closed-form relations, combos (i1, i4, j2, j3) over the two
  // D-assignments and two X-assignments (1-indexed slots 1,4 = D; 2,3 = X)
  const std::array<std::array<int, 4>, 4> combos = {{{0, 3, 1, 2},
                                                     {0, 3, 2, 1},
                                                     {3, 0, 1, 2},
                                                     {3, 0, 2, 1}}};
  for (int v = 0; v < 4; ++v) {
    const auto& cb = combos[static_cast<size_t>(v)];
    const Cx lhs = lambda[0] * lambda2[static_cast<size_t>(cb[3])] *
                   lambda2[static_cast<size_t>(cb[1])];
    const Cx rhs = lambda2[static_cast<size_t>(cb[0])] * lambda2[static_cast<size_t>(cb[2])] *
                   lambda[3];
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    rep.relation_violated[static_cast<size_t>(v)] = std::abs(lhs - rhs) > 1e-9 * scale;
  }

  bool all_violated = true;
  for (bool v : rep.relation_violated) all_violated = all_violated && v;
  rep.verdict = (rep.feasible_matchings == 0 && all_violated) ? LuVerdict::Inequivalent
                                                              : LuVerdict::Undetermined;
  return rep;
}

LuVerdict smolin_lu_obstruction(const std::array<Cx, 4>& lambda,
                                const std::array<Cx, 4>& lambda2, double tau) {
  return smolin_lu_obstruction_report(lambda, lambda2, tau).verdict;
}

std::variant<PureStateVec, MixedState> standard_states(const std::string& name,
                                                       const PartySystem& system) {
  const long total = system.total_dim();
  if (name == "ghz") {
    const int d = system.dim(0);
    for (int p = 0; p < system.party_count(); ++p)
      if (system.dim(p) != d) throw InvalidDimension("ghz needs uniform local dimensions");
    VectorXcd amp = VectorXcd::Zero(total);
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    for (int k = 0; k < d; ++k) {
      std::vector<int> digits(static_cast<size_t>(system.party_count()), k);
      amp(system.index_of(digits)) = Cx(s, 0);
    }
    return PureStateVec(system, amp);
  }
  if (name == "w") {
    for (int p = 0; p < system.party_count(); ++p)
      if (system.dim(p) != 2) throw InvalidDimension("w needs qubit parties");
    VectorXcd amp = VectorXcd::Zero(total);
    const double s = 1.0 / std::sqrt(static_cast<double>(system.party_count()));
    for (int p = 0; p < system.party_count(); ++p) {
      std::vector<int> digits(static_cast<size_t>(system.party_count()), 0);
      digits[static_cast<size_t>(p)] = 1;
      amp(system.index_of(digits)) = Cx(s, 0);
    }
    return PureStateVec(system, amp);
  }
  if (name == "bell-phi+" || name == "bell-phi-" || name == "bell-psi+" || name == "bell-psi-") {
    if (system.party_count() != 2 || system.dim(0) != 2 || system.dim(1) != 2)
      throw InvalidDimension("bell states need two qubits");
    VectorXcd amp = VectorXcd::Zero(4);
    const double s = kInvSqrt2;
    if (name[5] == 'p' && name[6] == 'h') {  // phi
      amp(0) = Cx(s, 0);
      amp(3) = name.back() == '+' ? Cx(s, 0) : Cx(-s, 0);
    } else {  // psi
      amp(1) = Cx(s, 0);
      amp(2) = name.back() == '+' ? Cx(s, 0) : Cx(-s, 0);
    }
    return PureStateVec(system, amp);
  }
  if (name == "product-zero") {
    VectorXcd amp = VectorXcd::Zero(total);
    amp(0) = Cx(1, 0);
    return PureStateVec(system, amp);
  }
  if (name == "maximally-mixed") {
    return MixedState(system,
                      MatrixXcd::Identity(total, total) / static_cast<double>(total));
  }
  if (name == "smolin") {
    if (system.party_count() != 4 || system.dims() != std::vector<int>{2, 2, 2, 2})
      throw InvalidDimension("smolin needs four qubits");
    const SmolinFamily fam = generalized_smolin(SmolinParams::standard());
    return MixedState(system, fam.rho.matrix);
  }
  throw UnknownFamily("no standard state named '" + name + "'");
}

}  // namespace entloc
