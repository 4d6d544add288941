#include "entloc/locus.hpp"

#include <atomic>
#include <cmath>
#include <utility>

#include "entloc/parallel.hpp"

namespace entloc {

namespace {

// Per-group partial contractions of the weighted coefficient tensor:
// slice(g, f) is (d_g x cols) with V(p)(f, b) = x_g^T slice(g, f)(:, b) for
// every g, so slice(g, f)(c, b) is dV(f, b)/dx_{g,c}.
struct PartialSlices {
  std::vector<std::vector<MatrixXcd>> per_group;  // [g][f]
};

std::vector<long> split_joint(const Cut& cut, long mu) {
  const int G = cut.group_count();
  std::vector<long> idx(static_cast<size_t>(G));
  for (int g = G - 1; g >= 0; --g) {
    idx[static_cast<size_t>(g)] = mu % cut.group_dim(g);
    mu /= cut.group_dim(g);
  }
  return idx;
}

PartialSlices partial_slices(const WMatrix& W, const PointPP& p) {
  const Cut& cut = W.cut();
  const int G = cut.group_count();
  const int F = W.rows();
  const long cols = W.cols();
  PartialSlices out;
  out.per_group.assign(static_cast<size_t>(G), {});
  for (int g = 0; g < G; ++g)
    out.per_group[static_cast<size_t>(g)].assign(
        static_cast<size_t>(F), MatrixXcd::Zero(cut.group_dim(g), cols));
  const long mdim = cut.measured_dim();
  for (long mu = 0; mu < mdim; ++mu) {
    const std::vector<long> gi = split_joint(cut, mu);
    // prefix/suffix products of the per-group coordinate factors
    std::vector<Cx> factor(static_cast<size_t>(G));
    for (int g = 0; g < G; ++g)
      factor[static_cast<size_t>(g)] =
          p.blocks[static_cast<size_t>(g)](gi[static_cast<size_t>(g)]);
    for (int g = 0; g < G; ++g) {
      Cx rest(1.0, 0.0);
      for (int h = 0; h < G; ++h)
        if (h != g) rest *= factor[static_cast<size_t>(h)];
      for (int f = 0; f < F; ++f) {
        const double sw = W.row_weights()[static_cast<size_t>(f)];
        out.per_group[static_cast<size_t>(g)][static_cast<size_t>(f)].row(
            gi[static_cast<size_t>(g)]) +=
            rest * sw * W.row_coefficients(f).row(mu);
      }
    }
  }
  return out;
}

PointPP retract(const PointPP& p) {
  PointPP q = p;
  for (VectorXcd& b : q.blocks) {
    const double n = b.norm();
    if (n <= 0.0) throw InvalidParams("zero block during retraction");
    b /= n;
  }
  return q;
}

// sigma_{k+1..}^2 / sigma_total^2 for k >= 1; ||V||_F^2 / coeff_scale^2 for
// k = 0. Both vanish exactly on the locus.
double objective_value(const WMatrix& W, int k, const PointPP& p) {
  const MatrixXcd V = W.evaluate_weighted(p);
  const double S = V.squaredNorm();
  if (k == 0) {
    const double cs = W.coeff_scale();
    return S / (cs * cs);
  }
  if (S <= 0.0) return 0.0;
  Eigen::JacobiSVD<MatrixXcd> svd(V);
  const Eigen::VectorXd s = svd.singularValues();
  double T = 0.0;
  for (long i = k; i < s.size(); ++i) T += s(i) * s(i);
  return T / S;
}

// Objective plus the Riemannian (tangent-projected) gradient blocks.
double objective_gradient(const WMatrix& W, int k, const PointPP& p,
                          std::vector<VectorXcd>& tangent) {
  const MatrixXcd V = W.evaluate_weighted(p);
  const PartialSlices sl = partial_slices(W, p);
  const int G = W.cut().group_count();
  const int F = W.rows();
  const double S = V.squaredNorm();
  tangent.assign(static_cast<size_t>(G), VectorXcd());

  MatrixXcd E;  // residual matrix whose squared norm is the numerator
  double T = 0.0;
  double val = 0.0;
  const double cs2 = W.coeff_scale() * W.coeff_scale();
  if (k == 0) {
    E = V;
    val = S / cs2;
  } else {
    Eigen::JacobiSVD<MatrixXcd> svd(V, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd s = svd.singularValues();
    E = MatrixXcd::Zero(V.rows(), V.cols());
    for (long i = k; i < s.size(); ++i) {
      E.noalias() += s(i) * svd.matrixU().col(i) * svd.matrixV().col(i).adjoint();
      T += s(i) * s(i);
    }
    val = S > 0.0 ? T / S : 0.0;
  }

  for (int g = 0; g < G; ++g) {
    const long dg = W.cut().group_dim(g);
    VectorXcd gT = VectorXcd::Zero(dg);
    VectorXcd gS = VectorXcd::Zero(dg);
    for (int f = 0; f < F; ++f) {
      const MatrixXcd& B = sl.per_group[static_cast<size_t>(g)][static_cast<size_t>(f)];
      // grad_c of ||M||^2 along x_{g,c} is 2 conj(tr(M^dagger dM/dx)), and
      // row f of dV/dx_{g,c} is B(c, :)
      gT.noalias() += 2.0 * (B.conjugate() * E.row(f).transpose());
      if (k != 0) gS.noalias() += 2.0 * (B.conjugate() * V.row(f).transpose());
    }
    VectorXcd grad;
    if (k == 0) {
      grad = gT / cs2;
    } else if (S > 0.0) {
      grad = (S * gT - T * gS) / (S * S);
    } else {
      grad = VectorXcd::Zero(dg);
    }
    const VectorXcd& x = p.blocks[static_cast<size_t>(g)];
    tangent[static_cast<size_t>(g)] = grad - x.dot(grad) * x;
  }
  return val;
}

struct DescentResult {
  PointPP point;
  double value = 0.0;
  bool trust_exceeded = false;
};

// Riemannian descent with Barzilai-Borwein steps and a short non-monotone
// Armijo memory; plain gradient steps zigzag for thousands of iterations in
// the narrow valleys around rank strata, while the BB spectral step hits
// machine precision in a handful.
DescentResult descend(const WMatrix& W, int k, const PointPP& start, int iterations,
                      const PointPP* anchor, double trust) {
  DescentResult res;
  PointPP x = retract(start);
  std::vector<VectorXcd> t;
  double f = objective_gradient(W, k, x, t);
  PointPP best = x;
  double fbest = f;
  PointPP xprev;
  std::vector<VectorXcd> tprev;
  // steps stay local: within half the sphere, and within the trust radius
  // when anchored, so a BB overshoot cannot teleport between components
  const double step_cap = anchor ? std::max(1e-3, 0.5 * trust) : 1.0;
  std::vector<double> hist = {f};
  for (int it = 0; it < iterations; ++it) {
    if (f < 1e-26) break;
    double gn2 = 0.0;
    for (const VectorXcd& tb : t) gn2 += tb.squaredNorm();
    if (gn2 < 1e-28) break;
    double eta = 0.5;
    if (it > 0) {
      double ss = 0.0, sy = 0.0;
      for (size_t g = 0; g < x.blocks.size(); ++g) {
        const VectorXcd s = x.blocks[g] - xprev.blocks[g];
        ss += s.squaredNorm();
        sy += (s.dot(t[g] - tprev[g])).real();
      }
      eta = sy > 1e-300 ? std::clamp(ss / sy, 1e-12, 1e6) : 1.0;
    }
    if (eta * std::sqrt(gn2) > step_cap) eta = step_cap / std::sqrt(gn2);
    double fmax = 0.0;
    for (double h : hist) fmax = std::max(fmax, h);
    xprev = x;
    tprev = t;
    bool accepted = false;
    for (int bt = 0; bt < 45 && !accepted; ++bt) {
      PointPP cand = x;
      for (size_t g = 0; g < cand.blocks.size(); ++g) cand.blocks[g] -= eta * tprev[g];
      cand = retract(cand);
      const double fc = objective_value(W, k, cand);
      if (fc <= fmax - 1e-4 * eta * gn2) {
        x = std::move(cand);
        accepted = true;
      } else {
        eta *= 0.5;
        if (eta < 1e-16) break;
      }
    }
    if (!accepted) break;
    f = objective_gradient(W, k, x, t);
    hist.push_back(f);
    if (hist.size() > 8) hist.erase(hist.begin());
    if (f < fbest) {
      fbest = f;
      best = x;
    }
    if (anchor && gauge_distance(x, *anchor) > trust) {
      res.trust_exceeded = true;
      break;
    }
  }
  res.point = std::move(best);
  res.value = fbest;
  return res;
}

}  // namespace

LocusSpec::LocusSpec(Ensemble e, Cut c, int k_, double tau)
    : ensemble(std::move(e)), cut(std::move(c)), k(k_), tau_rank(tau) {
  if (!(ensemble.system() == cut.system()))
    throw InvalidDimension("ensemble and cut describe different systems");
  if (k < 0 || k >= cut.residual_dim())
    throw InvalidParams("k must lie in [0, residual_dim)");
  if (!(tau_rank > 0.0)) throw InvalidParams("tau_rank must be positive");
}

bool membership(const LocusSpec& spec, const PointPP& p) {
  return rank_at(WMatrix(spec.ensemble, spec.cut), p, spec.tau_rank) <= spec.k;
}

MembershipBand membership_band(const WMatrix& W, int k, double tau_rank, const PointPP& p) {
  MembershipBand band{};
  band.strict = rank_at(W, p, tau_rank / 10.0) <= k;
  band.mid = rank_at(W, p, tau_rank) <= k;
  band.loose = rank_at(W, p, tau_rank * 10.0) <= k;
  return band;
}

SampleResult sample_locus(const LocusSpec& spec, int count, Seed seed,
                          const SampleOptions& opts) {
  if (count <= 0) throw InvalidParams("sample count must be positive");
  if (opts.restarts <= 0 || opts.iterations <= 0 || opts.chunk <= 0)
    throw InvalidParams("sample options must be positive");
  const WMatrix W(spec.ensemble, spec.cut);

  std::vector<std::optional<PointPP>> slots(static_cast<size_t>(opts.restarts));
  int attempts = 0;
  int successes = 0;
  while (attempts < opts.restarts && successes < count) {
    const int lo = attempts;
    const int hi = std::min(attempts + opts.chunk, opts.restarts);
    parallel_for(hi - lo, [&](int d) {
      const int i = lo + d;
      Rng rng(derive_seed(seed, static_cast<Seed>(i)));
      PointPP p0 = random_point(spec.cut.group_dims(), rng);
      DescentResult dr = descend(W, spec.k, p0, opts.iterations, nullptr, 0.0);
      if (rank_at(W, dr.point, spec.tau_rank) <= spec.k)
        slots[static_cast<size_t>(i)] = canonicalize(dr.point);
    });
    attempts = hi;
    successes = 0;
    for (int i = 0; i < attempts; ++i)
      if (slots[static_cast<size_t>(i)]) ++successes;
  }

  SampleResult out;
  out.attempts = attempts;
  out.successes = successes;
  for (int i = 0; i < attempts && static_cast<int>(out.points.size()) < count; ++i)
    if (slots[static_cast<size_t>(i)]) out.points.push_back(*slots[static_cast<size_t>(i)]);
  if (successes == 0) throw EmptyOrNotFound("no locus point found; V^k may be empty");
  return out;
}

int local_dimension_estimate(const LocusSpec& spec, const PointPP& p, double jac_tol) {
  const WMatrix W(spec.ensemble, spec.cut);
  int ambient = 0;
  for (long d : spec.cut.group_dims()) ambient += static_cast<int>(d) - 1;
  const MinorSet ms = minor_polynomials(W, spec.k);
  if (ms.floats.empty()) return ambient;

  int nv = 0;
  for (long d : spec.cut.group_dims()) nv += static_cast<int>(d);
  MatrixXcd J(static_cast<long>(ms.floats.size()), nv);
  for (size_t m = 0; m < ms.floats.size(); ++m)
    for (int v = 0; v < nv; ++v)
      J(static_cast<long>(m), v) = ms.floats[m].derivative(v).evaluate(p.blocks);
  Eigen::JacobiSVD<MatrixXcd> svd(J);
  const Eigen::VectorXd s = svd.singularValues();
  int rank = 0;
  if (s.size() > 0 && s(0) > 0.0)
    for (long i = 0; i < s.size(); ++i)
      if (s(i) > jac_tol * s(0)) ++rank;
  return ambient - rank;
}

namespace {

void check_units(const PointPP& p, const std::vector<MatrixXcd>& units) {
  if (static_cast<int>(units.size()) != p.group_count())
    throw InvalidParams("one unitary per point block required");
  for (size_t g = 0; g < units.size(); ++g) {
    const MatrixXcd& U = units[g];
    if (U.rows() != U.cols() || U.rows() != p.blocks[g].size())
      throw InvalidDimension("unitary size does not match block");
    if ((U.adjoint() * U - MatrixXcd::Identity(U.rows(), U.cols())).norm() > tol::unitary)
      throw InvalidParams("matrix is not unitary");
  }
}

}  // namespace

PointPP covariance_point_map(const PointPP& p, const std::vector<MatrixXcd>& units,
                             MapDirection dir) {
  check_units(p, units);
  PointPP q = p;
  for (size_t g = 0; g < units.size(); ++g) {
    if (dir == MapDirection::Forward)
      q.blocks[g] = units[g].conjugate() * p.blocks[g];
    else
      q.blocks[g] = units[g].transpose() * p.blocks[g];
  }
  return canonicalize(q);
}

PointPP covariance_point_map_mismatched(const PointPP& p, const std::vector<MatrixXcd>& units) {
  check_units(p, units);
  PointPP q = p;
  for (size_t g = 0; g < units.size(); ++g) q.blocks[g] = units[g] * p.blocks[g];
  return canonicalize(q);
}

std::optional<PointPP> reproject(const WMatrix& W, int k, double tau_rank, const PointPP& start,
                                 double trust, int iterations) {
  if (!(trust > 0.0)) throw InvalidParams("trust radius must be positive");
  DescentResult dr = descend(W, k, start, iterations, &start, trust);
  if (dr.trust_exceeded) return std::nullopt;
  if (rank_at(W, dr.point, tau_rank) > k) return std::nullopt;
  if (gauge_distance(dr.point, start) > trust) return std::nullopt;
  return canonicalize(dr.point);
}

}  // namespace entloc
