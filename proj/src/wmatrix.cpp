#include "entloc/wmatrix.hpp"

#include <cmath>
#include <utility>

namespace entloc {

namespace {

// Per-group indices of a joint measured index, row-major in group order
// (group 0 slowest).
std::vector<long> split_joint(const Cut& cut, long mu) {
  const int G = cut.group_count();
  std::vector<long> idx(static_cast<size_t>(G));
  for (int g = G - 1; g >= 0; --g) {
    idx[static_cast<size_t>(g)] = mu % cut.group_dim(g);
    mu /= cut.group_dim(g);
  }
  return idx;
}

// Lexicographic r-subsets of {0, ..., n-1}.
std::vector<std::vector<int>> combinations(int n, int r) {
  std::vector<std::vector<int>> out;
  if (r < 0 || r > n) return out;
  std::vector<int> c(static_cast<size_t>(r));
  for (int i = 0; i < r; ++i) c[static_cast<size_t>(i)] = i;
  while (true) {
    out.push_back(c);
    int i = r - 1;
    while (i >= 0 && c[static_cast<size_t>(i)] == n - r + i) --i;
    if (i < 0) break;
    ++c[static_cast<size_t>(i)];
    for (int j = i + 1; j < r; ++j)
      c[static_cast<size_t>(j)] = c[static_cast<size_t>(j - 1)] + 1;
  }
  return out;
}

VectorXcd kron_blocks(const std::vector<VectorXcd>& blocks) {
  VectorXcd acc = VectorXcd::Ones(1);
  for (const VectorXcd& b : blocks) {
    VectorXcd next(acc.size() * b.size());
    for (long i = 0; i < acc.size(); ++i)
      next.segment(i * b.size(), b.size()) = acc(i) * b;
    acc.swap(next);
  }
  return acc;
}

}  // namespace

WMatrix::WMatrix(const Ensemble& e, const Cut& cut) : ensemble_(e), cut_(cut) {
  if (!(e.system() == cut.system()))
    throw InvalidDimension("ensemble and cut describe different systems");
  cols_ = cut_.residual_dim();
  const long mdim = cut_.measured_dim();
  const int F = e.size();

  coef_.reserve(static_cast<size_t>(F));
  const bool with_exact = e.exact();
  if (with_exact) exact_coef_.emplace();

  double sq = 0.0;
  for (int f = 0; f < F; ++f) {
    const EnsembleMember& m = e.members()[static_cast<size_t>(f)];
    MatrixXcd C(mdim, cols_);
    std::vector<std::vector<GaussianRational>> CE;
    if (with_exact)
      CE.assign(static_cast<size_t>(mdim),
                std::vector<GaussianRational>(static_cast<size_t>(cols_)));
    for (long mu = 0; mu < mdim; ++mu) {
      const std::vector<long> gi = split_joint(cut_, mu);
      for (long b = 0; b < cols_; ++b) {
        const long full = cut_.full_index(gi, b);
        C(mu, b) = m.state.amplitudes(full);
        if (with_exact)
          CE[static_cast<size_t>(mu)][static_cast<size_t>(b)] =
              (*m.exact)[static_cast<size_t>(full)];
      }
    }
    sq += m.weight * C.squaredNorm();
    coef_.push_back(std::move(C));
    if (with_exact) exact_coef_->push_back(std::move(CE));
    row_weights_.push_back(std::sqrt(m.weight));
  }
  coeff_scale_ = std::sqrt(sq);
}

MatrixXcd WMatrix::evaluate(const PointPP& p) const {
  if (p.group_count() != cut_.group_count())
    throw InvalidDimension("point has wrong number of blocks");
  for (int g = 0; g < p.group_count(); ++g)
    if (p.blocks[static_cast<size_t>(g)].size() != cut_.group_dim(g))
      throw InvalidDimension("point block size does not match group dimension");
  const VectorXcd mono = kron_blocks(p.blocks);
  MatrixXcd W(rows(), cols_);
  for (int f = 0; f < rows(); ++f)
    W.row(f) = (mono.transpose() * coef_[static_cast<size_t>(f)]);
  return W;
}

MatrixXcd WMatrix::evaluate_weighted(const PointPP& p) const {
  MatrixXcd W = evaluate(p);
  for (int f = 0; f < rows(); ++f) W.row(f) *= row_weights_[static_cast<size_t>(f)];
  return W;
}

MultiPoly<Cx> WMatrix::entry(int f, long b) const {
  std::vector<int> sizes;
  for (long d : cut_.group_dims()) sizes.push_back(static_cast<int>(d));
  MultiPoly<Cx> q(sizes, std::vector<int>(sizes.size(), 1));
  const MatrixXcd& C = coef_.at(static_cast<size_t>(f));
  const long mdim = cut_.measured_dim();
  for (long mu = 0; mu < mdim; ++mu) {
    const Cx c = C(mu, b);
    if (c == Cx(0.0, 0.0)) continue;
    const std::vector<long> gi = split_joint(cut_, mu);
    MultiPoly<Cx>::Exponents e(static_cast<size_t>(q.var_count()), 0);
    for (int g = 0; g < cut_.group_count(); ++g)
      e[static_cast<size_t>(q.group_offset(g) + gi[static_cast<size_t>(g)])] = 1;
    q.add_term(e, c);
  }
  return q;
}

std::optional<MultiPoly<GaussianRational>> WMatrix::entry_exact(int f, long b) const {
  if (!exact_coef_) return std::nullopt;
  std::vector<int> sizes;
  for (long d : cut_.group_dims()) sizes.push_back(static_cast<int>(d));
  MultiPoly<GaussianRational> q(sizes, std::vector<int>(sizes.size(), 1));
  const auto& CE = exact_coef_->at(static_cast<size_t>(f));
  const long mdim = cut_.measured_dim();
  for (long mu = 0; mu < mdim; ++mu) {
    const GaussianRational& c = CE[static_cast<size_t>(mu)][static_cast<size_t>(b)];
    if (c.is_zero()) continue;
    const std::vector<long> gi = split_joint(cut_, mu);
    MultiPoly<GaussianRational>::Exponents e(static_cast<size_t>(q.var_count()), 0);
    for (int g = 0; g < cut_.group_count(); ++g)
      e[static_cast<size_t>(q.group_offset(g) + gi[static_cast<size_t>(g)])] = 1;
    q.add_term(e, c);
  }
  return q;
}

WMatrix build_w_matrix(const Ensemble& e, const Cut& cut) { return WMatrix(e, cut); }

MatrixXcd gram_form_at(const Ensemble& e, const Cut& cut, const PointPP& p) {
  const WMatrix W(e, cut);
  const MatrixXcd V = W.evaluate_weighted(p);
  MatrixXcd M = V.transpose() * V.conjugate();
  return 0.5 * (M + M.adjoint());
}

int rank_at(const WMatrix& W, const PointPP& p, double tau_rank) {
  const MatrixXcd V = W.evaluate_weighted(p);
  Eigen::JacobiSVD<MatrixXcd> svd(V);
  const Eigen::VectorXd s = svd.singularValues();
  if (s.size() == 0) return 0;
  const double s1 = s(0);
  if (s1 <= tau_rank * W.coeff_scale()) return 0;
  int r = 0;
  for (long i = 0; i < s.size(); ++i)
    if (s(i) > tau_rank * s1) ++r;
  return r;
}

int rank_at(const Ensemble& e, const Cut& cut, const PointPP& p, double tau_rank) {
  return rank_at(WMatrix(e, cut), p, tau_rank);
}

MinorSet minor_polynomials(const WMatrix& W, int k) {
  MinorSet out;
  out.k = k;
  const int m = k + 1;
  if (m <= 0 || m > W.rows() || m > W.cols()) return out;

  const auto row_sets = combinations(W.rows(), m);
  const auto col_sets = combinations(static_cast<int>(W.cols()), m);

  if (W.exact()) {
    out.exact.emplace();
    for (const auto& rs : row_sets) {
      for (const auto& cs : col_sets) {
        std::vector<std::vector<MultiPoly<GaussianRational>>> cells(
            static_cast<size_t>(m), std::vector<MultiPoly<GaussianRational>>());
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j)
            cells[static_cast<size_t>(i)].push_back(
                *W.entry_exact(rs[static_cast<size_t>(i)], cs[static_cast<size_t>(j)]));
        MultiPoly<GaussianRational> d = poly_det(cells);
        out.floats.push_back(to_float_poly(d));
        out.exact->push_back(std::move(d));
      }
    }
    return out;
  }

  for (const auto& rs : row_sets) {
    for (const auto& cs : col_sets) {
      std::vector<std::vector<MultiPoly<Cx>>> cells(static_cast<size_t>(m),
                                                    std::vector<MultiPoly<Cx>>());
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          cells[static_cast<size_t>(i)].push_back(
              W.entry(rs[static_cast<size_t>(i)], cs[static_cast<size_t>(j)]));
      out.floats.push_back(poly_det(cells));
    }
  }
  return out;
}

Cut merged_cut(const Cut& cut) {
  std::vector<std::string> merged;
  for (const auto& grp : cut.groups())
    for (int pos : grp) merged.push_back(cut.system().label(pos));
  return Cut(cut.system(), {merged});
}

}  // namespace entloc
