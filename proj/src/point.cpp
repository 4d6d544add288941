#include "entloc/point.hpp"

#include <algorithm>
#include <cmath>

namespace entloc {

PointPP canonicalize(const PointPP& p) {
  PointPP out;
  out.blocks.reserve(p.blocks.size());
  for (const auto& b : p.blocks) {
    double n = b.norm();
    if (n <= 0.0 || !std::isfinite(n)) throw InvalidParams("zero block in projective point");
    VectorXcd v = b / n;
    for (long i = 0; i < v.size(); ++i) {
      if (std::abs(v(i)) > 1e-12) {
        v *= std::conj(v(i)) / std::abs(v(i));
        break;
      }
    }
    out.blocks.push_back(std::move(v));
  }
  return out;
}

double gauge_distance(const PointPP& a, const PointPP& b) {
  if (a.blocks.size() != b.blocks.size())
    throw InvalidParams("points have different group counts");
  double sq = 0.0;
  for (size_t g = 0; g < a.blocks.size(); ++g) {
    if (a.blocks[g].size() != b.blocks[g].size())
      throw InvalidParams("points have different block shapes");
    double na = a.blocks[g].norm(), nb = b.blocks[g].norm();
    if (na <= 0.0 || nb <= 0.0) throw InvalidParams("zero block in projective point");
    // min over phase of ||u - e^{i t} v||; forming the aligned difference
    // directly avoids the cancellation in sqrt(2 - 2|<u,v>|) near coincidence
    VectorXcd u = a.blocks[g] / na;
    VectorXcd v = b.blocks[g] / nb;
    const Cx c = u.dot(v);
    const double ac = std::abs(c);
    if (ac > 0.0) v *= std::conj(c) / ac;
    sq += (u - v).squaredNorm();
  }
  return std::sqrt(sq);
}

PointPP random_point(const std::vector<long>& group_dims, Rng& rng) {
  PointPP p;
  for (long d : group_dims) {
    if (d < 1) throw InvalidDimension("group dimension must be positive");
    VectorXcd v(d);
    for (long i = 0; i < d; ++i) v(i) = rng.cgauss();
    p.blocks.push_back(std::move(v));
  }
  return canonicalize(p);
}

PointPP random_point(const Cut& cut, Seed seed) {
  Rng rng(seed);
  return random_point(cut.group_dims(), rng);
}

PointPP segre_image(const PointPP& p) {
  if (p.blocks.empty()) throw InvalidParams("point has no blocks");
  VectorXcd acc = p.blocks[0];
  for (size_t g = 1; g < p.blocks.size(); ++g) {
    const VectorXcd& b = p.blocks[g];
    VectorXcd next(acc.size() * b.size());
    for (long r = 0; r < acc.size(); ++r)
      next.segment(r * b.size(), b.size()) = acc(r) * b;
    acc = std::move(next);
  }
  return canonicalize(PointPP({acc}));
}

}  // namespace entloc
