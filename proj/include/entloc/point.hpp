#pragma once
// Points of a product of projective spaces, one unit block per measured
// group. Gauge: unit norm, first entry of modulus > 1e-12 made real positive.

#include <vector>

#include "entloc/common.hpp"
#include "entloc/random.hpp"
#include "entloc/system.hpp"

namespace entloc {

struct PointPP {
  std::vector<VectorXcd> blocks;

  PointPP() = default;
  explicit PointPP(std::vector<VectorXcd> b) : blocks(std::move(b)) {}
  int group_count() const { return static_cast<int>(blocks.size()); }
};

// Applies the projective gauge; throws InvalidParams on a zero block.
PointPP canonicalize(const PointPP& p);

// Per-group Fubini-Study chordal distance sqrt(2 - 2|<a,b>|), combined in
// quadrature. Phase-free, so no prior canonicalization is required.
double gauge_distance(const PointPP& a, const PointPP& b);

PointPP random_point(const std::vector<long>& group_dims, Rng& rng);
PointPP random_point(const Cut& cut, Seed seed);

// Kronecker image of the blocks (the grouped-cut coordinates of a split
// point); single-block result.
PointPP segre_image(const PointPP& p);

}  // namespace entloc
