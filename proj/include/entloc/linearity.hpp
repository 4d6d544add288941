#pragma once
// The linearity side of the separability criterion: decide whether a sampled
// locus looks like a finite union of products of linear subspaces, or
// produce a verified escape from the span of some component.

#include <optional>
#include <string>
#include <vector>

#include "entloc/locus.hpp"

namespace entloc {

// Coefficient-rank test of a multidegree-(1,1) form q = (r^1)^T B r^2.
// rank 1 <=> q splits into two linear forms (returned up to scale).
struct BilinearRankFactor {
  int coefficient_rank = 0;
  MatrixXcd coefficient_matrix;
  std::optional<std::pair<VectorXcd, VectorXcd>> factors;
};
BilinearRankFactor bilinear_rank_factor_test(const MultiPoly<Cx>& q, double tol = 1e-10);

enum class LinearityTag { Linear, NonlinearWitness, Inconclusive };

struct ComponentSample {
  std::vector<PointPP> points;            // locus samples assigned here
  std::vector<MatrixXcd> span_bases;      // per group, orthonormal columns
  int local_dim = -1;                     // estimate at a representative
  int span_product_dim = -1;              // sum over groups of (span cols - 1)
  std::optional<MultiPoly<Cx>> fitted_form;  // (1,1) fast path, two-group cuts
  int fitted_coefficient_rank = -1;
};

struct NonlinearWitnessInfo {
  PointPP locus_point;   // representative whose component spans exit the locus
  PointPP escape_point;  // span-product point verified non-member
  int component = -1;
  std::string detail;
};

struct LinearityVerdict {
  LinearityTag tag = LinearityTag::Inconclusive;
  int components_found = 0;
  std::vector<ComponentSample> components;
  std::optional<NonlinearWitnessInfo> witness;
  std::string note;
};

struct LinearityOptions {
  int continuation_steps = 16;
  double trust_factor = 3.0;     // re-projection trust radius, in units of the step
  int tangent_reps = 3;          // representatives per cluster for tangent-span frames
  int span_samples = 50;         // random span-product membership probes (>= 50)
  double span_tol = 1e-6;        // relative singular-value cutoff for span bases
  int split_attempts = 40;       // RANSAC-style rescue partitions before a witness stands
};

// samples: nonempty, from sample_locus on the same spec.
LinearityVerdict linearity_test(const LocusSpec& spec, const std::vector<PointPP>& samples,
                                Seed seed, const LinearityOptions& opts = {});

}  // namespace entloc
