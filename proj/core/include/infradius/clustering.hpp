#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "infradius/density.hpp"
#include "infradius/expfam.hpp"
#include "infradius/relative.hpp"

namespace infradius {

enum class PredicateMode { ClosedForm, Numeric };
enum class ClusterDivergence { KLD, ReverseKLD };

// Quadrature KLD with both densities forced onto one shared grid; the numeric
// assignment predicate and its audits run through this.
double kld_numeric_on_common_grid(const Density& p, const Density& q);

struct ClusterState {
  int k = 0;
  std::vector<EFMember> centers;
  std::vector<int> assignment;
  double objective = 0.0;  // sum_i w_i min_l D[p_i : q_l]
  int iterations = 0;
  bool converged = false;
  bool duplicated_centers = false;  // all-identical input members with k > 1
  std::vector<double> objective_trace;
};

// Nearest-center assignment. ClosedForm compares F(theta_l) - m_i . theta_l
// (the member-constant entropy and carrier terms cancel); Numeric integrates
// the KLD on grids. Ties break toward the lowest center index.
std::vector<int> assign(const WeightedSet& members, std::span<const EFMember> centers,
                        PredicateMode mode = PredicateMode::ClosedForm,
                        ClusterDivergence divergence = ClusterDivergence::KLD);

// Exact per-cluster minimizers: the information projection of the cluster's
// weighted sub-mixture (pooled moment) for KLD, the natural-parameter average
// for reverse KLD. Every cluster must be nonempty.
std::vector<EFMember> update_centers(const WeightedSet& members,
                                     std::span<const int> assignment, int k,
                                     FamilyPtr fam,
                                     ClusterDivergence divergence = ClusterDivergence::KLD);

// Lloyd iteration with k-means++ seeding over moment-space distances;
// deterministic for a given seed and invariant to member order.
ClusterState cluster(const WeightedSet& members, int k, FamilyPtr fam, std::uint64_t seed,
                     int max_iters = 100,
                     PredicateMode mode = PredicateMode::ClosedForm,
                     ClusterDivergence divergence = ClusterDivergence::KLD);

struct QuantizeResult {
  ClusterState state;
  std::vector<double> weights;     // aggregated per-center mixture weights
  std::vector<EFMember> centers;   // the simplified mixture's components
  double jsd_diagnostic = 0.0;     // JSD(original mixture, simplified mixture)
};

// Quantizes the components of a structured mixture into k family members.
QuantizeResult quantize_mixture(const Density& mix, int k, FamilyPtr fam,
                                std::uint64_t seed, int max_iters = 100);

}  // namespace infradius
