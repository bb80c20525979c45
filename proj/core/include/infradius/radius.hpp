#pragma once

#include <optional>
#include <span>
#include <vector>

#include "infradius/density.hpp"
#include "infradius/divergences.hpp"
#include "infradius/expfam.hpp"
#include "infradius/means.hpp"

namespace infradius {

struct RadiusResult {
  double value = 0.0;  // nats
  Density centroid;
  double alpha = 1.0;  // Sibson order; NaN when a (mean, divergence) pair drove it
  std::optional<MeanSpec> mean;
  std::optional<DivergenceSpec> divergence;
  int iterations = 0;     // 0 for closed forms
  double residual = 0.0;  // final optimality-gap estimate (relative improvement)
  bool converged = true;
  // Closed forms have a provably unique centroid; variational searches return
  // the first local minimizer from the canonical start and cannot certify it.
  bool centroid_unique = true;
};

struct SearchConfig {
  int max_iters = 10000;
  double rel_tol = 1e-10;  // stop when relative objective improvement drops below
  double step0 = 1.0;
  double armijo = 1e-4;
  int max_backtracks = 60;
  std::vector<double>* trace = nullptr;  // per-iteration objective log (optional)
};

// Sibson information radius of order alpha in (0, inf], with the closed-form
// centroid: the arithmetic mixture at alpha=1, the normalized pointwise
// weighted power mean for finite alpha != 1, the normalized upper envelope at
// alpha=inf (where the value no longer depends on the weights).
RadiusResult sibson_radius(const WeightedSet& set, double alpha);

// Objective value R_alpha(set, c) at an arbitrary candidate centroid.
double sibson_objective(const WeightedSet& set, double alpha, const Density& c);

// (lhs, rhs) of the decomposition identity
// R_alpha(P, c) - R_alpha(P, c*) = D^R_alpha[c* : c].
std::pair<double, double> decomposition_gap(const WeightedSet& set, double alpha,
                                            const Density& c);

// Two-point symmetric Sibson alpha-divergence R_alpha({(1/2,p),(1/2,q)}).
double sibson_two_point(const Density& p, const Density& q, double alpha);

// Closed form of the two-point radius at alpha = 1/k on an exponential family,
// via the binomial expansion of the power mean:
//   -(1/(k-1)) log( 2^-k sum_i C(k,i) exp(F(mix_i) - mix of F) ).
double sibson_radius_ef_1_over_k(const ExpFamily& fam, std::span<const double> theta1,
                                 std::span<const double> theta2, int k);

// Discrete Rényi entropy H_{1/alpha}(w): an upper bound on R_alpha.
double radius_upper_bound(std::span<const double> weights, double alpha);

// (M,D)-information radius over the simplex of densities on the members'
// common support, by multiplicative mirror-descent with Armijo backtracking
// from the arithmetic-mixture start. The mean is weighted by the set's
// weights. Non-convergence is flagged, not thrown.
RadiusResult generalized_radius(const WeightedSet& set, const MeanSpec& mean,
                                const DivergenceSpec& divergence,
                                const SearchConfig& cfg = {});

// Objective M(D[p_1:c], ..., D[p_n:c]; w) at a candidate c.
double generalized_objective(const WeightedSet& set, const MeanSpec& mean,
                             const DivergenceSpec& divergence, const Density& c);

struct BregmanInformation {
  double value = 0.0;
  std::vector<double> centroid_param;
};

// min_theta sum_i w_i B_F(theta_i : theta); the centroid is the weighted
// parameter average exactly.
BregmanInformation bregman_information(std::span<const double> weights,
                                       std::span<const std::vector<double>> thetas,
                                       const ConvexFunction& F);

// -log int M(p, q) dmu for a two-point weighted mean M.
double generalized_bhattacharyya(const Density& p, const Density& q,
                                 const MeanSpec& mean);

}  // namespace infradius
