#pragma once

#include "infradius/density.hpp"
#include "infradius/divergences.hpp"
#include "infradius/expfam.hpp"
#include "infradius/means.hpp"
#include "infradius/radius.hpp"

namespace infradius {

// Moments of an arbitrary density against `fam`: closed forms for members of
// the family (and the Weibull clan) and for structured mixtures; quadrature on
// the density's own grid otherwise, flagged `numeric`.
MomentSummary make_moment_summary(const Density& p, const ExpFamily& fam);

// KLD-closest member of the family: theta* = grad F*(E_p[t(x)]), the unique
// minimizer of KL[p : q_theta].
EFMember information_projection(const Density& p, FamilyPtr fam);

// Relative (M, D)-information radius: the centroid is constrained to `fam`.
// (arithmetic, KLD) closes via moment matching on the pooled moment; other
// pairs run a quasi-Newton search over theta from the moment-matched start.
RadiusResult relative_radius(const WeightedSet& set, FamilyPtr fam,
                             const MeanSpec& mean, const DivergenceSpec& divergence,
                             const SearchConfig& cfg = {});

// The two annealing-path optima between members of one family: the
// geometric-path member theta = (1-beta) theta1 + beta theta2 minimizes
// (1-beta) KL[c:p1] + beta KL[c:p2]; the moment-path member
// eta = (1-beta) eta1 + beta eta2 minimizes (1-beta) KL[p1:c] + beta KL[p2:c].
struct ReverseProjectionPair {
  EFMember geometric;
  EFMember moment;
};
ReverseProjectionPair relative_reverse_projection(const EFMember& p1,
                                                  const EFMember& p2, double beta);

}  // namespace infradius
