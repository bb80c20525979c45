#include "infradius/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "infradius/divergences.hpp"

namespace infradius {

double kld_numeric_on_common_grid(const Density& p, const Density& q) {
  const GridSpec gs = merge_grids(p.natural_grid(), q.natural_grid());
  const auto xs = linspace(gs.lo, gs.hi, gs.n);
  const Density pn = p.kind() == Density::Kind::Grid ? p : p.materialize_at(xs);
  const Density qn = q.kind() == Density::Kind::Grid ? q : q.materialize_at(xs);
  return kld(pn, qn);
}

namespace {

// Full per-member KLD to a center via the semi-closed formula (the summary
// carries the member's entropy and carrier expectation).
double member_kld(const MomentSummary& s, const EFMember& center) {
  return semi_closed_kld(s, center);
}

double member_divergence(const MomentSummary& s, const Density& member,
                         const EFMember& center, ClusterDivergence divergence) {
  if (divergence == ClusterDivergence::KLD) return member_kld(s, center);
  // Reverse KLD requires in-family members: KL[q_theta : p_i] = B_F(theta_i : theta).
  if (member.kind() != Density::Kind::ExpFam ||
      !member.ef().family->same(*center.family)) {
    throw std::invalid_argument("reverse-KLD clustering needs in-family members");
  }
  return ef_kld(center, member.ef());
}

std::vector<MomentSummary> member_summaries(const WeightedSet& members,
                                            const ExpFamily& fam) {
  std::vector<MomentSummary> s;
  s.reserve(members.members.size());
  for (const auto& m : members.members) s.push_back(make_moment_summary(m, fam));
  return s;
}

std::vector<int> assign_impl(const WeightedSet& members,
                             std::span<const MomentSummary> summaries,
                             std::span<const EFMember> centers, PredicateMode mode,
                             ClusterDivergence divergence) {
  const std::size_t n = members.members.size();
  std::vector<int> out(n, 0);

  if (mode == PredicateMode::ClosedForm) {
    // Scores F(theta_l) - m_i . theta_l; constant member terms cancel. For
    // reverse KLD the Bregman comparison uses the full closed form instead.
    std::vector<double> f_theta(centers.size());
    for (std::size_t l = 0; l < centers.size(); ++l) {
      f_theta[l] = centers[l].family->cumulant(centers[l].theta);
    }
    parallel_for(n, [&](std::size_t i) {
      double best = kInf;
      int best_l = 0;
      for (std::size_t l = 0; l < centers.size(); ++l) {
        double score;
        if (divergence == ClusterDivergence::KLD) {
          score = f_theta[l];
          for (std::size_t d = 0; d < summaries[i].moment.size(); ++d) {
            score -= summaries[i].moment[d] * centers[l].theta[d];
          }
        } else {
          score = member_divergence(summaries[i], members.members[i], centers[l],
                                    divergence);
        }
        if (score < best) {
          best = score;
          best_l = static_cast<int>(l);
        }
      }
      out[i] = best_l;
    });
    return out;
  }

  // Numeric mode: quadrature KLD on a grid shared by the member and center.
  parallel_for(n, [&](std::size_t i) {
    double best = kInf;
    int best_l = 0;
    for (std::size_t l = 0; l < centers.size(); ++l) {
      const Density c = Density::expfam(centers[l]);
      double d;
      if (divergence == ClusterDivergence::KLD) {
        d = kld_numeric_on_common_grid(members.members[i], c);
      } else {
        d = kld_numeric_on_common_grid(c, members.members[i]);
      }
      if (d < best) {
        best = d;
        best_l = static_cast<int>(l);
      }
    }
    out[i] = best_l;
  });
  return out;
}

double objective_of(const WeightedSet& members, std::span<const MomentSummary> summaries,
                    std::span<const EFMember> centers, std::span<const int> assignment,
                    ClusterDivergence divergence) {
  double obj = 0.0;
  for (std::size_t i = 0; i < members.members.size(); ++i) {
    obj += members.weights[i] *
           member_divergence(summaries[i], members.members[i],
                             centers[static_cast<std::size_t>(assignment[i])], divergence);
  }
  return obj;
}

}  // namespace

std::vector<int> assign(const WeightedSet& members, std::span<const EFMember> centers,
                        PredicateMode mode, ClusterDivergence divergence) {
  if (centers.empty()) throw std::invalid_argument("assign: no centers");
  for (std::size_t l = 1; l < centers.size(); ++l) {
    if (!centers[l].family->same(*centers.front().family)) {
      throw std::invalid_argument("assign: centers span different families");
    }
  }
  const auto summaries = member_summaries(members, *centers.front().family);
  return assign_impl(members, summaries, centers, mode, divergence);
}

std::vector<EFMember> update_centers(const WeightedSet& members,
                                     std::span<const int> assignment, int k,
                                     FamilyPtr fam, ClusterDivergence divergence) {
  if (assignment.size() != members.members.size()) {
    throw std::invalid_argument("update_centers: assignment length mismatch");
  }
  const auto summaries = member_summaries(members, *fam);
  std::vector<EFMember> centers;
  centers.reserve(static_cast<std::size_t>(k));
  for (int l = 0; l < k; ++l) {
    std::vector<double> pooled(summaries.front().moment.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < members.members.size(); ++i) {
      if (assignment[i] != l) continue;
      total += members.weights[i];
      for (std::size_t d = 0; d < pooled.size(); ++d) {
        if (divergence == ClusterDivergence::KLD) {
          pooled[d] += members.weights[i] * summaries[i].moment[d];
        } else {
          pooled[d] += members.weights[i] * members.members[i].ef().theta[d];
        }
      }
    }
    if (total <= 0.0) {
      throw std::invalid_argument("update_centers: empty cluster " + std::to_string(l));
    }
    for (double& v : pooled) v /= total;
    if (divergence == ClusterDivergence::KLD) {
      centers.push_back(member_from_moment(fam, std::move(pooled)));
    } else {
      centers.push_back(EFMember::make(fam, std::move(pooled)));
    }
  }
  return centers;
}

namespace {

// k-means++ over Euclidean distances in moment space. Draws scan members in a
// canonical order (lexicographic moment, then weight) so the seeding commutes
// with any permutation of the input.
std::vector<std::size_t> seed_centers(const WeightedSet& members,
                                      std::span<const MomentSummary> summaries, int k,
                                      std::uint64_t seed) {
  const std::size_t n = members.members.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (summaries[a].moment != summaries[b].moment) {
      return summaries[a].moment < summaries[b].moment;
    }
    return members.weights[a] < members.weights[b];
  });

  std::mt19937_64 rng(seed);
  const auto draw = [&rng]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // uniform in [0,1)
  };
  const auto sample = [&](std::span<const double> mass) {
    double total = 0.0;
    for (double v : mass) total += v;
    double u = draw() * total;
    for (std::size_t r = 0; r < mass.size(); ++r) {
      u -= mass[order[r]];
      if (u <= 0.0) return order[r];
    }
    return order[n - 1];
  };

  std::vector<std::size_t> chosen;
  std::vector<double> d2(n, kInf);
  chosen.push_back(sample(members.weights));
  while (static_cast<int>(chosen.size()) < k) {
    std::vector<double> mass(n);
    for (std::size_t i = 0; i < n; ++i) {
      double dist2 = 0.0;
      for (std::size_t d = 0; d < summaries[i].moment.size(); ++d) {
        const double diff = summaries[i].moment[d] - summaries[chosen.back()].moment[d];
        dist2 += diff * diff;
      }
      d2[i] = std::min(d2[i], dist2);
      mass[i] = members.weights[i] * d2[i];
    }
    const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
    if (total <= 0.0) break;  // all remaining members coincide with a center
    chosen.push_back(sample(mass));
  }
  return chosen;
}

}  // namespace

ClusterState cluster(const WeightedSet& members, int k, FamilyPtr fam,
                     std::uint64_t seed, int max_iters, PredicateMode mode,
                     ClusterDivergence divergence) {
  const auto n = static_cast<int>(members.members.size());
  if (k < 1 || k > n) throw std::invalid_argument("cluster: need 1 <= k <= n");
  const auto summaries = member_summaries(members, *fam);

  ClusterState state;
  state.k = k;

  const auto seeds = seed_centers(members, summaries, k, seed);
  state.duplicated_centers = static_cast<int>(seeds.size()) < k;
  for (std::size_t s : seeds) {
    if (divergence == ClusterDivergence::KLD) {
      state.centers.push_back(member_from_moment(fam, summaries[s].moment));
    } else {
      state.centers.push_back(EFMember::make(fam, members.members[s].ef().theta));
    }
  }
  while (static_cast<int>(state.centers.size()) < k) {
    state.centers.push_back(state.centers.front());  // degenerate input, flagged
  }

  std::vector<int> assignment(members.members.size(), -1);
  for (state.iterations = 0; state.iterations < max_iters; ++state.iterations) {
    auto next = assign_impl(members, summaries, state.centers, mode, divergence);

    // Repair empty clusters by reseeding them at the member farthest from its
    // current center (skipping members that are alone in their cluster).
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (int a : next) ++counts[static_cast<std::size_t>(a)];
    for (int l = 0; l < k; ++l) {
      if (counts[static_cast<std::size_t>(l)] > 0) continue;
      double worst = -1.0;
      int worst_i = -1;
      for (std::size_t i = 0; i < next.size(); ++i) {
        if (counts[static_cast<std::size_t>(next[i])] <= 1) continue;
        const double d =
            member_divergence(summaries[i], members.members[i],
                              state.centers[static_cast<std::size_t>(next[i])], divergence);
        if (d > worst) {
          worst = d;
          worst_i = static_cast<int>(i);
        }
      }
      if (worst_i >= 0) {
        --counts[static_cast<std::size_t>(next[static_cast<std::size_t>(worst_i)])];
        next[static_cast<std::size_t>(worst_i)] = l;
        ++counts[static_cast<std::size_t>(l)];
        if (divergence == ClusterDivergence::KLD) {
          state.centers[static_cast<std::size_t>(l)] =
              member_from_moment(fam, summaries[static_cast<std::size_t>(worst_i)].moment);
        } else {
          state.centers[static_cast<std::size_t>(l)] = EFMember::make(
              fam, members.members[static_cast<std::size_t>(worst_i)].ef().theta);
        }
      }
    }

    const bool fixed = next == assignment;
    assignment = std::move(next);
    state.centers = update_centers(members, assignment, k, fam, divergence);
    state.objective = objective_of(members, summaries, state.centers, assignment, divergence);
    state.objective_trace.push_back(state.objective);
    if (fixed) {
      state.converged = true;
      ++state.iterations;
      break;
    }
  }
  state.assignment = std::move(assignment);
  return state;
}

QuantizeResult quantize_mixture(const Density& mix, int k, FamilyPtr fam,
                                std::uint64_t seed, int max_iters) {
  if (mix.kind() != Density::Kind::Mixture) {
    throw std::invalid_argument("quantize_mixture: density has no mixture structure");
  }
  const WeightedSet components(mix.mixture_weights(), mix.components());
  QuantizeResult out;
  out.state = cluster(components, k, std::move(fam), seed, max_iters);

  out.weights.assign(static_cast<std::size_t>(k), 0.0);
  for (std::size_t i = 0; i < components.members.size(); ++i) {
    out.weights[static_cast<std::size_t>(out.state.assignment[i])] += components.weights[i];
  }
  // Drop zero-weight centers (possible only for degenerate duplicated input).
  std::vector<double> w;
  for (int l = 0; l < k; ++l) {
    if (out.weights[static_cast<std::size_t>(l)] > 0.0) {
      w.push_back(out.weights[static_cast<std::size_t>(l)]);
      out.centers.push_back(out.state.centers[static_cast<std::size_t>(l)]);
    }
  }
  out.weights = std::move(w);

  std::vector<Density> simplified_parts;
  simplified_parts.reserve(out.centers.size());
  for (const auto& c : out.centers) simplified_parts.push_back(Density::expfam(c));
  const Density simplified = Density::mixture(out.weights, std::move(simplified_parts));

  // Quality diagnostic: JSD between the original and simplified mixtures on a
  // grid wide enough for both.
  const GridSpec gs = merge_grids(mix.natural_grid(), simplified.natural_grid());
  const WeightedSet pair({0.5, 0.5}, {mix.materialize(gs), simplified.materialize(gs)});
  out.jsd_diagnostic = js_diversity(pair);
  return out;
}

}  // namespace infradius
