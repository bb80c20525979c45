#include <doctest.h>

#include <cmath>
#include <random>

#include "infradius/divergences.hpp"
#include "infradius/relative.hpp"
#include "oracles.hpp"

using namespace infradius;

namespace {

Density two_gaussian_mixture(double mu1, double mu2) {
  return Density::mixture({0.5, 0.5}, {Density::expfam(gaussian_member(mu1, 1)),
                                       Density::expfam(gaussian_member(mu2, 1))});
}

}  // namespace

TEST_CASE("moment summaries") {
  SUBCASE("in-family members are closed form") {
    const auto s = make_moment_summary(Density::expfam(gaussian_member(1, 2)),
                                       *gaussian_family());
    CHECK_FALSE(s.numeric);
    CHECK(s.moment[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.moment[1] == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(s.entropy == doctest::Approx(oracle::gaussian_entropy(2.0)).epsilon(1e-12));
  }
  SUBCASE("grid members are integrated on their own grid") {
    const auto g = Density::expfam(gaussian_member(0.5, 1.0))
                       .materialize_at(linspace(-10, 11, 100001));
    const auto s = make_moment_summary(g, *gaussian_family());
    CHECK(s.numeric);
    CHECK(std::abs(s.moment[0] - 0.5) < 1e-8);
    CHECK(std::abs(s.moment[1] - 1.25) < 1e-8);
  }
  SUBCASE("weibull-clan members get closed cross moments") {
    const auto s = make_moment_summary(Density::expfam(exponential_member(2.0)),
                                       *rayleigh_family());
    CHECK_FALSE(s.numeric);
    // E_{Exp(2)}[x^2] = 2 / 4
    CHECK(s.moment[0] == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("discrete against a continuous family is an error") {
    CHECK_THROWS_AS(make_moment_summary(Density::discrete({0.5, 0.5}), *gaussian_family()),
                    std::invalid_argument);
  }
}

TEST_CASE("pooled mixture moment is the exact weighted average of component moments") {
  const auto fam = categorical_family(4);
  const auto c1 = Density::discrete({0.1, 0.2, 0.3, 0.4});
  const auto c2 = Density::discrete({0.4, 0.3, 0.2, 0.1});
  const std::vector<double> w = {0.25, 0.75};
  const auto mix = Density::mixture(w, {c1, c2});
  const auto sm = make_moment_summary(mix, *fam);
  const auto s1 = make_moment_summary(c1, *fam);
  const auto s2 = make_moment_summary(c2, *fam);
  for (std::size_t d = 0; d < sm.moment.size(); ++d) {
    REQUIRE(sm.moment[d] == w[0] * s1.moment[d] + w[1] * s2.moment[d]);  // bit-exact
  }
}

TEST_CASE("information projection") {
  SUBCASE("a family member projects to itself") {
    const auto m = gaussian_member(0.7, 1.3);
    const auto proj = information_projection(Density::expfam(m), gaussian_family());
    CHECK(std::abs(proj.theta[0] - m.theta[0]) < 1e-9);
    CHECK(std::abs(proj.theta[1] - m.theta[1]) < 1e-9);
  }
  SUBCASE("two-gaussian mixture projects to N(0, 2)") {
    const auto proj = information_projection(two_gaussian_mixture(-1, 1), gaussian_family());
    const auto [mu, sigma] = gaussian_params(proj);
    CHECK(std::abs(mu) < 1e-9);
    CHECK(std::abs(sigma * sigma - 2.0) < 1e-9);
  }
  SUBCASE("grid search confirms the two-gaussian projection") {
    const auto mix = two_gaussian_mixture(-1, 1);
    const auto xs = linspace(-12, 12, 20001);
    const auto pg = mix.materialize_at(xs);
    const auto proj = information_projection(pg, gaussian_family());
    const double best = kld(pg, Density::expfam(proj).materialize_at(xs));
    for (double mu = -0.5; mu <= 0.5; mu += 0.1) {
      for (double sigma = 1.0; sigma <= 2.0; sigma += 0.1) {
        const double cand =
            kld(pg, Density::expfam(gaussian_member(mu, sigma)).materialize_at(xs));
        REQUIRE(cand >= best - 1e-3);
      }
    }
  }
  SUBCASE("exponential mixture with rates (1,3) projects to rate 1.5") {
    const auto mix = Density::mixture({0.5, 0.5}, {Density::expfam(exponential_member(1)),
                                                   Density::expfam(exponential_member(3))});
    const auto proj = information_projection(mix, exponential_family());
    CHECK(proj.eta[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));  // mean
    CHECK(-proj.theta[0] == doctest::Approx(1.5).epsilon(1e-12));     // rate
  }
  SUBCASE("projection is locally optimal under parameter perturbations") {
    std::mt19937_64 rng(61);
    const auto mix = two_gaussian_mixture(-1, 1);
    const auto xs = linspace(-12, 12, 50001);
    const auto pg = mix.materialize_at(xs);
    const auto proj = information_projection(pg, gaussian_family());
    const double best = kld(pg, Density::expfam(proj).materialize_at(xs));
    for (int t = 0; t < 200; ++t) {
      double d0 = oracle::uniform(rng, -1, 1);
      double d1 = oracle::uniform(rng, -1, 1);
      const double norm = std::hypot(d0, d1);
      d0 *= 1e-2 / norm;
      d1 *= 1e-2 / norm;
      const auto cand = EFMember::make(
          gaussian_family(), {proj.theta[0] + d0, proj.theta[1] + d1});
      const double v = kld(pg, Density::expfam(cand).materialize_at(xs));
      REQUIRE(v >= best - 1e-10);
    }
  }
  SUBCASE("degenerate moments are rejected") {
    // A point-mass-like grid density has second moment equal to mean^2.
    CHECK_THROWS_AS(member_from_moment(gaussian_family(), {1.0, 1.0}),
                    std::invalid_argument);
  }
}

TEST_CASE("relative information radius") {
  SUBCASE("equal in-family members give zero and the member itself") {
    const auto m = gaussian_member(0.3, 1.1);
    const WeightedSet set({0.5, 0.5}, {Density::expfam(m), Density::expfam(m)});
    const auto r = relative_radius(set, gaussian_family(), MeanSpec::arithmetic(),
                                   DivergenceSpec::kld());
    CHECK(std::abs(r.value) < 1e-10);
    const auto [mu, sigma] = gaussian_params(r.centroid.ef());
    CHECK(mu == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(sigma == doctest::Approx(1.1).epsilon(1e-9));
  }
  SUBCASE("p = q outside the family stays positive (not a proper divergence)") {
    const auto mix = two_gaussian_mixture(-1.5, 1.5);
    const WeightedSet set({0.5, 0.5}, {mix, mix});
    const auto r = relative_radius(set, gaussian_family(), MeanSpec::arithmetic(),
                                   DivergenceSpec::kld());
    CHECK(r.value > 1e-3);
  }
  SUBCASE("two gaussian members: pooled moment matching, grid-search verified") {
    const auto a = gaussian_member(-1, 1);
    const auto b = gaussian_member(1, 1);
    const WeightedSet set({0.5, 0.5}, {Density::expfam(a), Density::expfam(b)});
    const auto r = relative_radius(set, gaussian_family(), MeanSpec::arithmetic(),
                                   DivergenceSpec::kld());
    const auto [mu, sigma] = gaussian_params(r.centroid.ef());
    CHECK(std::abs(mu) < 1e-9);
    CHECK(std::abs(sigma * sigma - 2.0) < 1e-9);

    double best = kInf;
    for (double cmu = -0.5; cmu <= 0.5; cmu += 0.02) {
      for (double cs = 1.1; cs <= 1.8; cs += 0.02) {
        const auto q = gaussian_member(cmu, cs);
        const double v = 0.5 * ef_kld(a, q) + 0.5 * ef_kld(b, q);
        best = std::min(best, v);
      }
    }
    CHECK(r.value <= best + 1e-10);
    CHECK(std::abs(r.value - best) < 1e-4);
  }
  SUBCASE("constrained minimum dominates the unconstrained radius") {
    const auto xs = linspace(-14, 14, 8001);
    const auto p = two_gaussian_mixture(-2, 0).materialize_at(xs);
    const auto q = two_gaussian_mixture(0, 2).materialize_at(xs);
    const WeightedSet set({0.5, 0.5}, {p, q});
    const auto rel = relative_radius(set, gaussian_family(), MeanSpec::arithmetic(),
                                     DivergenceSpec::kld());
    CHECK(rel.value >= js_diversity(set) - 1e-8);
  }
  SUBCASE("reverse KLD search lands on the natural-parameter average") {
    const auto a = gaussian_member(-0.8, 1.0);
    const auto b = gaussian_member(1.2, 1.5);
    const WeightedSet set({0.3, 0.7}, {Density::expfam(a), Density::expfam(b)});
    const auto r = relative_radius(set, gaussian_family(), MeanSpec::arithmetic(),
                                   DivergenceSpec::reverse_kld());
    REQUIRE(r.converged);
    for (int d = 0; d < 2; ++d) {
      const double expected = 0.3 * a.theta[static_cast<std::size_t>(d)] +
                              0.7 * b.theta[static_cast<std::size_t>(d)];
      CHECK(r.centroid.ef().theta[static_cast<std::size_t>(d)] ==
            doctest::Approx(expected).epsilon(1e-5));
    }
  }
  SUBCASE("renyi-divergence search stays feasible and locally optimal") {
    std::mt19937_64 rng(62);
    const auto a = gaussian_member(-1, 1);
    const auto b = gaussian_member(1, 1.3);
    const WeightedSet set({0.5, 0.5}, {Density::expfam(a), Density::expfam(b)});
    const auto r = relative_radius(set, gaussian_family(), MeanSpec::arithmetic(),
                                   DivergenceSpec::renyi(2.0));
    REQUIRE(r.value >= 0.0);
    const auto objective = [&](std::span<const double> theta) {
      const auto q = EFMember::make(gaussian_family(), {theta[0], theta[1]});
      double s = 0.0;
      for (std::size_t i = 0; i < 2; ++i) {
        const auto& m = set.members[i].ef();
        std::vector<double> mix = {2.0 * m.theta[0] - q.theta[0],
                                   2.0 * m.theta[1] - q.theta[1]};
        // D_2 via the cumulant gap, matching the search's closed form.
        if (!gaussian_family()->in_domain(mix)) return kInf;
        const double gap = gaussian_family()->cumulant(mix) -
                           2.0 * gaussian_family()->cumulant(m.theta) +
                           gaussian_family()->cumulant(q.theta);
        s += set.weights[i] * gap;
      }
      return s;
    };
    const auto& theta = r.centroid.ef().theta;
    const double at_opt = objective(theta);
    for (int t = 0; t < 100; ++t) {
      const double d0 = oracle::uniform(rng, -1e-3, 1e-3);
      const double d1 = oracle::uniform(rng, -1e-3, 1e-3);
      const std::vector<double> probe = {theta[0] + d0, theta[1] + d1};
      if (!gaussian_family()->in_domain(probe)) continue;
      REQUIRE(objective(probe) >= at_opt - 1e-9);
    }
  }
}

TEST_CASE("reverse projections: annealing-path optima") {
  const auto p1 = gaussian_member(0, 1);
  const auto p2 = gaussian_member(2, 1);

  SUBCASE("beta = 0 returns the first endpoint on both paths") {
    const auto r = relative_reverse_projection(p1, p2, 0.0);
    CHECK(r.geometric.theta == p1.theta);
    for (std::size_t d = 0; d < 2; ++d) {
      CHECK(r.moment.theta[d] == doctest::Approx(p1.theta[d]).epsilon(1e-12));
    }
  }
  SUBCASE("moment path at beta = 1/2 is N(1, 2)") {
    const auto r = relative_reverse_projection(p1, p2, 0.5);
    const auto [mu, sigma] = gaussian_params(r.moment);
    CHECK(mu == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sigma * sigma == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("geometric path at beta = 1/2 is N(1, 1)") {
    const auto r = relative_reverse_projection(p1, p2, 0.5);
    const auto [mu, sigma] = gaussian_params(r.geometric);
    CHECK(mu == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sigma == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("each path member minimizes its own objective among perturbations") {
    std::mt19937_64 rng(63);
    const double beta = 0.3;
    const auto r = relative_reverse_projection(p1, p2, beta);
    const auto geo_objective = [&](const EFMember& c) {
      return (1.0 - beta) * ef_kld(c, p1) + beta * ef_kld(c, p2);
    };
    const auto mom_objective = [&](const EFMember& c) {
      return (1.0 - beta) * ef_kld(p1, c) + beta * ef_kld(p2, c);
    };
    const double geo_best = geo_objective(r.geometric);
    const double mom_best = mom_objective(r.moment);
    for (int t = 0; t < 100; ++t) {
      const double d0 = oracle::uniform(rng, -1e-2, 1e-2);
      const double d1 = oracle::uniform(rng, -1e-2, 1e-2);
      const std::vector<double> tg = {r.geometric.theta[0] + d0,
                                      r.geometric.theta[1] + d1};
      if (gaussian_family()->in_domain(tg)) {
        REQUIRE(geo_objective(EFMember::make(gaussian_family(), tg)) >= geo_best - 1e-10);
      }
      const std::vector<double> tm = {r.moment.theta[0] + d0, r.moment.theta[1] + d1};
      if (gaussian_family()->in_domain(tm)) {
        REQUIRE(mom_objective(EFMember::make(gaussian_family(), tm)) >= mom_best - 1e-10);
      }
    }
  }
  SUBCASE("family mismatch is an error") {
    CHECK_THROWS_AS(relative_reverse_projection(p1, exponential_member(1.0), 0.5),
                    std::invalid_argument);
  }
}
