#include "infradius/relative.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace infradius {

namespace {

double quadrature_expectation(const Density& num, const std::function<double(double)>& f) {
  const auto& xs = num.xs();
  const auto& qw = num.quad_weights();
  const auto& v = num.values();
  double s = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (v[j] <= kZeroFloor) continue;  // 0 * (possibly -inf) carrier terms
    s += qw[j] * v[j] * f(xs[j]);
  }
  return s;
}

// The shape every member of `fam` shares when the family is a fixed-shape
// Weibull clan (probed at an arbitrary in-domain parameter).
std::optional<double> clan_shape(const ExpFamily& fam) {
  const std::vector<double> probe{-1.0};
  if (fam.dim() != 1 || !fam.in_domain(probe)) return std::nullopt;
  const auto v = fam.weibull_view(probe);
  if (!v) return std::nullopt;
  return v->kappa;
}

MomentSummary summary_of_clan_member(const EFMember& p, double k2) {
  const auto vp = p.family->weibull_view(p.theta);
  if (!vp) throw std::logic_error("summary_of_clan_member: not a clan member");
  const double k1 = vp->kappa;
  const double s1 = vp->scale;
  MomentSummary s;
  s.moment = {std::pow(s1, k2) * std::tgamma(1.0 + k2 / k1)};
  // E[k_Q(x)] = (k2-1) E[log x] + log k2 with E[log x] = log s1 - gamma/k1.
  s.carrier_expectation =
      (k2 - 1.0) * (std::log(s1) - kEulerMascheroni / k1) + std::log(k2);
  s.entropy = ef_entropy(p);
  return s;
}

}  // namespace

MomentSummary make_moment_summary(const Density& p, const ExpFamily& fam) {
  switch (p.kind()) {
    case Density::Kind::ExpFam: {
      const auto& m = p.ef();
      if (m.family->same(fam)) {
        MomentSummary s;
        s.moment = m.eta;
        s.carrier_expectation = fam.carrier_expectation(m.theta);
        s.entropy = ef_entropy(m);
        return s;
      }
      if (m.family->weibull_view(m.theta)) {
        if (const auto k2 = clan_shape(fam)) return summary_of_clan_member(m, *k2);
      }
      if (!fam.scalar_support()) {
        throw std::invalid_argument("make_moment_summary: cannot integrate " +
                                    m.family->id() + " against " + fam.id());
      }
      MomentSummary s = make_moment_summary(p.materialize(), fam);
      s.numeric = true;
      return s;
    }
    case Density::Kind::Mixture: {
      const auto& w = p.mixture_weights();
      const auto& comps = p.components();
      MomentSummary s;
      for (std::size_t i = 0; i < comps.size(); ++i) {
        const MomentSummary ci = make_moment_summary(comps[i], fam);
        if (s.moment.empty()) s.moment.assign(ci.moment.size(), 0.0);
        for (std::size_t d = 0; d < s.moment.size(); ++d) {
          s.moment[d] += w[i] * ci.moment[d];
        }
        s.carrier_expectation += w[i] * ci.carrier_expectation;
      }
      // Mixture entropy has no closed form; fall back to quadrature.
      s.entropy = entropy(p.materialize());
      s.numeric = true;
      return s;
    }
    case Density::Kind::Grid: {
      if (!fam.scalar_support()) {
        throw std::invalid_argument("make_moment_summary: family " + fam.id() +
                                    " has no scalar support");
      }
      MomentSummary s;
      s.numeric = true;
      s.moment.assign(static_cast<std::size_t>(fam.dim()), 0.0);
      for (int d = 0; d < fam.dim(); ++d) {
        s.moment[static_cast<std::size_t>(d)] = quadrature_expectation(
            p, [&](double x) { return fam.sufficient_stat(x)[static_cast<std::size_t>(d)]; });
      }
      s.carrier_expectation = quadrature_expectation(p, [&](double x) {
        return fam.carrier(x);
      });
      s.entropy = entropy(p);
      return s;
    }
    case Density::Kind::Discrete: {
      if (fam.id() != "categorical") {
        throw std::invalid_argument(
            "make_moment_summary: discrete density against continuous family " + fam.id());
      }
      const auto& probs = p.values();
      if (static_cast<int>(probs.size()) != fam.dim() + 1) {
        throw std::invalid_argument("make_moment_summary: categorical size mismatch");
      }
      MomentSummary s;
      s.moment.assign(probs.begin(), probs.end() - 1);
      s.carrier_expectation = 0.0;
      s.entropy = entropy(p);
      return s;
    }
  }
  throw std::logic_error("unreachable");
}

EFMember information_projection(const Density& p, FamilyPtr fam) {
  const MomentSummary s = make_moment_summary(p, *fam);
  if (!fam->in_moment_domain(s.moment)) {
    throw std::invalid_argument("information_projection: moment outside realizable set of " +
                                fam->id());
  }
  return member_from_moment(std::move(fam), s.moment);
}

namespace {

// Per-member divergence to a family member q_theta, in closed form.
double member_divergence(const DivergenceSpec& spec, const MomentSummary& summary,
                         const EFMember* in_family, const ExpFamily& fam,
                         std::span<const double> theta, double f_theta) {
  switch (spec.kind) {
    case DivergenceSpec::Kind::KLD: {
      double dot = 0.0;
      for (std::size_t d = 0; d < theta.size(); ++d) dot += summary.moment[d] * theta[d];
      return f_theta - dot - summary.carrier_expectation - summary.entropy;
    }
    case DivergenceSpec::Kind::ReverseKLD: {
      if (in_family == nullptr) {
        throw std::invalid_argument(
            "relative_radius: reverse KLD needs members inside the family");
      }
      // KL[q_theta : p_i] = B_F(theta_i : theta)
      const auto grad = fam.grad_cumulant(theta);
      double s = fam.cumulant(in_family->theta) - f_theta;
      for (std::size_t d = 0; d < theta.size(); ++d) {
        s -= (in_family->theta[d] - theta[d]) * grad[d];
      }
      return s;
    }
    case DivergenceSpec::Kind::RenyiAlpha: {
      if (in_family == nullptr) {
        throw std::invalid_argument(
            "relative_radius: Rényi divergence needs members inside the family");
      }
      const double al = spec.alpha;
      std::vector<double> mix(theta.size());
      for (std::size_t d = 0; d < theta.size(); ++d) {
        mix[d] = al * in_family->theta[d] + (1.0 - al) * theta[d];
      }
      if (!fam.in_domain(mix)) return kInf;
      const double gap =
          fam.cumulant(mix) - al * fam.cumulant(in_family->theta) - (1.0 - al) * f_theta;
      return gap / (al - 1.0);
    }
    default:
      throw std::invalid_argument(
          "relative_radius: divergence kind unsupported for family-constrained search");
  }
}

struct RelativeObjective {
  const WeightedSet& set;
  const ExpFamily& fam;
  const MeanSpec& mean;
  const DivergenceSpec& divergence;
  const std::vector<MomentSummary>& summaries;
  const std::vector<const EFMember*>& in_family;

  double operator()(std::span<const double> theta) const {
    if (!fam.in_domain(theta)) return kInf;
    const double f_theta = fam.cumulant(theta);
    std::vector<double> d(set.weights.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      d[i] = member_divergence(divergence, summaries[i], in_family[i], fam, theta, f_theta);
      if (d[i] == kInf) return kInf;
      d[i] = std::max(d[i], 0.0);  // clamp fp noise; means need nonnegative inputs
    }
    return evaluate_mean(mean.with_weights(set.weights), d);
  }
};

std::vector<double> numeric_gradient(const std::function<double(std::span<const double>)>& f,
                                     std::span<const double> x, double fx) {
  std::vector<double> g(x.size());
  std::vector<double> probe(x.begin(), x.end());
  for (std::size_t d = 0; d < x.size(); ++d) {
    const double h = 1e-6 * (1.0 + std::abs(x[d]));
    probe[d] = x[d] + h;
    const double fp = f(probe);
    probe[d] = x[d] - h;
    const double fm = f(probe);
    probe[d] = x[d];
    if (fp < kInf && fm < kInf) {
      g[d] = (fp - fm) / (2.0 * h);
    } else if (fp < kInf) {
      g[d] = (fp - fx) / h;
    } else if (fm < kInf) {
      g[d] = (fx - fm) / h;
    } else {
      g[d] = 0.0;
    }
  }
  return g;
}

// Small dense BFGS with Armijo backtracking; dimensions here are tiny.
struct QuasiNewtonResult {
  std::vector<double> x;
  double value;
  int iterations;
  double grad_norm;
  bool converged;
};

QuasiNewtonResult quasi_newton(const std::function<double(std::span<const double>)>& f,
                               std::vector<double> x0, int max_iters) {
  const std::size_t n = x0.size();
  std::vector<double> x = std::move(x0);
  double fx = f(x);
  if (fx == kInf) {
    throw std::logic_error("quasi_newton: infeasible start");
  }
  auto g = numeric_gradient(f, x, fx);
  std::vector<double> H(n * n, 0.0);  // inverse Hessian approximation
  for (std::size_t i = 0; i < n; ++i) H[i * n + i] = 1.0;

  int iter = 0;
  bool converged = false;
  for (; iter < max_iters; ++iter) {
    double gnorm = 0.0;
    for (double v : g) gnorm = std::max(gnorm, std::abs(v));
    if (gnorm < 1e-10 * std::max(1.0, std::abs(fx))) {
      converged = true;
      break;
    }
    std::vector<double> dir(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) dir[i] -= H[i * n + j] * g[j];
    }
    double slope = 0.0;
    for (std::size_t i = 0; i < n; ++i) slope += dir[i] * g[i];
    if (!(slope < 0.0)) {  // reset to steepest descent
      std::fill(H.begin(), H.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) H[i * n + i] = 1.0;
      dir.assign(g.begin(), g.end());
      slope = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        dir[i] = -dir[i];
        slope -= g[i] * g[i];
      }
    }
    double t = 1.0;
    std::vector<double> xn(n);
    double fn = kInf;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t i = 0; i < n; ++i) xn[i] = x[i] + t * dir[i];
      fn = f(xn);
      if (fn < kInf && fn <= fx + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      converged = true;  // no progress possible at line-search resolution
      break;
    }
    auto gn = numeric_gradient(f, xn, fn);
    // BFGS update of the inverse Hessian.
    std::vector<double> s(n), y(n);
    double sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = xn[i] - x[i];
      y[i] = gn[i] - g[i];
      sy += s[i] * y[i];
    }
    if (sy > 1e-12) {
      std::vector<double> Hy(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) Hy[i] += H[i * n + j] * y[j];
      }
      double yHy = 0.0;
      for (std::size_t i = 0; i < n; ++i) yHy += y[i] * Hy[i];
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          H[i * n + j] += ((sy + yHy) * s[i] * s[j]) / (sy * sy) -
                          (Hy[i] * s[j] + s[i] * Hy[j]) / sy;
        }
      }
    }
    const double improvement = fx - fn;
    x = xn;
    fx = fn;
    g = gn;
    if (improvement < 1e-14 * std::max(1.0, std::abs(fx))) {
      converged = true;
      break;
    }
  }
  double gnorm = 0.0;
  for (double v : g) gnorm = std::max(gnorm, std::abs(v));
  return {std::move(x), fx, iter, gnorm, converged};
}

}  // namespace

RadiusResult relative_radius(const WeightedSet& set, FamilyPtr fam,
                             const MeanSpec& mean, const DivergenceSpec& divergence,
                             const SearchConfig& cfg) {
  std::vector<MomentSummary> summaries;
  summaries.reserve(set.members.size());
  std::vector<const EFMember*> in_family(set.members.size(), nullptr);
  for (std::size_t i = 0; i < set.members.size(); ++i) {
    summaries.push_back(make_moment_summary(set.members[i], *fam));
    if (set.members[i].kind() == Density::Kind::ExpFam &&
        set.members[i].ef().family->same(*fam)) {
      in_family[i] = &set.members[i].ef();
    }
  }

  // Pooled moment: the closed-form (arithmetic, KLD) centroid and the warm
  // start for every other (M, D) pair.
  std::vector<double> pooled(summaries.front().moment.size(), 0.0);
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    for (std::size_t d = 0; d < pooled.size(); ++d) {
      pooled[d] += set.weights[i] * summaries[i].moment[d];
    }
  }
  if (!fam->in_moment_domain(pooled)) {
    throw std::invalid_argument("relative_radius: pooled moment outside realizable set");
  }

  RadiusResult res;
  res.alpha = std::numeric_limits<double>::quiet_NaN();
  res.mean = mean;
  res.divergence = divergence;

  if (mean.kind == MeanSpec::Kind::Arithmetic &&
      divergence.kind == DivergenceSpec::Kind::KLD) {
    EFMember center = member_from_moment(fam, pooled);
    double value = 0.0;
    for (std::size_t i = 0; i < summaries.size(); ++i) {
      value += set.weights[i] * semi_closed_kld(summaries[i], center);
    }
    res.value = std::max(value, 0.0);
    res.centroid = Density::expfam(std::move(center));
    return res;
  }

  RelativeObjective objective{set, *fam, mean, divergence, summaries, in_family};
  const auto theta0 = fam->grad_conjugate(pooled);
  auto qn = quasi_newton([&](std::span<const double> t) { return objective(t); }, theta0,
                         cfg.max_iters > 0 ? std::min(cfg.max_iters, 500) : 500);
  res.centroid_unique = false;
  res.value = qn.value;
  res.centroid = Density::expfam(EFMember::make(fam, std::move(qn.x)));
  res.iterations = qn.iterations;
  res.residual = qn.grad_norm;
  res.converged = qn.converged;
  return res;
}

ReverseProjectionPair relative_reverse_projection(const EFMember& p1, const EFMember& p2,
                                                  double beta) {
  if (!p1.family->same(*p2.family)) {
    throw std::invalid_argument("relative_reverse_projection: family mismatch");
  }
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw std::invalid_argument("relative_reverse_projection: beta must lie in [0,1]");
  }
  std::vector<double> theta(p1.theta.size());
  std::vector<double> eta(p1.eta.size());
  for (std::size_t d = 0; d < theta.size(); ++d) {
    theta[d] = (1.0 - beta) * p1.theta[d] + beta * p2.theta[d];
    eta[d] = (1.0 - beta) * p1.eta[d] + beta * p2.eta[d];
  }
  return {EFMember::make(p1.family, std::move(theta)),
          member_from_moment(p1.family, std::move(eta))};
}

}  // namespace infradius
