#include "infradius/radius.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace infradius {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("information radius: alpha must be positive");
  }
}

Density density_from_mass(const AlignedSet& a, std::vector<double> mass) {
  if (a.discrete) return Density::discrete(std::move(mass));
  std::vector<double> vals(mass.size());
  for (std::size_t j = 0; j < mass.size(); ++j) vals[j] = mass[j] / a.quad_weights[j];
  return Density::grid(a.xs, std::move(vals));
}

std::vector<double> mixture_mass(const AlignedSet& a, std::span<const double> w) {
  const std::size_t len = a.values.front().size();
  std::vector<double> mass(len);
  std::vector<double> terms(w.size());
  for (std::size_t j = 0; j < len; ++j) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      terms[i] = w[i] * a.quad_weights[j] * a.values[i][j];
    }
    mass[j] = exact_sum(terms);
  }
  return mass;
}

double kld_rows(std::span<const double> qw, std::span<const double> p,
                std::span<const double> q) {
  double s = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double t = plogr(p[j], q[j]);
    if (t == kInf) return kInf;
    s += qw[j] * t;
  }
  return s;
}

// int p^alpha c^(1-alpha), the Bhattacharyya alpha-coefficient of two rows.
double bhat_rows(std::span<const double> qw, std::span<const double> p,
                 std::span<const double> c, double alpha) {
  double s = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] <= kZeroFloor) continue;
    if (c[j] <= kZeroFloor) {
      if (alpha > 1.0) return kInf;
      continue;
    }
    s += qw[j] * std::pow(p[j], alpha) * std::pow(c[j], 1.0 - alpha);
  }
  return s;
}

}  // namespace

RadiusResult sibson_radius(const WeightedSet& set, double alpha) {
  check_alpha(alpha);
  const AlignedSet a = align(set.members);
  const std::size_t len = a.values.front().size();

  RadiusResult res;
  res.alpha = alpha;

  if (std::isinf(alpha)) {
    std::vector<double> env(len, 0.0);
    for (const auto& row : a.values) {
      for (std::size_t j = 0; j < len; ++j) env[j] = std::max(env[j], row[j]);
    }
    const double z = integrate_values(a.quad_weights, env);
    res.value = std::log(z);
    res.centroid = a.discrete ? Density::discrete([&] {
      std::vector<double> v = env;
      for (double& x : v) x /= z;
      return v;
    }())
                              : Density::grid(a.xs, env);
    return res;
  }

  if (alpha == 1.0) {
    auto mass = mixture_mass(a, set.weights);
    std::vector<double> mix(len);
    for (std::size_t j = 0; j < len; ++j) mix[j] = mass[j] / a.quad_weights[j];
    double value = 0.0;
    for (std::size_t i = 0; i < set.weights.size(); ++i) {
      value += set.weights[i] * kld_rows(a.quad_weights, a.values[i], mix);
    }
    res.value = value;
    res.centroid = density_from_mass(a, std::move(mass));
    return res;
  }

  std::vector<double> pm(len);
  std::vector<double> column(set.weights.size());
  for (std::size_t j = 0; j < len; ++j) {
    for (std::size_t i = 0; i < set.weights.size(); ++i) column[i] = a.values[i][j];
    pm[j] = weighted_power_mean(set.weights, column, alpha);
  }
  const double z = integrate_values(a.quad_weights, pm);
  res.value = alpha / (alpha - 1.0) * std::log(z);
  res.centroid =
      a.discrete ? Density::discrete([&] {
        std::vector<double> v = pm;
        for (double& x : v) x /= z;
        return v;
      }())
                 : Density::grid(a.xs, pm);
  return res;
}

double sibson_objective(const WeightedSet& set, double alpha, const Density& c) {
  check_alpha(alpha);
  std::vector<Density> all = set.members;
  all.push_back(c);
  const AlignedSet a = align(all);
  const auto& vc = a.values.back();
  const std::size_t n = set.weights.size();

  if (std::isinf(alpha)) {
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < vc.size(); ++j) {
        const double p = a.values[i][j];
        if (p <= kZeroFloor) continue;
        if (vc[j] <= kZeroFloor) return kInf;
        best = std::max(best, p / vc[j]);
      }
    }
    return std::log(best);
  }

  if (alpha == 1.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = kld_rows(a.quad_weights, a.values[i], vc);
      if (t == kInf) return kInf;
      s += set.weights[i] * t;
    }
    return s;
  }

  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ci = bhat_rows(a.quad_weights, a.values[i], vc, alpha);
    if (ci == kInf) return kInf;
    s += set.weights[i] * ci;
  }
  if (s <= 0.0) return kInf;
  return std::log(s) / (alpha - 1.0);
}

std::pair<double, double> decomposition_gap(const WeightedSet& set, double alpha,
                                            const Density& c) {
  const RadiusResult opt = sibson_radius(set, alpha);
  const double lhs = sibson_objective(set, alpha, c) - opt.value;
  const double rhs = renyi_divergence(opt.centroid, c, alpha);
  return {lhs, rhs};
}

double sibson_two_point(const Density& p, const Density& q, double alpha) {
  return sibson_radius(WeightedSet({0.5, 0.5}, {p, q}), alpha).value;
}

double sibson_radius_ef_1_over_k(const ExpFamily& fam, std::span<const double> theta1,
                                 std::span<const double> theta2, int k) {
  if (k < 2) throw std::invalid_argument("sibson_radius_ef_1_over_k: k must be >= 2");
  if (!fam.in_domain(theta1) || !fam.in_domain(theta2)) {
    throw std::invalid_argument("sibson_radius_ef_1_over_k: parameter outside domain");
  }
  const double f1 = fam.cumulant(theta1);
  const double f2 = fam.cumulant(theta2);
  std::vector<double> mix(theta1.size());
  double sum = 0.0;
  double binom = 1.0;
  for (int i = 0; i <= k; ++i) {
    const double t = static_cast<double>(i) / k;
    for (std::size_t d = 0; d < mix.size(); ++d) {
      mix[d] = t * theta1[d] + (1.0 - t) * theta2[d];
    }
    if (!fam.in_domain(mix)) {
      throw std::logic_error("sibson_radius_ef_1_over_k: segment left the domain");
    }
    const double jensen_gap = fam.cumulant(mix) - (t * f1 + (1.0 - t) * f2);
    const double term = std::exp(jensen_gap);
    if ((i == 0 || i == k) && std::abs(term - 1.0) > 1e-12) {
      throw std::logic_error("sibson_radius_ef_1_over_k: endpoint integral != 1");
    }
    sum += binom * term;
    binom *= static_cast<double>(k - i) / (i + 1);
  }
  return -std::log(std::ldexp(sum, -k)) / (k - 1);
}

double radius_upper_bound(std::span<const double> weights, double alpha) {
  check_alpha(alpha);
  validate_weights(weights);
  if (std::isinf(alpha)) return std::log(static_cast<double>(weights.size()));
  if (alpha == 1.0) {
    double h = 0.0;
    for (double w : weights) h -= w * std::log(w);
    return h;
  }
  double s = 0.0;
  for (double w : weights) s += std::pow(w, 1.0 / alpha);
  return alpha / (alpha - 1.0) * std::log(s);
}

// --- generalized (M,D)-information radius ------------------------------------

namespace {

// Divergence of one member mass vector pi from the candidate mass vector m,
// together with the gradient with respect to m. All DivergenceSpec kinds work
// on mass vectors; only the non-homogeneous generalized-Bhattacharyya mean
// needs the quadrature weights.
struct MassDivergence {
  const DivergenceSpec& spec;
  std::span<const double> qw;

  double value_grad(std::span<const double> pi, std::span<const double> m,
                    std::span<double> grad) const {
    const std::size_t len = m.size();
    std::fill(grad.begin(), grad.end(), 0.0);
    switch (spec.kind) {
      case DivergenceSpec::Kind::KLD: {
        double s = 0.0;
        for (std::size_t j = 0; j < len; ++j) {
          const double t = plogr(pi[j], m[j]);
          if (t == kInf) return kInf;
          s += t;
          if (m[j] > 0.0) grad[j] = -pi[j] / m[j];
        }
        return s;
      }
      case DivergenceSpec::Kind::ReverseKLD: {
        double s = 0.0;
        for (std::size_t j = 0; j < len; ++j) {
          const double t = plogr(m[j], pi[j]);
          if (t == kInf) return kInf;
          s += t;
          if (m[j] > 0.0) grad[j] = std::log(m[j] / pi[j]) + 1.0;
        }
        return s;
      }
      case DivergenceSpec::Kind::RenyiAlpha: {
        const double alpha = spec.alpha;
        double c = 0.0;
        for (std::size_t j = 0; j < len; ++j) {
          if (pi[j] <= kZeroFloor) continue;
          if (m[j] <= kZeroFloor) {
            if (alpha > 1.0) return kInf;
            continue;
          }
          c += std::pow(pi[j], alpha) * std::pow(m[j], 1.0 - alpha);
        }
        if (c <= 0.0) return kInf;
        for (std::size_t j = 0; j < len; ++j) {
          if (pi[j] > kZeroFloor && m[j] > kZeroFloor) {
            grad[j] = -std::pow(pi[j] / m[j], alpha) / c;
          }
        }
        return std::log(c) / (alpha - 1.0);
      }
      case DivergenceSpec::Kind::RenyiInfinity: {
        double best = 0.0;
        std::size_t arg = 0;
        for (std::size_t j = 0; j < len; ++j) {
          if (pi[j] <= kZeroFloor) continue;
          if (m[j] <= kZeroFloor) return kInf;
          const double r = pi[j] / m[j];
          if (r > best) {
            best = r;
            arg = j;
          }
        }
        grad[arg] = -1.0 / m[arg];
        return std::log(best);
      }
      case DivergenceSpec::Kind::TotalVariation: {
        double s = 0.0;
        for (std::size_t j = 0; j < len; ++j) {
          s += std::abs(pi[j] - m[j]);
          grad[j] = 0.5 * (m[j] > pi[j] ? 1.0 : (m[j] < pi[j] ? -1.0 : 0.0));
        }
        return 0.5 * s;
      }
      case DivergenceSpec::Kind::BhattacharyyaCoefficient: {
        const double alpha = spec.alpha;
        double s = 0.0;
        for (std::size_t j = 0; j < len; ++j) {
          if (pi[j] <= kZeroFloor || m[j] <= kZeroFloor) continue;
          s += std::pow(pi[j], alpha) * std::pow(m[j], 1.0 - alpha);
          grad[j] = (1.0 - alpha) * std::pow(pi[j] / m[j], alpha);
        }
        return s;
      }
      case DivergenceSpec::Kind::SkewJSD: {
        const double al = spec.alpha;
        const double be = spec.beta;
        double s = 0.0;
        for (std::size_t j = 0; j < len; ++j) {
          const double mu = (1.0 - al) * pi[j] + al * m[j];
          const double t1 = plogr(pi[j], mu);
          const double t2 = plogr(m[j], mu);
          if (t1 == kInf || t2 == kInf) return kInf;
          s += (1.0 - be) * t1 + be * t2;
          if (mu > 0.0) {
            double g = -(1.0 - be) * al * pi[j] / mu;
            if (m[j] > kZeroFloor) {
              g += be * (std::log(m[j] / mu) + 1.0 - al * m[j] / mu);
            }
            grad[j] = g;
          }
        }
        return s;
      }
      case DivergenceSpec::Kind::GeneralizedBhattacharyya: {
        double s = 0.0;
        std::vector<double> dm(len, 0.0);
        double gpair[2];
        for (std::size_t j = 0; j < len; ++j) {
          const double pj = pi[j] / qw[j];
          const double cj = m[j] / qw[j];
          const double vals[2] = {pj, cj};
          double mv;
          if (pj <= 0.0 || cj <= 0.0) {
            mv = pointwise_mean(spec.mean, pj, cj);
            gpair[1] = 0.0;
          } else {
            mv = mean_with_gradient(spec.mean, vals, gpair);
          }
          s += qw[j] * mv;
          dm[j] = gpair[1];  // d(qw M)/d(mass) = dM/dc
        }
        if (!(s > 0.0)) return kInf;
        for (std::size_t j = 0; j < len; ++j) grad[j] = -dm[j] / s;
        return -std::log(s);
      }
    }
    return kInf;
  }
};

struct ObjectiveEval {
  double value = kInf;
  std::vector<double> grad;
};

class GeneralizedObjective {
 public:
  GeneralizedObjective(const AlignedSet& a, std::span<const double> weights,
                       const MeanSpec& mean, const DivergenceSpec& divergence)
      : qw_(a.quad_weights), mean_(mean.with_weights({weights.begin(), weights.end()})),
        div_{divergence, qw_} {
    const std::size_t len = a.values.front().size();
    pis_.resize(a.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) {
      pis_[i].resize(len);
      for (std::size_t j = 0; j < len; ++j) pis_[i][j] = qw_[j] * a.values[i][j];
    }
  }

  const std::vector<std::vector<double>>& pis() const { return pis_; }

  ObjectiveEval operator()(std::span<const double> m) const {
    const std::size_t n = pis_.size();
    const std::size_t len = m.size();
    std::vector<double> dvals(n);
    std::vector<std::vector<double>> dgrads(n, std::vector<double>(len));
    bool infinite = false;
    parallel_for(n, [&](std::size_t i) {
      dvals[i] = div_.value_grad(pis_[i], m, dgrads[i]);
      if (dvals[i] == kInf) infinite = true;
    });
    ObjectiveEval out;
    out.grad.assign(len, 0.0);
    if (infinite) return out;
    std::vector<double> mg(n);
    out.value = mean_with_gradient(mean_, dvals, mg);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < len; ++j) out.grad[j] += mg[i] * dgrads[i][j];
    }
    return out;
  }

 private:
  std::vector<double> qw_;
  std::vector<std::vector<double>> pis_;
  MeanSpec mean_;
  MassDivergence div_;
};

void renormalize(std::vector<double>& m) {
  double s = 0.0;
  for (double v : m) s += v;
  for (double& v : m) v /= s;
}

}  // namespace

double generalized_objective(const WeightedSet& set, const MeanSpec& mean,
                             const DivergenceSpec& divergence, const Density& c) {
  std::vector<Density> all = set.members;
  all.push_back(c);
  const AlignedSet a = align(all);
  AlignedSet members = a;
  members.values.pop_back();
  GeneralizedObjective obj(members, set.weights, mean, divergence);
  std::vector<double> m(a.values.back().size());
  for (std::size_t j = 0; j < m.size(); ++j) {
    m[j] = a.quad_weights[j] * a.values.back()[j];
  }
  return obj(m).value;
}

RadiusResult generalized_radius(const WeightedSet& set, const MeanSpec& mean,
                                const DivergenceSpec& divergence,
                                const SearchConfig& cfg) {
  const AlignedSet a = align(set.members);
  GeneralizedObjective obj(a, set.weights, mean, divergence);

  // Canonical start: the arithmetic mixture. If the divergence is infinite
  // there (reverse orientations with partial supports), restrict the candidate
  // to the intersection of the member supports.
  std::vector<double> m = mixture_mass(a, set.weights);
  renormalize(m);
  ObjectiveEval cur = obj(m);
  if (cur.value == kInf) {
    std::vector<double> restricted = m;
    for (std::size_t j = 0; j < restricted.size(); ++j) {
      for (const auto& pi : obj.pis()) {
        if (pi[j] <= kZeroFloor) {
          restricted[j] = 0.0;
          break;
        }
      }
    }
    const double total = std::accumulate(restricted.begin(), restricted.end(), 0.0);
    if (total > 0.0) {
      for (double& v : restricted) v /= total;
      const ObjectiveEval retry = obj(restricted);
      if (retry.value < kInf) {
        m = std::move(restricted);
        cur = retry;
      }
    }
  }
  if (cur.value == kInf) {
    throw std::runtime_error("generalized_radius: divergence is infinite at every "
                             "candidate reachable from the mixture start");
  }

  RadiusResult res;
  res.alpha = std::numeric_limits<double>::quiet_NaN();
  res.mean = mean;
  res.divergence = divergence;
  res.centroid_unique = false;

  double step = cfg.step0;
  int iter = 0;
  double residual = 0.0;
  bool converged = false;
  if (cfg.trace) cfg.trace->push_back(cur.value);
  std::vector<double> trial(m.size());
  while (iter < cfg.max_iters) {
    ++iter;
    const double prev = cur.value;
    bool accepted = false;
    for (int bt = 0; bt < cfg.max_backtracks && !accepted; ++bt) {
      // Multiplicative step, shifted so the largest exponent is 0.
      double emax = -kInf;
      for (std::size_t j = 0; j < m.size(); ++j) {
        if (m[j] > 0.0) emax = std::max(emax, -step * cur.grad[j]);
      }
      for (std::size_t j = 0; j < m.size(); ++j) {
        trial[j] = m[j] > 0.0 ? m[j] * std::exp(-step * cur.grad[j] - emax) : 0.0;
      }
      renormalize(trial);
      const ObjectiveEval ev = obj(trial);
      if (ev.value < cur.value) {
        double linear = 0.0;
        for (std::size_t j = 0; j < m.size(); ++j) {
          linear += cur.grad[j] * (trial[j] - m[j]);
        }
        if (ev.value <= cur.value + cfg.armijo * linear) {
          m.swap(trial);
          cur = ev;
          accepted = true;
          step = std::min(step * 1.5, 1e6);
          break;
        }
      }
      step *= 0.5;
      if (step < 1e-18) break;
    }
    if (!accepted) {
      // No descent direction at line-search resolution: local optimum.
      converged = true;
      residual = 0.0;
      break;
    }
    if (cfg.trace) cfg.trace->push_back(cur.value);
    residual = (prev - cur.value) / std::max(1.0, std::abs(prev));
    if (residual < cfg.rel_tol) {
      converged = true;
      break;
    }
  }

  res.value = cur.value;
  res.centroid = density_from_mass(a, m);
  res.iterations = iter;
  res.residual = residual;
  res.converged = converged;
  return res;
}

BregmanInformation bregman_information(std::span<const double> weights,
                                       std::span<const std::vector<double>> thetas,
                                       const ConvexFunction& F) {
  if (weights.size() != thetas.size() || weights.empty()) {
    throw std::invalid_argument("bregman_information: weights/parameters mismatch");
  }
  validate_weights(weights);
  const std::size_t dim = thetas.front().size();
  std::vector<double> center(dim, 0.0);
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    if (thetas[i].size() != dim) {
      throw std::invalid_argument("bregman_information: parameter dimension mismatch");
    }
    for (std::size_t d = 0; d < dim; ++d) center[d] += weights[i] * thetas[i][d];
  }
  if (!F.in_domain(center)) {
    throw std::logic_error("bregman_information: mean parameter left the domain");
  }
  double value = 0.0;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    value += weights[i] * bregman(F, thetas[i], center);
  }
  return {value, std::move(center)};
}

double generalized_bhattacharyya(const Density& p, const Density& q,
                                 const MeanSpec& mean) {
  if (mean.weights.size() != 2) {
    throw std::invalid_argument("generalized_bhattacharyya: mean needs two-point weights");
  }
  return evaluate_divergence(DivergenceSpec::generalized_bhattacharyya(mean), p, q);
}

}  // namespace infradius
