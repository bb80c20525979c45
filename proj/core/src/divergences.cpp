#include "infradius/divergences.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace infradius {

DivergenceSpec DivergenceSpec::kld() { return {}; }

DivergenceSpec DivergenceSpec::reverse_kld() {
  DivergenceSpec s;
  s.kind = Kind::ReverseKLD;
  return s;
}

DivergenceSpec DivergenceSpec::renyi(double alpha) {
  if (!(alpha > 0.0) || alpha == 1.0) {
    throw std::invalid_argument("renyi divergence: alpha must be positive, != 1");
  }
  DivergenceSpec s;
  s.kind = Kind::RenyiAlpha;
  s.alpha = alpha;
  return s;
}

DivergenceSpec DivergenceSpec::renyi_infinity() {
  DivergenceSpec s;
  s.kind = Kind::RenyiInfinity;
  return s;
}

DivergenceSpec DivergenceSpec::total_variation() {
  DivergenceSpec s;
  s.kind = Kind::TotalVariation;
  return s;
}

DivergenceSpec DivergenceSpec::bhattacharyya(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("bhattacharyya: alpha must lie in (0,1)");
  }
  DivergenceSpec s;
  s.kind = Kind::BhattacharyyaCoefficient;
  s.alpha = alpha;
  return s;
}

DivergenceSpec DivergenceSpec::skew_jsd(double alpha, double beta) {
  if (!(alpha > 0.0 && alpha < 1.0) || !(beta > 0.0 && beta < 1.0)) {
    throw std::invalid_argument("skew_jsd: alpha and beta must lie in (0,1)");
  }
  DivergenceSpec s;
  s.kind = Kind::SkewJSD;
  s.alpha = alpha;
  s.beta = beta;
  return s;
}

DivergenceSpec DivergenceSpec::generalized_bhattacharyya(MeanSpec mean) {
  DivergenceSpec s;
  s.kind = Kind::GeneralizedBhattacharyya;
  s.mean = std::move(mean);
  return s;
}

namespace {

Density density_from_row(const AlignedSet& a, std::size_t i) {
  if (a.discrete) return Density::discrete(a.values[i]);
  return Density::grid(a.xs, a.values[i]);
}

double numeric_entropy(std::span<const double> qw, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) s -= qw[j] * plogp(v[j]);
  return s;
}

double numeric_cross_entropy(std::span<const double> qw, std::span<const double> p,
                             std::span<const double> q) {
  double s = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] <= kZeroFloor) continue;
    if (q[j] <= kZeroFloor) return kInf;
    s -= qw[j] * p[j] * std::log(q[j]);
  }
  return s;
}

double numeric_kld(std::span<const double> qw, std::span<const double> p,
                   std::span<const double> q) {
  double s = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double t = plogr(p[j], q[j]);
    if (t == kInf) return kInf;
    s += qw[j] * t;
  }
  return s;
}

bool both_expfam(const Density& p, const Density& q) {
  return p.kind() == Density::Kind::ExpFam && q.kind() == Density::Kind::ExpFam;
}

}  // namespace

double entropy(const Density& p) {
  if (p.kind() == Density::Kind::ExpFam) return ef_entropy(p.ef());
  const Density num = p.materialize();
  return numeric_entropy(num.quad_weights(), num.values());
}

double cross_entropy(const Density& p, const Density& q) {
  if (both_expfam(p, q) && p.ef().family->same(*q.ef().family)) {
    MomentSummary s;
    s.moment = p.ef().eta;
    s.carrier_expectation = p.ef().family->carrier_expectation(p.ef().theta);
    s.entropy = 0.0;
    return semi_closed_cross_entropy(s, q.ef());
  }
  const AlignedSet a = align_pair(p, q);
  return numeric_cross_entropy(a.quad_weights, a.values[0], a.values[1]);
}

double renyi_entropy(const Density& p, double alpha) {
  if (alpha < 0.0) throw std::invalid_argument("renyi_entropy: alpha must be >= 0");
  if (alpha == 1.0) return entropy(p);
  const Density num = p.materialize();
  const auto& v = num.values();
  const auto& qw = num.quad_weights();
  if (std::isinf(alpha)) {
    return -std::log(*std::max_element(v.begin(), v.end()));
  }
  if (alpha == 0.0) {
    double measure = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[j] > kZeroFloor) measure += qw[j];
    }
    return std::log(measure);
  }
  double s = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (v[j] > kZeroFloor) s += qw[j] * std::pow(v[j], alpha);
  }
  return std::log(s) / (1.0 - alpha);
}

double kld(const Density& p, const Density& q) {
  if (both_expfam(p, q)) {
    const auto& mp = p.ef();
    const auto& mq = q.ef();
    if (mp.family->same(*mq.family)) return ef_kld(mp, mq);
    if (mp.family->weibull_view(mp.theta) && mq.family->weibull_view(mq.theta)) {
      return cross_family_kld(mp, mq);
    }
  }
  const AlignedSet a = align_pair(p, q);
  return numeric_kld(a.quad_weights, a.values[0], a.values[1]);
}

double renyi_divergence(const Density& p, const Density& q, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("renyi_divergence: alpha must be > 0");
  if (alpha == 1.0) return kld(p, q);
  const AlignedSet a = align_pair(p, q);
  const auto& vp = a.values[0];
  const auto& vq = a.values[1];
  if (std::isinf(alpha)) {
    double best = 0.0;
    for (std::size_t j = 0; j < vp.size(); ++j) {
      if (vp[j] <= kZeroFloor) continue;
      if (vq[j] <= kZeroFloor) return kInf;
      best = std::max(best, vp[j] / vq[j]);
    }
    return std::log(best);
  }
  double s = 0.0;
  for (std::size_t j = 0; j < vp.size(); ++j) {
    if (vp[j] <= kZeroFloor) continue;
    if (vq[j] <= kZeroFloor) {
      if (alpha > 1.0) return kInf;
      continue;
    }
    s += a.quad_weights[j] * std::pow(vp[j], alpha) * std::pow(vq[j], 1.0 - alpha);
  }
  return std::log(s) / (alpha - 1.0);
}

double bhattacharyya_coefficient(const Density& p, const Density& q, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("bhattacharyya_coefficient: alpha must lie in (0,1)");
  }
  const AlignedSet a = align_pair(p, q);
  double s = 0.0;
  for (std::size_t j = 0; j < a.values[0].size(); ++j) {
    const double vp = a.values[0][j];
    const double vq = a.values[1][j];
    if (vp <= kZeroFloor || vq <= kZeroFloor) continue;
    s += a.quad_weights[j] * std::pow(vp, alpha) * std::pow(vq, 1.0 - alpha);
  }
  return s;
}

double total_variation(const Density& p, const Density& q) {
  const AlignedSet a = align_pair(p, q);
  double s = 0.0;
  for (std::size_t j = 0; j < a.values[0].size(); ++j) {
    s += a.quad_weights[j] * std::abs(a.values[0][j] - a.values[1][j]);
  }
  return 0.5 * s;
}

double skew_jsd(const Density& p, const Density& q, double alpha, double beta) {
  if (!(alpha > 0.0 && alpha < 1.0) || !(beta > 0.0 && beta < 1.0)) {
    throw std::invalid_argument("skew_jsd: alpha and beta must lie in (0,1)");
  }
  const AlignedSet a = align_pair(p, q);
  const auto& vp = a.values[0];
  const auto& vq = a.values[1];
  std::vector<double> mix(vp.size());
  for (std::size_t j = 0; j < vp.size(); ++j) {
    mix[j] = (1.0 - alpha) * vp[j] + alpha * vq[j];
  }
  return (1.0 - beta) * numeric_kld(a.quad_weights, vp, mix) +
         beta * numeric_kld(a.quad_weights, vq, mix);
}

double js_diversity(const WeightedSet& set) {
  const AlignedSet a = align(set.members);
  const std::size_t len = a.values.front().size();
  const std::size_t n = set.members.size();

  std::vector<double> mix(len);
  std::vector<double> terms(n);
  for (std::size_t j = 0; j < len; ++j) {
    for (std::size_t i = 0; i < n; ++i) terms[i] = set.weights[i] * a.values[i][j];
    mix[j] = exact_sum(terms);
  }

  double via_kld = 0.0;
  double avg_entropy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    via_kld += set.weights[i] * numeric_kld(a.quad_weights, a.values[i], mix);
    avg_entropy += set.weights[i] * numeric_entropy(a.quad_weights, a.values[i]);
  }
  const double via_entropy = numeric_entropy(a.quad_weights, mix) - avg_entropy;
  if (std::abs(via_kld - via_entropy) > 1e-8 * std::max(1.0, std::abs(via_kld))) {
    throw std::logic_error("js_diversity: KLD and entropy routes disagree beyond 1e-8");
  }
  return via_kld;
}

double f_generator_jsd(double u, double alpha, double beta) {
  if (!(u > 0.0)) throw std::invalid_argument("f_generator_jsd: u must be positive");
  if (!(alpha > 0.0 && alpha < 1.0) || !(beta > 0.0 && beta < 1.0)) {
    throw std::invalid_argument("f_generator_jsd: alpha and beta must lie in (0,1)");
  }
  return -((1.0 - beta) * std::log(alpha * u + (1.0 - alpha)) +
           beta * u * std::log((1.0 - alpha) / u + alpha));
}

double f_divergence_jsd(const Density& p, const Density& q, double alpha, double beta) {
  const AlignedSet a = align_pair(p, q);
  double s = 0.0;
  for (std::size_t j = 0; j < a.values[0].size(); ++j) {
    const double vp = a.values[0][j];
    const double vq = a.values[1][j];
    double term;
    if (vp <= kZeroFloor) {
      // lim_{p->0} p f(q/p) = -beta q log(alpha)
      term = vq <= kZeroFloor ? 0.0 : -beta * vq * std::log(alpha);
    } else if (vq <= kZeroFloor) {
      term = -vp * (1.0 - beta) * std::log(1.0 - alpha);  // p f(0)
    } else {
      term = vp * f_generator_jsd(vq / vp, alpha, beta);
    }
    s += a.quad_weights[j] * term;
  }
  return s;
}

double mn_jsd(const Density& p, const Density& q, const MeanSpec& mixing_mean,
              const MeanSpec& averaging_mean, const DivergenceSpec& base) {
  if (mixing_mean.weights.size() != 2 || averaging_mean.weights.size() != 2) {
    throw std::invalid_argument("mn_jsd: means must carry two-point weights");
  }
  const AlignedSet a = align_pair(p, q);
  std::vector<double> mix(a.values[0].size());
  for (std::size_t j = 0; j < mix.size(); ++j) {
    mix[j] = pointwise_mean(mixing_mean, a.values[0][j], a.values[1][j]);
  }
  const double z = integrate_values(a.quad_weights, mix);
  if (!(z > 0.0)) {
    throw std::invalid_argument("mn_jsd: M-mixture has zero normalizer");
  }
  Density mmix = a.discrete ? Density::discrete([&] {
    std::vector<double> v = mix;
    for (double& x : v) x /= z;
    return v;
  }())
                            : Density::grid(a.xs, mix);
  const Density pn = density_from_row(a, 0);
  const Density qn = density_from_row(a, 1);
  const double d1 = evaluate_divergence(base, pn, mmix);
  const double d2 = evaluate_divergence(base, qn, mmix);
  const double vals[2] = {d1, d2};
  return evaluate_mean(averaging_mean, vals);
}

double jensen_bregman(const ConvexFunction& F, std::span<const double> theta1,
                      std::span<const double> theta2) {
  if (theta1.size() != theta2.size()) {
    throw std::invalid_argument("jensen_bregman: dimension mismatch");
  }
  std::vector<double> mid(theta1.size());
  for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = 0.5 * (theta1[i] + theta2[i]);
  if (!F.in_domain(theta1) || !F.in_domain(theta2) || !F.in_domain(mid)) {
    throw std::invalid_argument("jensen_bregman: point outside generator domain");
  }
  return 0.5 * (F.value(theta1) + F.value(theta2)) - F.value(mid);
}

double evaluate_divergence(const DivergenceSpec& spec, const Density& p,
                           const Density& q) {
  switch (spec.kind) {
    case DivergenceSpec::Kind::KLD:
      return kld(p, q);
    case DivergenceSpec::Kind::ReverseKLD:
      return kld(q, p);
    case DivergenceSpec::Kind::RenyiAlpha:
      return renyi_divergence(p, q, spec.alpha);
    case DivergenceSpec::Kind::RenyiInfinity:
      return renyi_divergence(p, q, kInf);
    case DivergenceSpec::Kind::TotalVariation:
      return total_variation(p, q);
    case DivergenceSpec::Kind::BhattacharyyaCoefficient:
      return bhattacharyya_coefficient(p, q, spec.alpha);
    case DivergenceSpec::Kind::SkewJSD:
      return skew_jsd(p, q, spec.alpha, spec.beta);
    case DivergenceSpec::Kind::GeneralizedBhattacharyya: {
      const AlignedSet a = align_pair(p, q);
      std::vector<double> mix(a.values[0].size());
      for (std::size_t j = 0; j < mix.size(); ++j) {
        mix[j] = pointwise_mean(spec.mean, a.values[0][j], a.values[1][j]);
      }
      return -std::log(integrate_values(a.quad_weights, mix));
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace infradius
