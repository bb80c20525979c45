#include "infradius/means.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "infradius/density.hpp"

namespace infradius {

double Generator::apply(double u) const {
  double v = 0.0;
  switch (type) {
    case Type::Identity:
      v = u;
      break;
    case Type::Exp:
      v = std::exp((alpha - 1.0) * u);
      break;
    case Type::Power:
      v = std::pow(u, alpha);
      break;
  }
  return negated ? -v : v;
}

double Generator::invert(double v) const {
  if (negated) v = -v;
  switch (type) {
    case Type::Identity:
      return v;
    case Type::Exp:
      return std::log(v) / (alpha - 1.0);
    case Type::Power:
      return std::pow(v, 1.0 / alpha);
  }
  return v;
}

double Generator::derivative(double u) const {
  double d = 0.0;
  switch (type) {
    case Type::Identity:
      d = 1.0;
      break;
    case Type::Exp:
      d = (alpha - 1.0) * std::exp((alpha - 1.0) * u);
      break;
    case Type::Power:
      d = alpha * std::pow(u, alpha - 1.0);
      break;
  }
  return negated ? -d : d;
}

void validate_weights(std::span<const double> w) {
  if (w.empty()) throw std::invalid_argument("weights: empty");
  double sum = 0.0;
  for (double x : w) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw std::invalid_argument("weights: entries must be strictly positive");
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("weights: must sum to 1 within 1e-12");
  }
}

namespace {

MeanSpec make_spec(MeanSpec::Kind kind, std::vector<double> w) {
  if (!w.empty()) validate_weights(w);
  MeanSpec s;
  s.kind = kind;
  s.weights = std::move(w);
  return s;
}

}  // namespace

MeanSpec MeanSpec::arithmetic(std::vector<double> w) {
  return make_spec(Kind::Arithmetic, std::move(w));
}
MeanSpec MeanSpec::geometric(std::vector<double> w) {
  return make_spec(Kind::Geometric, std::move(w));
}
MeanSpec MeanSpec::harmonic(std::vector<double> w) {
  return make_spec(Kind::Harmonic, std::move(w));
}
MeanSpec MeanSpec::power(double exponent, std::vector<double> w) {
  if (exponent == 0.0 || !std::isfinite(exponent)) {
    throw std::invalid_argument("power mean: exponent must be finite and nonzero");
  }
  MeanSpec s = make_spec(Kind::Power, std::move(w));
  s.exponent = exponent;
  return s;
}
MeanSpec MeanSpec::quasi_arithmetic(Generator g, std::vector<double> w) {
  if (g.type == Generator::Type::Exp && g.alpha == 1.0) {
    throw std::invalid_argument("quasi-arithmetic exp generator: alpha must differ from 1");
  }
  if (g.type == Generator::Type::Power && g.alpha == 0.0) {
    throw std::invalid_argument("quasi-arithmetic power generator: alpha must be nonzero");
  }
  MeanSpec s = make_spec(Kind::QuasiArithmetic, std::move(w));
  s.generator = g;
  return s;
}
MeanSpec MeanSpec::renyi(double alpha, std::vector<double> w) {
  if (alpha < -1e6) {
    throw std::invalid_argument("renyi mean: alpha below -1e6 is rejected");
  }
  if (!(alpha > 0.0) || alpha == 1.0) {
    throw std::invalid_argument("renyi mean: alpha must be positive and differ from 1");
  }
  MeanSpec s = make_spec(Kind::RenyiAlpha, std::move(w));
  s.alpha = alpha;
  return s;
}
MeanSpec MeanSpec::max(std::vector<double> w) { return make_spec(Kind::Max, std::move(w)); }
MeanSpec MeanSpec::min(std::vector<double> w) { return make_spec(Kind::Min, std::move(w)); }

std::vector<double> MeanSpec::skew(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw std::invalid_argument("skew weight must lie in (0,1)");
  }
  return {1.0 - beta, beta};
}

MeanSpec MeanSpec::with_weights(std::vector<double> w) const {
  validate_weights(w);
  MeanSpec s = *this;
  s.weights = std::move(w);
  return s;
}

namespace {

void check_values(const MeanSpec& spec, std::span<const double> values) {
  if (spec.weights.empty()) {
    throw std::invalid_argument("evaluate_mean: spec carries no weights");
  }
  if (spec.weights.size() != values.size()) {
    throw std::invalid_argument("evaluate_mean: weights/values length mismatch");
  }
  const bool needs_positive =
      spec.kind == MeanSpec::Kind::Geometric || spec.kind == MeanSpec::Kind::Harmonic;
  for (double v : values) {
    if (!(v >= 0.0)) {
      throw std::invalid_argument("evaluate_mean: values must be nonnegative");
    }
    if (needs_positive && v == 0.0) {
      throw std::invalid_argument("evaluate_mean: this mean requires strictly positive values");
    }
  }
}

double renyi_mean(std::span<const double> w, std::span<const double> values,
                  double alpha) {
  // (1/(alpha-1)) log sum w_i exp((alpha-1) x_i), via a max-shifted LSE.
  std::vector<double> ex(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    ex[i] = (alpha - 1.0) * values[i] + std::log(w[i]);
  }
  return log_sum_exp(ex) / (alpha - 1.0);
}

}  // namespace

double evaluate_mean(const MeanSpec& spec, std::span<const double> values) {
  check_values(spec, values);
  const auto& w = spec.weights;
  switch (spec.kind) {
    case MeanSpec::Kind::Arithmetic: {
      double s = 0.0;
      for (std::size_t i = 0; i < values.size(); ++i) s += w[i] * values[i];
      return s;
    }
    case MeanSpec::Kind::Geometric: {
      double s = 0.0;
      for (std::size_t i = 0; i < values.size(); ++i) s += w[i] * std::log(values[i]);
      return std::exp(s);
    }
    case MeanSpec::Kind::Harmonic: {
      double s = 0.0;
      for (std::size_t i = 0; i < values.size(); ++i) s += w[i] / values[i];
      return 1.0 / s;
    }
    case MeanSpec::Kind::Power:
      return weighted_power_mean(w, values, spec.exponent);
    case MeanSpec::Kind::QuasiArithmetic: {
      double s = 0.0;
      for (std::size_t i = 0; i < values.size(); ++i) {
        s += w[i] * spec.generator.apply(values[i]);
      }
      return spec.generator.invert(s);
    }
    case MeanSpec::Kind::RenyiAlpha:
      if (spec.alpha > 1e6) return *std::max_element(values.begin(), values.end());
      return renyi_mean(w, values, spec.alpha);
    case MeanSpec::Kind::Max:
      return *std::max_element(values.begin(), values.end());
    case MeanSpec::Kind::Min:
      return *std::min_element(values.begin(), values.end());
  }
  throw std::logic_error("unreachable");
}

double mean_with_gradient(const MeanSpec& spec, std::span<const double> values,
                          std::span<double> grad_out) {
  if (grad_out.size() != values.size()) {
    throw std::invalid_argument("mean_with_gradient: gradient span length mismatch");
  }
  const double m = evaluate_mean(spec, values);
  const auto& w = spec.weights;
  switch (spec.kind) {
    case MeanSpec::Kind::Arithmetic:
      for (std::size_t i = 0; i < values.size(); ++i) grad_out[i] = w[i];
      break;
    case MeanSpec::Kind::Geometric:
      for (std::size_t i = 0; i < values.size(); ++i) grad_out[i] = m * w[i] / values[i];
      break;
    case MeanSpec::Kind::Harmonic:
      for (std::size_t i = 0; i < values.size(); ++i) {
        grad_out[i] = m * m * w[i] / (values[i] * values[i]);
      }
      break;
    case MeanSpec::Kind::Power: {
      const double p = spec.exponent;
      for (std::size_t i = 0; i < values.size(); ++i) {
        grad_out[i] = values[i] > 0.0 || p >= 1.0
                          ? w[i] * std::pow(values[i] / m, p - 1.0)
                          : 0.0;
      }
      break;
    }
    case MeanSpec::Kind::QuasiArithmetic: {
      const double gm = spec.generator.derivative(m);
      for (std::size_t i = 0; i < values.size(); ++i) {
        grad_out[i] = w[i] * spec.generator.derivative(values[i]) / gm;
      }
      break;
    }
    case MeanSpec::Kind::RenyiAlpha: {
      const double a = spec.alpha > 1e6 ? 1e6 : spec.alpha;
      double denom = 0.0;
      for (std::size_t i = 0; i < values.size(); ++i) {
        grad_out[i] = w[i] * std::exp((a - 1.0) * (values[i] - m));
        denom += grad_out[i];
      }
      for (std::size_t i = 0; i < values.size(); ++i) grad_out[i] /= denom;
      break;
    }
    case MeanSpec::Kind::Max: {
      const auto k = static_cast<std::size_t>(
          std::max_element(values.begin(), values.end()) - values.begin());
      for (std::size_t i = 0; i < values.size(); ++i) grad_out[i] = i == k ? 1.0 : 0.0;
      break;
    }
    case MeanSpec::Kind::Min: {
      const auto k = static_cast<std::size_t>(
          std::min_element(values.begin(), values.end()) - values.begin());
      for (std::size_t i = 0; i < values.size(); ++i) grad_out[i] = i == k ? 1.0 : 0.0;
      break;
    }
  }
  return m;
}

double pointwise_mean(const MeanSpec& spec, double a, double b) {
  const double w0 = spec.weights.at(0);
  const double w1 = spec.weights.at(1);
  switch (spec.kind) {
    case MeanSpec::Kind::Arithmetic:
      return w0 * a + w1 * b;
    case MeanSpec::Kind::Geometric:
      if (a <= 0.0 || b <= 0.0) return 0.0;
      return std::exp(w0 * std::log(a) + w1 * std::log(b));
    case MeanSpec::Kind::Harmonic:
      if (a <= 0.0 || b <= 0.0) return 0.0;
      return 1.0 / (w0 / a + w1 / b);
    case MeanSpec::Kind::Power: {
      if (spec.exponent < 0.0 && (a <= 0.0 || b <= 0.0)) return 0.0;
      const double vals[2] = {a, b};
      const double ws[2] = {w0, w1};
      return weighted_power_mean(ws, vals, spec.exponent);
    }
    case MeanSpec::Kind::Max:
      return std::max(a, b);
    case MeanSpec::Kind::Min:
      return std::min(a, b);
    default: {
      const double vals[2] = {a, b};
      return evaluate_mean(spec, vals);
    }
  }
}

SupportFunction power_mean_density_pointwise(double alpha, const Density& p,
                                             const Density& q, double weight) {
  if (alpha == 0.0 || !std::isfinite(alpha)) {
    throw std::invalid_argument("power_mean_density_pointwise: alpha must be finite, nonzero");
  }
  if (!(weight > 0.0 && weight < 1.0)) {
    throw std::invalid_argument("power_mean_density_pointwise: weight must lie in (0,1)");
  }
  const AlignedSet a = align_pair(p, q);
  SupportFunction f;
  f.discrete = a.discrete;
  f.xs = a.xs;
  f.quad_weights = a.quad_weights;
  f.values.resize(a.values[0].size());
  const double ws[2] = {1.0 - weight, weight};
  for (std::size_t j = 0; j < f.values.size(); ++j) {
    const double vals[2] = {a.values[0][j], a.values[1][j]};
    f.values[j] = weighted_power_mean(ws, vals, alpha);
  }
  return f;
}

}  // namespace infradius
