#pragma once

#include <span>
#include <string>
#include <vector>

#include "infradius/numerics.hpp"

namespace infradius {

class Density;
struct SupportFunction;

// Closed set of quasi-arithmetic generators so MeanSpec serializes exactly.
struct Generator {
  enum class Type { Identity, Exp, Power };
  Type type = Type::Identity;
  double alpha = 1.0;    // Exp: g(u) = e^((alpha-1)u); Power: g(u) = u^alpha
  bool negated = false;  // -g induces the same mean as g

  double apply(double u) const;
  double invert(double v) const;
  double derivative(double u) const;
};

struct MeanSpec {
  enum class Kind {
    Arithmetic,
    Geometric,
    Harmonic,
    Power,
    QuasiArithmetic,
    RenyiAlpha,
    Max,
    Min,
  };

  Kind kind = Kind::Arithmetic;
  double exponent = 1.0;  // Power: nonzero finite
  double alpha = 0.5;     // RenyiAlpha: in (0,1) U (1,inf)
  Generator generator{};
  // Positive weights summing to 1 within 1e-12. May be empty for specs whose
  // weights are supplied by the calling context (e.g. a WeightedSet).
  std::vector<double> weights;

  static MeanSpec arithmetic(std::vector<double> w = {});
  static MeanSpec geometric(std::vector<double> w = {});
  static MeanSpec harmonic(std::vector<double> w = {});
  static MeanSpec power(double exponent, std::vector<double> w = {});
  static MeanSpec quasi_arithmetic(Generator g, std::vector<double> w = {});
  static MeanSpec renyi(double alpha, std::vector<double> w = {});
  static MeanSpec max(std::vector<double> w = {});
  static MeanSpec min(std::vector<double> w = {});

  // Two-point skew weights (1-beta, beta).
  static std::vector<double> skew(double beta);

  // Copy of this spec with the given weights installed (after validation).
  MeanSpec with_weights(std::vector<double> w) const;
};

void validate_weights(std::span<const double> w);

// Weighted mean of nonnegative values. Geometric and harmonic means require
// strictly positive values. Rényi means with alpha > 1e6 dispatch to Max.
double evaluate_mean(const MeanSpec& spec, std::span<const double> values);

// Mean value plus the partial derivatives with respect to each input; used by
// the variational optimizer. Max/Min return the subgradient of the active arg.
double mean_with_gradient(const MeanSpec& spec, std::span<const double> values,
                          std::span<double> grad_out);

// Continuous zero-extension of a two-point weighted mean for density values:
// means requiring positivity (geometric, harmonic, negative powers) evaluate
// to 0 when either argument is 0.
double pointwise_mean(const MeanSpec& spec, double a, double b);

// Pointwise weighted power mean of two densities on their common support,
// returned unnormalized together with the support's quadrature weights.
SupportFunction power_mean_density_pointwise(double alpha, const Density& p,
                                             const Density& q, double weight);

}  // namespace infradius
