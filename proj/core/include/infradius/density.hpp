#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "infradius/expfam.hpp"
#include "infradius/grid.hpp"
#include "infradius/numerics.hpp"

namespace infradius {

enum class Quadrature { Trapezoid };

class Density;

// A scalar function sampled on the common support of one or more densities,
// with the quadrature weights needed to integrate it. Discrete supports have
// unit weights and empty xs.
struct SupportFunction {
  bool discrete = true;
  std::vector<double> xs;
  std::vector<double> quad_weights;
  std::vector<double> values;
};

// Several densities sampled on one shared support.
struct AlignedSet {
  bool discrete = true;
  std::vector<double> xs;
  std::vector<double> quad_weights;
  std::vector<std::vector<double>> values;  // one row per density
};

// A probability density in one of four representations: a discrete pmf, a
// grid-sampled continuous density (renormalized at construction, trapezoid
// quadrature), an exponential-family member, or a structured mixture.
class Density {
 public:
  enum class Kind { Discrete, Grid, ExpFam, Mixture };

  // Point mass on a single atom; a placeholder that is still a valid density.
  Density();

  static Density discrete(std::vector<double> probs);
  static Density grid(std::vector<double> xs, std::vector<double> values);
  static Density expfam(EFMember member);
  static Density mixture(std::vector<double> weights, std::vector<Density> components);

  Kind kind() const { return kind_; }
  bool numeric() const { return kind_ == Kind::Discrete || kind_ == Kind::Grid; }

  // Discrete / Grid accessors.
  const std::vector<double>& values() const;        // probs or grid values
  const std::vector<double>& xs() const;            // grid abscissae
  const std::vector<double>& quad_weights() const;  // summation or trapezoid weights
  double raw_normalizer() const;                    // integral before renormalization
  bool full_support() const;                        // all values above the zero floor

  const EFMember& ef() const;
  const std::vector<double>& mixture_weights() const;
  const std::vector<Density>& components() const;

  // Density value at x (Grid densities interpolate linearly inside the grid).
  double operator()(double x) const;

  // Numeric form of this density: Discrete and Grid pass through; ExpFam and
  // Mixture are sampled, on `spec` when given, else on the family default.
  Density materialize(const std::optional<GridSpec>& spec = std::nullopt) const;
  Density materialize_at(std::vector<double> xs) const;

  // Window this density would pick for itself.
  GridSpec natural_grid() const;

 private:
  struct DiscreteRepr {
    std::vector<double> probs;
    std::vector<double> ones;
    bool full_support;
  };
  struct GridRepr {
    std::vector<double> xs;
    std::vector<double> values;
    std::vector<double> quad_weights;
    double raw_normalizer;
    bool full_support;
  };
  struct MixtureRepr {
    std::vector<double> weights;
    std::vector<Density> components;
  };

  Kind kind_ = Kind::Discrete;
  std::variant<DiscreteRepr, GridRepr, EFMember, MixtureRepr> repr_;
};

// Trapezoid weights for strictly increasing abscissae.
std::vector<double> trapezoid_weights(std::span<const double> xs);

// Compensated dot of quadrature weights and values; NaN/inf values reject.
double integrate_values(std::span<const double> quad_weights,
                        std::span<const double> values);
double integrate(const SupportFunction& f);

// Samples every density onto one common support (throws on incompatibility).
AlignedSet align(std::span<const Density> ds,
                 const std::optional<GridSpec>& spec = std::nullopt);
AlignedSet align_pair(const Density& a, const Density& b,
                      const std::optional<GridSpec>& spec = std::nullopt);

// n densities with positive weights normalized to sum to 1.
struct WeightedSet {
  std::vector<double> weights;
  std::vector<Density> members;

  WeightedSet(std::vector<double> w, std::vector<Density> m);
};

// Pointwise statistical mixture sum_i w_i p_i. Per-node accumulation is
// correctly rounded, so the result is bit-identical under any permutation of
// the (weight, density) pairs.
Density mixture(const WeightedSet& set);

struct EnvelopeResult {
  Density density;
  double normalizer;  // Z = integral of max_i p_i; equals 1 + D_TV for pairs
};

// Pointwise max of the members, renormalized.
EnvelopeResult upper_envelope(const WeightedSet& set);

}  // namespace infradius
