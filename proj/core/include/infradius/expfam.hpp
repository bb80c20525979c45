#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "infradius/grid.hpp"
#include "infradius/numerics.hpp"

namespace infradius {

// An exponential family p_theta(x) = exp(theta . t(x) - F(theta) + k(x)) with
// cumulant F evaluated from first principles (log-partition), so that entropy
// and cross-entropy identities hold without constant offsets.
class ExpFamily {
 public:
  virtual ~ExpFamily() = default;

  const std::string& id() const { return id_; }
  int dim() const { return dim_; }

  virtual double cumulant(std::span<const double> theta) const = 0;
  virtual std::vector<double> grad_cumulant(std::span<const double> theta) const = 0;
  // Inverse map theta(eta) = grad F*(eta).
  virtual std::vector<double> grad_conjugate(std::span<const double> eta) const = 0;
  // Legendre conjugate F*(eta) = theta(eta) . eta - F(theta(eta)).
  double conjugate(std::span<const double> eta) const;

  virtual bool in_domain(std::span<const double> theta) const = 0;
  virtual bool in_moment_domain(std::span<const double> eta) const = 0;

  // Scalar-support families expose the pointwise machinery below; parameter
  // space only families (mvn, categorical) do not.
  virtual bool scalar_support() const { return true; }
  virtual std::vector<double> sufficient_stat(double x) const;
  virtual double carrier(double x) const;
  virtual double log_density(double x, std::span<const double> theta) const;
  // E_theta[k(x)] in closed form; throws when the family has none.
  virtual double carrier_expectation(std::span<const double> theta) const;
  virtual GridSpec default_grid(std::span<const double> theta) const;

  // Weibull-clan coordinates (shape, Weibull scale) when this member can be
  // re-expressed as a fixed-shape Weibull; enables cross-family closed forms.
  struct WeibullView {
    double kappa;
    double scale;
  };
  virtual std::optional<WeibullView> weibull_view(std::span<const double> theta) const {
    (void)theta;
    return std::nullopt;
  }

  virtual bool same(const ExpFamily& other) const { return id_ == other.id(); }

 protected:
  ExpFamily(std::string id, int dim) : id_(std::move(id)), dim_(dim) {}

 private:
  std::string id_;
  int dim_;
};

using FamilyPtr = std::shared_ptr<const ExpFamily>;

FamilyPtr gaussian_family();
FamilyPtr mvn_family(int d);
FamilyPtr exponential_family();
FamilyPtr rayleigh_family();
FamilyPtr weibull_family(double kappa);
FamilyPtr categorical_family(int atoms);

// Registry lookup by string id ("gaussian", "mvn", "exponential", "rayleigh",
// "weibull_kappa", "categorical"); kappa / dimension read from `param` where
// the family needs one.
FamilyPtr lookup_family(const std::string& id, std::optional<double> param = std::nullopt);

// A member of an exponential family, with the moment parameter cached.
struct EFMember {
  FamilyPtr family;
  std::vector<double> theta;
  std::vector<double> eta;

  static EFMember make(FamilyPtr family, std::vector<double> theta);
};

EFMember gaussian_member(double mu, double sigma);
EFMember mvn_member(std::span<const double> mu, std::span<const double> sigma_rowmajor);
EFMember exponential_member(double rate);
EFMember rayleigh_member(double scale);
EFMember weibull_member(double kappa, double scale);
EFMember member_from_moment(FamilyPtr family, std::vector<double> eta);

// (mu, sigma) of a univariate Gaussian member.
std::pair<double, double> gaussian_params(const EFMember& m);
// Atom probabilities of a categorical member.
std::vector<double> categorical_probs(const ExpFamily& fam, std::span<const double> theta);

// Moments of an arbitrary density taken against a target family Q.
struct MomentSummary {
  std::vector<double> moment;        // m_p = E_p[t_Q(x)]
  double carrier_expectation = 0.0;  // E_p[k_Q(x)]
  double entropy = 0.0;              // h[p]
  bool numeric = false;              // true when quadrature filled any field
};

// --- cumulant / Legendre operations -----------------------------------------

double cumulant(const ExpFamily& fam, std::span<const double> theta);
std::vector<double> grad_cumulant(const ExpFamily& fam, std::span<const double> theta);
// (theta, F*(eta)) for a moment parameter inside the realizable set.
std::pair<std::vector<double>, double> legendre_dual(const ExpFamily& fam,
                                                     std::span<const double> eta);

// Differential entropy h[p_theta] = -F*(eta) - E[k(x)].
double ef_entropy(const EFMember& m);

// Same-family KLD in closed form: F(theta') + F*(eta) - theta' . eta.
double ef_kld(const EFMember& p, const EFMember& q);

// KLD from an arbitrary density (given its summary against q's family) to q:
// F_Q(theta) - m_p . theta - E_p[k_Q] - h[p].
double semi_closed_kld(const MomentSummary& p_summary, const EFMember& q);
// Cross-entropy part only; the member-constant terms -E_p[k_Q] - h[p] cancel
// in comparisons, so assignments may use F_Q(theta) - m_p . theta alone.
double semi_closed_cross_entropy(const MomentSummary& p_summary, const EFMember& q);

// KLD between members of two different families with a common Weibull-clan
// representation (weibull_kappa / exponential / rayleigh).
double cross_family_kld(const EFMember& p, const EFMember& q);
// The clan formula in (shape, scale) coordinates.
double weibull_kld(double kappa1, double scale1, double kappa2, double scale2);

// --- Bregman machinery -------------------------------------------------------

class ConvexFunction {
 public:
  virtual ~ConvexFunction() = default;
  virtual double value(std::span<const double> x) const = 0;
  virtual std::vector<double> gradient(std::span<const double> x) const = 0;
  virtual bool in_domain(std::span<const double> x) const { return true; }
};

// Ids: "square" (sum x_i^2), "half_squared_norm", "lse" (log sum exp).
std::shared_ptr<const ConvexFunction> make_convex(const std::string& id);
// The cumulant of a family as a Bregman generator.
std::shared_ptr<const ConvexFunction> convex_from_family(FamilyPtr family);

// B_F(x : y) = F(x) - F(y) - (x - y) . grad F(y).
double bregman(const ConvexFunction& F, std::span<const double> x,
               std::span<const double> y);

}  // namespace infradius
