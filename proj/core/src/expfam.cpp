#include "infradius/expfam.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace infradius {

namespace {

void check_dim(const ExpFamily& fam, std::span<const double> v, const char* what) {
  if (static_cast<int>(v.size()) != fam.dim()) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch for family " +
                                fam.id());
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// --- small dense SPD helpers (row-major) -------------------------------------

bool cholesky(std::span<const double> a, int d, std::vector<double>& lower) {
  lower.assign(static_cast<std::size_t>(d) * d, 0.0);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = a[static_cast<std::size_t>(i) * d + j];
      for (int k = 0; k < j; ++k) {
        s -= lower[static_cast<std::size_t>(i) * d + k] *
             lower[static_cast<std::size_t>(j) * d + k];
      }
      if (i == j) {
        if (!(s > 0.0)) return false;
        lower[static_cast<std::size_t>(i) * d + j] = std::sqrt(s);
      } else {
        lower[static_cast<std::size_t>(i) * d + j] =
            s / lower[static_cast<std::size_t>(j) * d + j];
      }
    }
  }
  return true;
}

std::vector<double> chol_solve(std::span<const double> lower, int d,
                               std::span<const double> b) {
  std::vector<double> y(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    double s = b[static_cast<std::size_t>(i)];
    for (int k = 0; k < i; ++k) s -= lower[static_cast<std::size_t>(i) * d + k] * y[static_cast<std::size_t>(k)];
    y[static_cast<std::size_t>(i)] = s / lower[static_cast<std::size_t>(i) * d + i];
  }
  std::vector<double> x(static_cast<std::size_t>(d));
  for (int i = d - 1; i >= 0; --i) {
    double s = y[static_cast<std::size_t>(i)];
    for (int k = i + 1; k < d; ++k) s -= lower[static_cast<std::size_t>(k) * d + i] * x[static_cast<std::size_t>(k)];
    x[static_cast<std::size_t>(i)] = s / lower[static_cast<std::size_t>(i) * d + i];
  }
  return x;
}

double chol_logdet(std::span<const double> lower, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += std::log(lower[static_cast<std::size_t>(i) * d + i]);
  return 2.0 * s;
}

std::vector<double> chol_inverse(std::span<const double> lower, int d) {
  std::vector<double> inv(static_cast<std::size_t>(d) * d);
  std::vector<double> e(static_cast<std::size_t>(d), 0.0);
  for (int j = 0; j < d; ++j) {
    e[static_cast<std::size_t>(j)] = 1.0;
    auto col = chol_solve(lower, d, e);
    for (int i = 0; i < d; ++i) inv[static_cast<std::size_t>(i) * d + j] = col[static_cast<std::size_t>(i)];
    e[static_cast<std::size_t>(j)] = 0.0;
  }
  return inv;
}

bool is_symmetric(std::span<const double> a, int d) {
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      const double x = a[static_cast<std::size_t>(i) * d + j];
      const double y = a[static_cast<std::size_t>(j) * d + i];
      if (std::abs(x - y) > 1e-12 * (1.0 + std::abs(x))) return false;
    }
  }
  return true;
}

// --- families ----------------------------------------------------------------

class GaussianFamily final : public ExpFamily {
 public:
  GaussianFamily() : ExpFamily("gaussian", 2) {}

  double cumulant(std::span<const double> t) const override {
    return 0.5 * std::log(M_PI) - 0.5 * std::log(-t[1]) - t[0] * t[0] / (4.0 * t[1]);
  }
  std::vector<double> grad_cumulant(std::span<const double> t) const override {
    const double mu = -t[0] / (2.0 * t[1]);
    const double var = -1.0 / (2.0 * t[1]);
    return {mu, var + mu * mu};
  }
  std::vector<double> grad_conjugate(std::span<const double> e) const override {
    const double var = e[1] - e[0] * e[0];
    return {e[0] / var, -1.0 / (2.0 * var)};
  }
  bool in_domain(std::span<const double> t) const override {
    return t.size() == 2 && all_finite(t) && t[1] < 0.0;
  }
  bool in_moment_domain(std::span<const double> e) const override {
    return e.size() == 2 && all_finite(e) && e[1] - e[0] * e[0] > 0.0;
  }
  std::vector<double> sufficient_stat(double x) const override { return {x, x * x}; }
  double carrier(double) const override { return 0.0; }
  double carrier_expectation(std::span<const double>) const override { return 0.0; }
  GridSpec default_grid(std::span<const double> t) const override {
    const double mu = -t[0] / (2.0 * t[1]);
    const double sd = std::sqrt(-1.0 / (2.0 * t[1]));
    return {mu - 8.0 * sd, mu + 8.0 * sd, 2001};
  }
};

class MvnFamily final : public ExpFamily {
 public:
  explicit MvnFamily(int d) : ExpFamily("mvn", d + d * d), d_(d) {
    if (d < 1) throw std::invalid_argument("mvn: dimension must be >= 1");
  }

  bool scalar_support() const override { return false; }

  double cumulant(std::span<const double> t) const override {
    auto [v, L] = split_factor(t);
    const auto ainv_v = chol_solve(L, d_, v);
    return 0.5 * d_ * std::log(M_PI) - 0.5 * chol_logdet(L, d_) + 0.25 * dot(v, ainv_v);
  }
  std::vector<double> grad_cumulant(std::span<const double> t) const override {
    auto [v, L] = split_factor(t);
    const auto mu = scaled(chol_solve(L, d_, v), 0.5);  // mu = A^{-1} v / 2
    const auto cov = scaled(chol_inverse(L, d_), 0.5);  // Sigma = A^{-1} / 2
    std::vector<double> eta(static_cast<std::size_t>(dim()));
    for (int i = 0; i < d_; ++i) eta[static_cast<std::size_t>(i)] = mu[static_cast<std::size_t>(i)];
    for (int i = 0; i < d_; ++i) {
      for (int j = 0; j < d_; ++j) {
        eta[static_cast<std::size_t>(d_ + i * d_ + j)] =
            cov[static_cast<std::size_t>(i) * d_ + j] +
            mu[static_cast<std::size_t>(i)] * mu[static_cast<std::size_t>(j)];
      }
    }
    return eta;
  }
  std::vector<double> grad_conjugate(std::span<const double> e) const override {
    const auto [mu, cov] = moments_of(e);
    std::vector<double> L;
    if (!cholesky(cov, d_, L)) {
      throw std::invalid_argument("mvn: moment parameter has non-SPD covariance");
    }
    const auto prec = chol_inverse(L, d_);  // Sigma^{-1}
    std::vector<double> theta(static_cast<std::size_t>(dim()));
    const auto v = chol_solve(L, d_, mu);
    for (int i = 0; i < d_; ++i) theta[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)];
    for (int i = 0; i < d_ * d_; ++i) {
      theta[static_cast<std::size_t>(d_ + i)] = -0.5 * prec[static_cast<std::size_t>(i)];
    }
    return theta;
  }
  bool in_domain(std::span<const double> t) const override {
    if (static_cast<int>(t.size()) != dim() || !all_finite(t)) return false;
    const auto m = t.subspan(static_cast<std::size_t>(d_));
    if (!is_symmetric(m, d_)) return false;
    std::vector<double> a(m.begin(), m.end());
    for (double& x : a) x = -x;  // A = -M must be SPD
    std::vector<double> L;
    return cholesky(a, d_, L);
  }
  bool in_moment_domain(std::span<const double> e) const override {
    if (static_cast<int>(e.size()) != dim() || !all_finite(e)) return false;
    const auto [mu, cov] = moments_of(e);
    (void)mu;
    if (!is_symmetric(cov, d_)) return false;
    std::vector<double> L;
    return cholesky(cov, d_, L);
  }
  double carrier_expectation(std::span<const double>) const override { return 0.0; }

 private:
  std::pair<std::vector<double>, std::vector<double>> split_factor(
      std::span<const double> t) const {
    std::vector<double> v(t.begin(), t.begin() + d_);
    std::vector<double> a(t.begin() + d_, t.end());
    for (double& x : a) x = -x;
    std::vector<double> L;
    if (!cholesky(a, d_, L)) {
      throw std::invalid_argument("mvn: natural parameter outside domain");
    }
    return {std::move(v), std::move(L)};
  }
  // (mu, Sigma) from eta = (mu, Sigma + mu mu^T).
  std::pair<std::vector<double>, std::vector<double>> moments_of(
      std::span<const double> e) const {
    std::vector<double> mu(e.begin(), e.begin() + d_);
    std::vector<double> cov(static_cast<std::size_t>(d_) * d_);
    for (int i = 0; i < d_; ++i) {
      for (int j = 0; j < d_; ++j) {
        cov[static_cast<std::size_t>(i) * d_ + j] =
            e[static_cast<std::size_t>(d_ + i * d_ + j)] -
            mu[static_cast<std::size_t>(i)] * mu[static_cast<std::size_t>(j)];
      }
    }
    return {std::move(mu), std::move(cov)};
  }
  static std::vector<double> scaled(std::vector<double> v, double s) {
    for (double& x : v) x *= s;
    return v;
  }

  int d_;
};

class ExponentialFamilyDist final : public ExpFamily {
 public:
  ExponentialFamilyDist() : ExpFamily("exponential", 1) {}

  double cumulant(std::span<const double> t) const override { return -std::log(-t[0]); }
  std::vector<double> grad_cumulant(std::span<const double> t) const override {
    return {-1.0 / t[0]};
  }
  std::vector<double> grad_conjugate(std::span<const double> e) const override {
    return {-1.0 / e[0]};
  }
  bool in_domain(std::span<const double> t) const override {
    return t.size() == 1 && std::isfinite(t[0]) && t[0] < 0.0;
  }
  bool in_moment_domain(std::span<const double> e) const override {
    return e.size() == 1 && std::isfinite(e[0]) && e[0] > 0.0;
  }
  std::vector<double> sufficient_stat(double x) const override { return {x}; }
  double carrier(double) const override { return 0.0; }
  double carrier_expectation(std::span<const double>) const override { return 0.0; }
  double log_density(double x, std::span<const double> t) const override {
    if (x < 0.0) return -kInf;
    return t[0] * x + std::log(-t[0]);
  }
  GridSpec default_grid(std::span<const double> t) const override {
    return {0.0, -50.0 / t[0], 2001};
  }
  std::optional<WeibullView> weibull_view(std::span<const double> t) const override {
    return WeibullView{1.0, -1.0 / t[0]};
  }
};

class RayleighFamily final : public ExpFamily {
 public:
  RayleighFamily() : ExpFamily("rayleigh", 1) {}

  double cumulant(std::span<const double> t) const override { return -std::log(-2.0 * t[0]); }
  std::vector<double> grad_cumulant(std::span<const double> t) const override {
    return {-1.0 / t[0]};
  }
  std::vector<double> grad_conjugate(std::span<const double> e) const override {
    return {-1.0 / e[0]};
  }
  bool in_domain(std::span<const double> t) const override {
    return t.size() == 1 && std::isfinite(t[0]) && t[0] < 0.0;
  }
  bool in_moment_domain(std::span<const double> e) const override {
    return e.size() == 1 && std::isfinite(e[0]) && e[0] > 0.0;
  }
  std::vector<double> sufficient_stat(double x) const override { return {x * x}; }
  double carrier(double x) const override { return std::log(x); }
  double carrier_expectation(std::span<const double> t) const override {
    const double sigma = std::sqrt(-0.5 / t[0]);
    return std::log(sigma) + 0.5 * (kLn2 - kEulerMascheroni);
  }
  double log_density(double x, std::span<const double> t) const override {
    if (x < 0.0) return -kInf;
    return t[0] * x * x - cumulant(t) + std::log(x);
  }
  GridSpec default_grid(std::span<const double> t) const override {
    const double sigma = std::sqrt(-0.5 / t[0]);
    return {0.0, 10.0 * sigma, 2001};
  }
  std::optional<WeibullView> weibull_view(std::span<const double> t) const override {
    return WeibullView{2.0, std::sqrt(-1.0 / t[0])};
  }
};

class WeibullFamily final : public ExpFamily {
 public:
  explicit WeibullFamily(double kappa) : ExpFamily("weibull_kappa", 1), kappa_(kappa) {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
      throw std::invalid_argument("weibull_kappa: shape must be positive and finite");
    }
  }

  double kappa() const { return kappa_; }

  double cumulant(std::span<const double> t) const override { return -std::log(-t[0]); }
  std::vector<double> grad_cumulant(std::span<const double> t) const override {
    return {-1.0 / t[0]};
  }
  std::vector<double> grad_conjugate(std::span<const double> e) const override {
    return {-1.0 / e[0]};
  }
  bool in_domain(std::span<const double> t) const override {
    return t.size() == 1 && std::isfinite(t[0]) && t[0] < 0.0;
  }
  bool in_moment_domain(std::span<const double> e) const override {
    return e.size() == 1 && std::isfinite(e[0]) && e[0] > 0.0;
  }
  std::vector<double> sufficient_stat(double x) const override {
    return {std::pow(x, kappa_)};
  }
  double carrier(double x) const override {
    return (kappa_ - 1.0) * std::log(x) + std::log(kappa_);
  }
  double carrier_expectation(std::span<const double> t) const override {
    const double sigma = scale_of(t);
    return (kappa_ - 1.0) * (std::log(sigma) - kEulerMascheroni / kappa_) +
           std::log(kappa_);
  }
  double log_density(double x, std::span<const double> t) const override {
    if (x < 0.0) return -kInf;
    return t[0] * std::pow(x, kappa_) - cumulant(t) + carrier(x);
  }
  GridSpec default_grid(std::span<const double> t) const override {
    const double sigma = scale_of(t);
    const double lo = kappa_ >= 1.0 ? 0.0 : sigma * std::pow(1e-12, 1.0 / kappa_);
    return {lo, sigma * std::pow(50.0, 1.0 / kappa_), 2001};
  }
  std::optional<WeibullView> weibull_view(std::span<const double> t) const override {
    return WeibullView{kappa_, scale_of(t)};
  }
  bool same(const ExpFamily& other) const override {
    const auto* w = dynamic_cast<const WeibullFamily*>(&other);
    return w != nullptr && w->kappa_ == kappa_;
  }

 private:
  double scale_of(std::span<const double> t) const {
    return std::pow(-1.0 / t[0], 1.0 / kappa_);
  }
  double kappa_;
};

class CategoricalFamily final : public ExpFamily {
 public:
  explicit CategoricalFamily(int atoms) : ExpFamily("categorical", atoms - 1), atoms_(atoms) {
    if (atoms < 2) throw std::invalid_argument("categorical: needs >= 2 atoms");
  }

  bool scalar_support() const override { return false; }

  double cumulant(std::span<const double> t) const override {
    std::vector<double> ex(t.size() + 1, 0.0);
    std::copy(t.begin(), t.end(), ex.begin());
    return log_sum_exp(ex);
  }
  std::vector<double> grad_cumulant(std::span<const double> t) const override {
    const double lse = cumulant(t);
    std::vector<double> eta(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) eta[i] = std::exp(t[i] - lse);
    return eta;
  }
  std::vector<double> grad_conjugate(std::span<const double> e) const override {
    double rest = 1.0;
    for (double v : e) rest -= v;
    std::vector<double> theta(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) theta[i] = std::log(e[i] / rest);
    return theta;
  }
  bool in_domain(std::span<const double> t) const override {
    return static_cast<int>(t.size()) == dim() && all_finite(t);
  }
  bool in_moment_domain(std::span<const double> e) const override {
    if (static_cast<int>(e.size()) != dim() || !all_finite(e)) return false;
    double sum = 0.0;
    for (double v : e) {
      if (!(v > 0.0)) return false;
      sum += v;
    }
    return sum < 1.0;
  }
  double carrier_expectation(std::span<const double>) const override { return 0.0; }

  int atoms() const { return atoms_; }

 private:
  int atoms_;
};

}  // namespace

double ExpFamily::conjugate(std::span<const double> eta) const {
  const auto theta = grad_conjugate(eta);
  return dot(theta, eta) - cumulant(theta);
}

std::vector<double> ExpFamily::sufficient_stat(double) const {
  throw std::logic_error(id() + ": no scalar sufficient statistic");
}

double ExpFamily::carrier(double) const {
  throw std::logic_error(id() + ": no scalar carrier term");
}

double ExpFamily::log_density(double x, std::span<const double> theta) const {
  return dot(theta, sufficient_stat(x)) - cumulant(theta) + carrier(x);
}

double ExpFamily::carrier_expectation(std::span<const double>) const {
  throw std::logic_error(id() + ": carrier expectation has no closed form");
}

GridSpec ExpFamily::default_grid(std::span<const double>) const {
  throw std::logic_error(id() + ": family has no scalar evaluation grid");
}

FamilyPtr gaussian_family() {
  static const auto fam = std::make_shared<const GaussianFamily>();
  return fam;
}

FamilyPtr mvn_family(int d) { return std::make_shared<const MvnFamily>(d); }

FamilyPtr exponential_family() {
  static const auto fam = std::make_shared<const ExponentialFamilyDist>();
  return fam;
}

FamilyPtr rayleigh_family() {
  static const auto fam = std::make_shared<const RayleighFamily>();
  return fam;
}

FamilyPtr weibull_family(double kappa) {
  return std::make_shared<const WeibullFamily>(kappa);
}

FamilyPtr categorical_family(int atoms) {
  return std::make_shared<const CategoricalFamily>(atoms);
}

FamilyPtr lookup_family(const std::string& id, std::optional<double> param) {
  if (id == "gaussian") return gaussian_family();
  if (id == "mvn") return mvn_family(param ? static_cast<int>(*param) : 1);
  if (id == "exponential") return exponential_family();
  if (id == "rayleigh") return rayleigh_family();
  if (id == "weibull_kappa") {
    if (!param) throw std::invalid_argument("weibull_kappa requires a shape parameter");
    return weibull_family(*param);
  }
  if (id == "categorical") {
    if (!param) throw std::invalid_argument("categorical requires an atom count");
    return categorical_family(static_cast<int>(*param));
  }
  throw std::invalid_argument("unknown exponential family id: " + id);
}

EFMember EFMember::make(FamilyPtr family, std::vector<double> theta) {
  if (!family) throw std::invalid_argument("EFMember: null family");
  if (!family->in_domain(theta)) {
    throw std::invalid_argument("EFMember: natural parameter outside domain of " +
                                family->id());
  }
  EFMember m;
  m.family = std::move(family);
  m.eta = m.family->grad_cumulant(theta);
  m.theta = std::move(theta);
  return m;
}

EFMember gaussian_member(double mu, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian: sigma must be positive");
  const double var = sigma * sigma;
  return EFMember::make(gaussian_family(), {mu / var, -0.5 / var});
}

EFMember mvn_member(std::span<const double> mu, std::span<const double> sigma_rowmajor) {
  const int d = static_cast<int>(mu.size());
  if (sigma_rowmajor.size() != mu.size() * mu.size()) {
    throw std::invalid_argument("mvn: covariance size mismatch");
  }
  std::vector<double> L;
  if (!is_symmetric(sigma_rowmajor, d) || !cholesky(sigma_rowmajor, d, L)) {
    throw std::invalid_argument("mvn: covariance must be symmetric positive-definite");
  }
  const auto prec = chol_inverse(L, d);
  const auto v = chol_solve(L, d, mu);
  std::vector<double> theta(static_cast<std::size_t>(d + d * d));
  for (int i = 0; i < d; ++i) theta[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)];
  for (int i = 0; i < d * d; ++i) {
    theta[static_cast<std::size_t>(d + i)] = -0.5 * prec[static_cast<std::size_t>(i)];
  }
  return EFMember::make(mvn_family(d), std::move(theta));
}

EFMember exponential_member(double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be positive");
  return EFMember::make(exponential_family(), {-rate});
}

EFMember rayleigh_member(double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("rayleigh: scale must be positive");
  return EFMember::make(rayleigh_family(), {-0.5 / (scale * scale)});
}

EFMember weibull_member(double kappa, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("weibull: scale must be positive");
  return EFMember::make(weibull_family(kappa), {-std::pow(scale, -kappa)});
}

EFMember member_from_moment(FamilyPtr family, std::vector<double> eta) {
  if (!family->in_moment_domain(eta)) {
    throw std::invalid_argument("member_from_moment: moment outside realizable set of " +
                                family->id());
  }
  return EFMember::make(family, family->grad_conjugate(eta));
}

std::pair<double, double> gaussian_params(const EFMember& m) {
  if (m.family->id() != "gaussian") {
    throw std::invalid_argument("gaussian_params: not a gaussian member");
  }
  const double mu = m.eta[0];
  return {mu, std::sqrt(m.eta[1] - mu * mu)};
}

std::vector<double> categorical_probs(const ExpFamily& fam, std::span<const double> theta) {
  if (fam.id() != "categorical") {
    throw std::invalid_argument("categorical_probs: not a categorical family");
  }
  std::vector<double> ex(theta.size() + 1, 0.0);
  std::copy(theta.begin(), theta.end(), ex.begin());
  const double lse = log_sum_exp(ex);
  std::vector<double> probs(theta.size() + 1);
  for (std::size_t i = 0; i < theta.size(); ++i) probs[i] = std::exp(theta[i] - lse);
  probs.back() = std::exp(-lse);
  return probs;
}

double cumulant(const ExpFamily& fam, std::span<const double> theta) {
  check_dim(fam, theta, "cumulant");
  if (!fam.in_domain(theta)) {
    throw std::invalid_argument("cumulant: parameter outside domain of " + fam.id());
  }
  return fam.cumulant(theta);
}

std::vector<double> grad_cumulant(const ExpFamily& fam, std::span<const double> theta) {
  check_dim(fam, theta, "grad_cumulant");
  if (!fam.in_domain(theta)) {
    throw std::invalid_argument("grad_cumulant: parameter outside domain of " + fam.id());
  }
  return fam.grad_cumulant(theta);
}

std::pair<std::vector<double>, double> legendre_dual(const ExpFamily& fam,
                                                     std::span<const double> eta) {
  check_dim(fam, eta, "legendre_dual");
  if (!fam.in_moment_domain(eta)) {
    throw std::invalid_argument("legendre_dual: moment outside realizable set of " +
                                fam.id());
  }
  auto theta = fam.grad_conjugate(eta);
  const double fstar = dot(theta, eta) - fam.cumulant(theta);
  return {std::move(theta), fstar};
}

double ef_entropy(const EFMember& m) {
  return -m.family->conjugate(m.eta) - m.family->carrier_expectation(m.theta);
}

double ef_kld(const EFMember& p, const EFMember& q) {
  if (!p.family->same(*q.family)) {
    throw std::invalid_argument("ef_kld: members of different families");
  }
  return q.family->cumulant(q.theta) + p.family->conjugate(p.eta) - dot(q.theta, p.eta);
}

double semi_closed_cross_entropy(const MomentSummary& p_summary, const EFMember& q) {
  if (p_summary.moment.size() != q.theta.size()) {
    throw std::invalid_argument("semi_closed_cross_entropy: moment dimension mismatch");
  }
  return q.family->cumulant(q.theta) - dot(p_summary.moment, q.theta) -
         p_summary.carrier_expectation;
}

double semi_closed_kld(const MomentSummary& p_summary, const EFMember& q) {
  return semi_closed_cross_entropy(p_summary, q) - p_summary.entropy;
}

double weibull_kld(double kappa1, double scale1, double kappa2, double scale2) {
  if (!(kappa1 > 0.0 && kappa2 > 0.0 && scale1 > 0.0 && scale2 > 0.0)) {
    throw std::invalid_argument("weibull_kld: parameters must be positive");
  }
  return std::log(kappa1) - kappa1 * std::log(scale1) -
         (std::log(kappa2) - kappa2 * std::log(scale2)) +
         (kappa1 - kappa2) * (std::log(scale1) - kEulerMascheroni / kappa1) +
         std::pow(scale1 / scale2, kappa2) * std::tgamma(kappa2 / kappa1 + 1.0) - 1.0;
}

double cross_family_kld(const EFMember& p, const EFMember& q) {
  if (p.family->same(*q.family)) return ef_kld(p, q);
  const auto vp = p.family->weibull_view(p.theta);
  const auto vq = q.family->weibull_view(q.theta);
  if (!vp || !vq) {
    throw std::invalid_argument("cross_family_kld: unsupported family pair " +
                                p.family->id() + " / " + q.family->id());
  }
  return weibull_kld(vp->kappa, vp->scale, vq->kappa, vq->scale);
}

namespace {

class SquareFn final : public ConvexFunction {
 public:
  double value(std::span<const double> x) const override {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
  }
  std::vector<double> gradient(std::span<const double> x) const override {
    std::vector<double> g(x.begin(), x.end());
    for (double& v : g) v *= 2.0;
    return g;
  }
};

class HalfSquaredNormFn final : public ConvexFunction {
 public:
  double value(std::span<const double> x) const override {
    double s = 0.0;
    for (double v : x) s += v * v;
    return 0.5 * s;
  }
  std::vector<double> gradient(std::span<const double> x) const override {
    return {x.begin(), x.end()};
  }
};

class LogSumExpFn final : public ConvexFunction {
 public:
  double value(std::span<const double> x) const override { return log_sum_exp(x); }
  std::vector<double> gradient(std::span<const double> x) const override {
    const double lse = log_sum_exp(x);
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = std::exp(x[i] - lse);
    return g;
  }
};

class FamilyCumulantFn final : public ConvexFunction {
 public:
  explicit FamilyCumulantFn(FamilyPtr fam) : fam_(std::move(fam)) {}
  double value(std::span<const double> x) const override { return fam_->cumulant(x); }
  std::vector<double> gradient(std::span<const double> x) const override {
    return fam_->grad_cumulant(x);
  }
  bool in_domain(std::span<const double> x) const override { return fam_->in_domain(x); }

 private:
  FamilyPtr fam_;
};

}  // namespace

std::shared_ptr<const ConvexFunction> make_convex(const std::string& id) {
  if (id == "square") return std::make_shared<const SquareFn>();
  if (id == "half_squared_norm") return std::make_shared<const HalfSquaredNormFn>();
  if (id == "lse") return std::make_shared<const LogSumExpFn>();
  throw std::invalid_argument("unknown convex generator id: " + id);
}

std::shared_ptr<const ConvexFunction> convex_from_family(FamilyPtr family) {
  return std::make_shared<const FamilyCumulantFn>(std::move(family));
}

double bregman(const ConvexFunction& F, std::span<const double> x,
               std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("bregman: dimension mismatch");
  if (!F.in_domain(x) || !F.in_domain(y)) {
    throw std::invalid_argument("bregman: point outside generator domain");
  }
  const auto gy = F.gradient(y);
  double s = F.value(x) - F.value(y);
  for (std::size_t i = 0; i < x.size(); ++i) s -= (x[i] - y[i]) * gy[i];
  return s;
}

}  // namespace infradius
