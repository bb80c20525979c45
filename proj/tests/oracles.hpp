#pragma once

// Test-only oracles, independent of the library paths they check: closed-form
// Gaussian/exponential identities via std::erf and elementary algebra, an
// independent Simpson integrator, and deterministic random generators.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

inline double gaussian_pdf(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * kPi));
}

inline double gaussian_entropy(double sigma) {
  return 0.5 * std::log(2.0 * kPi * std::exp(1.0) * sigma * sigma);
}

inline double gaussian_kld(double mu1, double s1, double mu2, double s2) {
  const double r = s1 / s2;
  const double d = (mu1 - mu2) / s2;
  return std::log(s2 / s1) + 0.5 * (r * r + d * d) - 0.5;
}

// Bhattacharyya coefficient (alpha = 1/2) between two normals.
inline double gaussian_bhattacharyya(double mu1, double s1, double mu2, double s2) {
  const double v1 = s1 * s1;
  const double v2 = s2 * s2;
  const double d = mu1 - mu2;
  return std::sqrt(2.0 * s1 * s2 / (v1 + v2)) * std::exp(-0.25 * d * d / (v1 + v2));
}

// Total variation between equal-variance normals: erf(|dmu| / (2 sqrt(2) s)).
inline double gaussian_tv_equal_sigma(double dmu, double sigma) {
  return std::erf(std::abs(dmu) / (2.0 * std::sqrt(2.0) * sigma));
}

inline double exponential_kld(double rate1, double rate2) {
  return rate2 / rate1 - std::log(rate2 / rate1) - 1.0;
}

inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2 == 1) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + h * i) * (i % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

// Strictly positive pmf with entries bounded away from zero, so identity
// checks at 1e-8 are not dominated by cancellation.
inline std::vector<double> random_pmf(std::mt19937_64& rng, int n) {
  std::vector<double> p(static_cast<std::size_t>(n));
  double sum = 0.0;
  for (double& v : p) {
    v = uniform(rng, 0.05, 1.0);
    sum += v;
  }
  for (double& v : p) v /= sum;
  return p;
}

// Trapezoid KLD between two log-density evaluators. Working in log space keeps
// far tails meaningful where the density itself underflows to zero.
inline double logspace_trapezoid_kld(const std::function<double(double)>& log_p,
                                     const std::function<double(double)>& log_q,
                                     const std::vector<double>& xs) {
  double s = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const double lp = log_p(xs[j]);
    if (lp < -700.0) continue;  // p underflows; the term is numerically zero
    const double w = 0.5 * ((j + 1 < xs.size() ? xs[j + 1] : xs[j]) -
                            (j > 0 ? xs[j - 1] : xs[j]));
    s += w * std::exp(lp) * (lp - log_q(xs[j]));
  }
  return s;
}

}  // namespace oracle
