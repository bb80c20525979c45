#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace infradius {

inline constexpr double kEulerMascheroni = 0.57721566490153286061;
inline constexpr double kLn2 = 0.69314718055994530942;

// Values below this threshold are treated as exact zeros of a density.
inline constexpr double kZeroFloor = 1e-300;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// p*log(p) with the 0*log(0) = 0 convention.
inline double plogp(double p) {
  return p > kZeroFloor ? p * std::log(p) : 0.0;
}

// p*log(p/q): 0 when p is zero (regardless of q), +inf when p > 0 and q is zero.
inline double plogr(double p, double q) {
  if (p <= kZeroFloor) return 0.0;
  if (q <= kZeroFloor) return kInf;
  return p * std::log(p / q);
}

// Compensated (Kahan-Neumaier) left-to-right summation.
double kahan_sum(std::span<const double> terms);

// Correctly rounded sum of nonnegative doubles via a fixed-point
// superaccumulator. The result depends only on the multiset of addends, so it
// is bit-identical under any permutation of the inputs.
double exact_sum(std::span<const double> terms);

// log(sum_i exp(a_i)) shifted by the max exponent; tolerates -inf entries.
double log_sum_exp(std::span<const double> exponents);

// Weighted power mean (sum_i w_i v_i^alpha)^(1/alpha) evaluated with
// max-scaling so that large |alpha| neither overflows nor collapses to zero.
double weighted_power_mean(std::span<const double> weights,
                           std::span<const double> values, double alpha);

// Number of worker threads used by opt-in parallel loops (default 1).
void set_thread_count(int n);
int thread_count();

// Runs fn(i) for i in [0, n). Results must be written to disjoint slots so the
// outcome is independent of the thread schedule.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace infradius
