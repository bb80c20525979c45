#include "infradius/numerics.hpp"

#include <array>
#include <atomic>
#include <bit>
#include <stdexcept>
#include <thread>

namespace infradius {

double kahan_sum(std::span<const double> terms) {
  double sum = 0.0;
  double comp = 0.0;
  for (double t : terms) {
    double y = sum + t;
    if (std::abs(sum) >= std::abs(t)) {
      comp += (sum - y) + t;
    } else {
      comp += (t - y) + sum;
    }
    sum = y;
  }
  return sum + comp;
}

namespace {

// Fixed-point accumulator spanning the full double range: bit b of the sum has
// weight 2^(b - 1074). 40 limbs leave headroom for ~2^400 addends.
struct SuperAccumulator {
  static constexpr int kLimbs = 40;
  std::array<std::uint64_t, kLimbs> limb{};

  void add(double v) {
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    const std::uint64_t frac = bits & ((std::uint64_t{1} << 52) - 1);
    const int raw_exp = static_cast<int>((bits >> 52) & 0x7ff);
    const std::uint64_t mantissa =
        raw_exp == 0 ? frac : (frac | (std::uint64_t{1} << 52));
    if (mantissa == 0) return;
    // value = mantissa * 2^(e_eff - 1075); lsb lands at bit offset e_eff - 1.
    const int offset = (raw_exp == 0 ? 1 : raw_exp) - 1;
    const int idx = offset >> 6;
    const int shift = offset & 63;
    add_at(idx, mantissa << shift);
    if (shift != 0) add_at(idx + 1, mantissa >> (64 - shift));
  }

  void add_at(int idx, std::uint64_t chunk) {
    while (chunk != 0) {
      const std::uint64_t prev = limb[static_cast<std::size_t>(idx)];
      limb[static_cast<std::size_t>(idx)] = prev + chunk;
      if (limb[static_cast<std::size_t>(idx)] >= prev) break;
      chunk = 1;  // carry
      ++idx;
    }
  }

  bool get_bit(long pos) const {
    return (limb[static_cast<std::size_t>(pos >> 6)] >> (pos & 63)) & 1u;
  }

  // Bits pos .. pos+count-1 (count <= 53) as an integer.
  std::uint64_t get_bits(long pos, int count) const {
    const auto li = static_cast<std::size_t>(pos >> 6);
    const int off = static_cast<int>(pos & 63);
    std::uint64_t v = limb[li] >> off;
    if (off + count > 64 && li + 1 < kLimbs) v |= limb[li + 1] << (64 - off);
    return v & ((std::uint64_t{1} << count) - 1);
  }

  // Round-to-nearest-even conversion of the accumulated value.
  double to_double() const {
    int top = kLimbs - 1;
    while (top >= 0 && limb[static_cast<std::size_t>(top)] == 0) --top;
    if (top < 0) return 0.0;
    const int msb = 63 - std::countl_zero(limb[static_cast<std::size_t>(top)]);
    const long high_bit = static_cast<long>(top) * 64 + msb;
    if (high_bit < 53) {
      return std::ldexp(static_cast<double>(limb[0]), -1074);  // exact
    }
    const long lsb = high_bit - 52;
    std::uint64_t significand = get_bits(lsb, 53);
    const long round_pos = lsb - 1;
    const bool round_bit = get_bit(round_pos);
    bool sticky = false;
    const auto cut_limb = static_cast<std::size_t>(round_pos >> 6);
    const int cut_off = static_cast<int>(round_pos & 63);
    for (std::size_t i = 0; i < cut_limb && !sticky; ++i) sticky = limb[i] != 0;
    if (!sticky && cut_off > 0) {
      sticky = (limb[cut_limb] & ((std::uint64_t{1} << cut_off) - 1)) != 0;
    }
    long exp2 = lsb - 1074;
    if (round_bit && (sticky || (significand & 1u))) {
      ++significand;
      if (significand == (std::uint64_t{1} << 53)) {
        significand >>= 1;
        ++exp2;
      }
    }
    return std::ldexp(static_cast<double>(significand), static_cast<int>(exp2));
  }
};

}  // namespace

double exact_sum(std::span<const double> terms) {
  SuperAccumulator acc;
  for (double t : terms) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
      throw std::invalid_argument("exact_sum: terms must be finite and nonnegative");
    }
    acc.add(t);
  }
  return acc.to_double();
}

double log_sum_exp(std::span<const double> exponents) {
  double m = -kInf;
  for (double a : exponents) m = std::max(m, a);
  if (!std::isfinite(m)) return m;  // all -inf, or an inf dominates
  double s = 0.0;
  for (double a : exponents) s += std::exp(a - m);
  return m + std::log(s);
}

double weighted_power_mean(std::span<const double> weights,
                           std::span<const double> values, double alpha) {
  if (weights.size() != values.size()) {
    throw std::invalid_argument("weighted_power_mean: length mismatch");
  }
  double vmax = 0.0;
  bool any_zero = false;
  for (double v : values) {
    vmax = std::max(vmax, v);
    any_zero = any_zero || v == 0.0;
  }
  if (vmax == 0.0) return 0.0;
  if (alpha < 0.0 && any_zero) return 0.0;  // continuous extension
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double r = values[i] / vmax;
    s += r > 0.0 ? weights[i] * std::pow(r, alpha) : 0.0;
  }
  return vmax * std::pow(s, 1.0 / alpha);
}

namespace {
std::atomic<int> g_threads{1};
}

void set_thread_count(int n) {
  if (n < 1) throw std::invalid_argument("thread count must be >= 1");
  g_threads.store(n);
}

int thread_count() { return g_threads.load(); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const int nt = thread_count();
  if (nt <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(nt), n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::atomic<std::size_t> next{0};
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace infradius
