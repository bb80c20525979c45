#include "infradius/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "infradius/means.hpp"

namespace infradius {

Density::Density() : kind_(Kind::Discrete), repr_(DiscreteRepr{{1.0}, {1.0}, true}) {}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 3) throw std::invalid_argument("linspace: need at least 3 points");
  if (!(hi > lo)) throw std::invalid_argument("linspace: hi must exceed lo");
  std::vector<double> xs(static_cast<std::size_t>(n));
  const double h = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = lo + h * i;
  xs.back() = hi;
  return xs;
}

std::vector<double> geomspace(double lo, double hi, int n) {
  if (n < 3) throw std::invalid_argument("geomspace: need at least 3 points");
  if (!(lo > 0.0) || !(hi > lo)) {
    throw std::invalid_argument("geomspace: need 0 < lo < hi");
  }
  std::vector<double> xs(static_cast<std::size_t>(n));
  const double step = (std::log(hi) - std::log(lo)) / (n - 1);
  for (int i = 0; i < n; ++i) {
    xs[static_cast<std::size_t>(i)] = std::exp(std::log(lo) + step * i);
  }
  xs.front() = lo;
  xs.back() = hi;
  return xs;
}

GridSpec merge_grids(const GridSpec& a, const GridSpec& b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi), std::max(a.n, b.n)};
}

std::vector<double> trapezoid_weights(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n < 2) throw std::invalid_argument("trapezoid_weights: need at least 2 points");
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(xs[i + 1] > xs[i])) {
      throw std::invalid_argument("trapezoid_weights: xs must be strictly increasing");
    }
    const double half = 0.5 * (xs[i + 1] - xs[i]);
    w[i] += half;
    w[i + 1] += half;
  }
  return w;
}

double integrate_values(std::span<const double> quad_weights,
                        std::span<const double> values) {
  if (quad_weights.size() != values.size()) {
    throw std::invalid_argument("integrate: length mismatch");
  }
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw std::invalid_argument("integrate: non-finite value in integrand");
    }
    const double t = quad_weights[i] * values[i];
    const double y = sum + t;
    if (std::abs(sum) >= std::abs(t)) {
      comp += (sum - y) + t;
    } else {
      comp += (t - y) + sum;
    }
    sum = y;
  }
  return sum + comp;
}

double integrate(const SupportFunction& f) {
  return integrate_values(f.quad_weights, f.values);
}

// --- Density -----------------------------------------------------------------

Density Density::discrete(std::vector<double> probs) {
  if (probs.empty()) throw std::invalid_argument("discrete: empty pmf");
  double sum = 0.0;
  bool full = true;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw std::invalid_argument("discrete: probabilities must be finite and >= 0");
    }
    full = full && p > kZeroFloor;
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-10) {
    throw std::invalid_argument("discrete: probabilities must sum to 1 within 1e-10");
  }
  for (double& p : probs) p /= sum;
  Density d;
  d.kind_ = Kind::Discrete;
  d.repr_ = DiscreteRepr{std::move(probs), {}, full};
  auto& repr = std::get<DiscreteRepr>(d.repr_);
  repr.ones.assign(repr.probs.size(), 1.0);
  return d;
}

Density Density::grid(std::vector<double> xs, std::vector<double> values) {
  if (xs.size() != values.size()) throw std::invalid_argument("grid: length mismatch");
  auto qw = trapezoid_weights(xs);
  bool full = true;
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("grid: values must be finite and >= 0");
    }
    full = full && v > kZeroFloor;
  }
  const double z = integrate_values(qw, values);
  if (!(z > 0.0)) throw std::invalid_argument("grid: density integrates to zero");
  for (double& v : values) v /= z;
  Density d;
  d.kind_ = Kind::Grid;
  d.repr_ = GridRepr{std::move(xs), std::move(values), std::move(qw), z, full};
  return d;
}

Density Density::expfam(EFMember member) {
  if (!member.family) throw std::invalid_argument("expfam: null family");
  Density d;
  d.kind_ = Kind::ExpFam;
  d.repr_ = std::move(member);
  return d;
}

Density Density::mixture(std::vector<double> weights, std::vector<Density> components) {
  if (weights.size() != components.size() || weights.empty()) {
    throw std::invalid_argument("mixture: weights/components mismatch");
  }
  validate_weights(weights);
  Density d;
  d.kind_ = Kind::Mixture;
  d.repr_ = MixtureRepr{std::move(weights), std::move(components)};
  return d;
}

const std::vector<double>& Density::values() const {
  if (kind_ == Kind::Discrete) return std::get<DiscreteRepr>(repr_).probs;
  if (kind_ == Kind::Grid) return std::get<GridRepr>(repr_).values;
  throw std::logic_error("values(): density is not in numeric form");
}

const std::vector<double>& Density::xs() const {
  if (kind_ == Kind::Grid) return std::get<GridRepr>(repr_).xs;
  throw std::logic_error("xs(): not a grid density");
}

const std::vector<double>& Density::quad_weights() const {
  if (kind_ == Kind::Discrete) return std::get<DiscreteRepr>(repr_).ones;
  if (kind_ == Kind::Grid) return std::get<GridRepr>(repr_).quad_weights;
  throw std::logic_error("quad_weights(): density is not in numeric form");
}

double Density::raw_normalizer() const {
  if (kind_ == Kind::Grid) return std::get<GridRepr>(repr_).raw_normalizer;
  return 1.0;
}

bool Density::full_support() const {
  if (kind_ == Kind::Discrete) return std::get<DiscreteRepr>(repr_).full_support;
  if (kind_ == Kind::Grid) return std::get<GridRepr>(repr_).full_support;
  return true;
}

const EFMember& Density::ef() const {
  if (kind_ != Kind::ExpFam) throw std::logic_error("ef(): not an expfam density");
  return std::get<EFMember>(repr_);
}

const std::vector<double>& Density::mixture_weights() const {
  if (kind_ != Kind::Mixture) throw std::logic_error("mixture_weights(): not a mixture");
  return std::get<MixtureRepr>(repr_).weights;
}

const std::vector<Density>& Density::components() const {
  if (kind_ != Kind::Mixture) throw std::logic_error("components(): not a mixture");
  return std::get<MixtureRepr>(repr_).components;
}

double Density::operator()(double x) const {
  switch (kind_) {
    case Kind::Discrete: {
      const auto& probs = std::get<DiscreteRepr>(repr_).probs;
      const auto i = static_cast<std::size_t>(x);
      if (x < 0.0 || i >= probs.size() || static_cast<double>(i) != x) {
        throw std::invalid_argument("discrete density evaluated off its atoms");
      }
      return probs[i];
    }
    case Kind::Grid: {
      const auto& g = std::get<GridRepr>(repr_);
      if (x <= g.xs.front()) return x == g.xs.front() ? g.values.front() : 0.0;
      if (x >= g.xs.back()) return x == g.xs.back() ? g.values.back() : 0.0;
      const auto it = std::upper_bound(g.xs.begin(), g.xs.end(), x);
      const auto hi = static_cast<std::size_t>(it - g.xs.begin());
      const double t = (x - g.xs[hi - 1]) / (g.xs[hi] - g.xs[hi - 1]);
      return g.values[hi - 1] + t * (g.values[hi] - g.values[hi - 1]);
    }
    case Kind::ExpFam: {
      const auto& m = std::get<EFMember>(repr_);
      return std::exp(m.family->log_density(x, m.theta));
    }
    case Kind::Mixture: {
      const auto& mix = std::get<MixtureRepr>(repr_);
      double s = 0.0;
      for (std::size_t i = 0; i < mix.weights.size(); ++i) {
        s += mix.weights[i] * mix.components[i](x);
      }
      return s;
    }
  }
  throw std::logic_error("unreachable");
}

GridSpec Density::natural_grid() const {
  switch (kind_) {
    case Kind::Grid: {
      const auto& g = std::get<GridRepr>(repr_);
      return {g.xs.front(), g.xs.back(), static_cast<int>(g.xs.size())};
    }
    case Kind::ExpFam: {
      const auto& m = std::get<EFMember>(repr_);
      return m.family->default_grid(m.theta);
    }
    case Kind::Mixture: {
      const auto& mix = std::get<MixtureRepr>(repr_);
      GridSpec spec = mix.components.front().natural_grid();
      for (std::size_t i = 1; i < mix.components.size(); ++i) {
        spec = merge_grids(spec, mix.components[i].natural_grid());
      }
      return spec;
    }
    case Kind::Discrete:
      throw std::logic_error("natural_grid(): discrete density has no grid");
  }
  throw std::logic_error("unreachable");
}

namespace {

// Categorical expfam members and mixtures of discrete densities collapse to
// Discrete rather than Grid.
bool is_discrete_like(const Density& d) {
  switch (d.kind()) {
    case Density::Kind::Discrete:
      return true;
    case Density::Kind::ExpFam:
      return !d.ef().family->scalar_support();
    case Density::Kind::Mixture:
      return std::all_of(d.components().begin(), d.components().end(), is_discrete_like);
    case Density::Kind::Grid:
      return false;
  }
  return false;
}

}  // namespace

Density Density::materialize(const std::optional<GridSpec>& spec) const {
  switch (kind_) {
    case Kind::Discrete:
    case Kind::Grid:
      return *this;
    case Kind::ExpFam: {
      const auto& m = std::get<EFMember>(repr_);
      if (!m.family->scalar_support()) {
        if (m.family->id() == "categorical") {
          return discrete(categorical_probs(*m.family, m.theta));
        }
        throw std::invalid_argument("materialize: family " + m.family->id() +
                                    " has no scalar support");
      }
      const GridSpec gs = spec.value_or(natural_grid());
      return materialize_at(linspace(gs.lo, gs.hi, gs.n));
    }
    case Kind::Mixture: {
      const auto& mix = std::get<MixtureRepr>(repr_);
      std::vector<Density> parts;
      parts.reserve(mix.components.size());
      if (is_discrete_like(*this)) {
        for (const auto& c : mix.components) parts.push_back(c.materialize());
      } else {
        const GridSpec gs = spec.value_or(natural_grid());
        for (const auto& c : mix.components) parts.push_back(c.materialize(gs));
      }
      return infradius::mixture(WeightedSet(mix.weights, std::move(parts)));
    }
  }
  throw std::logic_error("unreachable");
}

Density Density::materialize_at(std::vector<double> xs) const {
  switch (kind_) {
    case Kind::ExpFam: {
      const auto& m = std::get<EFMember>(repr_);
      std::vector<double> vals(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) {
        vals[i] = std::exp(m.family->log_density(xs[i], m.theta));
      }
      return grid(std::move(xs), std::move(vals));
    }
    case Kind::Mixture: {
      const auto& mix = std::get<MixtureRepr>(repr_);
      std::vector<Density> parts;
      parts.reserve(mix.components.size());
      for (const auto& c : mix.components) parts.push_back(c.materialize_at(xs));
      return infradius::mixture(WeightedSet(mix.weights, std::move(parts)));
    }
    case Kind::Grid: {
      const auto& g = std::get<GridRepr>(repr_);
      if (xs.size() == g.xs.size() &&
          std::equal(xs.begin(), xs.end(), g.xs.begin(),
                     [](double a, double b) { return std::abs(a - b) <= 1e-12; })) {
        return *this;
      }
      throw std::invalid_argument("materialize_at: grid resampling is not supported");
    }
    case Kind::Discrete:
      throw std::invalid_argument("materialize_at: discrete density has no grid");
  }
  throw std::logic_error("unreachable");
}

// --- alignment ---------------------------------------------------------------

namespace {

bool same_xs(std::span<const double> a, std::span<const double> b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(),
                    [](double x, double y) { return std::abs(x - y) <= 1e-12; });
}

}  // namespace

AlignedSet align(std::span<const Density> ds, const std::optional<GridSpec>& spec) {
  if (ds.empty()) throw std::invalid_argument("align: empty density list");

  bool any_continuous = false;
  bool any_discrete = false;
  for (const auto& d : ds) {
    if (is_discrete_like(d)) {
      any_discrete = true;
    } else {
      any_continuous = true;
    }
  }
  if (any_continuous && any_discrete) {
    throw std::invalid_argument("align: discrete and continuous densities are incompatible");
  }

  AlignedSet out;
  if (any_discrete) {
    out.discrete = true;
    std::size_t len = 0;
    for (const auto& d : ds) {
      Density num = d.materialize();
      if (len == 0) {
        len = num.values().size();
        out.quad_weights.assign(len, 1.0);
      } else if (num.values().size() != len) {
        throw std::invalid_argument("align: discrete supports differ in size");
      }
      out.values.push_back(num.values());
    }
    return out;
  }

  // Continuous: find or build the common grid.
  out.discrete = false;
  std::optional<std::vector<double>> xs;
  for (const auto& d : ds) {
    if (d.kind() == Density::Kind::Grid) {
      if (!xs) {
        xs = d.xs();
      } else if (!same_xs(*xs, d.xs())) {
        throw std::invalid_argument("align: grid densities live on different grids");
      }
    }
  }
  if (!xs) {
    GridSpec gs;
    if (spec) {
      gs = *spec;
    } else {
      gs = ds.front().natural_grid();
      for (std::size_t i = 1; i < ds.size(); ++i) {
        gs = merge_grids(gs, ds[i].natural_grid());
      }
    }
    xs = linspace(gs.lo, gs.hi, gs.n);
  }
  out.xs = *xs;
  out.quad_weights = trapezoid_weights(out.xs);
  for (const auto& d : ds) {
    Density num = d.kind() == Density::Kind::Grid ? d : d.materialize_at(out.xs);
    out.values.push_back(num.values());
  }
  return out;
}

AlignedSet align_pair(const Density& a, const Density& b,
                      const std::optional<GridSpec>& spec) {
  const Density ds[2] = {a, b};
  return align(std::span<const Density>(ds, 2), spec);
}

// --- weighted sets -----------------------------------------------------------

WeightedSet::WeightedSet(std::vector<double> w, std::vector<Density> m)
    : weights(std::move(w)), members(std::move(m)) {
  if (weights.empty() || weights.size() != members.size()) {
    throw std::invalid_argument("WeightedSet: weights/members mismatch");
  }
  validate_weights(weights);
}

Density mixture(const WeightedSet& set) {
  const AlignedSet a = align(set.members);
  const std::size_t len = a.values.front().size();
  const std::size_t n = set.members.size();
  std::vector<double> out(len);
  std::vector<double> terms(n);
  for (std::size_t j = 0; j < len; ++j) {
    for (std::size_t i = 0; i < n; ++i) terms[i] = set.weights[i] * a.values[i][j];
    out[j] = exact_sum(terms);
  }
  const double z = integrate_values(a.quad_weights, out);
  if (std::abs(z - 1.0) > 1e-10) {
    throw std::logic_error("mixture: normalization drifted beyond 1e-10");
  }
  if (a.discrete) {
    for (double& v : out) v /= z;
    return Density::discrete(std::move(out));
  }
  return Density::grid(a.xs, std::move(out));
}

EnvelopeResult upper_envelope(const WeightedSet& set) {
  const AlignedSet a = align(set.members);
  const std::size_t len = a.values.front().size();
  std::vector<double> env(len, 0.0);
  for (const auto& row : a.values) {
    for (std::size_t j = 0; j < len; ++j) env[j] = std::max(env[j], row[j]);
  }
  const double z = integrate_values(a.quad_weights, env);
  if (a.discrete) {
    for (double& v : env) v /= z;
    return {Density::discrete(std::move(env)), z};
  }
  Density d = Density::grid(a.xs, std::move(env));
  return {std::move(d), z};
}

}  // namespace infradius
