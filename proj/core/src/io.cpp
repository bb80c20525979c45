#include "infradius/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "io_detail.hpp"

namespace infradius {

namespace detail {

using nlohmann::json;

namespace {

json grid_to_json(const Density& d) {
  return json{{"type", "grid"}, {"xs", d.xs()}, {"values", d.values()}};
}

double require_number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw std::invalid_argument(std::string("density json: missing numeric field '") +
                                key + "'");
  }
  return j.at(key).get<double>();
}

}  // namespace

json member_to_json(const EFMember& m) {
  const std::string& id = m.family->id();
  if (id == "gaussian") {
    const auto [mu, sigma] = gaussian_params(m);
    return json{{"type", "gaussian"}, {"mu", mu}, {"sigma", sigma}};
  }
  if (id == "exponential") {
    return json{{"type", "exponential"}, {"rate", -m.theta[0]}};
  }
  if (id == "rayleigh") {
    return json{{"type", "rayleigh"}, {"scale", std::sqrt(-0.5 / m.theta[0])}};
  }
  if (id == "weibull_kappa") {
    const auto view = m.family->weibull_view(m.theta);
    return json{{"type", "weibull"}, {"shape", view->kappa}, {"scale", view->scale}};
  }
  if (id == "mvn") {
    const int total = m.family->dim();
    int d = 1;
    while (d + d * d < total) ++d;
    std::vector<double> mu(m.eta.begin(), m.eta.begin() + d);
    std::vector<std::vector<double>> sigma(static_cast<std::size_t>(d),
                                           std::vector<double>(static_cast<std::size_t>(d)));
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        sigma[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            m.eta[static_cast<std::size_t>(d + i * d + j)] -
            mu[static_cast<std::size_t>(i)] * mu[static_cast<std::size_t>(j)];
      }
    }
    return json{{"type", "mvn"}, {"mu", mu}, {"sigma", sigma}};
  }
  return json{{"type", "expfam"}, {"family", id}, {"theta", m.theta}};
}

json density_to_json(const Density& d) {
  switch (d.kind()) {
    case Density::Kind::Discrete:
      return json{{"type", "discrete"}, {"probs", d.values()}};
    case Density::Kind::Grid:
      return grid_to_json(d);
    case Density::Kind::ExpFam:
      return member_to_json(d.ef());
    case Density::Kind::Mixture: {
      json comps = json::array();
      for (const auto& c : d.components()) comps.push_back(density_to_json(c));
      return json{{"type", "mixture"}, {"weights", d.mixture_weights()},
                  {"components", comps}};
    }
  }
  throw std::logic_error("unreachable");
}

Density density_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type")) {
    throw std::invalid_argument("density json: expected an object with a 'type' field");
  }
  const std::string type = j.at("type").get<std::string>();
  if (type == "discrete") {
    return Density::discrete(j.at("probs").get<std::vector<double>>());
  }
  if (type == "grid") {
    if (j.contains("xs")) {
      return Density::grid(j.at("xs").get<std::vector<double>>(),
                           j.at("values").get<std::vector<double>>());
    }
    const GridSpec gs{require_number(j, "lo"), require_number(j, "hi"),
                      static_cast<int>(require_number(j, "n"))};
    return density_from_json(j.at("family")).materialize(gs);
  }
  if (type == "gaussian") {
    return Density::expfam(gaussian_member(require_number(j, "mu"),
                                           require_number(j, "sigma")));
  }
  if (type == "exponential") {
    return Density::expfam(exponential_member(require_number(j, "rate")));
  }
  if (type == "rayleigh") {
    return Density::expfam(rayleigh_member(require_number(j, "scale")));
  }
  if (type == "weibull") {
    return Density::expfam(weibull_member(require_number(j, "shape"),
                                          require_number(j, "scale")));
  }
  if (type == "mvn") {
    const auto mu = j.at("mu").get<std::vector<double>>();
    const auto rows = j.at("sigma").get<std::vector<std::vector<double>>>();
    std::vector<double> sigma;
    for (const auto& row : rows) sigma.insert(sigma.end(), row.begin(), row.end());
    return Density::expfam(mvn_member(mu, sigma));
  }
  if (type == "mixture") {
    auto weights = j.at("weights").get<std::vector<double>>();
    std::vector<Density> comps;
    for (const auto& cj : j.at("components")) comps.push_back(density_from_json(cj));
    return Density::mixture(std::move(weights), std::move(comps));
  }
  if (type == "expfam") {
    const std::string id = j.at("family").get<std::string>();
    std::optional<double> param;
    if (j.contains("kappa")) param = j.at("kappa").get<double>();
    if (j.contains("atoms")) param = j.at("atoms").get<double>();
    return Density::expfam(
        EFMember::make(lookup_family(id, param), j.at("theta").get<std::vector<double>>()));
  }
  throw std::invalid_argument("density json: unknown type '" + type + "'");
}

WeightedSet weighted_set_from_json(const json& j) {
  if (!j.is_object() || !j.contains("weights") || !j.contains("members")) {
    throw std::invalid_argument("weighted set json: need 'weights' and 'members'");
  }
  auto weights = j.at("weights").get<std::vector<double>>();
  std::vector<Density> members;
  for (const auto& mj : j.at("members")) members.push_back(density_from_json(mj));
  return WeightedSet(std::move(weights), std::move(members));
}

json mean_to_json(const MeanSpec& spec) {
  json j;
  switch (spec.kind) {
    case MeanSpec::Kind::Arithmetic:
      j["kind"] = "arithmetic";
      break;
    case MeanSpec::Kind::Geometric:
      j["kind"] = "geometric";
      break;
    case MeanSpec::Kind::Harmonic:
      j["kind"] = "harmonic";
      break;
    case MeanSpec::Kind::Power:
      j["kind"] = "power";
      j["exponent"] = spec.exponent;
      break;
    case MeanSpec::Kind::QuasiArithmetic: {
      j["kind"] = "quasi_arithmetic";
      const char* gt = spec.generator.type == Generator::Type::Identity ? "identity"
                       : spec.generator.type == Generator::Type::Exp    ? "exp"
                                                                        : "power";
      j["generator"] = json{{"type", gt},
                            {"alpha", spec.generator.alpha},
                            {"negated", spec.generator.negated}};
      break;
    }
    case MeanSpec::Kind::RenyiAlpha:
      j["kind"] = "renyi";
      j["alpha"] = spec.alpha;
      break;
    case MeanSpec::Kind::Max:
      j["kind"] = "max";
      break;
    case MeanSpec::Kind::Min:
      j["kind"] = "min";
      break;
  }
  if (!spec.weights.empty()) j["weights"] = spec.weights;
  return j;
}

MeanSpec mean_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) {
    throw std::invalid_argument("mean json: expected an object with a 'kind' field");
  }
  const std::string kind = j.at("kind").get<std::string>();
  std::vector<double> w;
  if (j.contains("weights")) w = j.at("weights").get<std::vector<double>>();
  if (kind == "arithmetic") return MeanSpec::arithmetic(std::move(w));
  if (kind == "geometric") return MeanSpec::geometric(std::move(w));
  if (kind == "harmonic") return MeanSpec::harmonic(std::move(w));
  if (kind == "power") return MeanSpec::power(require_number(j, "exponent"), std::move(w));
  if (kind == "renyi") return MeanSpec::renyi(require_number(j, "alpha"), std::move(w));
  if (kind == "max") return MeanSpec::max(std::move(w));
  if (kind == "min") return MeanSpec::min(std::move(w));
  if (kind == "quasi_arithmetic") {
    const auto& gj = j.at("generator");
    Generator g;
    const std::string gt = gj.at("type").get<std::string>();
    g.type = gt == "identity" ? Generator::Type::Identity
             : gt == "exp"    ? Generator::Type::Exp
             : gt == "power"  ? Generator::Type::Power
                              : throw std::invalid_argument("mean json: bad generator type");
    if (gj.contains("alpha")) g.alpha = gj.at("alpha").get<double>();
    if (gj.contains("negated")) g.negated = gj.at("negated").get<bool>();
    return MeanSpec::quasi_arithmetic(g, std::move(w));
  }
  throw std::invalid_argument("mean json: unknown kind '" + kind + "'");
}

DivergenceSpec divergence_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) {
    throw std::invalid_argument("divergence json: expected an object with a 'kind' field");
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "kld") return DivergenceSpec::kld();
  if (kind == "reverse_kld") return DivergenceSpec::reverse_kld();
  if (kind == "renyi") return DivergenceSpec::renyi(require_number(j, "alpha"));
  if (kind == "renyi_inf") return DivergenceSpec::renyi_infinity();
  if (kind == "tv") return DivergenceSpec::total_variation();
  if (kind == "bhattacharyya") {
    return DivergenceSpec::bhattacharyya(require_number(j, "alpha"));
  }
  if (kind == "skew_jsd") {
    return DivergenceSpec::skew_jsd(require_number(j, "alpha"), require_number(j, "beta"));
  }
  if (kind == "gen_bhattacharyya") {
    return DivergenceSpec::generalized_bhattacharyya(mean_from_json(j.at("mean")));
  }
  throw std::invalid_argument("divergence json: unknown kind '" + kind + "'");
}

}  // namespace detail

namespace {

nlohmann::json parse_text(const std::string& text) {
  return nlohmann::json::parse(text);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Density density_from_json_text(const std::string& text) {
  return detail::density_from_json(parse_text(text));
}

Density density_from_json_file(const std::string& path) {
  return density_from_json_text(slurp(path));
}

std::string density_to_json_text(const Density& d) {
  return detail::density_to_json(d).dump();
}

WeightedSet weighted_set_from_json_text(const std::string& text) {
  return detail::weighted_set_from_json(parse_text(text));
}

WeightedSet weighted_set_from_json_file(const std::string& path) {
  return weighted_set_from_json_text(slurp(path));
}

MeanSpec mean_from_json_text(const std::string& text) {
  return detail::mean_from_json(parse_text(text));
}

std::string mean_to_json_text(const MeanSpec& spec) {
  return detail::mean_to_json(spec).dump();
}

DivergenceSpec divergence_from_json_text(const std::string& text) {
  return detail::divergence_from_json(parse_text(text));
}

}  // namespace infradius
