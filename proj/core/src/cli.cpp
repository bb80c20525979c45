#include "infradius/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>

#include "infradius/clustering.hpp"
#include "infradius/divergences.hpp"
#include "infradius/io.hpp"
#include "infradius/radius.hpp"
#include "infradius/relative.hpp"
#include "io_detail.hpp"

namespace infradius {

namespace {

using nlohmann::json;

// Scalars are nats internally; conversion to bits happens here and only here.
double to_base(double nats_value, const std::string& base) {
  return base == "bits" ? nats_value / kLn2 : nats_value;
}

std::string format_scalar(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct GridArgs {
  double lo = 0.0;
  double hi = 0.0;
  int n = 0;
  CLI::Option* lo_opt = nullptr;

  void attach(CLI::App* cmd) {
    lo_opt = cmd->add_option("--lo", lo, "Grid lower bound override");
    auto* hi_opt = cmd->add_option("--hi", hi, "Grid upper bound override");
    auto* n_opt = cmd->add_option("--n", n, "Grid point count override");
    lo_opt->needs(hi_opt)->needs(n_opt);
    hi_opt->needs(lo_opt);
    n_opt->needs(lo_opt);
  }
  std::optional<GridSpec> spec() const {
    if (lo_opt == nullptr || lo_opt->count() == 0) return std::nullopt;
    if (n < 3) throw std::invalid_argument("grid override: n must be >= 3");
    return GridSpec{lo, hi, n};
  }
};

struct FamilyArgs {
  std::string id = "gaussian";
  double kappa = 2.0;
  int atoms = 2;
  int dim = 1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--family", id, "Exponential family id")->capture_default_str();
    cmd->add_option("--kappa", kappa, "Weibull shape (family=weibull_kappa)")
        ->capture_default_str();
    cmd->add_option("--atoms", atoms, "Atom count (family=categorical)")
        ->capture_default_str();
    cmd->add_option("--dim", dim, "Sample dimension (family=mvn)")->capture_default_str();
  }
  FamilyPtr resolve() const {
    if (id == "weibull_kappa") return lookup_family(id, kappa);
    if (id == "categorical") return lookup_family(id, static_cast<double>(atoms));
    if (id == "mvn") return lookup_family(id, static_cast<double>(dim));
    return lookup_family(id);
  }
};

Density load_density(const std::string& path, const std::optional<GridSpec>& gs) {
  Density d = density_from_json_file(path);
  if (gs && !d.numeric()) return d.materialize(gs);
  return d;
}

WeightedSet load_set(const std::string& path, const std::optional<GridSpec>& gs) {
  WeightedSet set = weighted_set_from_json_file(path);
  if (!gs) return set;
  std::vector<Density> members;
  members.reserve(set.members.size());
  for (const auto& m : set.members) members.push_back(m.numeric() ? m : m.materialize(gs));
  return WeightedSet(set.weights, std::move(members));
}

MeanSpec parse_mean_arg(const std::string& text) {
  if (!text.empty() && text.front() == '{') return mean_from_json_text(text);
  if (text == "arithmetic") return MeanSpec::arithmetic();
  if (text == "geometric") return MeanSpec::geometric();
  if (text == "harmonic") return MeanSpec::harmonic();
  if (text == "max") return MeanSpec::max();
  if (text == "min") return MeanSpec::min();
  throw std::invalid_argument("--mean: pass a name or a mean JSON object");
}

DivergenceSpec parse_divergence_arg(const std::string& text, double alpha, double beta) {
  if (!text.empty() && text.front() == '{') return divergence_from_json_text(text);
  if (text == "kld") return DivergenceSpec::kld();
  if (text == "reverse_kld") return DivergenceSpec::reverse_kld();
  if (text == "tv") return DivergenceSpec::total_variation();
  if (text == "renyi_inf") return DivergenceSpec::renyi_infinity();
  if (text == "renyi") return DivergenceSpec::renyi(alpha);
  if (text == "bhattacharyya") return DivergenceSpec::bhattacharyya(alpha);
  if (text == "skew_jsd") return DivergenceSpec::skew_jsd(alpha, beta);
  throw std::invalid_argument("--kind/--divergence: unknown divergence '" + text + "'");
}

json radius_result_json(const RadiusResult& r, const std::string& base) {
  return json{{"value", to_base(r.value, base)},
              {"centroid", detail::density_to_json(r.centroid)},
              {"iterations", r.iterations},
              {"residual", r.residual},
              {"converged", r.converged},
              {"centroid_unique", r.centroid_unique}};
}

void print_trace(std::ostream& out, const std::vector<double>& trace,
                 const std::string& base) {
  out << "iteration,objective,residual\n";
  for (std::size_t t = 0; t < trace.size(); ++t) {
    const double residual = t == 0 ? 0.0 : trace[t - 1] - trace[t];
    out << t << ',' << format_scalar(to_base(trace[t], base)) << ','
        << format_scalar(to_base(residual, base)) << '\n';
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"infradius: information radii, Jensen-Shannon symmetrizations, "
               "and density clustering"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  std::string base = "nats";
  int threads = 0;
  app.add_option("--base", base, "Output unit for log-scaled scalars")
      ->check(CLI::IsMember({"nats", "bits"}))
      ->capture_default_str();
  app.add_option("--threads", threads,
                 "Worker threads (INFRADIUS_THREADS mirrors this; default 1)");

  // divergence
  auto* dv = app.add_subcommand("divergence", "Divergence between two densities");
  std::string dv_kind, dv_p, dv_q;
  double dv_alpha = 0.5, dv_beta = 0.5;
  GridArgs dv_grid;
  dv->add_option("--kind", dv_kind,
                 "kld|reverse_kld|renyi|renyi_inf|tv|bhattacharyya|skew_jsd or JSON")
      ->required();
  dv->add_option("--p", dv_p, "Density JSON file")->required();
  dv->add_option("--q", dv_q, "Density JSON file")->required();
  dv->add_option("--alpha", dv_alpha, "Skew / order parameter");
  dv->add_option("--beta", dv_beta, "Second skew parameter");
  dv_grid.attach(dv);

  // entropy
  auto* en = app.add_subcommand("entropy", "Shannon or Rényi entropy of a density");
  std::string en_p;
  double en_alpha = 1.0;
  GridArgs en_grid;
  en->add_option("--p", en_p, "Density JSON file")->required();
  auto* en_alpha_opt = en->add_option("--alpha", en_alpha, "Rényi order (omit for Shannon)");
  en_grid.attach(en);

  // radius / centroid
  struct RadiusArgs {
    std::string set_path;
    std::string alpha = "1";
    bool variational = false;
    bool relative = false;
    std::string mean = "arithmetic";
    std::string divergence = "kld";
    double dalpha = 0.5, dbeta = 0.5;
    int max_iters = 10000;
    FamilyArgs family;
    GridArgs grid;

    void attach(CLI::App* cmd) {
      cmd->add_option("--set", set_path, "Weighted set JSON file")->required();
      cmd->add_option("--alpha", alpha, "Sibson order in (0,inf], or 'inf'")
          ->capture_default_str();
      cmd->add_flag("--variational", variational,
                    "Minimize a generic (mean, divergence) objective");
      cmd->add_flag("--relative", relative, "Constrain the centroid to a family");
      cmd->add_option("--mean", mean, "Mean name or JSON")->capture_default_str();
      cmd->add_option("--divergence", divergence, "Divergence name or JSON")
          ->capture_default_str();
      cmd->add_option("--dalpha", dalpha, "Divergence order parameter");
      cmd->add_option("--dbeta", dbeta, "Divergence second parameter");
      cmd->add_option("--max-iters", max_iters, "Optimizer iteration cap")
          ->capture_default_str();
      family.attach(cmd);
      grid.attach(cmd);
    }
  };
  auto* ra = app.add_subcommand("radius", "Information radius of a weighted set");
  auto* ce = app.add_subcommand("centroid", "Centroid density only");
  RadiusArgs ra_args, ce_args;
  ra_args.attach(ra);
  ce_args.attach(ce);

  // project
  auto* pj = app.add_subcommand("project", "Information projection onto a family");
  std::string pj_p;
  FamilyArgs pj_family;
  GridArgs pj_grid;
  pj->add_option("--p", pj_p, "Density JSON file")->required();
  pj_family.attach(pj);
  pj_grid.attach(pj);

  // cluster
  auto* cl = app.add_subcommand("cluster", "Lloyd clustering of a weighted density set");
  std::string cl_set, cl_mode = "closed", cl_div = "kld";
  int cl_k = 0, cl_max_iters = 100;
  std::uint64_t cl_seed = 0;
  FamilyArgs cl_family;
  GridArgs cl_grid;
  cl->add_option("--set", cl_set, "Weighted set JSON file")->required();
  cl->add_option("--k", cl_k, "Cluster count")->required();
  cl->add_option("--max-iters", cl_max_iters, "Lloyd iteration cap")->capture_default_str();
  cl->add_option("--mode", cl_mode, "closed|numeric assignment predicate")
      ->check(CLI::IsMember({"closed", "numeric"}))
      ->capture_default_str();
  cl->add_option("--divergence", cl_div, "kld|reverse_kld")
      ->check(CLI::IsMember({"kld", "reverse_kld"}))
      ->capture_default_str();
  cl->add_option("--seed", cl_seed, "Seeding RNG seed")->capture_default_str();
  cl_family.attach(cl);
  cl_grid.attach(cl);

  // quantize
  auto* qt = app.add_subcommand("quantize", "Quantize a mixture's components");
  std::string qt_mix;
  int qt_k = 0, qt_max_iters = 100;
  std::uint64_t qt_seed = 0;
  FamilyArgs qt_family;
  qt->add_option("--mixture", qt_mix, "Mixture density JSON file")->required();
  qt->add_option("--k", qt_k, "Component budget")->required();
  qt->add_option("--max-iters", qt_max_iters, "Lloyd iteration cap")->capture_default_str();
  qt->add_option("--seed", qt_seed, "Seeding RNG seed")->capture_default_str();
  qt_family.attach(qt);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);

    const char* env_threads = std::getenv("INFRADIUS_THREADS");
    if (threads == 0 && env_threads != nullptr) threads = std::atoi(env_threads);
    set_thread_count(threads > 0 ? threads : 1);

    if (dv->parsed()) {
      const DivergenceSpec spec = parse_divergence_arg(dv_kind, dv_alpha, dv_beta);
      const auto gs = dv_grid.spec();
      double v = evaluate_divergence(spec, load_density(dv_p, gs), load_density(dv_q, gs));
      const bool unitless = spec.kind == DivergenceSpec::Kind::TotalVariation ||
                            spec.kind == DivergenceSpec::Kind::BhattacharyyaCoefficient;
      if (!unitless) v = to_base(v, base);
      out << format_scalar(v) << '\n';
      return 0;
    }

    if (en->parsed()) {
      const Density p = load_density(en_p, en_grid.spec());
      const double v = en_alpha_opt->count() > 0 ? renyi_entropy(p, en_alpha) : entropy(p);
      out << format_scalar(to_base(v, base)) << '\n';
      return 0;
    }

    const auto run_radius = [&](const RadiusArgs& a, bool centroid_only) -> int {
      const WeightedSet set = load_set(a.set_path, a.grid.spec());
      SearchConfig cfg;
      cfg.max_iters = a.max_iters;
      RadiusResult res;
      if (a.relative) {
        res = relative_radius(set, a.family.resolve(), parse_mean_arg(a.mean),
                              parse_divergence_arg(a.divergence, a.dalpha, a.dbeta), cfg);
      } else if (a.variational) {
        res = generalized_radius(set, parse_mean_arg(a.mean),
                                 parse_divergence_arg(a.divergence, a.dalpha, a.dbeta),
                                 cfg);
      } else {
        const double alpha = a.alpha == "inf" ? kInf : std::stod(a.alpha);
        res = sibson_radius(set, alpha);
      }
      if (centroid_only) {
        out << detail::density_to_json(res.centroid).dump() << '\n';
      } else {
        out << radius_result_json(res, base).dump() << '\n';
      }
      return res.converged ? 0 : 3;
    };
    if (ra->parsed()) return run_radius(ra_args, false);
    if (ce->parsed()) return run_radius(ce_args, true);

    if (pj->parsed()) {
      const Density p = load_density(pj_p, pj_grid.spec());
      const EFMember member = information_projection(p, pj_family.resolve());
      out << detail::member_to_json(member).dump() << '\n';
      return 0;
    }

    if (cl->parsed()) {
      const WeightedSet set = load_set(cl_set, cl_grid.spec());
      const ClusterState state = cluster(
          set, cl_k, cl_family.resolve(), cl_seed, cl_max_iters,
          cl_mode == "numeric" ? PredicateMode::Numeric : PredicateMode::ClosedForm,
          cl_div == "reverse_kld" ? ClusterDivergence::ReverseKLD : ClusterDivergence::KLD);
      json centers = json::array();
      for (const auto& c : state.centers) centers.push_back(detail::member_to_json(c));
      const json j{{"k", state.k},
                   {"objective", to_base(state.objective, base)},
                   {"iterations", state.iterations},
                   {"converged", state.converged},
                   {"duplicated_centers", state.duplicated_centers},
                   {"assignment", state.assignment},
                   {"centers", centers}};
      out << j.dump() << "\n\n";
      print_trace(out, state.objective_trace, base);
      return state.converged ? 0 : 3;
    }

    if (qt->parsed()) {
      const Density mix = density_from_json_file(qt_mix);
      const QuantizeResult res =
          quantize_mixture(mix, qt_k, qt_family.resolve(), qt_seed, qt_max_iters);
      json comps = json::array();
      for (const auto& c : res.centers) comps.push_back(detail::member_to_json(c));
      const json j{
          {"k", res.state.k},
          {"objective", to_base(res.state.objective, base)},
          {"iterations", res.state.iterations},
          {"converged", res.state.converged},
          {"assignment", res.state.assignment},
          {"simplified_mixture",
           json{{"type", "mixture"}, {"weights", res.weights}, {"components", comps}}},
          {"jsd_diagnostic", to_base(res.jsd_diagnostic, base)}};
      out << j.dump() << "\n\n";
      print_trace(out, res.state.objective_trace, base);
      return res.state.converged ? 0 : 3;
    }

    out << app.help();
    return 0;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace infradius
