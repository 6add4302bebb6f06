#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "msls/chain_io.hpp"
#include "msls/config.hpp"
#include "msls/data_io.hpp"
#include "msls/generative.hpp"
#include "msls/moments.hpp"
#include "msls/report.hpp"
#include "msls/sampler.hpp"
#include "msls/selection.hpp"

namespace fs = std::filesystem;
using namespace msls;

namespace {

KeyValueConfig load_config(const std::string& path) {
  KeyValueConfig kv = path.empty() ? KeyValueConfig::parse_string("", "<defaults>") : KeyValueConfig::parse_file(path);
  kv.check_known(known_config_keys());
  return kv;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IngestionError("cannot create " + dir + ": " + ec.message());
}

std::string absolute(const std::string& p) { return p.empty() ? p : fs::absolute(p).lexically_normal().string(); }

Layer load_layer(const DataSource& src) {
  Layer layer = load_edge_list(src.edges_path);
  if (!src.leaning_path.empty()) load_leaning(src.leaning_path, layer);
  if (!src.exposure_path.empty()) load_exposure(src.exposure_path, layer);
  layer.validate();
  return layer;
}

// --- simulate -------------------------------------------------------------

struct SimulateArgs {
  std::string config;
  std::string out = "sim";
  std::optional<long> seed;
};

int cmd_simulate(const SimulateArgs& a) {
  KeyValueConfig kv = load_config(a.config);
  if (a.seed) kv.set("seed", std::to_string(*a.seed));
  const SimulationScenario sc = scenario_from_config(kv);
  const SimulatedLayer sim = simulate_layer(sc);
  ensure_dir(a.out);
  const fs::path d(a.out);
  write_edge_list(sim.layer, (d / "edges.csv").string());
  if (sim.layer.has_leaning()) write_leaning(sim.layer, (d / "leaning.csv").string());
  write_truth(sim, sc, (d / "truth.json").string());
  std::cout << "wrote " << sc.n_nodes << " nodes x " << sc.n_periods << " periods to " << a.out << "\n";
  return 0;
}

// --- fit ------------------------------------------------------------------

struct FitArgs {
  std::string edges, leaning, exposure, config, model, out = "chain";
  std::vector<std::string> layers;
  std::optional<long> seed, n_iter, burn_in, thin;
  bool raw_trace = false;
  bool no_raw_trace = false;
};

DataSource parse_layer_spec(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--layer expects NAME=EDGES[,LEANING[,EXPOSURE]]: " + spec);
  DataSource s;
  s.layer_name = spec.substr(0, eq);
  std::vector<std::string> parts;
  std::stringstream ss(spec.substr(eq + 1));
  std::string part;
  while (std::getline(ss, part, ',')) parts.push_back(part);
  if (parts.empty() || parts.size() > 3 || parts[0].empty()) throw ConfigError("--layer expects NAME=EDGES[,LEANING[,EXPOSURE]]: " + spec);
  s.edges_path = absolute(parts[0]);
  if (parts.size() > 1) s.leaning_path = absolute(parts[1]);
  if (parts.size() > 2) s.exposure_path = absolute(parts[2]);
  return s;
}

void fit_one(const DataSource& src, const KeyValueConfig& kv, McmcConfig cfg, const PriorSpec& priors,
             const std::string& dir) {
  const Layer layer = load_layer(src);
  cfg.anchor_index = resolve_anchor(kv, layer.node_names, std::min<std::size_t>(cfg.anchor_index, layer.n_nodes - 1));
  const ChainOutput chain = run_chain(layer, priors, cfg);
  write_chain(chain, src, dir);
}

int cmd_fit(const FitArgs& a) {
  KeyValueConfig kv = load_config(a.config);
  if (a.seed) kv.set("seed", std::to_string(*a.seed));
  if (a.n_iter) kv.set("n_iter", std::to_string(*a.n_iter));
  if (a.burn_in) kv.set("burn_in", std::to_string(*a.burn_in));
  if (a.thin) kv.set("thin", std::to_string(*a.thin));
  if (!a.model.empty()) kv.set("model", a.model);
  if (a.raw_trace) kv.set("raw_trace", "true");
  if (a.no_raw_trace) kv.set("raw_trace", "false");
  McmcConfig cfg = mcmc_from_config(kv);
  const PriorSpec priors = priors_from_config(kv);

  std::vector<DataSource> sources;
  if (!a.edges.empty()) sources.push_back({"layer", absolute(a.edges), absolute(a.leaning), absolute(a.exposure)});
  for (const auto& spec : a.layers) sources.push_back(parse_layer_spec(spec));
  if (sources.empty()) throw ConfigError("fit needs --edges or at least one --layer");
  if (!a.edges.empty() && !a.layers.empty()) throw ConfigError("use either --edges or --layer, not both");

  if (sources.size() == 1) {
    fit_one(sources[0], kv, cfg, priors, a.out);
    std::cout << "wrote chain to " << a.out << "\n";
    return 0;
  }
  // independent chains, one RNG stream per layer
  std::vector<std::future<void>> jobs;
  for (std::size_t l = 0; l < sources.size(); ++l) {
    McmcConfig c = cfg;
    c.stream = l;
    const std::string dir = (fs::path(a.out) / sources[l].layer_name).string();
    jobs.push_back(std::async(std::launch::async, fit_one, sources[l], std::cref(kv), c, std::cref(priors), dir));
  }
  for (auto& j : jobs) j.get();
  std::cout << "wrote " << sources.size() << " chains under " << a.out << "\n";
  return 0;
}

// --- moments --------------------------------------------------------------

struct MomentsArgs {
  std::string config, out;
  bool oracle = false;
};

int cmd_moments(const MomentsArgs& a) {
  const MomentGrid g = moment_grid_from_config(load_config(a.config));
  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw IngestionError("cannot write " + a.out);
  }
  std::ostream& out = a.out.empty() ? std::cout : file;
  out.precision(10);
  out << "alpha,sigma2_beta,mean,sd,dispersion";
  if (a.oracle) out << ",mc_mean,mc_mean_se,mc_sd,mc_sd_se,mc_dispersion,mc_dispersion_se";
  out << '\n';
  std::uint64_t point = 0;
  for (const auto& s : g.specs()) {
    out << s.alpha << ',' << s.sigma2.front() * s.beta << ',' << expected_strength(s) << ',' << strength_sd(s) << ','
        << dispersion_index(s);
    if (a.oracle) {
      McOracleOptions o;
      o.n_reps = g.n_reps;
      o.seed = g.seed + 7919 * point;
      const McOracleResult r = mc_strength_oracle(s, o);
      out << ',' << r.mean << ',' << r.se_mean << ',' << r.sd << ',' << r.se_sd << ',' << r.dispersion << ','
          << r.se_dispersion;
    }
    out << '\n';
    ++point;
  }
  return 0;
}

// --- report ---------------------------------------------------------------

struct ReportArgs {
  std::vector<std::string> chains;
  std::string out = "report";
};

int cmd_report(const ReportArgs& a) {
  ensure_dir(a.out);
  std::vector<DiagnosticSection> diag;
  std::vector<std::pair<std::string, SelectionRow>> sel;
  std::vector<std::pair<std::string, std::vector<PpcMetric>>> ppc;
  for (const auto& dir : a.chains) {
    const StoredChain sc = read_chain(dir);
    const std::string name = fs::path(dir).lexically_normal().filename().string().empty()
                                 ? fs::path(dir).lexically_normal().parent_path().filename().string()
                                 : fs::path(dir).lexically_normal().filename().string();
    const Layer layer = load_layer(sc.source);
    for (auto s : chain_diagnostics(sc.chain)) {
      if (a.chains.size() > 1) s.name = name + ":" + s.name;
      diag.push_back(std::move(s));
    }
    sel.emplace_back(name, selection_summary(sc.chain, layer));
    ppc.emplace_back(name, ppc_strength(sc.chain, layer));
  }
  const fs::path d(a.out);
  write_diagnostics_csv(diag, (d / "diagnostics.csv").string());
  write_selection_csv(sel, (d / "selection.csv").string());
  write_ppc_csv(ppc, (d / "ppc.csv").string());
  std::cout << "wrote diagnostics.csv, selection.csv, ppc.csv to " << a.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Markov-switching latent-space models for weighted temporal networks"};
  app.require_subcommand(1);

  SimulateArgs sa;
  auto* sim = app.add_subcommand("simulate", "simulate a layer (edge list, leaning, truth.json)");
  sim->add_option("--config", sa.config, "key = value config file (defaults if omitted)");
  sim->add_option("--seed", sa.seed, "override the config seed");
  sim->add_option("--out", sa.out, "output directory (created)");

  FitArgs fa;
  auto* fit = app.add_subcommand("fit", "run the Gibbs sampler on one or more layers");
  fit->add_option("--edges", fa.edges, "edge list CSV (i,j,t,w)");
  fit->add_option("--leaning", fa.leaning, "leaning CSV (i,t,leaning)");
  fit->add_option("--exposure", fa.exposure, "exposure CSV (t,total)");
  fit->add_option("--layer", fa.layers, "NAME=EDGES[,LEANING[,EXPOSURE]], repeatable; layers run concurrently");
  fit->add_option("--config", fa.config, "key = value config file");
  fit->add_option("--model", fa.model, "m1|m2|m3|rg|rg-cov");
  fit->add_option("--seed", fa.seed, "override the config seed");
  fit->add_option("--n-iter", fa.n_iter, "override n_iter");
  fit->add_option("--burn-in", fa.burn_in, "override burn_in");
  fit->add_option("--thin", fa.thin, "override thin");
  fit->add_flag("--raw-trace", fa.raw_trace, "store every iteration in raw_trace.csv");
  fit->add_flag("--no-raw-trace", fa.no_raw_trace, "do not store the raw trace");
  fit->add_option("--out", fa.out, "output directory (one subdirectory per layer with --layer)");

  MomentsArgs ma;
  auto* mom = app.add_subcommand("moments", "closed-form strength moments over a grid");
  mom->add_option("--config", ma.config, "grid config (alpha, sigma2_beta, n_nodes, ...)");
  mom->add_flag("--oracle", ma.oracle, "add Monte Carlo columns");
  mom->add_option("--out", ma.out, "CSV path (stdout if omitted)");

  ReportArgs ra;
  auto* rep = app.add_subcommand("report", "diagnostics, model selection and predictive checks");
  rep->add_option("chains", ra.chains, "chain directories")->required();
  rep->add_option("--out", ra.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*sim) return cmd_simulate(sa);
    if (*fit) return cmd_fit(fa);
    if (*mom) return cmd_moments(ma);
    if (*rep) return cmd_report(ra);
  } catch (const msls::Error& e) {
    std::cerr << "error[" << e.kind() << "]: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
