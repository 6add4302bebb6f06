#include "msls/chain_io.hpp"

#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "msls/data_io.hpp"

namespace msls {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw IngestionError("cannot write " + p.string());
  out.precision(17);
  return out;
}

std::vector<double> row_numbers(const CsvTable& tab, std::size_t r, const std::string& src) {
  std::vector<double> v;
  for (const auto& f : tab.rows[r]) {
    try {
      v.push_back(std::stod(f));
    } catch (const std::exception&) {
      throw IngestionError(src + ":" + std::to_string(tab.line_numbers[r]) + ": '" + f + "' is not a number");
    }
  }
  return v;
}

std::size_t stored_states(const ChainOutput& c) {
  if (!is_latent_space(c.model)) return 0;
  return c.model == ModelKind::M3 ? 1 : c.config.n_states;
}

json config_json(const McmcConfig& c) {
  return {{"n_iter", c.n_iter},
          {"burn_in", c.burn_in},
          {"thin", c.thin},
          {"n_states", c.n_states},
          {"model", model_kind_name(c.model)},
          {"target_accept", c.target_accept},
          {"adapt_exponent", c.adapt_exponent},
          {"adapt_offset", c.adapt_offset},
          {"init_proposal_var", c.init_proposal_var},
          {"phi_rel_sd", c.phi_rel_sd},
          {"anchor_index", c.anchor_index + 1},
          {"anchor_negative", c.anchor_negative},
          {"seed", c.seed},
          {"stream", c.stream},
          {"adapt", c.adapt},
          {"identify", c.identify},
          {"use_exposure", c.use_exposure},
          {"keep_raw_trace", c.keep_raw_trace}};
}

McmcConfig config_from_json(const json& j) {
  McmcConfig c;
  c.n_iter = j.at("n_iter");
  c.burn_in = j.at("burn_in");
  c.thin = j.at("thin");
  c.n_states = j.at("n_states");
  c.model = parse_model_kind(j.at("model"));
  c.target_accept = j.at("target_accept");
  c.adapt_exponent = j.at("adapt_exponent");
  c.adapt_offset = j.at("adapt_offset");
  c.init_proposal_var = j.at("init_proposal_var");
  c.phi_rel_sd = j.at("phi_rel_sd");
  c.anchor_index = j.at("anchor_index").get<std::size_t>() - 1;
  c.anchor_negative = j.at("anchor_negative");
  c.seed = j.at("seed");
  c.stream = j.at("stream");
  c.adapt = j.at("adapt");
  c.identify = j.at("identify");
  c.use_exposure = j.at("use_exposure");
  c.keep_raw_trace = j.at("keep_raw_trace");
  return c;
}

json priors_json(const PriorSpec& p) {
  return {{"sigma_alpha2", p.sigma_alpha2}, {"a_sigma", p.a_sigma},   {"b_sigma", p.b_sigma},
          {"b_gamma0", p.b_gamma0},         {"b_gamma1", p.b_gamma1}, {"a_phi", p.a_phi},
          {"b_phi", p.b_phi},               {"delta_var", p.delta_var}, {"omega", p.omega}};
}

PriorSpec priors_from_json(const json& j) {
  PriorSpec p;
  p.sigma_alpha2 = j.at("sigma_alpha2");
  p.a_sigma = j.at("a_sigma");
  p.b_sigma = j.at("b_sigma");
  p.b_gamma0 = j.at("b_gamma0");
  p.b_gamma1 = j.at("b_gamma1");
  p.a_phi = j.at("a_phi");
  p.b_phi = j.at("b_phi");
  p.delta_var = j.at("delta_var");
  p.omega = j.at("omega").get<std::vector<double>>();
  return p;
}

json params_json(const ModelParams& p) {
  json z = json::array();
  for (Eigen::Index i = 0; i < p.zeta.rows(); ++i) {
    std::vector<double> row;
    for (Eigen::Index k = 0; k < p.zeta.cols(); ++k) row.push_back(p.zeta(i, k));
    z.push_back(row);
  }
  json q = json::array();
  for (Eigen::Index k = 0; k < p.trans.rows(); ++k) {
    std::vector<double> row;
    for (Eigen::Index l = 0; l < p.trans.cols(); ++l) row.push_back(p.trans(k, l));
    q.push_back(row);
  }
  json j = {{"alpha", std::vector<double>(p.alpha.data(), p.alpha.data() + p.alpha.size())},
            {"zeta", z},
            {"sigma2", std::vector<double>(p.sigma2.data(), p.sigma2.data() + p.sigma2.size())},
            {"gamma0", p.gamma0},
            {"gamma1", p.gamma1},
            {"phi", p.phi},
            {"beta", p.beta},
            {"trans", q}};
  if (p.delta) j["delta"] = *p.delta;
  return j;
}

}  // namespace

ModelParams unflatten_draw(const Eigen::VectorXd& v, ModelKind kind, std::size_t n_nodes, std::size_t n_states,
                           bool with_delta) {
  ModelParams p;
  Eigen::Index c = 0;
  auto next = [&]() {
    if (c >= v.size()) throw IngestionError("draw row too short for the stored model");
    return v(c++);
  };
  const auto N = static_cast<Eigen::Index>(n_nodes);
  const auto K = static_cast<Eigen::Index>(is_latent_space(kind) ? (kind == ModelKind::M3 ? 1 : n_states) : 0);
  if (kind == ModelKind::RG) {
    p.alpha = Eigen::VectorXd::Constant(1, next());
    p.zeta.resize(1, 0);
  } else {
    p.alpha.resize(N);
    for (Eigen::Index i = 0; i < N; ++i) p.alpha(i) = next();
    p.zeta.resize(N, K);
  }
  p.sigma2.resize(K);
  p.trans.resize(K, K);
  if (is_latent_space(kind)) {
    for (Eigen::Index k = 0; k < K; ++k) {
      for (Eigen::Index i = 0; i < N; ++i) p.zeta(i, k) = next();
    }
    for (Eigen::Index k = 0; k < K; ++k) p.sigma2(k) = next();
    p.gamma0 = next();
    p.gamma1 = next();
    p.phi = next();
    for (Eigen::Index k = 0; k < K; ++k) {
      for (Eigen::Index l = 0; l < K; ++l) p.trans(k, l) = next();
    }
  }
  if (with_delta) p.delta = next();
  if (c != v.size()) throw IngestionError("draw row longer than the stored model");
  return p;
}

void write_chain(const ChainOutput& chain, const DataSource& src, const std::string& dir) {
  const fs::path d(dir);
  std::error_code ec;
  fs::create_directories(d, ec);
  if (ec) throw IngestionError("cannot create " + dir + ": " + ec.message());
  const bool with_delta = chain.config.use_exposure;
  const std::size_t K = stored_states(chain);
  const auto names = raw_trace_names(chain.model, chain.n_nodes, chain.config.n_states, with_delta);

  {
    auto out = open_out(d / "draws.csv");
    out << "draw";
    for (const auto& n : names) out << ',' << n;
    out << ",loglik_complete,loglik_network\n";
    for (std::size_t h = 0; h < chain.draws.size(); ++h) {
      out << h + 1;
      const Eigen::VectorXd v = flatten_draw(chain.draws[h], chain.model, with_delta);
      for (Eigen::Index c = 0; c < v.size(); ++c) out << ',' << v(c);
      out << ',' << chain.loglik_complete[h] << ',' << chain.loglik_network[h] << '\n';
    }
  }
  if (is_latent_space(chain.model)) {
    auto out = open_out(d / "states.csv");
    out << "draw";
    for (std::size_t t = 0; t < chain.n_periods; ++t) out << ",t" << t + 1;
    out << '\n';
    for (std::size_t h = 0; h < chain.state_draws.size(); ++h) {
      out << h + 1;
      for (int s : chain.state_draws[h].states) out << ',' << s + 1;
      out << '\n';
    }
  }
  {
    // single-state and baseline fits have no transition matrix: the file stays empty
    auto out = open_out(d / "transitions.csv");
    if (K > 1) {
      out << "draw";
      for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t l = 0; l < K; ++l) out << ",q_" << k + 1 << '_' << l + 1;
      }
      out << '\n';
      for (std::size_t h = 0; h < chain.draws.size(); ++h) {
        out << h + 1;
        const auto& q = chain.draws[h].trans;
        for (Eigen::Index k = 0; k < q.rows(); ++k) {
          for (Eigen::Index l = 0; l < q.cols(); ++l) out << ',' << q(k, l);
        }
        out << '\n';
      }
    }
  }
  {
    auto out = open_out(d / "acceptance.csv");
    out << "name,scope,proposals,accepted,rate,mean_prob\n";
    for (const auto& b : chain.acceptance) {
      out << b.block << ",block," << b.proposals << ',' << b.accepted << ',' << b.rate() << ',' << b.mean_prob() << '\n';
    }
    for (Eigen::Index i = 0; i < chain.acc_alpha.size(); ++i) {
      out << "alpha_" << i + 1 << ",param,0,0," << chain.acc_alpha(i) << ",0\n";
    }
    for (Eigen::Index k = 0; k < chain.acc_zeta.cols(); ++k) {
      for (Eigen::Index i = 0; i < chain.acc_zeta.rows(); ++i) {
        out << "zeta_" << i + 1 << '_' << k + 1 << ",param,0,0," << chain.acc_zeta(i, k) << ",0\n";
      }
    }
  }
  if (chain.raw_trace.size() > 0) {
    auto out = open_out(d / "raw_trace.csv");
    out << "iter";
    for (const auto& n : chain.raw_names) out << ',' << n;
    out << '\n';
    for (Eigen::Index r = 0; r < chain.raw_trace.rows(); ++r) {
      out << r + 1;
      for (Eigen::Index c = 0; c < chain.raw_trace.cols(); ++c) out << ',' << chain.raw_trace(r, c);
      out << '\n';
    }
  }
  json m = {{"model", model_kind_name(chain.model)},
            {"n_nodes", chain.n_nodes},
            {"n_periods", chain.n_periods},
            {"n_states", K},
            {"node_names", chain.node_names},
            {"n_draws", chain.draws.size()},
            {"with_delta", with_delta},
            {"seed", chain.config.seed},
            {"config", config_json(chain.config)},
            {"priors", priors_json(chain.priors)},
            {"elapsed_seconds", chain.elapsed_seconds},
            {"data",
             {{"layer", src.layer_name},
              {"edges", src.edges_path},
              {"leaning", src.leaning_path},
              {"exposure", src.exposure_path}}}};
  auto out = open_out(d / "manifest.json");
  out << m.dump(2) << '\n';
}

StoredChain read_chain(const std::string& dir) {
  const fs::path d(dir);
  std::ifstream in(d / "manifest.json");
  if (!in) throw IngestionError(dir + ": missing manifest.json");
  json m;
  try {
    in >> m;
  } catch (const json::exception& e) {
    throw IngestionError(dir + "/manifest.json: " + e.what());
  }
  StoredChain sc;
  ChainOutput& c = sc.chain;
  try {
    c.model = parse_model_kind(m.at("model"));
    c.n_nodes = m.at("n_nodes");
    c.n_periods = m.at("n_periods");
    c.node_names = m.at("node_names").get<std::vector<std::string>>();
    c.config = config_from_json(m.at("config"));
    c.priors = priors_from_json(m.at("priors"));
    c.elapsed_seconds = m.value("elapsed_seconds", 0.0);
    const auto& data = m.at("data");
    sc.source = {data.at("layer"), data.at("edges"), data.at("leaning"), data.at("exposure")};
  } catch (const json::exception& e) {
    throw IngestionError(dir + "/manifest.json: " + e.what());
  }
  const bool with_delta = m.value("with_delta", false);

  const std::string dpath = (d / "draws.csv").string();
  const CsvTable draws = read_csv(dpath);
  const auto names = raw_trace_names(c.model, c.n_nodes, c.config.n_states, with_delta);
  if (draws.header.size() != names.size() + 3) throw IngestionError(dpath + ": column count does not match the manifest");
  for (std::size_t r = 0; r < draws.rows.size(); ++r) {
    const auto v = row_numbers(draws, r, dpath);
    const Eigen::VectorXd par = Eigen::Map<const Eigen::VectorXd>(v.data() + 1, static_cast<Eigen::Index>(names.size()));
    c.draws.push_back(unflatten_draw(par, c.model, c.n_nodes, c.config.n_states, with_delta));
    c.loglik_complete.push_back(v[names.size() + 1]);
    c.loglik_network.push_back(v[names.size() + 2]);
  }

  const fs::path spath = d / "states.csv";
  if (is_latent_space(c.model) && fs::exists(spath)) {
    const CsvTable st = read_csv(spath.string());
    for (std::size_t r = 0; r < st.rows.size(); ++r) {
      const auto v = row_numbers(st, r, spath.string());
      StateSequence s;
      for (std::size_t t = 1; t < v.size(); ++t) s.states.push_back(static_cast<int>(v[t]) - 1);
      c.state_draws.push_back(std::move(s));
    }
    if (c.state_draws.size() != c.draws.size()) throw IngestionError(spath.string() + ": row count differs from draws.csv");
  } else {
    // no regimes stored (baselines, or a single-state fit without the file)
    c.state_draws.assign(c.draws.size(), StateSequence::constant(c.n_periods, 0));
  }

  const fs::path apath = d / "acceptance.csv";
  if (fs::exists(apath)) {
    const CsvTable at = read_csv(apath.string());
    const auto K = static_cast<Eigen::Index>(is_latent_space(c.model) ? (c.model == ModelKind::M3 ? 1 : c.config.n_states) : 0);
    c.acc_alpha = Eigen::VectorXd::Zero(c.model == ModelKind::RG ? 0 : static_cast<Eigen::Index>(c.n_nodes));
    c.acc_zeta = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(c.n_nodes), K);
    for (std::size_t r = 0; r < at.rows.size(); ++r) {
      const auto& row = at.rows[r];
      if (row.size() != 6) continue;
      const std::string& name = row[0];
      if (row[1] == "block") {
        BlockAcceptance b{name};
        b.proposals = std::stol(row[2]);
        b.accepted = std::stol(row[3]);
        b.prob_sum = std::stod(row[5]) * static_cast<double>(b.proposals);
        c.acceptance.push_back(b);
      } else if (name.rfind("alpha_", 0) == 0) {
        const long i = std::stol(name.substr(6)) - 1;
        if (i >= 0 && i < c.acc_alpha.size()) c.acc_alpha(i) = std::stod(row[4]);
      } else if (name.rfind("zeta_", 0) == 0) {
        const auto us = name.find('_', 5);
        const long i = std::stol(name.substr(5, us - 5)) - 1;
        const long k = std::stol(name.substr(us + 1)) - 1;
        if (i >= 0 && i < c.acc_zeta.rows() && k >= 0 && k < c.acc_zeta.cols()) c.acc_zeta(i, k) = std::stod(row[4]);
      }
    }
  }

  const fs::path rpath = d / "raw_trace.csv";
  if (fs::exists(rpath)) {
    const CsvTable rt = read_csv(rpath.string());
    c.raw_names.assign(rt.header.begin() + 1, rt.header.end());
    c.raw_trace.resize(static_cast<Eigen::Index>(rt.rows.size()), static_cast<Eigen::Index>(c.raw_names.size()));
    for (std::size_t r = 0; r < rt.rows.size(); ++r) {
      const auto v = row_numbers(rt, r, rpath.string());
      for (std::size_t k = 1; k < v.size(); ++k) c.raw_trace(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k - 1)) = v[k];
    }
  }
  return sc;
}

void write_truth(const SimulatedLayer& sim, const SimulationScenario& sc, const std::string& path) {
  std::vector<int> states;
  for (int s : sim.states.states) states.push_back(s + 1);
  json j = {{"params", params_json(sim.truth)},
            {"states", states},
            {"node_names", sim.layer.node_names},
            {"scenario",
             {{"n_nodes", sc.n_nodes},
              {"n_periods", sc.n_periods},
              {"n_states", sc.n_states},
              {"alpha_mean", sc.alpha_mean},
              {"alpha_sd", sc.alpha_sd},
              {"phi", sc.phi},
              {"gamma0", sc.gamma0},
              {"gamma1", sc.gamma1},
              {"beta", sc.beta},
              {"init_state", sc.init_state + 1},
              {"with_leaning", sc.with_leaning},
              {"seed", sc.seed}}}};
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

Truth read_truth(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open " + path);
  Truth t;
  try {
    json j;
    in >> j;
    const auto& p = j.at("params");
    const auto alpha = p.at("alpha").get<std::vector<double>>();
    const auto zeta = p.at("zeta").get<std::vector<std::vector<double>>>();
    const auto sigma2 = p.at("sigma2").get<std::vector<double>>();
    const auto trans = p.at("trans").get<std::vector<std::vector<double>>>();
    const auto N = static_cast<Eigen::Index>(alpha.size());
    const auto K = static_cast<Eigen::Index>(sigma2.size());
    t.params.alpha = Eigen::Map<const Eigen::VectorXd>(alpha.data(), N);
    t.params.sigma2 = Eigen::Map<const Eigen::VectorXd>(sigma2.data(), K);
    t.params.zeta.resize(N, K);
    t.params.trans.resize(K, K);
    for (Eigen::Index i = 0; i < N; ++i) {
      for (Eigen::Index k = 0; k < K; ++k) t.params.zeta(i, k) = zeta.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(k));
    }
    for (Eigen::Index k = 0; k < K; ++k) {
      for (Eigen::Index l = 0; l < K; ++l) t.params.trans(k, l) = trans.at(static_cast<std::size_t>(k)).at(static_cast<std::size_t>(l));
    }
    t.params.gamma0 = p.at("gamma0");
    t.params.gamma1 = p.at("gamma1");
    t.params.phi = p.at("phi");
    t.params.beta = p.at("beta");
    if (p.contains("delta")) t.params.delta = p.at("delta").get<double>();
    for (int s : j.at("states").get<std::vector<int>>()) t.states.states.push_back(s - 1);
  } catch (const json::exception& e) {
    throw IngestionError(path + ": " + e.what());
  }
  return t;
}

}  // namespace msls
