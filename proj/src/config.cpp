#include "msls/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace msls {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

bool to_double(const std::string& s, double& v) {
  try {
    std::size_t pos = 0;
    v = std::stod(s, &pos);
    return pos == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_string(os.str(), path);
}

KeyValueConfig KeyValueConfig::parse_string(const std::string& text, const std::string& source) {
  KeyValueConfig kv;
  kv.source_ = source;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (key.empty()) throw ConfigError(source + ":" + std::to_string(lineno) + ": empty key");
    if (kv.entries_.count(key)) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": duplicate key '" + key + "' (first at line " +
                        std::to_string(kv.entries_[key].second) + ")");
    }
    kv.entries_[key] = {value, lineno};
  }
  return kv;
}

void KeyValueConfig::fail(const std::string& key, const std::string& msg) const {
  const auto it = entries_.find(key);
  const int line = it == entries_.end() ? 0 : it->second.second;
  std::string loc = source_;
  if (line > 0) loc += ":" + std::to_string(line);
  throw ConfigError(loc + ": " + key + ": " + msg);
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& dflt) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? dflt : it->second.first;
}

double KeyValueConfig::get_double(const std::string& key, double dflt) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return dflt;
  double v = 0.0;
  if (!to_double(it->second.first, v) || !std::isfinite(v)) fail(key, "'" + it->second.first + "' is not a number");
  return v;
}

long KeyValueConfig::get_int(const std::string& key, long dflt) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return dflt;
  try {
    std::size_t pos = 0;
    const long v = std::stol(it->second.first, &pos);
    if (pos == it->second.first.size()) return v;
  } catch (const std::exception&) {
  }
  fail(key, "'" + it->second.first + "' is not an integer");
}

bool KeyValueConfig::get_bool(const std::string& key, bool dflt) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return dflt;
  std::string v = it->second.first;
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  fail(key, "'" + it->second.first + "' is not a boolean");
}

std::vector<double> KeyValueConfig::get_list(const std::string& key, const std::vector<double>& dflt) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return dflt;
  std::string s = it->second.first;
  if (!s.empty() && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
  std::vector<double> out;
  if (s.find(':') != std::string::npos) {
    const auto parts = split(s, ':');
    double a = 0, b = 0, n = 0;
    if (parts.size() != 3 || !to_double(parts[0], a) || !to_double(parts[1], b) || !to_double(parts[2], n) || n < 1 ||
        n != std::floor(n)) {
      fail(key, "range must be start:end:count");
    }
    const auto cnt = static_cast<int>(n);
    for (int k = 0; k < cnt; ++k) out.push_back(cnt == 1 ? a : a + (b - a) * k / (cnt - 1));
    return out;
  }
  for (const auto& part : split(s, ',')) {
    double v = 0.0;
    if (!to_double(part, v) || !std::isfinite(v)) fail(key, "'" + part + "' is not a number");
    out.push_back(v);
  }
  if (out.empty()) fail(key, "empty list");
  return out;
}

void KeyValueConfig::check_known(const std::set<std::string>& allowed) const {
  for (const auto& [key, val] : entries_) {
    if (!allowed.count(key)) fail(key, "unknown key");
  }
}

std::set<std::string> known_config_keys() {
  return {// simulation
          "n_nodes", "n_periods", "n_states", "centers", "sigma_state", "alpha_mean", "alpha_sd", "trans", "phi",
          "gamma0", "gamma1", "beta", "init_state", "with_leaning", "seed", "delta",
          // mcmc
          "model", "n_iter", "burn_in", "thin", "target_accept", "adapt_exponent", "adapt_offset",
          "init_proposal_var", "phi_rel_sd", "anchor", "anchor_sign", "adapt", "identify", "exposure", "parallel",
          "raw_trace",
          // priors
          "prior_sigma_alpha2", "prior_a_sigma", "prior_b_sigma", "prior_b_gamma0", "prior_b_gamma1", "prior_a_phi",
          "prior_b_phi", "prior_delta_var", "prior_omega",
          // moments
          "latent_dim", "alpha", "sigma2_beta", "other_sigma2", "q_row", "n_reps"};
}

namespace {

std::size_t positive_size(const KeyValueConfig& kv, const std::string& key, std::size_t dflt, std::size_t min = 1) {
  const long v = kv.get_int(key, static_cast<long>(dflt));
  if (v < static_cast<long>(min)) {
    throw ConfigError("config: " + key + " must be >= " + std::to_string(min) + " (got " + std::to_string(v) + ")");
  }
  return static_cast<std::size_t>(v);
}

// Re-throw validation failures of assembled objects as config errors.
template <class F>
void validated(const std::string& what, F&& f) {
  try {
    f();
  } catch (const ValidationError& e) {
    throw ConfigError("config: invalid " + what + ": " + e.what());
  }
}

}  // namespace

SimulationScenario scenario_from_config(const KeyValueConfig& kv) {
  SimulationScenario sc = SimulationScenario::default_scenario();
  sc.n_nodes = positive_size(kv, "n_nodes", sc.n_nodes, 2);
  sc.n_periods = positive_size(kv, "n_periods", sc.n_periods);
  sc.n_states = positive_size(kv, "n_states", sc.n_states);
  const auto K = static_cast<Eigen::Index>(sc.n_states);

  std::vector<double> c(sc.n_states), sd(sc.n_states);
  if (kv.has("centers") || sc.n_states != 2) {
    std::vector<double> dflt;
    for (std::size_t k = 0; k < sc.n_states; ++k) dflt.push_back(0.25 + 0.5 * static_cast<double>(k));
    c = kv.get_list("centers", dflt);
  } else {
    c = {0.25, 0.75};
  }
  sd = kv.get_list("sigma_state", std::vector<double>(sc.n_states, 0.15));
  if (c.size() != sc.n_states) throw ConfigError("config: centers needs one value per state");
  if (sd.size() != sc.n_states) throw ConfigError("config: sigma_state needs one value per state");
  sc.centers = SimulationScenario::two_group_centers(sc.n_nodes, Eigen::Map<Eigen::VectorXd>(c.data(), K));
  sc.sigma_state = Eigen::Map<Eigen::VectorXd>(sd.data(), K);

  std::vector<double> dflt_trans;
  for (Eigen::Index r = 0; r < K; ++r) {
    for (Eigen::Index s = 0; s < K; ++s) {
      dflt_trans.push_back(K == 1 ? 1.0 : (r == s ? 0.95 : 0.05 / static_cast<double>(K - 1)));
    }
  }
  auto tr = kv.get_list("trans", dflt_trans);
  if (tr.size() != static_cast<std::size_t>(K * K)) throw ConfigError("config: trans needs K*K row-major entries");
  sc.trans = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(tr.data(), K, K);

  sc.alpha_mean = kv.get_double("alpha_mean", sc.alpha_mean);
  sc.alpha_sd = kv.get_double("alpha_sd", sc.alpha_sd);
  sc.phi = kv.get_double("phi", sc.phi);
  sc.gamma0 = kv.get_double("gamma0", sc.gamma0);
  sc.gamma1 = kv.get_double("gamma1", sc.gamma1);
  sc.beta = kv.get_double("beta", sc.beta);
  sc.init_state = static_cast<int>(kv.get_int("init_state", sc.init_state + 1)) - 1;
  sc.with_leaning = kv.get_bool("with_leaning", sc.with_leaning);
  sc.seed = static_cast<std::uint64_t>(kv.get_int("seed", static_cast<long>(sc.seed)));
  if (kv.has("delta")) sc.delta = kv.get_double("delta", 0.0);
  validated("simulation scenario", [&] { sc.validate(); });
  return sc;
}

McmcConfig mcmc_from_config(const KeyValueConfig& kv) {
  McmcConfig c;
  if (kv.has("model")) c.model = parse_model_kind(kv.get_string("model", "m1"));
  c.n_iter = positive_size(kv, "n_iter", c.n_iter);
  c.burn_in = positive_size(kv, "burn_in", c.burn_in, 0);
  c.thin = positive_size(kv, "thin", c.thin);
  c.n_states = positive_size(kv, "n_states", c.n_states);
  c.target_accept = kv.get_double("target_accept", c.target_accept);
  c.adapt_exponent = kv.get_double("adapt_exponent", c.adapt_exponent);
  c.adapt_offset = kv.get_int("adapt_offset", c.adapt_offset);
  c.init_proposal_var = kv.get_double("init_proposal_var", c.init_proposal_var);
  c.phi_rel_sd = kv.get_double("phi_rel_sd", c.phi_rel_sd);
  const std::string sign = kv.get_string("anchor_sign", "negative");
  if (sign != "negative" && sign != "positive") throw ConfigError("config: anchor_sign must be negative|positive");
  c.anchor_negative = sign == "negative";
  c.seed = static_cast<std::uint64_t>(kv.get_int("seed", static_cast<long>(c.seed)));
  c.adapt = kv.get_bool("adapt", c.adapt);
  c.identify = kv.get_bool("identify", c.identify);
  c.use_exposure = kv.get_bool("exposure", c.use_exposure);
  c.parallel = kv.get_bool("parallel", c.parallel);
  c.keep_raw_trace = kv.get_bool("raw_trace", c.keep_raw_trace);
  validated("MCMC settings", [&] { c.validate(); });
  return c;
}

PriorSpec priors_from_config(const KeyValueConfig& kv) {
  PriorSpec p;
  p.sigma_alpha2 = kv.get_double("prior_sigma_alpha2", p.sigma_alpha2);
  p.a_sigma = kv.get_double("prior_a_sigma", p.a_sigma);
  p.b_sigma = kv.get_double("prior_b_sigma", p.b_sigma);
  p.b_gamma0 = kv.get_double("prior_b_gamma0", p.b_gamma0);
  p.b_gamma1 = kv.get_double("prior_b_gamma1", p.b_gamma1);
  p.a_phi = kv.get_double("prior_a_phi", p.a_phi);
  p.b_phi = kv.get_double("prior_b_phi", p.b_phi);
  p.delta_var = kv.get_double("prior_delta_var", p.delta_var);
  p.omega = kv.get_list("prior_omega", p.omega);
  validated("priors", [&] { p.validate(); });
  return p;
}

std::size_t resolve_anchor(const KeyValueConfig& kv, const std::vector<std::string>& node_names, std::size_t dflt) {
  if (!kv.has("anchor")) return dflt;
  const std::string a = kv.get_string("anchor", "");
  const auto it = std::find(node_names.begin(), node_names.end(), a);
  if (it != node_names.end()) return static_cast<std::size_t>(it - node_names.begin());
  const long idx = kv.get_int("anchor", 0);
  if (idx < 1 || static_cast<std::size_t>(idx) > node_names.size()) {
    throw ConfigError("config: anchor '" + a + "' is neither a node name nor an index in 1.." +
                      std::to_string(node_names.size()));
  }
  return static_cast<std::size_t>(idx - 1);
}

std::vector<StrengthMomentSpec> MomentGrid::specs() const {
  std::vector<StrengthMomentSpec> out;
  for (double a : alpha) {
    for (double sb : sigma2_beta) {
      StrengthMomentSpec s;
      s.n_nodes = n_nodes;
      s.latent_dim = latent_dim;
      s.alpha = a;
      s.beta = beta;
      s.sigma2 = {sb / beta};
      s.sigma2.insert(s.sigma2.end(), other_sigma2.begin(), other_sigma2.end());
      s.q_row = q_row;
      out.push_back(s);
    }
  }
  return out;
}

MomentGrid moment_grid_from_config(const KeyValueConfig& kv) {
  MomentGrid g;
  g.n_nodes = positive_size(kv, "n_nodes", g.n_nodes, 2);
  g.latent_dim = static_cast<int>(positive_size(kv, "latent_dim", 1));
  g.beta = kv.get_double("beta", g.beta);
  g.alpha = kv.get_list("alpha", g.alpha);
  g.sigma2_beta = kv.get_list("sigma2_beta", g.sigma2_beta);
  g.other_sigma2 = kv.get_list("other_sigma2", {});
  g.q_row = kv.get_list("q_row", std::vector<double>(1 + g.other_sigma2.size(), 1.0 / (1 + g.other_sigma2.size())));
  g.n_reps = positive_size(kv, "n_reps", g.n_reps, 2);
  g.seed = static_cast<std::uint64_t>(kv.get_int("seed", static_cast<long>(g.seed)));
  validated("moment grid", [&] {
    for (const auto& s : g.specs()) s.validate();
  });
  return g;
}

}  // namespace msls
