#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "msls/generative.hpp"
#include "msls/moments.hpp"
#include "msls/sampler.hpp"

namespace msls {

/// `key = value` lines; `#` starts a comment. Every error names source:line.
class KeyValueConfig {
 public:
  static KeyValueConfig parse_file(const std::string& path);
  static KeyValueConfig parse_string(const std::string& text, const std::string& source = "<config>");

  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  std::string get_string(const std::string& key, const std::string& dflt) const;
  double get_double(const std::string& key, double dflt) const;
  long get_int(const std::string& key, long dflt) const;
  bool get_bool(const std::string& key, bool dflt) const;
  /// Comma list, or `a:b:n` for n evenly spaced points from a to b.
  std::vector<double> get_list(const std::string& key, const std::vector<double>& dflt) const;

  void set(const std::string& key, const std::string& value) { entries_[key] = {value, 0}; }
  /// Throws on the first key not in the allowed set.
  void check_known(const std::set<std::string>& allowed) const;
  const std::map<std::string, std::pair<std::string, int>>& entries() const { return entries_; }

 private:
  [[noreturn]] void fail(const std::string& key, const std::string& msg) const;
  std::string source_;
  std::map<std::string, std::pair<std::string, int>> entries_;
};

std::set<std::string> known_config_keys();

SimulationScenario scenario_from_config(const KeyValueConfig& kv);
McmcConfig mcmc_from_config(const KeyValueConfig& kv);
PriorSpec priors_from_config(const KeyValueConfig& kv);
/// `anchor` is a node name or a 1-based index; returns a 0-based index.
std::size_t resolve_anchor(const KeyValueConfig& kv, const std::vector<std::string>& node_names, std::size_t dflt);

struct MomentGrid {
  std::size_t n_nodes = 100;
  int latent_dim = 1;
  double beta = 1.0;
  std::vector<double> alpha{0.0};
  std::vector<double> sigma2_beta{1.0};  // product sigma^2 * beta for the first state
  std::vector<double> other_sigma2;      // fixed variances of states 2..K
  std::vector<double> q_row{1.0};
  std::size_t n_reps = 200;
  std::uint64_t seed = 1;

  std::vector<StrengthMomentSpec> specs() const;  // alpha outer, sigma2_beta inner
};
MomentGrid moment_grid_from_config(const KeyValueConfig& kv);

}  // namespace msls
