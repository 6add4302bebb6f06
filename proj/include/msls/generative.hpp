#pragma once

#include <cstdint>
#include <optional>

#include "msls/random.hpp"
#include "msls/types.hpp"

namespace msls {

struct SimulationScenario {
  std::size_t n_nodes = 20;
  std::size_t n_periods = 100;
  std::size_t n_states = 2;
  Eigen::MatrixXd centers;      // N x K centres of the zeta draws
  Eigen::VectorXd sigma_state;  // K standard deviations
  double alpha_mean = 0.0;
  double alpha_sd = 2.0;
  Eigen::MatrixXd trans;
  double phi = 200.0;
  double gamma0 = -0.1;
  double gamma1 = 0.5;
  double beta = 1.0;
  int init_state = 0;
  bool with_leaning = true;
  std::optional<Eigen::VectorXd> exposure;  // raw TotCom, length T
  std::optional<double> delta;
  std::uint64_t seed = 1;

  // Two groups of outlets: the first half centred at -c_k, the second at +c_k.
  static Eigen::MatrixXd two_group_centers(std::size_t n_nodes, const Eigen::VectorXd& c);
  // 20 outlets, 100 days, low (0.25) and high (0.75) polarisation states.
  static SimulationScenario default_scenario();
  void validate() const;
};

struct SimulatedLayer {
  Layer layer;
  ModelParams truth;
  StateSequence states;
};

StateSequence simulate_state_path(const Eigen::MatrixXd& trans, std::size_t n_periods, int init_state, Rng& rng);

/// Draw Y and (optionally) the leaning proxy given parameters and a state path.
Layer simulate_data(const ModelParams& p, const StateSequence& s, bool with_leaning, Rng& rng,
                    const std::optional<Eigen::VectorXd>& exposure = std::nullopt);

/// Stream selects an independent RNG stream (one per layer).
SimulatedLayer simulate_layer(const SimulationScenario& sc, std::uint64_t stream = 0);

}  // namespace msls
