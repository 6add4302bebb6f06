#include "msls/generative.hpp"

#include <cmath>
#include <string>

#include "msls/likelihood.hpp"

namespace msls {

Eigen::MatrixXd SimulationScenario::two_group_centers(std::size_t n_nodes, const Eigen::VectorXd& c) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(n_nodes), c.size());
  const std::size_t half = n_nodes / 2;
  for (std::size_t i = 0; i < n_nodes; ++i) {
    const double sgn = i < half ? -1.0 : 1.0;
    out.row(static_cast<Eigen::Index>(i)) = sgn * c.transpose();
  }
  return out;
}

SimulationScenario SimulationScenario::default_scenario() {
  SimulationScenario sc;
  sc.centers = two_group_centers(sc.n_nodes, Eigen::Vector2d(0.25, 0.75));
  sc.sigma_state = Eigen::Vector2d(0.15, 0.15);
  sc.trans.resize(2, 2);
  sc.trans << 0.95, 0.05, 0.05, 0.95;
  return sc;
}

void SimulationScenario::validate() const {
  const auto n = static_cast<Eigen::Index>(n_nodes);
  const auto k = static_cast<Eigen::Index>(n_states);
  if (n_nodes == 0 || n_periods == 0 || n_states == 0) throw ValidationError("scenario: sizes must be positive");
  if (centers.rows() != n || centers.cols() != k) throw ValidationError("scenario: centers must be N x K");
  if (sigma_state.size() != k) throw ValidationError("scenario: sigma_state must have K entries");
  if ((sigma_state.array() < 0.0).any()) throw ValidationError("scenario: sigma_state must be nonnegative");
  if (trans.rows() != k || trans.cols() != k) throw ValidationError("scenario: trans must be K x K");
  for (Eigen::Index r = 0; r < k; ++r) {
    if ((trans.row(r).array() < 0.0).any() || std::abs(trans.row(r).sum() - 1.0) > 1e-12) {
      throw ValidationError("scenario: trans must be row-stochastic");
    }
  }
  if (init_state < 0 || init_state >= static_cast<int>(n_states)) throw ValidationError("scenario: init_state out of range");
  if (!(phi > 0.0) || !(beta > 0.0) || !(alpha_sd >= 0.0)) throw ValidationError("scenario: phi, beta must be positive");
  if (exposure && exposure->size() != static_cast<Eigen::Index>(n_periods)) {
    throw ValidationError("scenario: exposure length != n_periods");
  }
}

StateSequence simulate_state_path(const Eigen::MatrixXd& trans, std::size_t n_periods, int init_state, Rng& rng) {
  if (!trans.allFinite()) throw ValidationError("simulate_state_path: degenerate transition matrix");
  const Eigen::MatrixXd logq = trans.array().log().matrix();
  StateSequence s;
  s.states.resize(n_periods);
  if (n_periods == 0) return s;
  s.states[0] = init_state;
  for (std::size_t t = 1; t < n_periods; ++t) {
    s.states[t] = rng.categorical_log(logq.row(s.states[t - 1]).transpose());
  }
  return s;
}

Layer simulate_data(const ModelParams& p, const StateSequence& s, bool with_leaning, Rng& rng,
                    const std::optional<Eigen::VectorXd>& exposure) {
  const std::size_t n = p.n_nodes();
  const std::size_t T = s.size();
  Layer layer;
  layer.n_nodes = n;
  layer.n_periods = T;
  layer.exposure = exposure;
  for (std::size_t i = 0; i < n; ++i) layer.node_names.push_back("n" + std::to_string(i + 1));
  const Eigen::VectorXd ecov = exposure_covariate(layer);
  const auto N = static_cast<Eigen::Index>(n);
  layer.weights.assign(T, IntMatrix::Zero(N, N));
  if (with_leaning) layer.leaning.resize(static_cast<Eigen::Index>(T), N);
  for (std::size_t t = 0; t < T; ++t) {
    const int k = s.states[t];
    const std::optional<double> expo =
        p.delta ? std::optional<double>(*p.delta * ecov(static_cast<Eigen::Index>(t))) : std::nullopt;
    for (Eigen::Index i = 0; i < N; ++i) {
      for (Eigen::Index j = i + 1; j < N; ++j) {
        const double ll = log_intensity(p.alpha(i), p.alpha(j), p.beta, p.zeta(i, k), p.zeta(j, k), expo);
        const int y = rng.poisson(std::exp(ll));
        layer.weights[t](i, j) = y;
        layer.weights[t](j, i) = y;
      }
    }
    if (with_leaning) {
      for (Eigen::Index i = 0; i < N; ++i) {
        const auto [a, b] = beta_shapes(p.gamma0, p.gamma1, p.zeta(i, k), p.phi);
        layer.leaning(static_cast<Eigen::Index>(t), i) = clamp_leaning(rng.beta(a, b));
      }
    }
  }
  return layer;
}

SimulatedLayer simulate_layer(const SimulationScenario& sc, std::uint64_t stream) {
  sc.validate();
  Rng rng(sc.seed, stream);
  const auto N = static_cast<Eigen::Index>(sc.n_nodes);
  const auto K = static_cast<Eigen::Index>(sc.n_states);
  SimulatedLayer out;
  ModelParams& p = out.truth;
  p.alpha.resize(N);
  for (Eigen::Index i = 0; i < N; ++i) p.alpha(i) = rng.normal(sc.alpha_mean, sc.alpha_sd);
  p.zeta.resize(N, K);
  for (Eigen::Index k = 0; k < K; ++k) {
    for (Eigen::Index i = 0; i < N; ++i) p.zeta(i, k) = rng.normal(sc.centers(i, k), sc.sigma_state(k));
  }
  p.sigma2 = sc.sigma_state.array().square().matrix();
  // sigma = 0 is allowed when simulating; keep the truth record valid.
  for (Eigen::Index k = 0; k < K; ++k) p.sigma2(k) = std::max(p.sigma2(k), 1e-300);
  p.gamma0 = sc.gamma0;
  p.gamma1 = sc.gamma1;
  p.phi = sc.phi;
  p.trans = sc.trans;
  p.beta = sc.beta;
  p.delta = sc.delta;
  out.states = simulate_state_path(sc.trans, sc.n_periods, sc.init_state, rng);
  out.layer = simulate_data(p, out.states, sc.with_leaning, rng, sc.exposure);
  return out;
}

}  // namespace msls
