#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "msls/adaptive.hpp"
#include "msls/identify.hpp"
#include "msls/kernels.hpp"
#include "msls/random.hpp"
#include "msls/types.hpp"

namespace msls {

struct McmcConfig {
  std::size_t n_iter = 50000;
  std::size_t burn_in = 30000;
  std::size_t thin = 10;
  std::size_t n_states = 2;
  ModelKind model = ModelKind::M1;
  double target_accept = 0.25;
  double adapt_exponent = 0.6;
  long adapt_offset = 10;          // the first update uses gain (offset + 1)^-psi
  double init_proposal_var = 0.01;
  double phi_rel_sd = 0.1;         // truncated-normal proposal sd as a fraction of phi
  std::size_t anchor_index = 2;
  bool anchor_negative = true;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
  bool adapt = true;
  bool identify = true;
  bool use_exposure = false;
  bool keep_raw_trace = true;
  bool parallel = true;

  std::size_t effective_states() const;
  std::size_t n_retained() const { return n_iter > burn_in ? (n_iter - burn_in) / thin : 0; }
  void validate() const;
};

struct BlockAcceptance {
  std::string block;
  long proposals = 0;
  long accepted = 0;
  double prob_sum = 0.0;
  double rate() const { return proposals > 0 ? static_cast<double>(accepted) / proposals : 0.0; }
  double mean_prob() const { return proposals > 0 ? prob_sum / proposals : 0.0; }
};

struct ChainOutput {
  ModelKind model = ModelKind::M1;
  McmcConfig config;
  PriorSpec priors;
  std::size_t n_nodes = 0;
  std::size_t n_periods = 0;
  std::vector<std::string> node_names;

  std::vector<ModelParams> draws;
  std::vector<StateSequence> state_draws;
  std::vector<double> loglik_complete;
  std::vector<double> loglik_network;

  // post-burn-in acceptance, per block and per scalar parameter
  std::vector<BlockAcceptance> acceptance;
  Eigen::VectorXd acc_alpha;  // per node
  Eigen::MatrixXd acc_zeta;   // N x K

  // every iteration, one column per scalar parameter (see raw_names)
  Eigen::MatrixXd raw_trace;
  std::vector<std::string> raw_names;
  double elapsed_seconds = 0.0;

  const BlockAcceptance* find_block(const std::string& name) const;
};

// Conjugate updates.
struct InvGammaParams {
  double shape;
  double scale;
};
InvGammaParams sigma2_posterior(const Eigen::VectorXd& zeta_col, const PriorSpec& prior);
double sample_sigma2(const Eigen::VectorXd& zeta_col, const PriorSpec& prior, Rng& rng);
std::vector<double> q_row_posterior(const std::vector<int>& counts, const std::vector<double>& omega);
std::vector<double> sample_q_row(const std::vector<int>& counts, const std::vector<double>& omega, Rng& rng);
/// K x K transition counts for t = 2..T.
std::vector<std::vector<int>> transition_counts(const StateSequence& s, std::size_t n_states);

/// log q(phi | phi_new) - log q(phi_new | phi) for the truncated-normal
/// proposal with sd = rel_sd * (conditioning value), truncated at 0.
double phi_proposal_log_correction(double phi, double phi_new, double rel_sd);
double sample_truncated_normal_positive(double mean, double sd, Rng& rng);

/// Draws theta and the state path from the prior (flat initial state).
struct PriorDraw {
  ModelParams params;
  StateSequence states;
};
PriorDraw draw_from_prior(const PriorSpec& prior, std::size_t n_nodes, std::size_t n_periods, std::size_t n_states,
                          ModelKind kind, Rng& rng);

/// One Gibbs chain on one layer. The public block methods perform a single
/// update of that block against the current state.
class GibbsSampler {
 public:
  GibbsSampler(const Layer& layer, const PriorSpec& prior, const McmcConfig& cfg);

  // Initialise from data heuristics (or from an explicit draw).
  void initialize();
  void set_state(const ModelParams& p, const StateSequence& s);
  // Replace the data while keeping the parameters (used by simulator-consistency tests).
  void reset_data(const Layer& layer);

  void sample_alpha_block();
  void sample_phi();
  void sample_gamma_pair();
  void sample_delta();
  void sample_zeta_block();
  // Translates a whole state's coordinates at once. Distances are unchanged, so only
  // the leaning term and the prior enter; runs only when the Beta link is active.
  void sample_zeta_shift();
  // Scales all coordinates by c and gamma1 by 1/c, which leaves the leaning term
  // unchanged. Runs only when the Beta link is active.
  void sample_zeta_scale();
  // Proposes the mirror image of one state's coordinates. Distances and the
  // prior are unchanged, so the ratio is the leaning term alone. Lets a state
  // that settled on the wrong side of the leaning axis cross back.
  void sample_zeta_flip();
  void sample_sigma2_all();
  void sample_trans();
  void sample_states();
  IdentifyTransform identify();
  void sweep();

  const ModelParams& params() const { return p_; }
  const StateSequence& states() const { return s_; }
  ModelKind model() const { return cfg_.model; }
  const PanelCache& cache() const { return pc_; }
  const Layer& layer() const { return layer_; }
  bool beta_link_active() const;
  IdentifyOptions identify_options() const;

  // Conditional log targets (up to constants), exposed for tests.
  double alpha_log_target(std::size_t i, double a) const;
  double zeta_log_target(std::size_t i, std::size_t k, double z) const;
  double leaning_log_lik_fast(double gamma0, double gamma1, double phi) const;

  void set_recording(bool on) { recording_ = on; }
  const std::vector<BlockAcceptance>& block_acceptance() const { return blocks_; }
  const Eigen::VectorXd& alpha_accepts() const { return acc_alpha_; }
  const Eigen::MatrixXd& zeta_accepts() const { return acc_zeta_; }
  long recorded_sweeps() const { return recorded_sweeps_; }

  Rng& rng() { return rng_; }

 private:
  void refresh_state_caches();
  void refresh_cov_weights();
  void record(std::size_t block, double prob, bool accepted);

  Layer layer_;
  PanelCache pc_;
  PriorSpec prior_;
  McmcConfig cfg_;
  Rng rng_;
  std::size_t K_;

  ModelParams p_;
  StateSequence s_;

  // sufficient statistics given the state path
  std::vector<Eigen::MatrixXd> W_;  // K, N x N pair sums of y over T_k
  Eigen::VectorXd wk_;              // K, sum over T_k of exp(delta e_t)
  Eigen::VectorXd nk_;              // K, |T_k|
  Eigen::MatrixXd Lk_, Mk_;         // N x K, sums of log l and log(1 - l) over T_k
  Eigen::VectorXd scale_t_;         // T, exp(delta e_t)
  Eigen::MatrixXd cov_g_;           // P x T, exp(-beta (l_it - l_jt)^2) for the covariate baseline
  Eigen::VectorXd cov_c_;           // P, sum_t scale_t * cov_g_
  double ytot_all_ = 0.0;
  double ye_all_ = 0.0;             // sum_t e_t ytot_t

  std::vector<AdaptiveState> ad_alpha_;
  std::vector<AdaptiveState> ad_zeta_;  // index i + N k
  std::vector<AdaptiveState> ad_shift_;  // per state, tracks the column mean
  AdaptiveState ad_scale_;               // tracks log RMS pairwise distance
  double log_rms_distance() const;
  AdaptiveState ad_gamma_;
  AdaptiveState ad_delta_;

  bool recording_ = false;
  long recorded_sweeps_ = 0;
  std::vector<BlockAcceptance> blocks_;
  Eigen::VectorXd acc_alpha_;
  Eigen::MatrixXd acc_zeta_;
};

/// Full chain: burn-in, thinning, per-iteration identification and recording.
/// Throws InitializationError if the initial log-likelihood is not finite.
ChainOutput run_chain(const Layer& layer, const PriorSpec& prior, const McmcConfig& cfg);

/// P x T log intensities of a draw (pairs in PanelCache order).
Eigen::MatrixXd draw_log_intensity(const PanelCache& pc, const Layer& layer, const ModelParams& p,
                                   const StateSequence& s, ModelKind kind);

/// Column names of the raw trace for a given model and layer size.
std::vector<std::string> raw_trace_names(ModelKind kind, std::size_t n_nodes, std::size_t n_states, bool with_delta);
/// Flatten a draw in raw-trace column order.
Eigen::VectorXd flatten_draw(const ModelParams& p, ModelKind kind, bool with_delta);

}  // namespace msls
