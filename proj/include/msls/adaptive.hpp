#pragma once

#include "msls/random.hpp"

#include <Eigen/Dense>

namespace msls {

/// Global-scaling adaptive random-walk state for one MH block.
/// Proposal: N(current, exp(log_delta) * cov).
struct AdaptiveState {
  double log_delta = 0.0;
  Eigen::VectorXd mu;
  Eigen::MatrixXd cov;
  long h = 0;  // updates performed so far (plus any starting offset)

  static AdaptiveState init(const Eigen::VectorXd& current, double init_var, long offset = 0);
  Eigen::Index dim() const { return mu.size(); }
  // exp(log_delta) * cov + jitter * I
  Eigen::MatrixXd proposal_cov(double jitter = 1e-9) const;
  Eigen::VectorXd propose(const Eigen::VectorXd& current, Rng& rng, double jitter = 1e-9) const;
  double propose_scalar(double current, Rng& rng, double jitter = 1e-9) const;
};

/// gamma_h = h^{-psi}
double adapt_gain(long h, double psi);

/// One step of the stochastic-approximation recursions: increments h, then
/// log_delta += g (accept_prob - target); mu += g (x - mu); cov += g ((x - mu_old)(x - mu_old)' - cov).
void adaptive_update(AdaptiveState& st, const Eigen::VectorXd& draw, double accept_prob, double target, double psi);

/// min(1, exp(log_ratio)), NaN-safe (NaN -> 0).
double mh_accept_prob(double log_ratio);

}  // namespace msls
