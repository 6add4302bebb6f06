#pragma once

#include "msls/kernels.hpp"
#include "msls/random.hpp"
#include "msls/types.hpp"

namespace msls {

struct ForwardResult {
  Eigen::MatrixXd log_filter;  // T x K, log p(s_t = k | data up to t)
  double log_marginal = 0.0;   // log p(data) under a flat initial distribution
};

/// Forward filter in log space. The initial distribution is flat over the K states.
/// Throws NumericalError if some period has no state with finite emission.
ForwardResult forward_filter(const Eigen::MatrixXd& log_emission, const Eigen::MatrixXd& trans);

StateSequence ffbs_from_emissions(const Eigen::MatrixXd& log_emission, const Eigen::MatrixXd& trans, Rng& rng);

/// T x K per-period log densities of the data given each state: Poisson terms
/// over all pairs plus, when leaning is present, the Beta terms over nodes.
Eigen::MatrixXd state_emissions(const PanelCache& pc, const ModelParams& p, bool parallel = true);
Eigen::MatrixXd state_emissions(const Layer& layer, const ModelParams& p);

StateSequence ffbs_states(const Layer& layer, const ModelParams& p, Rng& rng);

}  // namespace msls
