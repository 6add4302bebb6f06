#pragma once

#include <optional>

#include "msls/types.hpp"

namespace msls {

double logistic(double x);

/// alpha_i + alpha_j - beta (x_i - x_j)^2 (+ exposure_term).
double log_intensity(double alpha_i, double alpha_j, double beta, double x_i, double x_j,
                     std::optional<double> exposure_term = std::nullopt);

/// y log(lambda) - lambda - log(y!).
double poisson_log_pmf(int y, double log_lambda);

struct BetaShapes {
  double a;
  double b;
};
BetaShapes beta_shapes(double gamma0, double gamma1, double x, double phi);

/// Log density of Beta(mu phi, (1 - mu) phi) at l, mu = logistic(gamma0 + gamma1 x).
/// l is clamped into [1e-6, 1 - 1e-6] first.
double beta_leaning_log_pdf(double l, double gamma0, double gamma1, double x, double phi);

/// Latent coordinate of node i at period t. For the covariate baseline the
/// observed leaning plays this role.
double coordinate(const Layer& layer, const ModelParams& p, const StateSequence& s, ModelKind kind,
                  std::size_t t, std::size_t i);

/// Log intensity of pair (i, j) at period t under the given model variant.
double cell_log_intensity(const Layer& layer, const ModelParams& p, const StateSequence& s,
                          ModelKind kind, std::size_t t, std::size_t i, std::size_t j,
                          const Eigen::VectorXd& ecov);

/// T x P matrix of log intensities (pairs from make_pairs).
Eigen::MatrixXd log_intensity_matrix(const Layer& layer, const ModelParams& p, const StateSequence& s,
                                     ModelKind kind = ModelKind::M1);

double network_only_log_lik(const Layer& layer, const ModelParams& p, const StateSequence& s,
                            ModelKind kind = ModelKind::M1);
double leaning_log_lik(const Layer& layer, const ModelParams& p, const StateSequence& s);
double transition_log_lik(const ModelParams& p, const StateSequence& s);

/// Poisson network terms + Beta leaning terms + transitions from t = 2 on.
/// The baselines have no leaning equation or hidden states, so for them
/// this reduces to the network terms.
double complete_data_log_lik(const Layer& layer, const ModelParams& p, const StateSequence& s,
                             ModelKind kind = ModelKind::M1);

}  // namespace msls
