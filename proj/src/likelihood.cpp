#include "msls/likelihood.hpp"

#include <cmath>

namespace msls {

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double log_intensity(double alpha_i, double alpha_j, double beta, double x_i, double x_j,
                     std::optional<double> exposure_term) {
  if (!(beta > 0.0)) throw ValidationError("log_intensity: beta must be positive");
  if (!std::isfinite(alpha_i) || !std::isfinite(alpha_j) || !std::isfinite(x_i) || !std::isfinite(x_j)) {
    throw ValidationError("log_intensity: non-finite input");
  }
  const double d = x_i - x_j;
  double v = alpha_i + alpha_j - beta * d * d;
  if (exposure_term) {
    if (!std::isfinite(*exposure_term)) throw ValidationError("log_intensity: non-finite exposure term");
    v += *exposure_term;
  }
  return v;
}

double poisson_log_pmf(int y, double log_lambda) {
  if (!std::isfinite(log_lambda)) throw ValidationError("poisson_log_pmf: non-finite log intensity");
  if (y < 0) throw ValidationError("poisson_log_pmf: negative count");
  return y * log_lambda - std::exp(log_lambda) - std::lgamma(y + 1.0);
}

BetaShapes beta_shapes(double gamma0, double gamma1, double x, double phi) {
  const double mu = logistic(gamma0 + gamma1 * x);
  return {mu * phi, (1.0 - mu) * phi};
}

double beta_leaning_log_pdf(double l, double gamma0, double gamma1, double x, double phi) {
  if (!(phi > 0.0)) throw ValidationError("beta_leaning_log_pdf: phi must be positive");
  l = clamp_leaning(l);
  const auto [a, b] = beta_shapes(gamma0, gamma1, x, phi);
  return std::lgamma(phi) - std::lgamma(a) - std::lgamma(b) + (a - 1.0) * std::log(l) +
         (b - 1.0) * std::log1p(-l);
}

double coordinate(const Layer& layer, const ModelParams& p, const StateSequence& s, ModelKind kind,
                  std::size_t t, std::size_t i) {
  if (kind == ModelKind::RGCov) return layer.leaning(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i));
  if (kind == ModelKind::RG) return 0.0;
  return p.zeta(static_cast<Eigen::Index>(i), s.states[t]);
}

double cell_log_intensity(const Layer& layer, const ModelParams& p, const StateSequence& s,
                          ModelKind kind, std::size_t t, std::size_t i, std::size_t j,
                          const Eigen::VectorXd& ecov) {
  const double expo = p.delta ? *p.delta * ecov(static_cast<Eigen::Index>(t)) : 0.0;
  if (kind == ModelKind::RG) return p.alpha(0) + expo;
  const double xi = coordinate(layer, p, s, kind, t, i);
  const double xj = coordinate(layer, p, s, kind, t, j);
  const double d = xi - xj;
  return p.alpha(static_cast<Eigen::Index>(i)) + p.alpha(static_cast<Eigen::Index>(j)) - p.beta * d * d + expo;
}

Eigen::MatrixXd log_intensity_matrix(const Layer& layer, const ModelParams& p, const StateSequence& s,
                                     ModelKind kind) {
  const PairList pairs = make_pairs(layer.n_nodes);
  const Eigen::VectorXd ecov = exposure_covariate(layer);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(layer.n_periods), static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t t = 0; t < layer.n_periods; ++t) {
    for (std::size_t q = 0; q < pairs.size(); ++q) {
      out(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(q)) =
          cell_log_intensity(layer, p, s, kind, t, pairs.first[q], pairs.second[q], ecov);
    }
  }
  return out;
}

double network_only_log_lik(const Layer& layer, const ModelParams& p, const StateSequence& s, ModelKind kind) {
  if (layer.n_nodes == 0) return 0.0;
  const Eigen::VectorXd ecov = exposure_covariate(layer);
  double total = 0.0;
  for (std::size_t t = 0; t < layer.n_periods; ++t) {
    double part = 0.0;
    for (std::size_t i = 0; i < layer.n_nodes; ++i) {
      for (std::size_t j = i + 1; j < layer.n_nodes; ++j) {
        part += poisson_log_pmf(layer.weight(t, i, j), cell_log_intensity(layer, p, s, kind, t, i, j, ecov));
      }
    }
    total += part;
  }
  return total;
}

double leaning_log_lik(const Layer& layer, const ModelParams& p, const StateSequence& s) {
  if (!layer.has_leaning()) return 0.0;
  double total = 0.0;
  for (std::size_t t = 0; t < layer.n_periods; ++t) {
    for (std::size_t i = 0; i < layer.n_nodes; ++i) {
      total += beta_leaning_log_pdf(layer.leaning(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i)),
                                    p.gamma0, p.gamma1, p.zeta(static_cast<Eigen::Index>(i), s.states[t]), p.phi);
    }
  }
  return total;
}

double transition_log_lik(const ModelParams& p, const StateSequence& s) {
  double total = 0.0;
  for (std::size_t t = 1; t < s.size(); ++t) total += std::log(p.trans(s.states[t - 1], s.states[t]));
  return total;
}

double complete_data_log_lik(const Layer& layer, const ModelParams& p, const StateSequence& s, ModelKind kind) {
  double v = network_only_log_lik(layer, p, s, kind);
  if (is_latent_space(kind)) v += leaning_log_lik(layer, p, s) + transition_log_lik(p, s);
  return v;
}

}  // namespace msls
