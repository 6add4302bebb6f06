#include "msls/adaptive.hpp"

#include <cmath>

#include "msls/types.hpp"

namespace msls {

AdaptiveState AdaptiveState::init(const Eigen::VectorXd& current, double init_var, long offset) {
  AdaptiveState st;
  st.mu = current;
  st.cov = Eigen::MatrixXd::Identity(current.size(), current.size()) * init_var;
  st.h = offset;
  return st;
}

Eigen::MatrixXd AdaptiveState::proposal_cov(double jitter) const {
  Eigen::MatrixXd c = std::exp(log_delta) * cov;
  c.diagonal().array() += jitter;
  return c;
}

Eigen::VectorXd AdaptiveState::propose(const Eigen::VectorXd& current, Rng& rng, double jitter) const {
  const Eigen::MatrixXd c = proposal_cov(jitter);
  Eigen::LLT<Eigen::MatrixXd> llt(c);
  if (llt.info() != Eigen::Success) throw NumericalError("adaptive proposal covariance is not positive definite");
  Eigen::VectorXd z(current.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
  return current + llt.matrixL() * z;
}

double AdaptiveState::propose_scalar(double current, Rng& rng, double jitter) const {
  const double v = std::exp(log_delta) * cov(0, 0) + jitter;
  return current + std::sqrt(v) * rng.normal();
}

double adapt_gain(long h, double psi) { return std::pow(static_cast<double>(h), -psi); }

void adaptive_update(AdaptiveState& st, const Eigen::VectorXd& draw, double accept_prob, double target, double psi) {
  st.h += 1;
  const double g = adapt_gain(st.h, psi);
  st.log_delta += g * (accept_prob - target);
  const Eigen::VectorXd diff = draw - st.mu;
  st.mu += g * diff;
  st.cov += g * (diff * diff.transpose() - st.cov);
}

double mh_accept_prob(double log_ratio) {
  if (std::isnan(log_ratio)) return 0.0;
  return log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
}

}  // namespace msls
