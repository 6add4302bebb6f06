#include "msls/ffbs.hpp"

#include <cmath>
#include <limits>

#include "msls/likelihood.hpp"

namespace msls {

namespace {

double log_sum_exp(const Eigen::Ref<const Eigen::VectorXd>& v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((v.array() - m).exp().sum());
}

}  // namespace

ForwardResult forward_filter(const Eigen::MatrixXd& log_emission, const Eigen::MatrixXd& trans) {
  const Eigen::Index T = log_emission.rows();
  const Eigen::Index K = log_emission.cols();
  const Eigen::MatrixXd logq = trans.array().log().matrix();
  ForwardResult out;
  out.log_filter.resize(T, K);
  Eigen::VectorXd pred(K);
  for (Eigen::Index t = 0; t < T; ++t) {
    if (t == 0) {
      pred.setConstant(-std::log(static_cast<double>(K)));
    } else {
      for (Eigen::Index k = 0; k < K; ++k) {
        pred(k) = log_sum_exp(out.log_filter.row(t - 1).transpose() + logq.col(k));
      }
    }
    Eigen::VectorXd joint = pred + log_emission.row(t).transpose();
    const double c = log_sum_exp(joint);
    if (!std::isfinite(c)) throw NumericalError("ffbs: all states have zero probability at t=" + std::to_string(t + 1));
    out.log_filter.row(t) = (joint.array() - c).matrix().transpose();
    out.log_marginal += c;
  }
  return out;
}

StateSequence ffbs_from_emissions(const Eigen::MatrixXd& log_emission, const Eigen::MatrixXd& trans, Rng& rng) {
  const Eigen::Index T = log_emission.rows();
  const Eigen::Index K = log_emission.cols();
  StateSequence s;
  s.states.assign(static_cast<std::size_t>(T), 0);
  if (K == 1 || T == 0) return s;
  const ForwardResult f = forward_filter(log_emission, trans);
  const Eigen::MatrixXd logq = trans.array().log().matrix();
  s.states[T - 1] = rng.categorical_log(f.log_filter.row(T - 1).transpose());
  for (Eigen::Index t = T - 2; t >= 0; --t) {
    const int next = s.states[t + 1];
    s.states[t] = rng.categorical_log(f.log_filter.row(t).transpose() + logq.col(next));
  }
  return s;
}

Eigen::MatrixXd state_emissions(const PanelCache& pc, const ModelParams& p, bool parallel) {
  const auto P = static_cast<Eigen::Index>(pc.n_pairs());
  const auto T = static_cast<Eigen::Index>(pc.n_periods);
  const auto N = static_cast<Eigen::Index>(pc.n_nodes);
  const Eigen::Index K = p.zeta.cols();
  Eigen::MatrixXd c(P, K);
  for (Eigen::Index k = 0; k < K; ++k) {
    for (Eigen::Index q = 0; q < P; ++q) {
      const int i = pc.pairs.first[q];
      const int j = pc.pairs.second[q];
      const double d = p.zeta(i, k) - p.zeta(j, k);
      c(q, k) = p.alpha(i) + p.alpha(j) - p.beta * d * d;
    }
  }
  const Eigen::VectorXd off = p.delta ? Eigen::VectorXd(*p.delta * pc.ecov) : Eigen::VectorXd::Zero(T);
  Eigen::MatrixXd E;
  if (parallel) {
    omp::poisson_emissions(pc, c, off, E);
  } else {
    serial::poisson_emissions(pc, c, off, E);
  }
  if (pc.has_leaning) {
    // sum_i [lgamma(phi) - lgamma(a_ik) - lgamma(b_ik)] + (a_ik - 1) log l_ti + (b_ik - 1) log(1 - l_ti)
    Eigen::MatrixXd am1(N, K), bm1(N, K);
    Eigen::VectorXd cst = Eigen::VectorXd::Zero(K);
    const double lg_phi = std::lgamma(p.phi);
    for (Eigen::Index k = 0; k < K; ++k) {
      for (Eigen::Index i = 0; i < N; ++i) {
        const auto [a, b] = beta_shapes(p.gamma0, p.gamma1, p.zeta(i, k), p.phi);
        am1(i, k) = a - 1.0;
        bm1(i, k) = b - 1.0;
        cst(k) += lg_phi - std::lgamma(a) - std::lgamma(b);
      }
    }
    E.noalias() += pc.log_l * am1 + pc.log_1ml * bm1;
    E.rowwise() += cst.transpose();
  }
  return E;
}

Eigen::MatrixXd state_emissions(const Layer& layer, const ModelParams& p) {
  return state_emissions(PanelCache::build(layer), p, true);
}

StateSequence ffbs_states(const Layer& layer, const ModelParams& p, Rng& rng) {
  if (p.n_states() == 1) return StateSequence::constant(layer.n_periods, 0);
  return ffbs_from_emissions(state_emissions(layer, p), p.trans, rng);
}

}  // namespace msls
