#include <cmath>
#include <limits>

#include "msls/ffbs.hpp"
#include "msls/likelihood.hpp"
#include "msls/sampler.hpp"

namespace msls {

namespace {

enum Block : std::size_t { kAlpha = 0, kPhi = 1, kGamma = 2, kDelta = 3, kZeta0 = 4 };

inline std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n) {
  if (i > j) std::swap(i, j);
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

double normal_log_cdf(double x) { return std::log(0.5 * std::erfc(-x / std::sqrt(2.0))); }

}  // namespace

InvGammaParams sigma2_posterior(const Eigen::VectorXd& zeta_col, const PriorSpec& prior) {
  return {prior.a_sigma + 0.5 * static_cast<double>(zeta_col.size()), prior.b_sigma + 0.5 * zeta_col.squaredNorm()};
}

double sample_sigma2(const Eigen::VectorXd& zeta_col, const PriorSpec& prior, Rng& rng) {
  const auto ig = sigma2_posterior(zeta_col, prior);
  return rng.inv_gamma(ig.shape, ig.scale);
}

std::vector<double> q_row_posterior(const std::vector<int>& counts, const std::vector<double>& omega) {
  if (counts.size() != omega.size()) throw ValidationError("q_row: counts and omega differ in length");
  std::vector<double> a(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] < 0) throw ValidationError("q_row: negative count");
    a[k] = counts[k] + omega[k];
  }
  return a;
}

std::vector<double> sample_q_row(const std::vector<int>& counts, const std::vector<double>& omega, Rng& rng) {
  return rng.dirichlet(q_row_posterior(counts, omega));
}

std::vector<std::vector<int>> transition_counts(const StateSequence& s, std::size_t n_states) {
  std::vector<std::vector<int>> c(n_states, std::vector<int>(n_states, 0));
  for (std::size_t t = 1; t < s.size(); ++t) c[s.states[t - 1]][s.states[t]] += 1;
  return c;
}

double phi_proposal_log_correction(double phi, double phi_new, double rel_sd) {
  // q(x | y) = N(x; y, (r y)^2) / Phi(1 / r) on x > 0
  auto log_q = [rel_sd](double x, double y) {
    const double sd = rel_sd * y;
    const double z = (x - y) / sd;
    return -std::log(sd) - 0.5 * z * z - normal_log_cdf(y / sd);
  };
  return log_q(phi, phi_new) - log_q(phi_new, phi);
}

double sample_truncated_normal_positive(double mean, double sd, Rng& rng) {
  for (int tries = 0; tries < 1000000; ++tries) {
    const double x = rng.normal(mean, sd);
    if (x > 0.0) return x;
  }
  throw NumericalError("truncated normal: proposal mass above zero is negligible");
}

void GibbsSampler::record(std::size_t block, double prob, bool accepted) {
  if (!recording_) return;
  auto& b = blocks_[block];
  b.proposals += 1;
  b.prob_sum += prob;
  if (accepted) b.accepted += 1;
}

double GibbsSampler::leaning_log_lik_fast(double gamma0, double gamma1, double phi) const {
  if (!pc_.has_leaning || !is_latent_space(cfg_.model)) return 0.0;
  const double lg_phi = std::lgamma(phi);
  double total = 0.0;
  for (std::size_t k = 0; k < K_; ++k) {
    const double n = nk_(static_cast<Eigen::Index>(k));
    if (n == 0.0) continue;
    for (Eigen::Index i = 0; i < p_.zeta.rows(); ++i) {
      const auto [a, b] = beta_shapes(gamma0, gamma1, p_.zeta(i, static_cast<Eigen::Index>(k)), phi);
      total += n * (lg_phi - std::lgamma(a) - std::lgamma(b)) + (a - 1.0) * Lk_(i, static_cast<Eigen::Index>(k)) +
               (b - 1.0) * Mk_(i, static_cast<Eigen::Index>(k));
    }
  }
  return total;
}

double GibbsSampler::alpha_log_target(std::size_t i, double a) const {
  const std::size_t n = pc_.n_nodes;
  const auto ii = static_cast<Eigen::Index>(i);
  double rate = 0.0;
  double s = 0.0;
  if (cfg_.model == ModelKind::RG) {
    s = ytot_all_;
    rate = static_cast<double>(pc_.n_pairs()) * scale_t_.sum();
  } else if (cfg_.model == ModelKind::RGCov) {
    s = pc_.strength(ii);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      rate += std::exp(p_.alpha(static_cast<Eigen::Index>(j))) * cov_c_(static_cast<Eigen::Index>(pair_index(i, j, n)));
    }
  } else {
    s = pc_.strength(ii);
    for (std::size_t k = 0; k < K_; ++k) {
      const auto kk = static_cast<Eigen::Index>(k);
      if (wk_(kk) == 0.0) continue;
      const double zi = p_.zeta(ii, kk);
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const auto jj = static_cast<Eigen::Index>(j);
        const double d = zi - p_.zeta(jj, kk);
        acc += std::exp(p_.alpha(jj) - p_.beta * d * d);
      }
      rate += wk_(kk) * acc;
    }
  }
  return a * s - std::exp(a) * rate - 0.5 * a * a / prior_.sigma_alpha2;
}

double GibbsSampler::zeta_log_target(std::size_t i, std::size_t k, double z) const {
  const auto ii = static_cast<Eigen::Index>(i);
  const auto kk = static_cast<Eigen::Index>(k);
  double v = -0.5 * z * z / p_.sigma2(kk);
  if (nk_(kk) == 0.0) return v;
  const Eigen::MatrixXd& W = W_[k];
  double sq = 0.0;
  double rate = 0.0;
  for (Eigen::Index j = 0; j < p_.zeta.rows(); ++j) {
    if (j == ii) continue;
    const double d = z - p_.zeta(j, kk);
    sq += W(ii, j) * d * d;
    rate += std::exp(p_.alpha(j) - p_.beta * d * d);
  }
  v += -p_.beta * sq - wk_(kk) * std::exp(p_.alpha(ii)) * rate;
  if (pc_.has_leaning && cfg_.model != ModelKind::M2) {
    const auto [a, b] = beta_shapes(p_.gamma0, p_.gamma1, z, p_.phi);
    v += nk_(kk) * (std::lgamma(p_.phi) - std::lgamma(a) - std::lgamma(b)) + (a - 1.0) * Lk_(ii, kk) +
         (b - 1.0) * Mk_(ii, kk);
  }
  return v;
}

void GibbsSampler::sample_alpha_block() {
  const std::size_t n = ad_alpha_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const double cur = p_.alpha(ii);
    const double prop = ad_alpha_[i].propose_scalar(cur, rng_);
    const double logr = alpha_log_target(i, prop) - alpha_log_target(i, cur);
    const double acc = mh_accept_prob(logr);
    const bool ok = rng_.uniform() < acc;
    if (ok) p_.alpha(ii) = prop;
    record(kAlpha, acc, ok);
    if (ok && recording_) acc_alpha_(ii) += 1.0;
    if (cfg_.adapt) {
      adaptive_update(ad_alpha_[i], Eigen::VectorXd::Constant(1, p_.alpha(ii)), acc, cfg_.target_accept,
                      cfg_.adapt_exponent);
    }
  }
}

void GibbsSampler::sample_phi() {
  auto target = [&](double phi) {
    return leaning_log_lik_fast(p_.gamma0, p_.gamma1, phi) + (prior_.a_phi - 1.0) * std::log(phi) - prior_.b_phi * phi;
  };
  const double cur = p_.phi;
  const double prop = sample_truncated_normal_positive(cur, cfg_.phi_rel_sd * cur, rng_);
  const double logr = target(prop) - target(cur) + phi_proposal_log_correction(cur, prop, cfg_.phi_rel_sd);
  const double acc = mh_accept_prob(logr);
  const bool ok = rng_.uniform() < acc;
  if (ok) p_.phi = prop;
  record(kPhi, acc, ok);
}

void GibbsSampler::sample_gamma_pair() {
  const bool free_slope = cfg_.model != ModelKind::M2;
  auto target = [&](double g0, double g1) {
    double v = leaning_log_lik_fast(g0, g1, p_.phi) - 0.5 * g0 * g0 / prior_.b_gamma0;
    if (free_slope) v -= 0.5 * g1 * g1 / prior_.b_gamma1;
    return v;
  };
  Eigen::VectorXd cur(free_slope ? 2 : 1);
  cur(0) = p_.gamma0;
  if (free_slope) cur(1) = p_.gamma1;
  const Eigen::VectorXd prop = ad_gamma_.propose(cur, rng_);
  const double g1_cur = free_slope ? cur(1) : 0.0;
  const double g1_prop = free_slope ? prop(1) : 0.0;
  const double logr = target(prop(0), g1_prop) - target(cur(0), g1_cur);
  const double acc = mh_accept_prob(logr);
  const bool ok = rng_.uniform() < acc;
  if (ok) {
    p_.gamma0 = prop(0);
    p_.gamma1 = g1_prop;
  }
  record(kGamma, acc, ok);
  if (cfg_.adapt) adaptive_update(ad_gamma_, ok ? prop : cur, acc, cfg_.target_accept, cfg_.adapt_exponent);
}

void GibbsSampler::sample_delta() {
  if (!cfg_.use_exposure) return;
  const auto T = static_cast<Eigen::Index>(pc_.n_periods);
  const auto P = static_cast<Eigen::Index>(pc_.n_pairs());
  // per-period total intensity without the exposure factor
  Eigen::VectorXd lam_t(T);
  if (cfg_.model == ModelKind::RG) {
    lam_t.setConstant(static_cast<double>(P) * std::exp(p_.alpha(0)));
  } else if (cfg_.model == ModelKind::RGCov) {
    for (Eigen::Index t = 0; t < T; ++t) {
      double s = 0.0;
      for (Eigen::Index q = 0; q < P; ++q) {
        s += std::exp(p_.alpha(pc_.pairs.first[q]) + p_.alpha(pc_.pairs.second[q])) * cov_g_(q, t);
      }
      lam_t(t) = s;
    }
  } else {
    Eigen::VectorXd lam_k = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(K_));
    for (std::size_t k = 0; k < K_; ++k) {
      const auto kk = static_cast<Eigen::Index>(k);
      for (Eigen::Index q = 0; q < P; ++q) {
        const int i = pc_.pairs.first[q];
        const int j = pc_.pairs.second[q];
        const double d = p_.zeta(i, kk) - p_.zeta(j, kk);
        lam_k(kk) += std::exp(p_.alpha(i) + p_.alpha(j) - p_.beta * d * d);
      }
    }
    for (Eigen::Index t = 0; t < T; ++t) lam_t(t) = lam_k(s_.states[t]);
  }
  auto target = [&](double dl) {
    return dl * ye_all_ - ((dl * pc_.ecov.array()).exp() * lam_t.array()).sum() - 0.5 * dl * dl / prior_.delta_var;
  };
  const double cur = *p_.delta;
  const double prop = ad_delta_.propose_scalar(cur, rng_);
  const double acc = mh_accept_prob(target(prop) - target(cur));
  const bool ok = rng_.uniform() < acc;
  if (ok) {
    p_.delta = prop;
    refresh_state_caches();
    refresh_cov_weights();
  }
  record(kDelta, acc, ok);
  if (cfg_.adapt) {
    adaptive_update(ad_delta_, Eigen::VectorXd::Constant(1, *p_.delta), acc, cfg_.target_accept, cfg_.adapt_exponent);
  }
}

void GibbsSampler::sample_zeta_block() {
  const std::size_t n = pc_.n_nodes;
  for (std::size_t k = 0; k < K_; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      const auto kk = static_cast<Eigen::Index>(k);
      AdaptiveState& ad = ad_zeta_[i + n * k];
      const double cur = p_.zeta(ii, kk);
      const double prop = ad.propose_scalar(cur, rng_);
      const double logr = zeta_log_target(i, k, prop) - zeta_log_target(i, k, cur);
      const double acc = mh_accept_prob(logr);
      const bool ok = rng_.uniform() < acc;
      if (ok) p_.zeta(ii, kk) = prop;
      record(kZeta0 + k, acc, ok);
      if (ok && recording_) acc_zeta_(ii, kk) += 1.0;
      if (cfg_.adapt) {
        adaptive_update(ad, Eigen::VectorXd::Constant(1, p_.zeta(ii, kk)), acc, cfg_.target_accept, cfg_.adapt_exponent);
      }
    }
  }
}

void GibbsSampler::sample_zeta_shift() {
  if (!beta_link_active()) return;
  const Eigen::Index N = p_.zeta.rows();
  for (std::size_t k = 0; k < K_; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    auto target = [&](double u) {
      double v = 0.0;
      for (Eigen::Index i = 0; i < N; ++i) {
        const double z = p_.zeta(i, kk) + u;
        v -= 0.5 * z * z / p_.sigma2(kk);
        if (nk_(kk) == 0.0) continue;
        const auto [a, b] = beta_shapes(p_.gamma0, p_.gamma1, z, p_.phi);
        v += nk_(kk) * (-std::lgamma(a) - std::lgamma(b)) + (a - 1.0) * Lk_(i, kk) + (b - 1.0) * Mk_(i, kk);
      }
      return v;
    };
    AdaptiveState& ad = ad_shift_[k];
    const double mean = p_.zeta.col(kk).mean();
    const double u = ad.propose_scalar(mean, rng_) - mean;
    const double acc = mh_accept_prob(target(u) - target(0.0));
    const bool ok = rng_.uniform() < acc;
    if (ok) p_.zeta.col(kk).array() += u;
    record(kZeta0 + K_ + k, acc, ok);
    if (cfg_.adapt) {
      adaptive_update(ad, Eigen::VectorXd::Constant(1, p_.zeta.col(kk).mean()), acc, cfg_.target_accept,
                      cfg_.adapt_exponent);
    }
  }
}

double GibbsSampler::log_rms_distance() const {
  const Eigen::Index N = p_.zeta.rows(), K = p_.zeta.cols();
  if (N < 2 || K == 0) return 0.0;
  double ss = 0.0;
  for (Eigen::Index k = 0; k < K; ++k) {
    for (Eigen::Index i = 0; i < N; ++i) {
      for (Eigen::Index j = i + 1; j < N; ++j) {
        const double d = p_.zeta(i, k) - p_.zeta(j, k);
        ss += d * d;
      }
    }
  }
  const double n = static_cast<double>(K) * static_cast<double>(N * (N - 1) / 2);
  return ss > 0.0 ? 0.5 * std::log(ss / n) : 0.0;
}

void GibbsSampler::sample_zeta_scale() {
  if (!beta_link_active() || pc_.n_nodes < 2) return;
  const Eigen::Index N = p_.zeta.rows();
  const auto KK = static_cast<Eigen::Index>(K_);
  // target as a function of c, dropping terms that do not move with it
  auto target = [&](double c) {
    const double c2 = c * c;
    double v = 0.0;
    for (Eigen::Index k = 0; k < KK; ++k) {
      v -= 0.5 * c2 * p_.zeta.col(k).squaredNorm() / p_.sigma2(k);
      if (nk_(k) == 0.0) continue;
      double sq = 0.0, rate = 0.0;
      for (Eigen::Index i = 0; i < N; ++i) {
        for (Eigen::Index j = i + 1; j < N; ++j) {
          const double d2 = (p_.zeta(i, k) - p_.zeta(j, k)) * (p_.zeta(i, k) - p_.zeta(j, k));
          sq += W_[static_cast<std::size_t>(k)](i, j) * d2;
          rate += std::exp(p_.alpha(i) + p_.alpha(j) - p_.beta * c2 * d2);
        }
      }
      v += -p_.beta * c2 * sq - wk_(k) * rate;
    }
    const double g1 = p_.gamma1 / c;
    v -= 0.5 * g1 * g1 / prior_.b_gamma1;
    // Jacobian of (zeta, gamma1) -> (c zeta, gamma1 / c) in log c
    v += (static_cast<double>(N * KK) - 1.0) * std::log(c);
    return v;
  };
  const double r = log_rms_distance();
  const double eps = ad_scale_.propose_scalar(r, rng_) - r;
  const double c = std::exp(eps);
  const double acc = mh_accept_prob(target(c) - target(1.0));
  const bool ok = rng_.uniform() < acc;
  if (ok) {
    p_.zeta *= c;
    p_.gamma1 /= c;
  }
  record(kZeta0 + 2 * K_, acc, ok);
  if (cfg_.adapt) {
    adaptive_update(ad_scale_, Eigen::VectorXd::Constant(1, log_rms_distance()), acc, cfg_.target_accept,
                    cfg_.adapt_exponent);
  }
}

void GibbsSampler::sample_zeta_flip() {
  if (!beta_link_active()) return;
  const Eigen::Index N = p_.zeta.rows();
  for (std::size_t k = 0; k < K_; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    if (nk_(kk) == 0.0) continue;
    auto lean = [&](double sign) {
      double v = 0.0;
      for (Eigen::Index i = 0; i < N; ++i) {
        const auto [a, b] = beta_shapes(p_.gamma0, p_.gamma1, sign * p_.zeta(i, kk), p_.phi);
        v += nk_(kk) * (-std::lgamma(a) - std::lgamma(b)) + (a - 1.0) * Lk_(i, kk) + (b - 1.0) * Mk_(i, kk);
      }
      return v;
    };
    const double acc = mh_accept_prob(lean(-1.0) - lean(1.0));
    const bool ok = rng_.uniform() < acc;
    if (ok) p_.zeta.col(kk) *= -1.0;
    record(kZeta0 + 2 * K_ + 1 + k, acc, ok);
  }
}

void GibbsSampler::sample_sigma2_all() {
  for (std::size_t k = 0; k < K_; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    p_.sigma2(kk) = sample_sigma2(p_.zeta.col(kk), prior_, rng_);
  }
}

void GibbsSampler::sample_trans() {
  if (K_ < 2) return;
  const auto counts = transition_counts(s_, K_);
  const auto omega = prior_.omega_for(K_);
  for (std::size_t k = 0; k < K_; ++k) {
    const auto row = sample_q_row(counts[k], omega, rng_);
    for (std::size_t l = 0; l < K_; ++l) p_.trans(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = row[l];
  }
}

void GibbsSampler::sample_states() {
  if (K_ < 2) return;
  const Eigen::MatrixXd E = state_emissions(pc_, p_, cfg_.parallel);
  s_ = ffbs_from_emissions(E, p_.trans, rng_);
  refresh_state_caches();
}

IdentifyTransform GibbsSampler::identify() {
  IdentifyTransform tr;
  if (!cfg_.identify || !is_latent_space(cfg_.model)) return tr;
  // The adaptive moments are built from identified draws, so they stay as they are.
  tr = identify_draw(p_, s_, identify_options());
  if (tr.relabels()) refresh_state_caches();
  return tr;
}

void GibbsSampler::sweep() {
  if (recording_) recorded_sweeps_ += 1;
  sample_alpha_block();
  if (is_latent_space(cfg_.model)) {
    sample_phi();
    sample_gamma_pair();
  }
  sample_delta();
  if (is_latent_space(cfg_.model)) {
    sample_zeta_block();
    sample_zeta_shift();
    sample_zeta_scale();
    sample_zeta_flip();
    sample_sigma2_all();
    sample_trans();
    sample_states();
    identify();
  }
}

}  // namespace msls
