#include "msls/sampler.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "msls/likelihood.hpp"

namespace msls {

std::size_t McmcConfig::effective_states() const {
  switch (model) {
    case ModelKind::M3: return 1;
    case ModelKind::RG:
    case ModelKind::RGCov: return 0;
    default: return n_states;
  }
}

void McmcConfig::validate() const {
  if (n_iter == 0) throw ConfigError("n_iter must be positive");
  if (burn_in >= n_iter) throw ConfigError("burn_in must be smaller than n_iter");
  if (thin == 0) throw ConfigError("thin must be >= 1");
  if (is_latent_space(model) && effective_states() == 0) throw ConfigError("n_states must be >= 1");
  if (!(target_accept > 0.0 && target_accept < 1.0)) throw ConfigError("target_accept must lie in (0,1)");
  if (!(adapt_exponent > 0.0 && adapt_exponent < 1.0 + 1e-12)) throw ConfigError("adapt_exponent must lie in (0,1]");
  if (adapt_offset < 0) throw ConfigError("adapt_offset must be nonnegative");
  if (!(init_proposal_var > 0.0)) throw ConfigError("init_proposal_var must be positive");
  if (!(phi_rel_sd > 0.0)) throw ConfigError("phi_rel_sd must be positive");
}

const BlockAcceptance* ChainOutput::find_block(const std::string& name) const {
  for (const auto& b : acceptance) {
    if (b.block == name) return &b;
  }
  return nullptr;
}

PriorDraw draw_from_prior(const PriorSpec& prior, std::size_t n_nodes, std::size_t n_periods, std::size_t n_states,
                          ModelKind kind, Rng& rng) {
  PriorDraw d;
  ModelParams& p = d.params;
  const auto N = static_cast<Eigen::Index>(n_nodes);
  const std::size_t K = kind == ModelKind::M3 ? 1 : (is_latent_space(kind) ? n_states : 0);
  const auto KK = static_cast<Eigen::Index>(K);
  const double sa = std::sqrt(prior.sigma_alpha2);
  if (kind == ModelKind::RG) {
    p.alpha = Eigen::VectorXd::Constant(1, sa * rng.normal());
    p.zeta.resize(1, 0);
  } else {
    p.alpha.resize(N);
    for (Eigen::Index i = 0; i < N; ++i) p.alpha(i) = sa * rng.normal();
    p.zeta.resize(N, KK);
  }
  p.sigma2.resize(KK);
  for (Eigen::Index k = 0; k < KK; ++k) {
    p.sigma2(k) = rng.inv_gamma(prior.a_sigma, prior.b_sigma);
    for (Eigen::Index i = 0; i < N; ++i) p.zeta(i, k) = std::sqrt(p.sigma2(k)) * rng.normal();
  }
  p.trans = Eigen::MatrixXd::Zero(KK, KK);
  const auto omega = prior.omega_for(K);
  for (Eigen::Index k = 0; k < KK; ++k) {
    const auto row = K > 1 ? rng.dirichlet(omega) : std::vector<double>{1.0};
    for (Eigen::Index l = 0; l < KK; ++l) p.trans(k, l) = row[static_cast<std::size_t>(l)];
  }
  if (is_latent_space(kind)) {
    p.gamma0 = std::sqrt(prior.b_gamma0) * rng.normal();
    p.gamma1 = kind == ModelKind::M2 ? 0.0 : std::sqrt(prior.b_gamma1) * rng.normal();
    p.phi = rng.gamma(prior.a_phi, prior.b_phi);
  }
  d.states = StateSequence::constant(n_periods, 0);
  if (K > 1 && n_periods > 0) {
    d.states.states[0] = rng.uniform_int(static_cast<int>(K));
    const Eigen::MatrixXd logq = p.trans.array().log().matrix();
    for (std::size_t t = 1; t < n_periods; ++t) {
      d.states.states[t] = rng.categorical_log(logq.row(d.states.states[t - 1]).transpose());
    }
  }
  return d;
}

GibbsSampler::GibbsSampler(const Layer& layer, const PriorSpec& prior, const McmcConfig& cfg)
    : layer_(layer), prior_(prior), cfg_(cfg), rng_(cfg.seed, cfg.stream), K_(cfg.effective_states()) {
  cfg_.validate();
  prior_.validate();
  layer_.validate();
  if (cfg_.use_exposure && !layer_.exposure) throw ConfigError("exposure control requested but the layer has no exposure series");
  if (cfg_.model == ModelKind::RGCov && !layer_.has_leaning()) throw ConfigError("the covariate baseline needs leaning data");
  if (is_latent_space(cfg_.model) && cfg_.identify && cfg_.anchor_index >= layer_.n_nodes) {
    throw ConfigError("anchor index out of range");
  }
  pc_ = PanelCache::build(layer_);
  std::vector<std::string> names = {"alpha", "phi", "gamma", "delta"};
  for (std::size_t k = 0; k < K_; ++k) names.push_back("zeta_" + std::to_string(k + 1));
  for (std::size_t k = 0; k < K_; ++k) names.push_back("shift_" + std::to_string(k + 1));
  names.push_back("scale");
  for (std::size_t k = 0; k < K_; ++k) names.push_back("flip_" + std::to_string(k + 1));
  for (auto& nm : names) blocks_.push_back(BlockAcceptance{nm});
}

bool GibbsSampler::beta_link_active() const {
  return layer_.has_leaning() && cfg_.model == ModelKind::M1;
}

IdentifyOptions GibbsSampler::identify_options() const {
  IdentifyOptions o;
  o.anchor_index = cfg_.anchor_index;
  o.anchor_negative = cfg_.anchor_negative;
  o.pooled = beta_link_active();
  return o;
}

void GibbsSampler::initialize() {
  const std::size_t n = pc_.n_nodes;
  const auto N = static_cast<Eigen::Index>(n);
  const auto KK = static_cast<Eigen::Index>(K_);
  const double T = static_cast<double>(pc_.n_periods);
  ModelParams p;
  if (cfg_.model == ModelKind::RG) {
    const double P = static_cast<double>(pc_.n_pairs());
    p.alpha = Eigen::VectorXd::Constant(1, P > 0 ? std::log((pc_.ytot.sum() + 0.5) / (T * P)) : 0.0);
    p.zeta.resize(1, 0);
  } else {
    p.alpha.resize(N);
    for (Eigen::Index i = 0; i < N; ++i) {
      p.alpha(i) = n > 1 ? 0.5 * std::log((pc_.strength(i) + 0.5) / (T * (static_cast<double>(n) - 1.0))) : 0.0;
    }
    p.zeta.resize(N, KK);
    for (Eigen::Index k = 0; k < KK; ++k) {
      for (Eigen::Index i = 0; i < N; ++i) p.zeta(i, k) = 0.1 * rng_.normal();
    }
  }
  p.sigma2 = Eigen::VectorXd::Ones(KK);
  p.gamma0 = 0.0;
  p.gamma1 = 0.0;
  p.phi = 10.0;
  p.trans = Eigen::MatrixXd::Constant(KK, KK, KK > 0 ? 1.0 / static_cast<double>(KK) : 0.0);
  p.beta = 1.0;
  if (cfg_.use_exposure) p.delta = 0.0;
  StateSequence s = StateSequence::constant(pc_.n_periods, 0);
  if (K_ > 1) {
    for (auto& st : s.states) st = rng_.uniform_int(static_cast<int>(K_));
  }
  set_state(p, s);
}

void GibbsSampler::set_state(const ModelParams& p, const StateSequence& s) {
  p_ = p;
  s_ = s;
  if (cfg_.model == ModelKind::M2) p_.gamma1 = 0.0;
  if (cfg_.use_exposure && !p_.delta) p_.delta = 0.0;
  if (!cfg_.use_exposure) p_.delta.reset();
  const std::size_t n = static_cast<std::size_t>(p_.alpha.size());
  ad_alpha_.clear();
  for (std::size_t i = 0; i < n; ++i) {
    ad_alpha_.push_back(AdaptiveState::init(Eigen::VectorXd::Constant(1, p_.alpha(static_cast<Eigen::Index>(i))),
                                            cfg_.init_proposal_var, cfg_.adapt_offset));
  }
  ad_zeta_.clear();
  for (std::size_t k = 0; k < K_; ++k) {
    for (std::size_t i = 0; i < pc_.n_nodes; ++i) {
      ad_zeta_.push_back(AdaptiveState::init(
          Eigen::VectorXd::Constant(1, p_.zeta(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k))),
          cfg_.init_proposal_var, cfg_.adapt_offset));
    }
  }
  ad_shift_.clear();
  for (std::size_t k = 0; k < K_; ++k) {
    ad_shift_.push_back(AdaptiveState::init(Eigen::VectorXd::Constant(1, p_.zeta.col(static_cast<Eigen::Index>(k)).mean()),
                                            cfg_.init_proposal_var, cfg_.adapt_offset));
  }
  ad_scale_ = AdaptiveState::init(Eigen::VectorXd::Constant(1, log_rms_distance()), cfg_.init_proposal_var,
                                  cfg_.adapt_offset);
  if (cfg_.model == ModelKind::M2) {
    ad_gamma_ = AdaptiveState::init(Eigen::VectorXd::Constant(1, p_.gamma0), cfg_.init_proposal_var, cfg_.adapt_offset);
  } else {
    ad_gamma_ = AdaptiveState::init(Eigen::Vector2d(p_.gamma0, p_.gamma1), cfg_.init_proposal_var, cfg_.adapt_offset);
  }
  ad_delta_ = AdaptiveState::init(Eigen::VectorXd::Constant(1, p_.delta.value_or(0.0)), cfg_.init_proposal_var,
                                  cfg_.adapt_offset);
  acc_alpha_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  acc_zeta_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(pc_.n_nodes), static_cast<Eigen::Index>(K_));
  refresh_state_caches();
  refresh_cov_weights();
}

void GibbsSampler::reset_data(const Layer& layer) {
  layer.validate();
  if (layer.n_nodes != layer_.n_nodes || layer.n_periods != layer_.n_periods) {
    throw ValidationError("reset_data: layer shape differs");
  }
  layer_ = layer;
  pc_ = PanelCache::build(layer_);
  cov_g_.resize(0, 0);
  refresh_state_caches();
  refresh_cov_weights();
}

void GibbsSampler::refresh_state_caches() {
  const auto T = static_cast<Eigen::Index>(pc_.n_periods);
  const auto N = static_cast<Eigen::Index>(pc_.n_nodes);
  const auto KK = static_cast<Eigen::Index>(K_);
  if (p_.delta) {
    scale_t_ = (*p_.delta * pc_.ecov.array()).exp().matrix();
  } else {
    scale_t_ = Eigen::VectorXd::Ones(T);
  }
  ytot_all_ = pc_.ytot.sum();
  ye_all_ = pc_.ecov.dot(pc_.ytot);
  if (!is_latent_space(cfg_.model)) return;

  Eigen::MatrixXd Wp;
  if (cfg_.parallel) {
    omp::pair_state_sums(pc_.y, s_.states, static_cast<int>(K_), Wp);
  } else {
    serial::pair_state_sums(pc_.y, s_.states, static_cast<int>(K_), Wp);
  }
  W_.assign(K_, Eigen::MatrixXd::Zero(N, N));
  for (std::size_t q = 0; q < pc_.n_pairs(); ++q) {
    const int i = pc_.pairs.first[q];
    const int j = pc_.pairs.second[q];
    for (std::size_t k = 0; k < K_; ++k) {
      const double v = Wp(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(k));
      W_[k](i, j) = v;
      W_[k](j, i) = v;
    }
  }
  wk_ = Eigen::VectorXd::Zero(KK);
  nk_ = Eigen::VectorXd::Zero(KK);
  Lk_ = Eigen::MatrixXd::Zero(N, KK);
  Mk_ = Eigen::MatrixXd::Zero(N, KK);
  for (Eigen::Index t = 0; t < T; ++t) {
    const int k = s_.states[static_cast<std::size_t>(t)];
    wk_(k) += scale_t_(t);
    nk_(k) += 1.0;
    if (pc_.has_leaning) {
      Lk_.col(k) += pc_.log_l.row(t).transpose();
      Mk_.col(k) += pc_.log_1ml.row(t).transpose();
    }
  }
}

void GibbsSampler::refresh_cov_weights() {
  if (cfg_.model != ModelKind::RGCov) return;
  const auto P = static_cast<Eigen::Index>(pc_.n_pairs());
  const auto T = static_cast<Eigen::Index>(pc_.n_periods);
  if (cov_g_.rows() != P || cov_g_.cols() != T) {
    cov_g_.resize(P, T);
    for (Eigen::Index t = 0; t < T; ++t) {
      for (Eigen::Index q = 0; q < P; ++q) {
        const double d = pc_.leaning(t, pc_.pairs.first[q]) - pc_.leaning(t, pc_.pairs.second[q]);
        cov_g_(q, t) = std::exp(-p_.beta * d * d);
      }
    }
  }
  cov_c_ = cov_g_ * scale_t_;
}

std::vector<std::string> raw_trace_names(ModelKind kind, std::size_t n_nodes, std::size_t n_states, bool with_delta) {
  std::vector<std::string> names;
  if (kind == ModelKind::RG) {
    names.push_back("alpha");
  } else {
    for (std::size_t i = 0; i < n_nodes; ++i) names.push_back("alpha_" + std::to_string(i + 1));
  }
  if (is_latent_space(kind)) {
    const std::size_t K = kind == ModelKind::M3 ? 1 : n_states;
    for (std::size_t k = 0; k < K; ++k) {
      for (std::size_t i = 0; i < n_nodes; ++i) names.push_back("zeta_" + std::to_string(i + 1) + "_" + std::to_string(k + 1));
    }
    for (std::size_t k = 0; k < K; ++k) names.push_back("sigma2_" + std::to_string(k + 1));
    names.push_back("gamma0");
    names.push_back("gamma1");
    names.push_back("phi");
    for (std::size_t k = 0; k < K; ++k) {
      for (std::size_t l = 0; l < K; ++l) names.push_back("q_" + std::to_string(k + 1) + "_" + std::to_string(l + 1));
    }
  }
  if (with_delta) names.push_back("delta");
  return names;
}

Eigen::VectorXd flatten_draw(const ModelParams& p, ModelKind kind, bool with_delta) {
  std::vector<double> v(p.alpha.data(), p.alpha.data() + p.alpha.size());
  if (is_latent_space(kind)) {
    for (Eigen::Index k = 0; k < p.zeta.cols(); ++k) {
      for (Eigen::Index i = 0; i < p.zeta.rows(); ++i) v.push_back(p.zeta(i, k));
    }
    for (Eigen::Index k = 0; k < p.sigma2.size(); ++k) v.push_back(p.sigma2(k));
    v.push_back(p.gamma0);
    v.push_back(p.gamma1);
    v.push_back(p.phi);
    for (Eigen::Index k = 0; k < p.trans.rows(); ++k) {
      for (Eigen::Index l = 0; l < p.trans.cols(); ++l) v.push_back(p.trans(k, l));
    }
  }
  if (with_delta) v.push_back(p.delta.value_or(0.0));
  return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::MatrixXd draw_log_intensity(const PanelCache& pc, const Layer& layer, const ModelParams& p,
                                    const StateSequence& s, ModelKind kind) {
  const auto P = static_cast<Eigen::Index>(pc.n_pairs());
  const auto T = static_cast<Eigen::Index>(pc.n_periods);
  Eigen::MatrixXd ll(P, T);
  for (Eigen::Index t = 0; t < T; ++t) {
    for (Eigen::Index q = 0; q < P; ++q) {
      ll(q, t) = cell_log_intensity(layer, p, s, kind, static_cast<std::size_t>(t), pc.pairs.first[q],
                                    pc.pairs.second[q], pc.ecov);
    }
  }
  return ll;
}

ChainOutput run_chain(const Layer& layer, const PriorSpec& prior, const McmcConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  GibbsSampler g(layer, prior, cfg);
  g.initialize();

  ChainOutput out;
  out.model = cfg.model;
  out.config = cfg;
  out.priors = prior;
  out.n_nodes = layer.n_nodes;
  out.n_periods = layer.n_periods;
  out.node_names = layer.node_names;

  const PanelCache& pc = g.cache();
  {
    const double net = network_only_log_lik(layer, g.params(), g.states(), cfg.model);
    const double lean = is_latent_space(cfg.model) ? leaning_log_lik(layer, g.params(), g.states()) : 0.0;
    if (!std::isfinite(net) || !std::isfinite(lean)) {
      std::ostringstream os;
      os << "non-finite log-likelihood at initialization (network=" << net << ", leaning=" << lean << ")";
      throw InitializationError(os.str());
    }
  }

  const std::size_t K = cfg.effective_states();
  const bool with_delta = cfg.use_exposure;
  if (cfg.keep_raw_trace) {
    out.raw_names = raw_trace_names(cfg.model, layer.n_nodes, K, with_delta);
    out.raw_trace.resize(static_cast<Eigen::Index>(cfg.n_iter), static_cast<Eigen::Index>(out.raw_names.size()));
  }
  out.draws.reserve(cfg.n_retained());
  for (std::size_t it = 0; it < cfg.n_iter; ++it) {
    g.set_recording(it >= cfg.burn_in);
    g.sweep();
    if (cfg.keep_raw_trace) out.raw_trace.row(static_cast<Eigen::Index>(it)) = flatten_draw(g.params(), cfg.model, with_delta).transpose();
    if (it >= cfg.burn_in && (it - cfg.burn_in + 1) % cfg.thin == 0) {
      out.draws.push_back(g.params());
      out.state_draws.push_back(g.states());
      const Eigen::MatrixXd ll = draw_log_intensity(pc, g.layer(), g.params(), g.states(), cfg.model);
      const double net = cfg.parallel ? omp::poisson_log_lik_sum(pc, ll) : serial::poisson_log_lik_sum(pc, ll);
      double full = net;
      if (is_latent_space(cfg.model)) {
        full += leaning_log_lik(g.layer(), g.params(), g.states()) + transition_log_lik(g.params(), g.states());
      }
      out.loglik_network.push_back(net);
      out.loglik_complete.push_back(full);
    }
  }
  out.acceptance = g.block_acceptance();
  const double sweeps = static_cast<double>(std::max(1L, g.recorded_sweeps()));
  out.acc_alpha = g.alpha_accepts() / sweeps;
  out.acc_zeta = g.zeta_accepts() / sweeps;
  out.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace msls
