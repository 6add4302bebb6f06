#include "msls/selection.hpp"

#include <algorithm>
#include <cmath>

#include "msls/likelihood.hpp"

namespace msls {

double dic(const std::vector<double>& tr) {
  if (tr.size() < 2) {
    if (tr.size() == 1 && std::isfinite(tr[0])) return -2.0 * tr[0];
    throw ValidationError("dic: trace needs at least one finite value");
  }
  double m = 0.0;
  for (double v : tr) {
    if (!std::isfinite(v)) throw NumericalError("dic: non-finite log-likelihood in trace");
    m += v;
  }
  m /= static_cast<double>(tr.size());
  double ss = 0.0;
  for (double v : tr) ss += (v - m) * (v - m);
  const double var = ss / static_cast<double>(tr.size() - 1);
  return -2.0 * m + 2.0 * var;
}

double lppd(const Eigen::MatrixXd& ld) {
  if (ld.cols() == 0) throw ValidationError("lppd: no draws");
  if (!ld.allFinite()) throw NumericalError("lppd: non-finite density");
  const double logH = std::log(static_cast<double>(ld.cols()));
  double total = 0.0;
  for (Eigen::Index c = 0; c < ld.rows(); ++c) {
    const double m = ld.row(c).maxCoeff();
    total += m + std::log((ld.row(c).array() - m).exp().sum()) - logH;
  }
  return total;
}

void LppdAccumulator::add(const Eigen::MatrixXd& loglam) {
  if (parallel_) {
    omp::lse_accumulate(pc_, loglam, m_, s_);
  } else {
    serial::lse_accumulate(pc_, loglam, m_, s_);
  }
  ++h_;
}

double LppdAccumulator::value() const {
  if (h_ == 0) throw ValidationError("lppd: no draws");
  const double logH = std::log(static_cast<double>(h_));
  // per-period partials keep the summation order fixed
  double total = 0.0;
  for (Eigen::Index t = 0; t < m_.cols(); ++t) {
    double part = 0.0;
    for (Eigen::Index p = 0; p < m_.rows(); ++p) part += m_(p, t) + std::log(s_(p, t)) - logH;
    total += part;
  }
  return total;
}

double lppd_chain(const ChainOutput& chain, const Layer& layer, bool parallel) {
  const PanelCache pc = PanelCache::build(layer);
  LppdAccumulator acc(pc, parallel);
  for (std::size_t h = 0; h < chain.draws.size(); ++h) {
    acc.add(draw_log_intensity(pc, layer, chain.draws[h], chain.state_draws[h], chain.model));
  }
  return acc.value();
}

SelectionRow selection_summary(const ChainOutput& chain, const Layer& layer, bool parallel) {
  SelectionRow r;
  r.model = model_kind_name(chain.model);
  r.n_draws = chain.draws.size();
  r.dic_complete = dic(chain.loglik_complete);
  r.dic_network = dic(chain.loglik_network);
  for (double v : chain.loglik_complete) r.mean_loglik_complete += v;
  for (double v : chain.loglik_network) r.mean_loglik_network += v;
  r.mean_loglik_complete /= static_cast<double>(std::max<std::size_t>(1, chain.loglik_complete.size()));
  r.mean_loglik_network /= static_cast<double>(std::max<std::size_t>(1, chain.loglik_network.size()));
  r.lppd = lppd_chain(chain, layer, parallel);
  return r;
}

EmpiricalStrength empirical_strength(const Layer& layer) {
  EmpiricalStrength e;
  const auto N = static_cast<Eigen::Index>(layer.n_nodes);
  if (layer.n_periods == 0 || N < 2) return e;
  for (std::size_t t = 0; t < layer.n_periods; ++t) {
    Eigen::VectorXd s(N);
    for (Eigen::Index i = 0; i < N; ++i) {
      double v = 0.0;
      for (Eigen::Index j = 0; j < N; ++j) {
        if (j != i) v += layer.weights[t](i, j);
      }
      s(i) = v;
    }
    const double m = s.mean();
    const double var = (s.array() - m).square().sum() / static_cast<double>(N - 1);
    e.mean += m;
    e.sd += std::sqrt(var);
    e.dispersion += m > 0.0 ? var / m : 0.0;
  }
  const double T = static_cast<double>(layer.n_periods);
  e.mean /= T;
  e.sd /= T;
  e.dispersion /= T;
  return e;
}

StrengthSummary draw_strength_summary(const Layer& layer, const ModelParams& p, const StateSequence& s, ModelKind kind) {
  const auto N = static_cast<Eigen::Index>(layer.n_nodes);
  StrengthSummary out;
  if (kind == ModelKind::RG) {
    out.mean = (static_cast<double>(N) - 1.0) * std::exp(p.alpha(0));
    out.variance = out.mean;
    out.sd = std::sqrt(out.variance);
    out.dispersion = 1.0;
    return out;
  }
  if (kind == ModelKind::RGCov) {
    // strength of node i at t is Poisson(Lambda_it); mix over (i, t)
    double s1 = 0.0, s2 = 0.0;
    const auto T = static_cast<Eigen::Index>(layer.n_periods);
    for (Eigen::Index t = 0; t < T; ++t) {
      for (Eigen::Index i = 0; i < N; ++i) {
        double lam = 0.0;
        for (Eigen::Index j = 0; j < N; ++j) {
          if (j == i) continue;
          const double d = layer.leaning(t, i) - layer.leaning(t, j);
          lam += std::exp(p.alpha(i) + p.alpha(j) - p.beta * d * d);
        }
        s1 += lam;
        s2 += lam * lam;
      }
    }
    const double n = static_cast<double>(N * T);
    out.mean = s1 / n;
    out.variance = out.mean + (s2 / n - out.mean * out.mean);
    out.sd = std::sqrt(out.variance);
    out.dispersion = out.variance / out.mean;
    return out;
  }
  const auto K = static_cast<std::size_t>(p.zeta.cols());
  std::vector<double> q(K, 0.0);
  if (K == 1) {
    q[0] = 1.0;
  } else if (s.size() > 1) {
    for (std::size_t t = 1; t < s.size(); ++t) {
      for (std::size_t k = 0; k < K; ++k) q[k] += p.trans(s.states[t - 1], static_cast<Eigen::Index>(k));
    }
    for (double& v : q) v /= static_cast<double>(s.size() - 1);
  } else {
    for (std::size_t k = 0; k < K; ++k) q[k] = p.trans(s.states[0], static_cast<Eigen::Index>(k));
  }
  std::vector<FactorialMoments> fm(K);
  for (std::size_t k = 0; k < K; ++k) fm[k] = random_node_factorial_moments(p.alpha, p.beta, p.sigma2(static_cast<Eigen::Index>(k)));
  return mixture_summary(fm, q);
}

double quantile(std::vector<double> v, double prob) {
  if (v.empty()) throw ValidationError("quantile: empty input");
  std::sort(v.begin(), v.end());
  const double pos = prob * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double w = pos - static_cast<double>(lo);
  return (1.0 - w) * v[lo] + w * v[hi];
}

std::vector<PpcMetric> ppc_strength(const ChainOutput& chain, const Layer& layer) {
  const EmpiricalStrength emp = empirical_strength(layer);
  std::vector<double> mean, sd, disp;
  for (std::size_t h = 0; h < chain.draws.size(); ++h) {
    const StrengthSummary s = draw_strength_summary(layer, chain.draws[h], chain.state_draws[h], chain.model);
    mean.push_back(s.mean);
    sd.push_back(s.sd);
    disp.push_back(s.dispersion);
  }
  auto make = [](const std::string& name, double e, const std::vector<double>& v) {
    PpcMetric m;
    m.metric = name;
    m.empirical = e;
    double s = 0.0;
    for (double x : v) s += x;
    m.posterior_mean = s / static_cast<double>(v.size());
    m.lower = quantile(v, 0.025);
    m.upper = quantile(v, 0.975);
    return m;
  };
  if (mean.empty()) throw ValidationError("ppc_strength: chain has no retained draws");
  return {make("expected_strength", emp.mean, mean), make("strength_sd", emp.sd, sd),
          make("dispersion_index", emp.dispersion, disp)};
}

BaselineFits fit_baselines(const Layer& layer, const PriorSpec& prior, const McmcConfig& cfg) {
  BaselineFits b;
  McmcConfig c = cfg;
  c.model = ModelKind::RG;
  b.homogeneous = run_chain(layer, prior, c);
  c.model = ModelKind::RGCov;
  b.covariate = run_chain(layer, prior, c);
  return b;
}

}  // namespace msls
