#include "msls/moments.hpp"

#include <cmath>
#include <numeric>

#include "msls/random.hpp"

namespace msls {

void StrengthMomentSpec::validate() const {
  if (n_nodes < 1) throw ValidationError("moments: N must be >= 1");
  if (latent_dim < 1) throw ValidationError("moments: d must be >= 1");
  if (!(beta > 0.0)) throw ValidationError("moments: beta must be positive");
  if (sigma2.empty() || sigma2.size() != q_row.size()) throw ValidationError("moments: sigma2 and q_row must have K entries");
  double s = 0.0;
  for (std::size_t k = 0; k < sigma2.size(); ++k) {
    if (!(sigma2[k] >= 0.0)) throw ValidationError("moments: sigma2 must be nonnegative");
    if (!(q_row[k] >= 0.0)) throw ValidationError("moments: q_row must be nonnegative");
    s += q_row[k];
  }
  if (std::abs(s - 1.0) > 1e-12) throw ValidationError("moments: q_row must sum to 1");
}

double g_prime(const StrengthMomentSpec& spec, std::size_t k) {
  const double d2 = spec.latent_dim / 2.0;
  return (static_cast<double>(spec.n_nodes) - 1.0) * std::exp(spec.alpha) *
         std::pow(4.0 * spec.sigma2.at(k) * spec.beta + 1.0, -d2);
}

double g_double_prime(const StrengthMomentSpec& spec, std::size_t k) {
  const double d2 = spec.latent_dim / 2.0;
  const double n1 = static_cast<double>(spec.n_nodes) - 1.0;
  const double n2 = static_cast<double>(spec.n_nodes) - 2.0;
  const double sb = spec.sigma2.at(k) * spec.beta;
  const double e2a = std::exp(2.0 * spec.alpha);
  double v = e2a * n1 * std::pow(8.0 * sb + 1.0, -d2);
  if (spec.n_nodes > 2) v += n1 * n2 * e2a * std::pow(2.0 * sb + 1.0, -d2) * std::pow(6.0 * sb + 1.0, -d2);
  return v;
}

namespace {

std::vector<FactorialMoments> common_alpha_moments(const StrengthMomentSpec& spec) {
  std::vector<FactorialMoments> out(spec.n_states());
  for (std::size_t k = 0; k < spec.n_states(); ++k) out[k] = {g_prime(spec, k), g_double_prime(spec, k)};
  return out;
}

}  // namespace

StrengthSummary mixture_summary(const std::vector<FactorialMoments>& per_state, const std::vector<double>& q) {
  StrengthSummary s;
  double mix_g2 = 0.0;
  for (std::size_t k = 0; k < per_state.size(); ++k) {
    s.mean += q[k] * per_state[k].g1;
    mix_g2 += q[k] * per_state[k].g2;
  }
  for (std::size_t k = 0; k < per_state.size(); ++k) {
    const double g1 = per_state[k].g1;
    const double within = per_state[k].g2 + g1 - g1 * g1;
    const double dev = g1 - s.mean;
    s.variance += q[k] * (within + dev * dev);
  }
  s.sd = std::sqrt(std::max(s.variance, 0.0));
  if (s.mean > 0.0) {
    // sum_k q_k D_k + v; algebraically 1 + mixG'' / mixG' - mixG'
    double dk_sum = 0.0, vk_sum = 0.0;
    for (std::size_t k = 0; k < per_state.size(); ++k) {
      if (q[k] == 0.0) continue;
      const double vk = per_state[k].g2 / per_state[k].g1;
      dk_sum += q[k] * (1.0 + vk - per_state[k].g1);
      vk_sum += q[k] * vk;
    }
    const double v = mix_g2 / s.mean - vk_sum;
    s.dispersion = dk_sum + v;
  }
  return s;
}

double expected_strength(const StrengthMomentSpec& spec) {
  spec.validate();
  double v = 0.0;
  for (std::size_t k = 0; k < spec.n_states(); ++k) v += spec.q_row[k] * g_prime(spec, k);
  return v;
}

double strength_variance(const StrengthMomentSpec& spec) {
  spec.validate();
  return mixture_summary(common_alpha_moments(spec), spec.q_row).variance;
}

double strength_sd(const StrengthMomentSpec& spec) { return std::sqrt(strength_variance(spec)); }

double dispersion_index(const StrengthMomentSpec& spec) {
  spec.validate();
  if (spec.n_nodes < 2) throw ValidationError("dispersion_index: undefined for N = 1 (zero expected strength)");
  return mixture_summary(common_alpha_moments(spec), spec.q_row).dispersion;
}

double composition_count(int m, std::size_t n) {
  if (n == 0) return m == 0 ? 1.0 : 0.0;
  // C(m + n - 1, n - 1)
  return std::round(std::exp(std::lgamma(m + static_cast<double>(n)) - std::lgamma(m + 1.0) -
                             std::lgamma(static_cast<double>(n))));
}

double pgf_derivative_m(const StrengthMomentSpec& spec, std::size_t k, int m,
                        const std::optional<Eigen::VectorXd>& per_node_alpha, std::size_t focal) {
  spec.validate();
  if (m < 1) throw ValidationError("pgf_derivative_m: m must be >= 1");
  if (focal >= spec.n_nodes) throw ValidationError("pgf_derivative_m: focal node out of range");
  if (per_node_alpha && per_node_alpha->size() != static_cast<Eigen::Index>(spec.n_nodes)) {
    throw ValidationError("pgf_derivative_m: per_node_alpha must have N entries");
  }
  const std::size_t n = spec.n_nodes - 1;
  if (n == 0) return 0.0;
  if (composition_count(m, n) > 1e7) throw ValidationError("pgf_derivative_m: more than 1e7 multi-indices");

  // pair effects alpha_focal + alpha_j for the N - 1 neighbours
  std::vector<double> a(n, spec.alpha);
  if (per_node_alpha) {
    std::size_t c = 0;
    for (std::size_t j = 0; j < spec.n_nodes; ++j) {
      if (j == focal) continue;
      a[c++] = (*per_node_alpha)(static_cast<Eigen::Index>(focal)) + (*per_node_alpha)(static_cast<Eigen::Index>(j));
    }
  }
  const double s2 = spec.sigma2.at(k);
  const double b = spec.beta;
  const double d2 = spec.latent_dim / 2.0;
  const double lfact_m = std::lgamma(m + 1.0);

  std::vector<int> h(n, 0);
  h[0] = m;
  double total = 0.0;
  for (;;) {
    double lt = lfact_m;
    double inner = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (h[j] == 0) continue;
      const double c = 2.0 * b * h[j] * s2 + 1.0;
      lt += -std::lgamma(h[j] + 1.0) + a[j] * h[j] - d2 * std::log(c);
      inner += 2.0 * b * h[j] / c;
    }
    lt -= d2 * std::log1p(s2 * inner);
    total += std::exp(lt);

    if (h[n - 1] == m) break;
    std::size_t j = n - 2;
    while (h[j] == 0) --j;
    --h[j];
    const int v = h[n - 1];
    h[n - 1] = 0;
    h[j + 1] = v + 1;
  }
  return total;
}

double pgf_derivative_m_mixture(const StrengthMomentSpec& spec, int m,
                                const std::optional<Eigen::VectorXd>& per_node_alpha, std::size_t focal) {
  double v = 0.0;
  for (std::size_t k = 0; k < spec.n_states(); ++k) {
    if (spec.q_row[k] == 0.0) continue;
    v += spec.q_row[k] * pgf_derivative_m(spec, k, m, per_node_alpha, focal);
  }
  return v;
}

FactorialMoments random_node_factorial_moments(const Eigen::VectorXd& alpha, double beta, double sigma2,
                                               int latent_dim) {
  const Eigen::Index n = alpha.size();
  if (n < 2) return {};
  const double d2 = latent_dim / 2.0;
  const double sb = sigma2 * beta;
  const double c1 = std::pow(4.0 * sb + 1.0, -d2);
  const double c2 = std::pow(8.0 * sb + 1.0, -d2);
  const double c3 = std::pow(2.0 * sb + 1.0, -d2) * std::pow(6.0 * sb + 1.0, -d2);
  const Eigen::ArrayXd e = alpha.array().exp();
  const double se = e.sum();
  const double se2 = e.square().sum();
  FactorialMoments out;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double rest = se - e(i);
    const double rest2 = se2 - e(i) * e(i);
    out.g1 += e(i) * rest * c1;
    out.g2 += e(i) * e(i) * (rest2 * c2 + (rest * rest - rest2) * c3);
  }
  out.g1 /= static_cast<double>(n);
  out.g2 /= static_cast<double>(n);
  return out;
}

namespace {

struct RepStats {
  double n = 0.0, s1 = 0.0, s2 = 0.0;
  double f1 = 0.0, f2 = 0.0, f3 = 0.0;
  double clustering = 0.0;
};

double barrat_clustering(const Eigen::MatrixXd& w) {
  const Eigen::Index n = w.rows();
  double acc = 0.0;
  int counted = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = 0.0;
    int deg = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i && w(i, j) > 0.0) {
        s += w(i, j);
        ++deg;
      }
    }
    if (deg < 2) continue;
    double num = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i || w(i, j) <= 0.0) continue;
      for (Eigen::Index h = 0; h < n; ++h) {
        if (h == i || h == j || w(i, h) <= 0.0 || w(j, h) <= 0.0) continue;
        num += 0.5 * (w(i, j) + w(i, h));
      }
    }
    acc += num / (s * (deg - 1));
    ++counted;
  }
  return counted > 0 ? acc / counted : 0.0;
}

RepStats simulate_rep(const StrengthMomentSpec& spec, const McOracleOptions& opt, std::size_t r) {
  Rng rng(opt.seed, r);
  const auto n = static_cast<Eigen::Index>(spec.n_nodes);
  const int d = spec.latent_dim;
  Eigen::VectorXd logq(static_cast<Eigen::Index>(spec.n_states()));
  for (std::size_t k = 0; k < spec.n_states(); ++k) logq(static_cast<Eigen::Index>(k)) = std::log(spec.q_row[k]);
  const int k = rng.categorical_log(logq);
  const double sd = std::sqrt(spec.sigma2[static_cast<std::size_t>(k)]);
  Eigen::MatrixXd z(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int c = 0; c < d; ++c) z(i, c) = sd * rng.normal();
  }
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double a = opt.per_node_alpha ? (*opt.per_node_alpha)(i) + (*opt.per_node_alpha)(j) : spec.alpha;
      const double dist2 = (z.row(i) - z.row(j)).squaredNorm();
      const double y = rng.poisson(std::exp(a - spec.beta * dist2));
      w(i, j) = y;
      w(j, i) = y;
    }
  }
  RepStats st;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double y = w.row(i).sum();
    st.n += 1.0;
    st.s1 += y;
    st.s2 += y * y;
    if (static_cast<std::size_t>(i) == opt.focal) {
      st.f1 = y;
      st.f2 = y * (y - 1.0);
      st.f3 = y * (y - 1.0) * (y - 2.0);
    }
  }
  if (opt.clustering) st.clustering = barrat_clustering(w);
  return st;
}

struct Pooled {
  double mean, sd, disp;
};

Pooled pooled_moments(double n, double s1, double s2) {
  const double mean = s1 / n;
  const double var = (s2 - n * mean * mean) / (n - 1.0);
  return {mean, std::sqrt(std::max(var, 0.0)), mean > 0.0 ? var / mean : 0.0};
}

void mean_and_se(const std::vector<RepStats>& reps, double RepStats::*field, double& mean, double& se) {
  const double R = static_cast<double>(reps.size());
  double s = 0.0, ss = 0.0;
  for (const auto& r : reps) s += r.*field;
  mean = s / R;
  for (const auto& r : reps) ss += (r.*field - mean) * (r.*field - mean);
  se = std::sqrt(ss / (R - 1.0) / R);
}

}  // namespace

McOracleResult mc_strength_oracle(const StrengthMomentSpec& spec, const McOracleOptions& opt) {
  spec.validate();
  if (opt.n_reps < 2) throw ValidationError("mc_strength_oracle: n_reps must be >= 2");
  if (opt.focal >= spec.n_nodes) throw ValidationError("mc_strength_oracle: focal node out of range");
  if (opt.per_node_alpha && opt.per_node_alpha->size() != static_cast<Eigen::Index>(spec.n_nodes)) {
    throw ValidationError("mc_strength_oracle: per_node_alpha must have N entries");
  }
  const auto R = static_cast<long>(opt.n_reps);
  std::vector<RepStats> reps(opt.n_reps);
#pragma omp parallel for schedule(dynamic) if (opt.parallel)
  for (long r = 0; r < R; ++r) reps[static_cast<std::size_t>(r)] = simulate_rep(spec, opt, static_cast<std::size_t>(r));

  McOracleResult out;
  out.n_reps = opt.n_reps;
  double n = 0.0, s1 = 0.0, s2 = 0.0;
  for (const auto& r : reps) {
    n += r.n;
    s1 += r.s1;
    s2 += r.s2;
  }
  const Pooled full = pooled_moments(n, s1, s2);
  out.mean = full.mean;
  out.sd = full.sd;
  out.dispersion = full.disp;

  // leave-one-replication-out jackknife
  std::vector<Pooled> loo(opt.n_reps);
  Pooled bar{0.0, 0.0, 0.0};
  for (std::size_t r = 0; r < opt.n_reps; ++r) {
    loo[r] = pooled_moments(n - reps[r].n, s1 - reps[r].s1, s2 - reps[r].s2);
    bar.mean += loo[r].mean;
    bar.sd += loo[r].sd;
    bar.disp += loo[r].disp;
  }
  const double Rd = static_cast<double>(opt.n_reps);
  bar.mean /= Rd;
  bar.sd /= Rd;
  bar.disp /= Rd;
  double vm = 0.0, vs = 0.0, vd = 0.0;
  for (const auto& l : loo) {
    vm += (l.mean - bar.mean) * (l.mean - bar.mean);
    vs += (l.sd - bar.sd) * (l.sd - bar.sd);
    vd += (l.disp - bar.disp) * (l.disp - bar.disp);
  }
  const double f = (Rd - 1.0) / Rd;
  out.se_mean = std::sqrt(f * vm);
  out.se_sd = std::sqrt(f * vs);
  out.se_dispersion = std::sqrt(f * vd);

  mean_and_se(reps, &RepStats::f1, out.focal_f1, out.se_focal_f1);
  mean_and_se(reps, &RepStats::f2, out.focal_f2, out.se_focal_f2);
  mean_and_se(reps, &RepStats::f3, out.focal_f3, out.se_focal_f3);
  if (opt.clustering) mean_and_se(reps, &RepStats::clustering, out.clustering, out.se_clustering);
  return out;
}

}  // namespace msls
