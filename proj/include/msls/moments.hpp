#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "msls/types.hpp"

namespace msls {

/// Inputs to the strength-distribution formulas. alpha is the common value of
/// alpha_i + alpha_j.
struct StrengthMomentSpec {
  std::size_t n_nodes = 100;
  int latent_dim = 1;
  double alpha = 0.0;
  double beta = 1.0;
  std::vector<double> sigma2{1.0};
  std::vector<double> q_row{1.0};

  std::size_t n_states() const { return sigma2.size(); }
  void validate() const;
};

// State-conditional first and second factorial moments of the strength of a node.
double g_prime(const StrengthMomentSpec& spec, std::size_t k);
double g_double_prime(const StrengthMomentSpec& spec, std::size_t k);

double expected_strength(const StrengthMomentSpec& spec);
double strength_variance(const StrengthMomentSpec& spec);
double strength_sd(const StrengthMomentSpec& spec);
/// Variance-to-mean ratio; throws ValidationError when the mean is zero (N = 1).
double dispersion_index(const StrengthMomentSpec& spec);

/// m-th derivative at 1 of the pgf of the strength of `focal`, conditional on
/// state k, by summation over all compositions of m into N - 1 parts. With
/// per_node_alpha the exponent uses alpha_focal + alpha_j; otherwise spec.alpha.
/// Throws ValidationError if the number of compositions exceeds 1e7.
double pgf_derivative_m(const StrengthMomentSpec& spec, std::size_t k, int m,
                        const std::optional<Eigen::VectorXd>& per_node_alpha = std::nullopt,
                        std::size_t focal = 0);
/// Same, mixed over the states with the weights in q_row.
double pgf_derivative_m_mixture(const StrengthMomentSpec& spec, int m,
                                const std::optional<Eigen::VectorXd>& per_node_alpha = std::nullopt,
                                std::size_t focal = 0);

/// Number of compositions of m into n nonnegative parts, as a double.
double composition_count(int m, std::size_t n);

/// First two factorial moments of the strength of a uniformly chosen node when
/// the individual effects differ across nodes (state-conditional).
struct FactorialMoments {
  double g1 = 0.0;
  double g2 = 0.0;
};
FactorialMoments random_node_factorial_moments(const Eigen::VectorXd& alpha, double beta, double sigma2,
                                               int latent_dim = 1);

/// Mean, variance and dispersion of a mixture over states given per-state
/// factorial moments and mixing weights.
struct StrengthSummary {
  double mean = 0.0;
  double variance = 0.0;
  double sd = 0.0;
  double dispersion = 0.0;
};
StrengthSummary mixture_summary(const std::vector<FactorialMoments>& per_state, const std::vector<double>& q);

struct McOracleOptions {
  std::size_t n_reps = 200;
  std::uint64_t seed = 1;
  bool parallel = true;
  bool clustering = false;
  std::optional<Eigen::VectorXd> per_node_alpha;
  std::size_t focal = 0;
};

struct McOracleResult {
  std::size_t n_reps = 0;
  // pooled over all nodes of all replications, leave-one-replication-out jackknife SEs
  double mean = 0.0, sd = 0.0, dispersion = 0.0;
  double se_mean = 0.0, se_sd = 0.0, se_dispersion = 0.0;
  // focal node: factorial moments E[Y], E[Y(Y-1)], E[Y(Y-1)(Y-2)] and their SEs
  double focal_f1 = 0.0, focal_f2 = 0.0, focal_f3 = 0.0;
  double se_focal_f1 = 0.0, se_focal_f2 = 0.0, se_focal_f3 = 0.0;
  // mean weighted clustering coefficient (Barrat), if requested
  double clustering = 0.0, se_clustering = 0.0;
};

/// Simulates n_reps independent single-period networks: state k ~ q_row,
/// zeta_i ~ N(0, sigma2_k I_d), Y_ij ~ Poisson(exp(alpha - beta |zeta_i - zeta_j|^2)).
McOracleResult mc_strength_oracle(const StrengthMomentSpec& spec, const McOracleOptions& opt);

}  // namespace msls
