#pragma once

#include <vector>

#include "msls/types.hpp"

namespace msls {

/// Flattened, read-only view of one layer used by the hot loops.
/// Pair counts are stored P x T so each period's column is contiguous.
struct PanelCache {
  std::size_t n_nodes = 0;
  std::size_t n_periods = 0;
  PairList pairs;
  Eigen::MatrixXd y;         // P x T
  Eigen::MatrixXd lfact;     // P x T, lgamma(y + 1)
  Eigen::VectorXd lfact_t;   // T, column sums of lfact
  Eigen::VectorXd ytot;      // T
  Eigen::VectorXd strength;  // N, total strength over all periods
  Eigen::VectorXd ecov;      // T, de-meaned log exposure (zeros if absent)
  bool has_exposure = false;
  bool has_leaning = false;
  Eigen::MatrixXd leaning;   // T x N (clamped)
  Eigen::MatrixXd log_l;     // T x N
  Eigen::MatrixXd log_1ml;   // T x N

  static PanelCache build(const Layer& layer);
  std::size_t n_pairs() const { return pairs.size(); }
};

// Each kernel exists in an OpenMP and a serial variant. Both use the same
// per-entry summation order, so their results are bit-identical.
#define MSLS_KERNEL_DECLS                                                                          \
  /* W(p, k) = sum over t with states[t] == k of y(p, t) */                                        \
  void pair_state_sums(const Eigen::MatrixXd& y, const std::vector<int>& states, int n_states,     \
                       Eigen::MatrixXd& W);                                                         \
  /* E(t, k) = sum_p [y(p,t) (c(p,k) + off_t) - exp(off_t) exp(c(p,k))] - lfact_t */              \
  void poisson_emissions(const PanelCache& pc, const Eigen::MatrixXd& c, const Eigen::VectorXd& off, \
                         Eigen::MatrixXd& E);                                                       \
  /* sum over cells of the Poisson log pmf; loglam is P x T */                                     \
  double poisson_log_lik_sum(const PanelCache& pc, const Eigen::MatrixXd& loglam);                 \
  /* running log-sum-exp of per-cell log pmf across draws: m holds the max, s the scaled sum */   \
  void lse_accumulate(const PanelCache& pc, const Eigen::MatrixXd& loglam, Eigen::MatrixXd& m,     \
                      Eigen::MatrixXd& s);

namespace omp {
MSLS_KERNEL_DECLS
}
namespace serial {
MSLS_KERNEL_DECLS
}

#undef MSLS_KERNEL_DECLS

}  // namespace msls
