#pragma once

#include <string>
#include <vector>

#include "msls/kernels.hpp"
#include "msls/moments.hpp"
#include "msls/sampler.hpp"

namespace msls {

/// -2 mean(trace) + 2 var(trace), variance with n - 1 denominator.
double dic(const std::vector<double>& loglik_trace);

/// cells x draws matrix of log f_P values -> sum over cells of log mean_h f_P.
double lppd(const Eigen::MatrixXd& log_density);

/// Streaming lppd over draws; memory is one running max/sum per cell.
class LppdAccumulator {
 public:
  explicit LppdAccumulator(const PanelCache& pc, bool parallel = true) : pc_(pc), parallel_(parallel) {}
  // loglam: P x T log intensities of one draw
  void add(const Eigen::MatrixXd& loglam);
  double value() const;
  long n_draws() const { return h_; }

 private:
  const PanelCache& pc_;
  bool parallel_;
  Eigen::MatrixXd m_, s_;
  long h_ = 0;
};

double lppd_chain(const ChainOutput& chain, const Layer& layer, bool parallel = true);

struct SelectionRow {
  std::string model;
  double dic_complete = 0.0;
  double dic_network = 0.0;
  double mean_loglik_complete = 0.0;
  double mean_loglik_network = 0.0;
  double lppd = 0.0;
  std::size_t n_draws = 0;
};
SelectionRow selection_summary(const ChainOutput& chain, const Layer& layer, bool parallel = true);

struct EmpiricalStrength {
  double mean = 0.0;
  double sd = 0.0;
  double dispersion = 0.0;
};
/// Per-period mean, SD (n - 1) and variance/mean of nodal strength, averaged over periods.
EmpiricalStrength empirical_strength(const Layer& layer);

/// Model-implied strength mean / SD / dispersion for one draw.
StrengthSummary draw_strength_summary(const Layer& layer, const ModelParams& p, const StateSequence& s, ModelKind kind);

struct PpcMetric {
  std::string metric;
  double empirical = 0.0;
  double posterior_mean = 0.0;
  double lower = 0.0;  // 2.5% quantile
  double upper = 0.0;  // 97.5% quantile
};
std::vector<PpcMetric> ppc_strength(const ChainOutput& chain, const Layer& layer);

/// Linear-interpolation quantile.
double quantile(std::vector<double> v, double prob);

struct BaselineFits {
  ChainOutput homogeneous;
  ChainOutput covariate;
};
BaselineFits fit_baselines(const Layer& layer, const PriorSpec& prior, const McmcConfig& cfg);

}  // namespace msls
