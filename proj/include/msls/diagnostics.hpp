#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace msls {

/// Sample autocorrelation at `lag`, normalised by the full sum of squares.
double acf(const std::vector<double>& x, std::size_t lag);

/// ESS / n with Geyer's initial positive sequence; capped at 1.
double effective_sample_size_ratio(const std::vector<double>& x);

/// Two-sided p-value of Geweke's test comparing the first frac_a and last
/// frac_b of the series; spectral densities at zero via a Bartlett window of
/// floor(sqrt(window length)) lags.
double geweke_cd(const std::vector<double>& x, double frac_a = 0.1, double frac_b = 0.5);
double geweke_z(const std::vector<double>& x, double frac_a = 0.1, double frac_b = 0.5);

/// Mean of 0/1 flags.
double acceptance_rate(const std::vector<int>& flags);

/// Bartlett-window spectral density at frequency zero (long-run variance).
double spectral_density_zero(const std::vector<double>& x);

/// One column of the chain-quality table: each statistic is averaged over the
/// parameters in the group (e.g. all alpha_i). A statistic undefined for every
/// series (too few draws) is NaN.
struct DiagnosticColumn {
  std::string label;
  double acf1 = 0.0, acf10 = 0.0, acf30 = 0.0;
  double acceptance = 0.0;
  double ess_ratio = 0.0;
  double geweke_p = 0.0;
};

DiagnosticColumn diagnose_group(const std::string& label, const std::vector<std::vector<double>>& series,
                                double acceptance);

std::vector<double> column_of(const Eigen::MatrixXd& m, Eigen::Index col, std::size_t start = 0, std::size_t step = 1);

}  // namespace msls
