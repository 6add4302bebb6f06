#include "msls/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "msls/types.hpp"

namespace msls {

namespace {

double mean_of(const std::vector<double>& x, std::size_t a, std::size_t b) {
  double s = 0.0;
  for (std::size_t i = a; i < b; ++i) s += x[i];
  return s / static_cast<double>(b - a);
}

// autocovariances gamma_0..gamma_maxlag with denominator n
std::vector<double> autocov(const std::vector<double>& x, std::size_t maxlag) {
  const std::size_t n = x.size();
  const double m = mean_of(x, 0, n);
  std::vector<double> g(maxlag + 1, 0.0);
  for (std::size_t k = 0; k <= maxlag; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) s += (x[i] - m) * (x[i + k] - m);
    g[k] = s / static_cast<double>(n);
  }
  return g;
}

void check_series(const std::vector<double>& x, std::size_t min_len) {
  if (x.size() < min_len) throw ValidationError("diagnostics: series too short");
  for (double v : x) {
    if (!std::isfinite(v)) throw ValidationError("diagnostics: non-finite value in series");
  }
}

}  // namespace

double acf(const std::vector<double>& x, std::size_t lag) {
  check_series(x, 2);
  if (lag >= x.size()) throw ValidationError("acf: lag must be smaller than the series length");
  const std::size_t n = x.size();
  const double m = mean_of(x, 0, n);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  if (ss <= 0.0) throw NumericalError("acf: zero-variance series");
  double s = 0.0;
  for (std::size_t i = 0; i + lag < n; ++i) s += (x[i] - m) * (x[i + lag] - m);
  return s / ss;
}

double effective_sample_size_ratio(const std::vector<double>& x) {
  check_series(x, 10);
  const std::size_t n = x.size();
  const double m = mean_of(x, 0, n);
  auto gamma = [&](std::size_t k) {
    double s = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) s += (x[i] - m) * (x[i + k] - m);
    return s / static_cast<double>(n);
  };
  const double g0 = gamma(0);
  if (g0 <= 0.0) throw NumericalError("ess: zero-variance series");
  // Geyer: add pairs g(2m) + g(2m+1) while they stay positive
  double tau = -g0;
  for (std::size_t k = 0; k + 1 < n; k += 2) {
    const double pair = (k == 0 ? g0 : gamma(k)) + gamma(k + 1);
    if (pair <= 0.0) break;
    tau += 2.0 * pair;
  }
  return std::min(1.0, g0 / tau);
}

double spectral_density_zero(const std::vector<double>& x) {
  const std::size_t n = x.size();
  const auto M = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
  const std::vector<double> g = autocov(x, std::min(M, n - 1));
  double s = g[0];
  for (std::size_t k = 1; k < g.size(); ++k) s += 2.0 * (1.0 - static_cast<double>(k) / (M + 1.0)) * g[k];
  return s;
}

double geweke_z(const std::vector<double>& x, double frac_a, double frac_b) {
  if (!(frac_a > 0.0 && frac_b > 0.0 && frac_a + frac_b <= 1.0)) {
    throw ValidationError("geweke: window fractions must be positive with frac_a + frac_b <= 1");
  }
  check_series(x, 2);
  const std::size_t n = x.size();
  const auto na = static_cast<std::size_t>(std::floor(frac_a * static_cast<double>(n)));
  const auto nb = static_cast<std::size_t>(std::floor(frac_b * static_cast<double>(n)));
  if (na < 20 || nb < 20) throw ValidationError("geweke: each window needs at least 20 points");
  const std::vector<double> a(x.begin(), x.begin() + static_cast<long>(na));
  const std::vector<double> b(x.end() - static_cast<long>(nb), x.end());
  const double va = spectral_density_zero(a) / static_cast<double>(na);
  const double vb = spectral_density_zero(b) / static_cast<double>(nb);
  if (!(va + vb > 0.0)) throw NumericalError("geweke: degenerate windows");
  return (mean_of(a, 0, na) - mean_of(b, 0, nb)) / std::sqrt(va + vb);
}

double geweke_cd(const std::vector<double>& x, double frac_a, double frac_b) {
  const double z = geweke_z(x, frac_a, frac_b);
  return std::erfc(std::abs(z) / std::sqrt(2.0));
}

double acceptance_rate(const std::vector<int>& flags) {
  if (flags.empty()) throw ValidationError("acceptance_rate: no flags");
  double s = 0.0;
  for (int f : flags) s += f != 0 ? 1.0 : 0.0;
  return s / static_cast<double>(flags.size());
}

DiagnosticColumn diagnose_group(const std::string& label, const std::vector<std::vector<double>>& series,
                                double acceptance) {
  DiagnosticColumn c;
  c.label = label;
  c.acceptance = acceptance;
  // Average of a statistic over the series where it is defined; short
  // series (a handful of retained draws) leave it NaN instead of failing.
  auto average = [&](auto stat) {
    double sum = 0.0;
    int n = 0;
    for (const auto& s : series) {
      try {
        sum += stat(s);
        ++n;
      } catch (const ValidationError&) {
      }
    }
    return n > 0 ? sum / n : std::numeric_limits<double>::quiet_NaN();
  };
  c.acf1 = average([](const auto& s) { return acf(s, 1); });
  c.acf10 = average([](const auto& s) { return acf(s, 10); });
  c.acf30 = average([](const auto& s) { return acf(s, 30); });
  c.ess_ratio = average([](const auto& s) { return effective_sample_size_ratio(s); });
  c.geweke_p = average([](const auto& s) { return geweke_cd(s); });
  return c;
}

std::vector<double> column_of(const Eigen::MatrixXd& m, Eigen::Index col, std::size_t start, std::size_t step) {
  std::vector<double> v;
  for (auto r = static_cast<Eigen::Index>(start); r < m.rows(); r += static_cast<Eigen::Index>(step)) v.push_back(m(r, col));
  return v;
}

}  // namespace msls
