#include "msls/random.hpp"

#include <cmath>
#include <limits>

#include "msls/types.hpp"

namespace msls {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : eng_(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL))) {}

double Rng::uniform() { return std::generate_canonical<double, 53>(eng_); }

double Rng::normal() { return norm_(eng_); }

double Rng::gamma(double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0)) throw ValidationError("gamma: shape and rate must be positive");
  std::gamma_distribution<double> g(shape, 1.0 / rate);
  return g(eng_);
}

double Rng::beta(double a, double b) {
  const double x = gamma(a);
  const double y = gamma(b);
  return x / (x + y);
}

int Rng::poisson(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ValidationError("poisson: invalid rate");
  if (lambda == 0.0) return 0;
  std::poisson_distribution<int> p(lambda);
  return p(eng_);
}

std::vector<double> Rng::dirichlet(const std::vector<double>& a) {
  std::vector<double> out(a.size());
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    out[k] = gamma(a[k]);
    s += out[k];
  }
  for (double& v : out) v /= s;
  return out;
}

int Rng::categorical_log(const Eigen::Ref<const Eigen::VectorXd>& logw) {
  const double m = logw.maxCoeff();
  if (!std::isfinite(m)) throw NumericalError("categorical: all weights are zero or non-finite");
  double total = 0.0;
  for (Eigen::Index k = 0; k < logw.size(); ++k) total += std::exp(logw(k) - m);
  double u = uniform() * total;
  for (Eigen::Index k = 0; k < logw.size(); ++k) {
    u -= std::exp(logw(k) - m);
    if (u < 0.0) return static_cast<int>(k);
  }
  // rounding: return the last index with positive weight
  for (Eigen::Index k = logw.size() - 1; k >= 0; --k) {
    if (std::isfinite(logw(k))) return static_cast<int>(k);
  }
  return 0;
}

int Rng::uniform_int(int n) {
  std::uniform_int_distribution<int> d(0, n - 1);
  return d(eng_);
}

}  // namespace msls
