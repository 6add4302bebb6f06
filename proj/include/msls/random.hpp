#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace msls {

// splitmix64 finalizer; used to derive independent engine seeds from (seed, stream).
std::uint64_t splitmix64(std::uint64_t x);

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  double uniform();                 // [0, 1)
  double normal();                  // N(0, 1)
  double normal(double mean, double sd) { return mean + sd * normal(); }
  double gamma(double shape, double rate = 1.0);
  double inv_gamma(double shape, double scale) { return scale / gamma(shape, 1.0); }
  double beta(double a, double b);
  int poisson(double lambda);
  std::vector<double> dirichlet(const std::vector<double>& a);
  // Draw an index proportional to exp(logw); logw may contain -inf.
  int categorical_log(const Eigen::Ref<const Eigen::VectorXd>& logw);
  int uniform_int(int n);           // {0, ..., n-1}

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
  std::normal_distribution<double> norm_{0.0, 1.0};
};

}  // namespace msls
