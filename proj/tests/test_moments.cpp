#include "doctest.h"

#include <functional>

#include "msls/moments.hpp"
#include "msls/random.hpp"

using namespace msls;
using doctest::Approx;

namespace {

StrengthMomentSpec spec1(std::size_t n, double alpha, double s2) {
  StrengthMomentSpec s;
  s.n_nodes = n;
  s.alpha = alpha;
  s.sigma2 = {s2};
  s.q_row = {1.0};
  return s;
}

StrengthMomentSpec mixed() {
  StrengthMomentSpec s;
  s.n_nodes = 100;
  s.sigma2 = {0.25, 4.0};
  s.q_row = {0.5, 0.5};
  return s;
}

// E[(sum_j lambda_j)^m] for the focal node, by summing over ordered m-tuples
// of neighbours. Each term is a Gaussian integral:
// E exp(-z'Bz) = det(I + 2 sigma2 B)^(-d/2) for z ~ N(0, sigma2 I).
double factorial_moment_oracle(const Eigen::VectorXd& alpha, std::size_t focal, double beta, double s2, int d, int m) {
  const auto N = alpha.size();
  std::vector<Eigen::Index> nb;
  for (Eigen::Index j = 0; j < N; ++j) {
    if (j != static_cast<Eigen::Index>(focal)) nb.push_back(j);
  }
  double total = 0.0;
  std::vector<std::size_t> idx(static_cast<std::size_t>(m), 0);
  for (;;) {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(N, N);
    double a = 0.0;
    for (std::size_t r : idx) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(N);
      e(static_cast<Eigen::Index>(focal)) = 1.0;
      e(nb[r]) = -1.0;
      B += beta * e * e.transpose();
      a += alpha(static_cast<Eigen::Index>(focal)) + alpha(nb[r]);
    }
    const double det = (Eigen::MatrixXd::Identity(N, N) + 2.0 * s2 * B).determinant();
    total += std::exp(a) * std::pow(det, -d / 2.0);
    std::size_t p = 0;
    while (p < idx.size() && ++idx[p] == nb.size()) idx[p++] = 0;
    if (p == idx.size()) break;
  }
  return total;
}

}  // namespace

TEST_CASE("first factorial moment") {
  CHECK(g_prime(spec1(2, 0.0, 0.0), 0) == 1.0);
  CHECK(g_prime(spec1(1, 0.3, 0.5), 0) == 0.0);
  CHECK(g_prime(spec1(100, 0.0, 0.25), 0) == Approx(99.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(g_prime(spec1(100, 0.0, 0.25), 0) == Approx(70.0036).epsilon(1e-6));
  auto s = spec1(10, 0.4, 0.3);
  s.latent_dim = 3;
  CHECK(g_prime(s, 0) == Approx(9.0 * std::exp(0.4) * std::pow(2.2, -1.5)).epsilon(1e-14));
}

TEST_CASE("second factorial moment") {
  CHECK(g_double_prime(spec1(30, 0.0, 0.0), 0) == Approx(29.0 * 29.0).epsilon(1e-14));
  CHECK(g_double_prime(spec1(2, 0.2, 0.7), 0) == Approx(std::exp(0.4) / std::sqrt(1.0 + 8 * 0.7)).epsilon(1e-14));
  const double ref = 99.0 / std::sqrt(3.0) + 99.0 * 98.0 / std::sqrt(1.5) / std::sqrt(2.5);
  CHECK(g_double_prime(spec1(100, 0.0, 0.25), 0) == Approx(ref).epsilon(1e-14));
}

TEST_CASE("expected strength") {
  CHECK(expected_strength(mixed()) == Approx(99.0 * (0.5 / std::sqrt(2.0) + 0.5 / std::sqrt(17.0))).epsilon(1e-14));
  CHECK(std::abs(expected_strength(mixed()) - 47.01) < 0.01);
  auto one_hot = mixed();
  one_hot.q_row = {0.0, 1.0};
  CHECK(expected_strength(one_hot) == g_prime(one_hot, 1));
}

TEST_CASE("variance and dispersion") {
  SUBCASE("pure Poisson") {
    const auto s = spec1(50, 0.0, 0.0);
    CHECK(strength_variance(s) == Approx(49.0).epsilon(1e-13));
    CHECK(std::abs(dispersion_index(s) - 1.0) < 1e-12);
  }
  SUBCASE("homogeneous in every state") {
    StrengthMomentSpec s;
    s.n_nodes = 40;
    s.alpha = 0.7;
    s.sigma2 = {0.0, 0.0, 0.0};
    s.q_row = {0.2, 0.3, 0.5};
    CHECK(std::abs(dispersion_index(s) - 1.0) < 1e-12);
  }
  SUBCASE("single state has no between-regime part") {
    const auto s = spec1(60, 0.2, 0.8);
    const double g1 = g_prime(s, 0), g2 = g_double_prime(s, 0);
    CHECK(strength_variance(s) == Approx(g2 + g1 - g1 * g1).epsilon(1e-13));
    CHECK(dispersion_index(s) == Approx(1.0 + g2 / g1 - g1).epsilon(1e-13));
  }
  SUBCASE("mixture against the moment definitions") {
    const auto s = mixed();
    double m = 0.0, m2 = 0.0;
    for (std::size_t k = 0; k < 2; ++k) {
      const double g1 = g_prime(s, k), g2 = g_double_prime(s, k);
      m += 0.5 * g1;
      m2 += 0.5 * (g2 + g1);  // E[Y^2 | k]
    }
    CHECK(strength_variance(s) == Approx(m2 - m * m).epsilon(1e-12));
    CHECK(dispersion_index(s) == Approx((m2 - m * m) / m).epsilon(1e-12));
  }
  CHECK_THROWS_AS(dispersion_index(spec1(1, 0.0, 0.5)), ValidationError);
}

TEST_CASE("composition count") {
  CHECK(composition_count(3, 3) == 10.0);
  CHECK(composition_count(1, 99) == 99.0);
  CHECK(composition_count(2, 99) == 4950.0);
  CHECK(composition_count(0, 5) == 1.0);
  CHECK(composition_count(4, 1) == 1.0);
  CHECK_THROWS_AS(pgf_derivative_m(spec1(100, 0.0, 1.0), 0, 6, std::nullopt), ValidationError);
}

TEST_CASE("pgf derivatives reduce to the closed forms") {
  Rng rng(8);
  for (int r = 0; r < 50; ++r) {
    StrengthMomentSpec s;
    s.n_nodes = 2 + static_cast<std::size_t>(rng.uniform_int(30));
    s.latent_dim = 1 + rng.uniform_int(3);
    s.alpha = rng.normal(0.0, 1.0);
    s.beta = 0.2 + 2.0 * rng.uniform();
    s.sigma2 = {0.05 + 3.0 * rng.uniform()};
    s.q_row = {1.0};
    const double g1 = g_prime(s, 0), g2 = g_double_prime(s, 0);
    CHECK(std::abs(pgf_derivative_m(s, 0, 1) - g1) <= 1e-10 * std::abs(g1));
    CHECK(std::abs(pgf_derivative_m(s, 0, 2) - g2) <= 1e-10 * std::abs(g2));
  }
}

TEST_CASE("pgf derivatives with node-specific effects") {
  Rng rng(21);
  for (int r = 0; r < 10; ++r) {
    StrengthMomentSpec s;
    s.n_nodes = 4 + static_cast<std::size_t>(r % 2);
    s.latent_dim = 1 + r % 2;
    s.beta = 0.5 + rng.uniform();
    s.sigma2 = {0.1 + rng.uniform()};
    s.q_row = {1.0};
    Eigen::VectorXd a(static_cast<Eigen::Index>(s.n_nodes));
    for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = rng.normal(0.0, 0.5);
    const std::size_t focal = static_cast<std::size_t>(r) % s.n_nodes;
    for (int m = 1; m <= 4; ++m) {
      const double ref = factorial_moment_oracle(a, focal, s.beta, s.sigma2[0], s.latent_dim, m);
      CHECK(pgf_derivative_m(s, 0, m, a, focal) == Approx(ref).epsilon(1e-10));
    }
  }
}

TEST_CASE("pgf mixture") {
  auto s = mixed();
  s.n_nodes = 6;
  CHECK(pgf_derivative_m_mixture(s, 2) ==
        Approx(0.5 * g_double_prime(s, 0) + 0.5 * g_double_prime(s, 1)).epsilon(1e-12));
}

TEST_CASE("random-node factorial moments") {
  Eigen::VectorXd a = Eigen::VectorXd::Constant(30, 0.15);
  const auto fm = random_node_factorial_moments(a, 1.0, 0.6);
  const auto s = spec1(30, 0.3, 0.6);
  CHECK(fm.g1 == Approx(g_prime(s, 0)).epsilon(1e-12));
  CHECK(fm.g2 == Approx(g_double_prime(s, 0)).epsilon(1e-12));
  // heterogeneous effects: the node average of the per-node exact moments
  Rng rng(2);
  Eigen::VectorXd h(5);
  for (Eigen::Index i = 0; i < 5; ++i) h(i) = rng.normal(0.0, 0.4);
  const auto hm = random_node_factorial_moments(h, 0.8, 0.3);
  double f1 = 0.0, f2 = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    f1 += factorial_moment_oracle(h, i, 0.8, 0.3, 1, 1) / 5.0;
    f2 += factorial_moment_oracle(h, i, 0.8, 0.3, 1, 2) / 5.0;
  }
  CHECK(hm.g1 == Approx(f1).epsilon(1e-10));
  CHECK(hm.g2 == Approx(f2).epsilon(1e-10));
}

TEST_CASE("monotonicity") {
  const auto base = mixed();
  const double e0 = expected_strength(base);
  auto s = base;
  s.sigma2[0] += 0.1;
  CHECK(expected_strength(s) < e0);
  s = base;
  s.sigma2[1] += 0.1;
  CHECK(expected_strength(s) < e0);
  s = base;
  s.beta += 0.1;
  CHECK(expected_strength(s) < e0);
  s = base;
  s.alpha += 0.1;
  CHECK(expected_strength(s) > e0);
  s = base;
  s.n_nodes += 1;
  CHECK(expected_strength(s) > e0);
  // sweep
  double prev = std::numeric_limits<double>::infinity();
  for (double v = 0.0; v <= 5.0; v += 0.25) {
    const double e = expected_strength(spec1(100, 0.0, v));
    CHECK(e < prev);
    prev = e;
  }
}

TEST_CASE("Monte-Carlo oracle") {
  SUBCASE("homogeneous networks") {
    McOracleOptions o;
    o.n_reps = 500;
    o.seed = 4;
    const auto r = mc_strength_oracle(spec1(100, 0.0, 0.0), o);
    CHECK(r.n_reps == 500);
    CHECK(std::abs(r.mean - 99.0) <= 3.0 * r.se_mean);
    CHECK(std::abs(r.dispersion - 1.0) <= 3.0 * r.se_dispersion);
  }
  SUBCASE("mixed spec matches the closed forms") {
    McOracleOptions o;
    o.n_reps = 200;
    o.seed = 5;
    const auto s = mixed();
    const auto r = mc_strength_oracle(s, o);
    CHECK(std::abs(r.mean - expected_strength(s)) <= 3.0 * r.se_mean);
    CHECK(std::abs(r.sd - strength_sd(s)) <= 3.0 * r.se_sd);
    CHECK(std::abs(r.dispersion - dispersion_index(s)) <= 3.0 * r.se_dispersion);
  }
  SUBCASE("third factorial moment with node effects") {
    auto s = spec1(4, 0.0, 0.5);
    Eigen::Vector4d a(0.3, -0.2, 0.5, 0.1);
    McOracleOptions o;
    o.n_reps = 20000;
    o.seed = 6;
    o.per_node_alpha = a;
    const auto r = mc_strength_oracle(s, o);
    const double f3 = pgf_derivative_m(s, 0, 3, a, 0);
    CHECK(std::abs(r.focal_f3 - f3) <= 3.0 * r.se_focal_f3);
    CHECK(std::abs(r.focal_f1 - pgf_derivative_m(s, 0, 1, a, 0)) <= 3.0 * r.se_focal_f1);
  }
  SUBCASE("deterministic and thread-count independent") {
    McOracleOptions o;
    o.n_reps = 20;
    o.seed = 7;
    const auto a = mc_strength_oracle(mixed(), o);
    o.parallel = false;
    const auto b = mc_strength_oracle(mixed(), o);
    CHECK(a.mean == b.mean);
    CHECK(a.se_dispersion == b.se_dispersion);
  }
  SUBCASE("invalid") {
    McOracleOptions o;
    o.n_reps = 1;
    CHECK_THROWS_AS(mc_strength_oracle(mixed(), o), ValidationError);
  }
}
