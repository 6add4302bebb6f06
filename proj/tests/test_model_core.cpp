#include "doctest.h"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "msls/likelihood.hpp"
#include "test_util.hpp"

using namespace msls;
using doctest::Approx;

TEST_CASE("logistic") {
  CHECK(logistic(0.0) == 0.5);
  CHECK(std::abs(logistic(50.0) - 1.0) < 1e-12);
  // 1 / (1 + e^{0.1}) to 16 digits
  using mp = boost::multiprecision::cpp_bin_float_50;
  const mp ref = 1 / (1 + exp(mp(0.1)));
  CHECK(std::abs(logistic(-0.1) - ref.convert_to<double>()) < 1e-15);
  CHECK(std::abs(logistic(-0.1) - 0.4750208) < 1e-7);
  CHECK(logistic(-800.0) >= 0.0);
}

TEST_CASE("log_intensity") {
  for (double c : {-3.0, 0.0, 1.7}) CHECK(log_intensity(0, 0, 1, c, c) == 0.0);
  CHECK(log_intensity(1, 1, 1, 0.5, -0.5) == Approx(1.0).epsilon(1e-15));
  CHECK(log_intensity(0.3, -0.2, 1.0, 0.4, 0.1, 0.0) == log_intensity(0.3, -0.2, 1.0, 0.4, 0.1));
  CHECK(log_intensity(0.3, -0.2, 1.0, 0.4, 0.1, 0.25) == Approx(log_intensity(0.3, -0.2, 1.0, 0.4, 0.1) + 0.25));
  CHECK_THROWS_AS(log_intensity(std::nan(""), 0, 1, 0, 0), ValidationError);
}

TEST_CASE("log_intensity invariances") {
  Rng rng(3);
  for (int r = 0; r < 100; ++r) {
    const double ai = rng.normal(), aj = rng.normal(), xi = rng.normal(), xj = rng.normal(), c = rng.normal();
    CHECK(log_intensity(ai, aj, 1.3, xi + c, xj + c) == Approx(log_intensity(ai, aj, 1.3, xi, xj)).epsilon(1e-12));
    CHECK(log_intensity(ai, aj, 1.3, -xi, -xj) == log_intensity(ai, aj, 1.3, xi, xj));
  }
}

TEST_CASE("poisson_log_pmf") {
  CHECK(poisson_log_pmf(0, 0.0) == -1.0);
  CHECK(poisson_log_pmf(1, 0.0) == -1.0);
  using mp = boost::multiprecision::cpp_bin_float_50;
  const mp lam = mp(280);
  const mp ref = 300 * log(lam) - lam - boost::multiprecision::lgamma(mp(301));
  CHECK(std::abs(poisson_log_pmf(300, std::log(280.0)) - ref.convert_to<double>()) < 1e-9);
  CHECK_THROWS_AS(poisson_log_pmf(1, std::numeric_limits<double>::infinity()), ValidationError);
}

TEST_CASE("poisson_log_pmf sums to one") {
  for (double lam : {0.01, 1.0, 37.5, 1000.0, 1e4}) {
    // for tiny lambda the +20 sd range stops at y = 3 and drops ~lambda^4/24 of tail mass
    const int top = std::max(10, static_cast<int>(std::ceil(lam + 20.0 * std::sqrt(lam))));
    long double s = 0.0L;
    for (int y = 0; y <= top; ++y) s += std::exp(static_cast<long double>(poisson_log_pmf(y, std::log(lam))));
    CHECK(std::abs(static_cast<double>(s) - 1.0) < 1e-10);
  }
}

TEST_CASE("beta leaning density") {
  CHECK(beta_leaning_log_pdf(0.3, 0, 0, 0.7, 12.0) == Approx(beta_leaning_log_pdf(0.7, 0, 0, -0.2, 12.0)).epsilon(1e-13));
  const auto s = beta_shapes(-0.1, 0.5, 0.0, 200.0);
  CHECK(s.a == Approx(95.0042).epsilon(1e-6));
  CHECK(s.b == Approx(104.9958).epsilon(1e-6));
  CHECK(s.a + s.b == Approx(200.0));
  // boundary values are clamped, not rejected
  const double at1 = beta_leaning_log_pdf(1.0, 0.2, 0.3, 0.1, 20.0);
  CHECK(at1 == beta_leaning_log_pdf(1.0 - kLeaningEps, 0.2, 0.3, 0.1, 20.0));
  CHECK(std::isfinite(beta_leaning_log_pdf(0.0, 0.2, 0.3, 0.1, 20.0)));
  CHECK_THROWS_AS(beta_leaning_log_pdf(1.2, 0, 0, 0, 2.0), ValidationError);
  CHECK_THROWS_AS(beta_leaning_log_pdf(std::nan(""), 0, 0, 0, 2.0), ValidationError);
}

TEST_CASE("beta leaning density matches the library Beta density") {
  Rng rng(5);
  for (int r = 0; r < 50; ++r) {
    const double g0 = rng.normal(), g1 = rng.normal(), x = rng.normal(), phi = 1.0 + 50.0 * rng.uniform();
    const double l = 0.01 + 0.98 * rng.uniform();
    const double mu = 1.0 / (1.0 + std::exp(-(g0 + g1 * x)));
    const double a = mu * phi, b = (1 - mu) * phi;
    const double ref = (a - 1) * std::log(l) + (b - 1) * std::log1p(-l) - std::log(boost::math::beta(a, b));
    CHECK(beta_leaning_log_pdf(l, g0, g1, x, phi) == Approx(ref).epsilon(1e-10));
  }
}

TEST_CASE("beta leaning density integrates to one") {
  for (double phi : {2.0, 20.0, 200.0}) {
    // trapezoid on a 10,001-point grid over the open interval
    const int n = 10001;
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
      const double l = (k + 0.5) / n;
      s += std::exp(beta_leaning_log_pdf(l, -0.1, 0.5, 0.2, phi)) / n;
    }
    CHECK(std::abs(s - 1.0) < 1e-6);
  }
}

TEST_CASE("complete data log likelihood") {
  SUBCASE("two nodes, one period, by hand") {
    Layer L;
    L.n_nodes = 2;
    L.n_periods = 1;
    L.node_names = {"a", "b"};
    L.weights = {IntMatrix::Zero(2, 2)};
    L.leaning = Eigen::MatrixXd::Constant(1, 2, 0.5);
    ModelParams p;
    p.alpha = Eigen::VectorXd::Zero(2);
    p.zeta = Eigen::MatrixXd::Constant(2, 1, 0.3);
    p.sigma2 = Eigen::VectorXd::Ones(1);
    p.trans = Eigen::MatrixXd::Ones(1, 1);
    p.gamma0 = 0.0;
    p.gamma1 = 0.0;
    p.phi = 4.0;
    const auto s = StateSequence::constant(1);
    CHECK(network_only_log_lik(L, p, s) == -1.0);
    // Beta(2, 2) at 1/2 has density 1.5
    CHECK(complete_data_log_lik(L, p, s) == Approx(-1.0 + 2.0 * std::log(1.5)).epsilon(1e-13));
  }
  SUBCASE("single state has no transition contribution") {
    Rng rng(1);
    auto p = testutil::random_params(3, 1, rng);
    CHECK(transition_log_lik(p, StateSequence::constant(6)) == 0.0);
  }
  SUBCASE("random instances against a naive oracle") {
    Rng rng(11);
    for (int r = 0; r < 25; ++r) {
      const Layer L = testutil::random_layer(3, 2 + r % 3, 1.5, true, rng);
      const auto p = testutil::random_params(3, 2, rng);
      const auto s = testutil::random_states(L.n_periods, 2, rng);
      const double ref = testutil::naive_complete_loglik(L, p, s);
      CHECK(complete_data_log_lik(L, p, s) == Approx(ref).epsilon(1e-10));
      CHECK(network_only_log_lik(L, p, s) ==
            Approx(complete_data_log_lik(L, p, s) - leaning_log_lik(L, p, s) - transition_log_lik(p, s)).epsilon(1e-12));
    }
  }
  SUBCASE("additive across periods") {
    Rng rng(12);
    const Layer L = testutil::random_layer(4, 6, 2.0, true, rng);
    const auto p = testutil::random_params(4, 2, rng);
    const auto s = testutil::random_states(6, 2, rng);
    Layer a = L, b = L;
    a.n_periods = 3;
    a.weights.resize(3);
    a.leaning = L.leaning.topRows(3);
    b.n_periods = 3;
    b.weights.erase(b.weights.begin(), b.weights.begin() + 3);
    b.leaning = L.leaning.bottomRows(3);
    StateSequence sa{{s.states.begin(), s.states.begin() + 3}}, sb{{s.states.begin() + 3, s.states.end()}};
    const double bridge = std::log(p.trans(s.states[2], s.states[3]));
    CHECK(complete_data_log_lik(L, p, s) ==
          Approx(complete_data_log_lik(a, p, sa) + complete_data_log_lik(b, p, sb) + bridge).epsilon(1e-12));
  }
  SUBCASE("empty layer") {
    Layer L;
    ModelParams p;
    p.alpha.resize(0);
    p.zeta.resize(0, 1);
    p.sigma2 = Eigen::VectorXd::Ones(1);
    p.trans = Eigen::MatrixXd::Ones(1, 1);
    CHECK(network_only_log_lik(L, p, StateSequence{}) == 0.0);
  }
}

TEST_CASE("types validation") {
  Rng rng(2);
  Layer L = testutil::random_layer(3, 2, 1.0, true, rng);
  CHECK_NOTHROW(L.validate());
  Layer bad = L;
  bad.weights[0](0, 1) = 5;
  bad.weights[0](1, 0) = 4;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = L;
  bad.leaning(0, 0) = 1.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = L;
  bad.exposure = Eigen::VectorXd::Constant(2, -1.0);
  CHECK_THROWS_AS(bad.validate(), ValidationError);

  auto p = testutil::random_params(3, 2, rng);
  CHECK_NOTHROW(p.validate());
  p.trans(0, 0) += 1e-6;
  CHECK_THROWS_AS(p.validate(), ValidationError);

  CHECK(clamp_leaning(0.0) == kLeaningEps);
  CHECK(clamp_leaning(1.0) == 1.0 - kLeaningEps);
  CHECK_THROWS_AS(clamp_leaning(-0.1), ValidationError);

  const auto xi = StateSequence{{0, 1, 1}}.indicators(2);
  CHECK(xi.rowwise().sum().minCoeff() == 1);
  CHECK(xi(1, 1) == 1);
  CHECK_THROWS_AS(StateSequence{{2}}.indicators(2), ValidationError);

  const auto pairs = make_pairs(4);
  CHECK(pairs.size() == 6);
  CHECK(pairs.first[3] == 1);
  CHECK(pairs.second[3] == 2);
  CHECK(parse_model_kind("rg-cov") == ModelKind::RGCov);
  CHECK_THROWS_AS(parse_model_kind("m4"), ConfigError);
  PriorSpec pr;
  CHECK(pr.sigma_alpha2 == 225.0);
  CHECK(pr.a_sigma == 0.1);
  CHECK(pr.omega_for(3).size() == 3);
  pr.b_phi = 0.0;
  CHECK_THROWS_AS(pr.validate(), ValidationError);
}

TEST_CASE("exposure covariate is de-meaned log") {
  Rng rng(4);
  Layer L = testutil::random_layer(3, 4, 1.0, false, rng);
  L.exposure = Eigen::Vector4d(1.0, 2.0, 4.0, 8.0);
  const auto e = exposure_covariate(L);
  CHECK(e.sum() == Approx(0.0).epsilon(1e-14).scale(1.0));
  CHECK(e(1) - e(0) == Approx(std::log(2.0)));
}
