#include "doctest.h"

#include "msls/config.hpp"

using namespace msls;
using doctest::Approx;

namespace {

std::string message_of(const std::string& text) {
  try {
    auto kv = KeyValueConfig::parse_string(text, "run.cfg");
    kv.check_known(known_config_keys());
    mcmc_from_config(kv);
    scenario_from_config(kv);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("parsing") {
  const auto kv = KeyValueConfig::parse_string("# comment\nn_iter = 100\n\nmodel=m2  # trailing\nphi = 3.5\n");
  CHECK(kv.get_int("n_iter", 0) == 100);
  CHECK(kv.get_string("model", "") == "m2");
  CHECK(kv.get_double("phi", 0.0) == 3.5);
  CHECK(kv.get_double("gamma0", -0.1) == -0.1);
  const auto l = KeyValueConfig::parse_string("alpha = 0:1:5\ncenters = 0.25, 0.75\nadapt = false\n");
  CHECK(l.get_list("alpha", {}) == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK(l.get_list("centers", {}) == std::vector<double>{0.25, 0.75});
  CHECK(!l.get_bool("adapt", true));
}

TEST_CASE("errors carry the line") {
  CHECK(message_of("n_iter = 10\nthis line is broken\n").find("run.cfg:2") != std::string::npos);
  CHECK(message_of("n_iter = 10\n\nn_iter = 20\n").find("run.cfg:3") != std::string::npos);
  CHECK(message_of("seed = 1\nn_iterr = 5\n").find("run.cfg:2") != std::string::npos);
  CHECK(message_of("n_iter = ten\n").find("run.cfg:1") != std::string::npos);
  try {
    KeyValueConfig::parse_string("x = 1\nalpha = 0:1\n", "run.cfg").get_list("alpha", {});
    FAIL("expected a range error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("run.cfg:2") != std::string::npos);
  }
  CHECK(message_of("n_iter = 100\nburn_in = 200\n").find("burn_in") != std::string::npos);
  CHECK(message_of("n_iter = 100\nburn_in = 50\n") == "");
}

TEST_CASE("assembled objects") {
  SUBCASE("defaults") {
    const auto kv = KeyValueConfig::parse_string("");
    const auto sc = scenario_from_config(kv);
    CHECK(sc.n_nodes == 20);
    CHECK(sc.n_periods == 100);
    const auto c = mcmc_from_config(kv);
    CHECK(c.n_iter == 50000);
    CHECK(c.burn_in == 30000);
    CHECK(c.thin == 10);
    CHECK(c.target_accept == 0.25);
    const auto pr = priors_from_config(kv);
    CHECK(pr.sigma_alpha2 == 225.0);
  }
  SUBCASE("overrides") {
    const auto kv = KeyValueConfig::parse_string(
        "n_nodes = 6\nn_states = 3\ncenters = 0.1,0.2,0.3\nsigma_state = 0.1,0.1,0.1\n"
        "trans = 0.8,0.1,0.1, 0.1,0.8,0.1, 0.1,0.1,0.8\nmodel = m3\nprior_a_phi = 2\nprior_omega = 3\n");
    const auto sc = scenario_from_config(kv);
    CHECK(sc.n_states == 3);
    CHECK(sc.centers(0, 2) == -0.3);
    CHECK(sc.centers(5, 2) == 0.3);
    CHECK(sc.trans(2, 2) == 0.8);
    CHECK(mcmc_from_config(kv).model == ModelKind::M3);
    CHECK(priors_from_config(kv).a_phi == 2.0);
    CHECK(priors_from_config(kv).omega_for(3) == std::vector<double>{3.0, 3.0, 3.0});
  }
  SUBCASE("anchor") {
    const std::vector<std::string> names{"a", "b", "c"};
    CHECK(resolve_anchor(KeyValueConfig::parse_string("anchor = c\n"), names, 0) == 2);
    CHECK(resolve_anchor(KeyValueConfig::parse_string("anchor = 2\n"), names, 0) == 1);
    CHECK(resolve_anchor(KeyValueConfig::parse_string(""), names, 1) == 1);
    CHECK_THROWS_AS(resolve_anchor(KeyValueConfig::parse_string("anchor = zz\n"), names, 0), ConfigError);
  }
  SUBCASE("moment grid") {
    const auto g = moment_grid_from_config(
        KeyValueConfig::parse_string("alpha = -1,0\nsigma2_beta = 0.5,1,2\nbeta = 2\nother_sigma2 = 4\nq_row = 0.5,0.5\n"));
    const auto specs = g.specs();
    CHECK(specs.size() == 6);
    CHECK(specs[0].alpha == -1.0);
    CHECK(specs[2].sigma2[0] == Approx(1.0));
    CHECK(specs[2].sigma2[1] == 4.0);
    CHECK(specs[3].alpha == 0.0);
  }
}
