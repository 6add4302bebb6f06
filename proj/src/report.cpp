#include "msls/report.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>

namespace msls {

namespace {

struct Group {
  std::string label;
  std::string block;  // acceptance block name
  std::vector<Eigen::Index> cols;
};

std::vector<Group> groups_for(const std::vector<std::string>& names, ModelKind kind, std::size_t K) {
  std::vector<Group> g;
  std::map<std::string, Eigen::Index> ix;
  for (std::size_t c = 0; c < names.size(); ++c) ix[names[c]] = static_cast<Eigen::Index>(c);
  Group a{"alpha", "alpha", {}};
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (names[c] == "alpha" || names[c].rfind("alpha_", 0) == 0) a.cols.push_back(static_cast<Eigen::Index>(c));
  }
  g.push_back(a);
  if (is_latent_space(kind)) {
    g.push_back({"gamma0", "gamma", {ix.at("gamma0")}});
    if (kind != ModelKind::M2) g.push_back({"gamma1", "gamma", {ix.at("gamma1")}});
    g.push_back({"phi", "phi", {ix.at("phi")}});
    for (std::size_t k = 0; k < K; ++k) {
      const std::string suffix = "_" + std::to_string(k + 1);
      Group z{"zeta" + suffix, "zeta" + suffix, {}};
      for (std::size_t c = 0; c < names.size(); ++c) {
        const auto& n = names[c];
        if (n.rfind("zeta_", 0) == 0 && n.size() > suffix.size() && n.compare(n.size() - suffix.size(), suffix.size(), suffix) == 0) {
          z.cols.push_back(static_cast<Eigen::Index>(c));
        }
      }
      g.push_back(z);
    }
  }
  if (ix.count("delta")) g.push_back({"delta", "delta", {ix.at("delta")}});
  return g;
}

DiagnosticSection section(const std::string& name, const Eigen::MatrixXd& m, std::size_t start, std::size_t step,
                          const std::vector<Group>& groups, const ChainOutput& chain, bool with_acc) {
  DiagnosticSection s;
  s.name = name;
  s.n_obs = m.rows() > static_cast<Eigen::Index>(start) ? (static_cast<std::size_t>(m.rows()) - start + step - 1) / step : 0;
  for (const auto& g : groups) {
    std::vector<std::vector<double>> series;
    for (auto c : g.cols) {
      auto x = column_of(m, c, start, step);
      // fixed parameters (gamma1 under restriction, a single-state transition row) carry no chain information
      bool constant = true;
      for (double v : x) constant = constant && v == x.front();
      if (!constant) series.push_back(std::move(x));
    }
    double acc = std::numeric_limits<double>::quiet_NaN();
    if (with_acc) {
      const BlockAcceptance* b = chain.find_block(g.block);
      if (b) acc = b->rate();
    }
    if (series.empty()) {
      DiagnosticColumn d;
      d.label = g.label;
      d.acf1 = d.acf10 = d.acf30 = d.ess_ratio = d.geweke_p = std::numeric_limits<double>::quiet_NaN();
      d.acceptance = acc;
      s.columns.push_back(d);
    } else {
      s.columns.push_back(diagnose_group(g.label, series, acc));
    }
  }
  return s;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IngestionError("cannot write " + path);
  out.precision(10);
  return out;
}

}  // namespace

std::vector<DiagnosticSection> chain_diagnostics(const ChainOutput& chain) {
  const std::size_t K = chain.model == ModelKind::M3 ? 1 : (is_latent_space(chain.model) ? chain.config.n_states : 0);
  std::vector<DiagnosticSection> out;
  const std::size_t burn = chain.config.burn_in, thin = chain.config.thin;
  if (chain.raw_trace.rows() > 0) {
    const auto groups = groups_for(chain.raw_names, chain.model, K);
    out.push_back(section("raw", chain.raw_trace, 0, 1, groups, chain, true));
    out.push_back(section("burn-in", chain.raw_trace, burn, 1, groups, chain, true));
    out.push_back(section("burn-in+thin", chain.raw_trace, burn + thin - 1, thin, groups, chain, false));
  } else {
    const bool with_delta = chain.config.use_exposure;
    const auto names = raw_trace_names(chain.model, chain.n_nodes, chain.config.n_states, with_delta);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(chain.draws.size()), static_cast<Eigen::Index>(names.size()));
    for (std::size_t h = 0; h < chain.draws.size(); ++h) {
      m.row(static_cast<Eigen::Index>(h)) = flatten_draw(chain.draws[h], chain.model, with_delta).transpose();
    }
    out.push_back(section("burn-in+thin", m, 0, 1, groups_for(names, chain.model, K), chain, false));
  }
  return out;
}

void write_diagnostics_csv(const std::vector<DiagnosticSection>& sections, const std::string& path) {
  auto out = open_out(path);
  for (const auto& s : sections) {
    out << "section,n_obs,statistic";
    for (const auto& c : s.columns) out << ',' << c.label;
    out << '\n';
    auto row = [&](const char* stat, auto get) {
      out << s.name << ',' << s.n_obs << ',' << stat;
      for (const auto& c : s.columns) {
        const double v = get(c);
        if (std::isnan(v)) {
          out << ",-";
        } else {
          out << ',' << v;
        }
      }
      out << '\n';
    };
    row("acf1", [](const DiagnosticColumn& c) { return c.acf1; });
    row("acf10", [](const DiagnosticColumn& c) { return c.acf10; });
    row("acf30", [](const DiagnosticColumn& c) { return c.acf30; });
    row("acceptance", [](const DiagnosticColumn& c) { return c.acceptance; });
    row("ess_ratio", [](const DiagnosticColumn& c) { return c.ess_ratio; });
    row("geweke_p", [](const DiagnosticColumn& c) { return c.geweke_p; });
  }
}

void write_selection_csv(const std::vector<std::pair<std::string, SelectionRow>>& rows, const std::string& path) {
  auto out = open_out(path);
  out << "chain,model,n_draws,dic_complete,dic_network,mean_loglik_complete,mean_loglik_network,lppd\n";
  for (const auto& [name, r] : rows) {
    out << name << ',' << r.model << ',' << r.n_draws << ',' << r.dic_complete << ',' << r.dic_network << ',' << r.mean_loglik_complete
        << ',' << r.mean_loglik_network << ',' << r.lppd << '\n';
  }
}

void write_ppc_csv(const std::vector<std::pair<std::string, std::vector<PpcMetric>>>& rows, const std::string& path) {
  auto out = open_out(path);
  out << "chain,metric,empirical,posterior_mean,lower,upper\n";
  for (const auto& [name, metrics] : rows) {
    for (const auto& m : metrics) {
      out << name << ',' << m.metric << ',' << m.empirical << ',' << m.posterior_mean << ',' << m.lower << ',' << m.upper
          << '\n';
    }
  }
}

}  // namespace msls
