#include "msls/types.hpp"

#include <cmath>
#include <sstream>

namespace msls {

double clamp_leaning(double l) {
  if (!(l >= 0.0 && l <= 1.0)) {
    std::ostringstream os;
    os << "leaning value " << l << " outside [0, 1]";
    throw ValidationError(os.str());
  }
  return std::min(std::max(l, kLeaningEps), 1.0 - kLeaningEps);
}

void Layer::validate() const {
  if (weights.size() != n_periods) throw ValidationError("layer: weights count != n_periods");
  if (node_names.size() != n_nodes) throw ValidationError("layer: node_names count != n_nodes");
  const auto n = static_cast<Eigen::Index>(n_nodes);
  for (std::size_t t = 0; t < n_periods; ++t) {
    const auto& w = weights[t];
    if (w.rows() != n || w.cols() != n) throw ValidationError("layer: weight matrix shape mismatch");
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        if (w(i, j) != w(j, i)) {
          std::ostringstream os;
          os << "layer: asymmetric weight at t=" << t + 1 << " (" << i << "," << j << ")";
          throw ValidationError(os.str());
        }
        if (w(i, j) < 0) throw ValidationError("layer: negative weight");
      }
    }
  }
  if (has_leaning()) {
    if (leaning.rows() != static_cast<Eigen::Index>(n_periods) || leaning.cols() != n) {
      throw ValidationError("layer: leaning must be T x N");
    }
    for (Eigen::Index t = 0; t < leaning.rows(); ++t) {
      for (Eigen::Index i = 0; i < n; ++i) {
        const double l = leaning(t, i);
        if (!(l > 0.0 && l < 1.0)) throw ValidationError("layer: leaning outside (0,1)");
      }
    }
  }
  if (exposure) {
    if (exposure->size() != static_cast<Eigen::Index>(n_periods)) {
      throw ValidationError("layer: exposure length != n_periods");
    }
    if ((exposure->array() <= 0.0).any()) throw ValidationError("layer: exposure must be positive");
  }
}

Eigen::VectorXd exposure_covariate(const Layer& layer) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(layer.n_periods));
  if (!layer.exposure || layer.n_periods == 0) return e;
  e = layer.exposure->array().log().matrix();
  e.array() -= e.mean();
  return e;
}

void ModelParams::validate() const {
  const auto n = alpha.size();
  const auto k = zeta.cols();
  if (zeta.rows() != n) throw ValidationError("params: zeta rows != N");
  if (sigma2.size() != k) throw ValidationError("params: sigma2 length != K");
  if (trans.rows() != k || trans.cols() != k) throw ValidationError("params: trans must be K x K");
  if ((sigma2.array() <= 0.0).any()) throw ValidationError("params: sigma2 must be positive");
  if (!(phi > 0.0)) throw ValidationError("params: phi must be positive");
  if (!(beta > 0.0)) throw ValidationError("params: beta must be positive");
  for (Eigen::Index r = 0; r < k; ++r) {
    if ((trans.row(r).array() < 0.0).any()) throw ValidationError("params: negative transition probability");
    if (std::abs(trans.row(r).sum() - 1.0) > 1e-12) throw ValidationError("params: transition row does not sum to 1");
  }
}

Eigen::MatrixXi StateSequence::indicators(std::size_t n_states) const {
  Eigen::MatrixXi xi = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(states.size()),
                                             static_cast<Eigen::Index>(n_states));
  for (std::size_t t = 0; t < states.size(); ++t) {
    const int s = states[t];
    if (s < 0 || static_cast<std::size_t>(s) >= n_states) throw ValidationError("state out of range");
    xi(static_cast<Eigen::Index>(t), s) = 1;
  }
  return xi;
}

StateSequence StateSequence::constant(std::size_t n_periods, int state) {
  return StateSequence{std::vector<int>(n_periods, state)};
}

std::vector<double> PriorSpec::omega_for(std::size_t n_states) const {
  if (omega.size() == n_states) return omega;
  return std::vector<double>(n_states, omega.empty() ? 1.0 : omega.front());
}

void PriorSpec::validate() const {
  for (double v : {sigma_alpha2, a_sigma, b_sigma, b_gamma0, b_gamma1, a_phi, b_phi, delta_var}) {
    if (!(v > 0.0)) throw ValidationError("prior hyperparameters must be positive");
  }
  for (double w : omega) {
    if (!(w > 0.0)) throw ValidationError("Dirichlet weights must be positive");
  }
}

ModelKind parse_model_kind(const std::string& s) {
  if (s == "m1") return ModelKind::M1;
  if (s == "m2") return ModelKind::M2;
  if (s == "m3") return ModelKind::M3;
  if (s == "rg") return ModelKind::RG;
  if (s == "rg-cov") return ModelKind::RGCov;
  throw ConfigError("unknown model '" + s + "' (expected m1|m2|m3|rg|rg-cov)");
}

std::string model_kind_name(ModelKind m) {
  switch (m) {
    case ModelKind::M1: return "m1";
    case ModelKind::M2: return "m2";
    case ModelKind::M3: return "m3";
    case ModelKind::RG: return "rg";
    case ModelKind::RGCov: return "rg-cov";
  }
  return "m1";
}

PairList make_pairs(std::size_t n_nodes) {
  PairList pl;
  const int n = static_cast<int>(n_nodes);
  pl.first.reserve(n_nodes * (n_nodes > 0 ? n_nodes - 1 : 0) / 2);
  pl.second.reserve(pl.first.capacity());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      pl.first.push_back(i);
      pl.second.push_back(j);
    }
  }
  return pl;
}

}  // namespace msls
