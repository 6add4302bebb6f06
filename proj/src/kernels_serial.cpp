#include <cmath>
#include <limits>

#include "msls/kernels.hpp"

namespace msls {

PanelCache PanelCache::build(const Layer& layer) {
  PanelCache pc;
  pc.n_nodes = layer.n_nodes;
  pc.n_periods = layer.n_periods;
  pc.pairs = make_pairs(layer.n_nodes);
  const auto P = static_cast<Eigen::Index>(pc.pairs.size());
  const auto T = static_cast<Eigen::Index>(layer.n_periods);
  const auto N = static_cast<Eigen::Index>(layer.n_nodes);
  pc.y.resize(P, T);
  pc.lfact.resize(P, T);
  pc.lfact_t.setZero(T);
  pc.ytot.setZero(T);
  pc.strength.setZero(N);
  for (Eigen::Index t = 0; t < T; ++t) {
    for (Eigen::Index p = 0; p < P; ++p) {
      const int i = pc.pairs.first[p];
      const int j = pc.pairs.second[p];
      const int w = layer.weights[t](i, j);
      pc.y(p, t) = w;
      pc.lfact(p, t) = std::lgamma(w + 1.0);
      pc.lfact_t(t) += pc.lfact(p, t);
      pc.ytot(t) += w;
      pc.strength(i) += w;
      pc.strength(j) += w;
    }
  }
  pc.ecov = exposure_covariate(layer);
  pc.has_exposure = layer.exposure.has_value();
  pc.has_leaning = layer.has_leaning();
  if (pc.has_leaning) {
    pc.leaning = layer.leaning.unaryExpr([](double l) { return clamp_leaning(l); });
    pc.log_l = pc.leaning.array().log().matrix();
    pc.log_1ml = (1.0 - pc.leaning.array()).log().matrix();
  }
  return pc;
}

namespace serial {
#define MSLS_PAR
#include "kernels_impl.inc"
#undef MSLS_PAR
}  // namespace serial

}  // namespace msls
