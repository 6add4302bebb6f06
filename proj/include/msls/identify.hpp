#pragma once

#include <vector>

#include "msls/types.hpp"

namespace msls {

struct IdentifyOptions {
  std::size_t anchor_index = 2;
  bool anchor_negative = true;
  // Beta link active (leaning observed and gamma1 free). The translation then
  // acts on all states at once and is absorbed into gamma0; the reflection
  // flips every column together with gamma1.
  bool pooled = false;
};

/// The group element applied by identify_draw.
/// New column k is old column perm[k], transformed as sign[k] * (z - shift[perm[k]]).
struct IdentifyTransform {
  std::vector<double> shift;  // per old state
  std::vector<double> sign;   // per new state
  std::vector<int> perm;      // new -> old
  double gamma0_coef = 0.0;  // gamma0' = gamma0 + gamma0_coef * gamma1
  double gamma1_sign = 1.0;

  bool relabels() const;
};

/// Median over pairs i < j of |zeta_ik - zeta_jk|.
double median_pair_distance(const Eigen::MatrixXd& zeta, Eigen::Index k);

/// Centre, reflect and relabel a draw in place; remaps the state path too.
IdentifyTransform identify_draw(ModelParams& p, StateSequence& s, const IdentifyOptions& opt);

/// True if the draw satisfies centering, anchor sign and ordering constraints.
bool is_identified(const ModelParams& p, const IdentifyOptions& opt, double tol = 1e-10);

}  // namespace msls
