#include "msls/identify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace msls {

bool IdentifyTransform::relabels() const {
  for (std::size_t k = 0; k < perm.size(); ++k) {
    if (perm[k] != static_cast<int>(k)) return true;
  }
  return false;
}

double median_pair_distance(const Eigen::MatrixXd& zeta, Eigen::Index k) {
  const Eigen::Index n = zeta.rows();
  std::vector<double> d;
  d.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) d.push_back(std::abs(zeta(i, k) - zeta(j, k)));
  }
  if (d.empty()) return 0.0;
  const std::size_t m = d.size() / 2;
  std::nth_element(d.begin(), d.begin() + static_cast<long>(m), d.end());
  if (d.size() % 2 == 1) return d[m];
  const double hi = d[m];
  const double lo = *std::max_element(d.begin(), d.begin() + static_cast<long>(m));
  return 0.5 * (lo + hi);
}

IdentifyTransform identify_draw(ModelParams& p, StateSequence& s, const IdentifyOptions& opt) {
  const Eigen::Index N = p.zeta.rows();
  const Eigen::Index K = p.zeta.cols();
  IdentifyTransform tr;
  tr.shift.assign(static_cast<std::size_t>(K), 0.0);
  tr.sign.assign(static_cast<std::size_t>(K), 1.0);
  tr.perm.resize(static_cast<std::size_t>(K));
  std::iota(tr.perm.begin(), tr.perm.end(), 0);
  if (N == 0 || K == 0) return tr;
  if (opt.anchor_index >= static_cast<std::size_t>(N)) throw ValidationError("identify: anchor index out of range");
  const auto a = static_cast<Eigen::Index>(opt.anchor_index);
  std::vector<double> old_sign(static_cast<std::size_t>(K), 1.0);

  if (opt.pooled) {
    const double c = p.zeta.mean();
    p.zeta.array() -= c;
    p.gamma0 += p.gamma1 * c;
    tr.gamma0_coef = c;
    std::fill(tr.shift.begin(), tr.shift.end(), c);
    const double anchor = p.zeta.row(a).mean();
    if ((opt.anchor_negative && anchor > 0.0) || (!opt.anchor_negative && anchor < 0.0)) {
      p.zeta = -p.zeta;
      p.gamma1 = -p.gamma1;
      tr.gamma1_sign = -1.0;
      std::fill(old_sign.begin(), old_sign.end(), -1.0);
    }
  } else {
    for (Eigen::Index k = 0; k < K; ++k) {
      const double c = p.zeta.col(k).mean();
      p.zeta.col(k).array() -= c;
      tr.shift[static_cast<std::size_t>(k)] = c;
      const double v = p.zeta(a, k);
      if ((opt.anchor_negative && v > 0.0) || (!opt.anchor_negative && v < 0.0)) {
        p.zeta.col(k) = -p.zeta.col(k);
        old_sign[static_cast<std::size_t>(k)] = -1.0;
      }
    }
  }

  if (K > 1) {
    std::vector<double> dk(static_cast<std::size_t>(K));
    for (Eigen::Index k = 0; k < K; ++k) dk[static_cast<std::size_t>(k)] = median_pair_distance(p.zeta, k);
    std::stable_sort(tr.perm.begin(), tr.perm.end(), [&](int x, int y) { return dk[x] < dk[y]; });
    if (tr.relabels()) {
      std::vector<int> inv(static_cast<std::size_t>(K));
      for (Eigen::Index k = 0; k < K; ++k) inv[tr.perm[k]] = static_cast<int>(k);
      Eigen::MatrixXd z(N, K), q(K, K);
      Eigen::VectorXd s2(K);
      for (Eigen::Index k = 0; k < K; ++k) {
        z.col(k) = p.zeta.col(tr.perm[k]);
        s2(k) = p.sigma2(tr.perm[k]);
        for (Eigen::Index l = 0; l < K; ++l) q(k, l) = p.trans(tr.perm[k], tr.perm[l]);
      }
      p.zeta = z;
      p.sigma2 = s2;
      p.trans = q;
      for (int& st : s.states) st = inv[st];
    }
  }
  for (Eigen::Index k = 0; k < K; ++k) tr.sign[static_cast<std::size_t>(k)] = old_sign[tr.perm[k]];
  return tr;
}

bool is_identified(const ModelParams& p, const IdentifyOptions& opt, double tol) {
  const Eigen::Index N = p.zeta.rows();
  const Eigen::Index K = p.zeta.cols();
  if (N == 0 || K == 0) return true;
  const auto a = static_cast<Eigen::Index>(opt.anchor_index);
  auto sign_ok = [&](double v) { return opt.anchor_negative ? v <= 0.0 : v >= 0.0; };
  if (opt.pooled) {
    if (std::abs(p.zeta.mean()) > tol) return false;
    if (!sign_ok(p.zeta.row(a).mean())) return false;
  } else {
    for (Eigen::Index k = 0; k < K; ++k) {
      if (std::abs(p.zeta.col(k).mean()) > tol) return false;
      if (!sign_ok(p.zeta(a, k))) return false;
    }
  }
  for (Eigen::Index k = 1; k < K; ++k) {
    if (median_pair_distance(p.zeta, k - 1) > median_pair_distance(p.zeta, k)) return false;
  }
  for (Eigen::Index k = 0; k < p.trans.rows(); ++k) {
    if (std::abs(p.trans.row(k).sum() - 1.0) > 1e-12) return false;
  }
  return true;
}

}  // namespace msls
