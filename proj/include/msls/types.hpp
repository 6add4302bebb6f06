#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace msls {

// Error kinds. The CLI maps each to a stable "error[<kind>]" prefix.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

struct ValidationError : Error {
  explicit ValidationError(const std::string& what) : Error("validation", what) {}
};
struct IngestionError : Error {
  explicit IngestionError(const std::string& what) : Error("ingestion", what) {}
};
struct NumericalError : Error {
  explicit NumericalError(const std::string& what) : Error("numerical", what) {}
};
struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error("config", what) {}
};
struct InitializationError : Error {
  explicit InitializationError(const std::string& what) : Error("initialization", what) {}
};

using IntMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;

/// Leaning values are clamped into [kLeaningEps, 1 - kLeaningEps] on ingestion.
inline constexpr double kLeaningEps = 1e-6;

/// One layer (country) of the weighted temporal network.
///
/// `weights[t]` is the symmetric N x N matrix of edge weights at period t; the
/// diagonal is never read. `leaning` is T x N and may be empty (zero columns),
/// in which case the Beta leaning equation drops out of every likelihood.
struct Layer {
  std::size_t n_nodes = 0;
  std::size_t n_periods = 0;
  std::vector<IntMatrix> weights;
  Eigen::MatrixXd leaning;
  std::vector<std::string> node_names;
  std::optional<Eigen::VectorXd> exposure;  // raw TotCom_t, strictly positive

  bool has_leaning() const { return leaning.size() > 0; }
  int weight(std::size_t t, std::size_t i, std::size_t j) const {
    return weights[t](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  // Throws ValidationError on shape mismatch, asymmetry, negative weights,
  // leaning outside the open unit interval or non-positive exposure.
  void validate() const;
};

struct NetworkPanel {
  std::vector<Layer> layers;
};

/// De-meaned log exposure, log TotCom_t - mean_t log TotCom_t (zeros if absent).
Eigen::VectorXd exposure_covariate(const Layer& layer);

/// Clamp a leaning value into the open interval; rejects NaN and values outside [0, 1].
double clamp_leaning(double l);

/// theta_r for one layer with d = 1.
struct ModelParams {
  Eigen::VectorXd alpha;   // N individual effects
  Eigen::MatrixXd zeta;    // N x K per-state latent coordinates
  Eigen::VectorXd sigma2;  // K latent variances
  double gamma0 = 0.0;
  double gamma1 = 0.0;
  double phi = 1.0;
  Eigen::MatrixXd trans;   // K x K row-stochastic
  double beta = 1.0;       // fixed
  std::optional<double> delta;

  std::size_t n_nodes() const { return static_cast<std::size_t>(alpha.size()); }
  std::size_t n_states() const { return static_cast<std::size_t>(zeta.cols()); }
  void validate() const;
};

/// Hidden regime path. States are stored 0-based; file formats use 1..K.
struct StateSequence {
  std::vector<int> states;

  std::size_t size() const { return states.size(); }
  Eigen::MatrixXi indicators(std::size_t n_states) const;
  static StateSequence constant(std::size_t n_periods, int state = 0);
};

/// Model variants: full (M1), gamma1 = 0 (M2), single state (M3), and the two
/// Poisson random-graph baselines (homogeneous rate, leaning as coordinates).
enum class ModelKind { M1, M2, M3, RG, RGCov };

ModelKind parse_model_kind(const std::string& s);
std::string model_kind_name(ModelKind m);
inline bool is_latent_space(ModelKind m) { return m == ModelKind::M1 || m == ModelKind::M2 || m == ModelKind::M3; }

/// Unordered node pairs i < j in row-major order; p indexes the pair.
struct PairList {
  std::vector<int> first;
  std::vector<int> second;
  std::size_t size() const { return first.size(); }
};
PairList make_pairs(std::size_t n_nodes);

struct PriorSpec {
  double sigma_alpha2 = 15.0 * 15.0;
  double a_sigma = 0.1;
  double b_sigma = 0.1;
  double b_gamma0 = 15.0 * 15.0;
  double b_gamma1 = 15.0 * 15.0;
  double a_phi = 0.01;
  double b_phi = 0.01;
  double delta_var = 15.0 * 15.0;
  std::vector<double> omega{2.0, 2.0};

  // omega is resized to K (filled with its first entry) when its length differs.
  std::vector<double> omega_for(std::size_t n_states) const;
  void validate() const;
};

}  // namespace msls
