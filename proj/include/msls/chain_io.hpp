#pragma once

#include <string>

#include "msls/generative.hpp"
#include "msls/sampler.hpp"

namespace msls {

/// Where the fitted data came from, so a chain directory can be re-analysed on its own.
struct DataSource {
  std::string layer_name;
  std::string edges_path;
  std::string leaning_path;   // empty when the layer has no leaning
  std::string exposure_path;  // empty without exposure control
};

struct StoredChain {
  ChainOutput chain;
  DataSource source;
};

/// Writes draws.csv, states.csv (latent-space models), transitions.csv,
/// acceptance.csv, manifest.json and, if kept, raw_trace.csv. Creates dir.
void write_chain(const ChainOutput& chain, const DataSource& src, const std::string& dir);
StoredChain read_chain(const std::string& dir);

/// Ground-truth sidecar of a simulated layer.
void write_truth(const SimulatedLayer& sim, const SimulationScenario& sc, const std::string& path);
struct Truth {
  ModelParams params;
  StateSequence states;
};
Truth read_truth(const std::string& path);

/// Inverse of flatten_draw.
ModelParams unflatten_draw(const Eigen::VectorXd& v, ModelKind kind, std::size_t n_nodes, std::size_t n_states,
                           bool with_delta);

}  // namespace msls
