#pragma once

#include <string>
#include <vector>

#include "msls/diagnostics.hpp"
#include "msls/sampler.hpp"
#include "msls/selection.hpp"

namespace msls {

/// One block of the chain-quality table: raw series, after burn-in, after burn-in and thinning.
struct DiagnosticSection {
  std::string name;
  std::size_t n_obs = 0;
  std::vector<DiagnosticColumn> columns;  // alpha-bar, gamma0, gamma1, phi, zeta-bar per state
};

/// Uses the raw trace when present; otherwise only the thinned section from the retained draws.
/// Acceptance is reported for the first two sections and NaN for the thinned one.
std::vector<DiagnosticSection> chain_diagnostics(const ChainOutput& chain);

void write_diagnostics_csv(const std::vector<DiagnosticSection>& sections, const std::string& path);
void write_selection_csv(const std::vector<std::pair<std::string, SelectionRow>>& rows, const std::string& path);
void write_ppc_csv(const std::vector<std::pair<std::string, std::vector<PpcMetric>>>& rows, const std::string& path);

}  // namespace msls
