#pragma once

#include <string>
#include <utility>
#include <vector>

#include "msls/types.hpp"

namespace msls {

struct EdgeListRecord {
  std::string i;
  std::string j;
  int t = 0;  // 1-based period
  int w = 0;
};

/// Minimal CSV reader: comma separated, optional double quotes, first row is the header.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> line_numbers;  // source line of each row
  std::size_t column(const std::string& name, const std::string& source) const;
};
CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text, const std::string& source);

/// Edge list with header i,j,t,w. Nodes are numbered by first appearance,
/// periods are 1..max t, absent (i,j,t) cells are zero, i == j rows are ignored.
Layer load_edge_list(const std::string& path);
Layer edge_list_to_layer(const std::vector<EdgeListRecord>& recs, const std::string& source);

/// Leaning with header i,t,leaning; every (node, period) of the layer is required.
void load_leaning(const std::string& path, Layer& layer);
/// Exposure series with header t,total; one strictly positive value per period.
void load_exposure(const std::string& path, Layer& layer);

/// Writes i,j,t,w rows for i < j. Zero cells are skipped unless include_zeros.
void write_edge_list(const Layer& layer, const std::string& path, bool include_zeros = false);
void write_leaning(const Layer& layer, const std::string& path);

/// A = B' B for a users x pages interaction matrix.
Eigen::MatrixXi project_bipartite(const Eigen::MatrixXi& B);

/// Drops every node whose strength is zero for more than max_gap consecutive
/// periods, repeating until no node qualifies. Returns the removed names.
std::pair<Layer, std::vector<std::string>> filter_inactive(const Layer& layer, int max_gap = 15);

double pearson_correlation(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace msls
