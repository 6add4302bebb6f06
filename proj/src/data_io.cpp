#include "msls/data_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

namespace msls {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        cur.push_back('"');
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::string where(const std::string& source, int line) { return source + ":" + std::to_string(line); }

long parse_long(const std::string& s, const std::string& what, const std::string& loc) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw IngestionError(loc + ": " + what + " '" + s + "' is not an integer");
  }
}

double parse_double(const std::string& s, const std::string& what, const std::string& loc) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw IngestionError(loc + ": " + what + " '" + s + "' is not a number");
  }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IngestionError("cannot write " + path);
  out.precision(17);
  return out;
}

}  // namespace

std::size_t CsvTable::column(const std::string& name, const std::string& source) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw IngestionError(source + ": missing column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

CsvTable parse_csv(const std::string& text, const std::string& source) {
  CsvTable tab;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (!have_header) {
      if (!fields.empty() && fields[0].size() >= 3 && fields[0].compare(0, 3, "\xEF\xBB\xBF") == 0) {
        fields[0] = fields[0].substr(3);
      }
      tab.header = fields;
      have_header = true;
      continue;
    }
    if (fields.size() != tab.header.size()) {
      throw IngestionError(where(source, lineno) + ": expected " + std::to_string(tab.header.size()) + " fields, got " +
                           std::to_string(fields.size()));
    }
    tab.rows.push_back(std::move(fields));
    tab.line_numbers.push_back(lineno);
  }
  if (!have_header) throw IngestionError(source + ": empty file (no header)");
  return tab;
}

CsvTable read_csv(const std::string& path) { return parse_csv(slurp(path), path); }

Layer edge_list_to_layer(const std::vector<EdgeListRecord>& recs, const std::string& source) {
  std::vector<std::string> names;
  std::unordered_map<std::string, int> index;
  auto node = [&](const std::string& nm) {
    const auto it = index.find(nm);
    if (it != index.end()) return it->second;
    const int id = static_cast<int>(names.size());
    index.emplace(nm, id);
    names.push_back(nm);
    return id;
  };
  int T = 0;
  for (const auto& r : recs) {
    node(r.i);
    node(r.j);
    if (r.t < 1) throw IngestionError(source + ": period index must be >= 1");
    if (r.w < 0) throw IngestionError(source + ": negative weight for (" + r.i + "," + r.j + "," + std::to_string(r.t) + ")");
    T = std::max(T, r.t);
  }
  if (T == 0) throw IngestionError(source + ": zero periods (no edge rows)");
  Layer layer;
  layer.n_nodes = names.size();
  layer.n_periods = static_cast<std::size_t>(T);
  layer.node_names = names;
  const auto N = static_cast<Eigen::Index>(names.size());
  layer.weights.assign(layer.n_periods, IntMatrix::Zero(N, N));
  std::map<std::tuple<int, int, int>, std::string> seen;
  std::vector<std::string> dups;
  for (const auto& r : recs) {
    int a = index[r.i];
    int b = index[r.j];
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    const std::string label = "(" + r.i + "," + r.j + "," + std::to_string(r.t) + ")";
    const auto [it, fresh] = seen.emplace(std::make_tuple(a, b, r.t), label);
    if (!fresh) {
      dups.push_back(it->second == label ? label : label + " repeats " + it->second);
      continue;
    }
    layer.weights[static_cast<std::size_t>(r.t - 1)](a, b) = r.w;
    layer.weights[static_cast<std::size_t>(r.t - 1)](b, a) = r.w;
  }
  if (!dups.empty()) {
    std::string msg = source + ": duplicate edge rows";
    for (std::size_t k = 0; k < dups.size() && k < 20; ++k) msg += " " + dups[k];
    if (dups.size() > 20) msg += " ... (" + std::to_string(dups.size()) + " total)";
    throw IngestionError(msg);
  }
  return layer;
}

Layer load_edge_list(const std::string& path) {
  const CsvTable tab = read_csv(path);
  const std::size_t ci = tab.column("i", path), cj = tab.column("j", path), ct = tab.column("t", path),
                    cw = tab.column("w", path);
  std::vector<EdgeListRecord> recs;
  recs.reserve(tab.rows.size());
  for (std::size_t r = 0; r < tab.rows.size(); ++r) {
    const auto& row = tab.rows[r];
    const std::string loc = where(path, tab.line_numbers[r]);
    EdgeListRecord rec;
    rec.i = row[ci];
    rec.j = row[cj];
    rec.t = static_cast<int>(parse_long(row[ct], "t", loc));
    rec.w = static_cast<int>(parse_long(row[cw], "w", loc));
    if (rec.w < 0) throw IngestionError(loc + ": negative weight");
    recs.push_back(std::move(rec));
  }
  return edge_list_to_layer(recs, path);
}

void load_leaning(const std::string& path, Layer& layer) {
  const CsvTable tab = read_csv(path);
  const std::size_t ci = tab.column("i", path), ct = tab.column("t", path), cl = tab.column("leaning", path);
  std::unordered_map<std::string, int> index;
  for (std::size_t i = 0; i < layer.n_nodes; ++i) index.emplace(layer.node_names[i], static_cast<int>(i));
  const auto T = static_cast<Eigen::Index>(layer.n_periods);
  const auto N = static_cast<Eigen::Index>(layer.n_nodes);
  Eigen::MatrixXd lean = Eigen::MatrixXd::Constant(T, N, std::nan(""));
  for (std::size_t r = 0; r < tab.rows.size(); ++r) {
    const auto& row = tab.rows[r];
    const std::string loc = where(path, tab.line_numbers[r]);
    const auto it = index.find(row[ci]);
    if (it == index.end()) throw IngestionError(loc + ": unknown node '" + row[ci] + "'");
    const long t = parse_long(row[ct], "t", loc);
    if (t < 1 || t > T) throw IngestionError(loc + ": period " + std::to_string(t) + " outside 1.." + std::to_string(T));
    const double v = parse_double(row[cl], "leaning", loc);
    if (!std::isnan(lean(t - 1, it->second))) throw IngestionError(loc + ": duplicate leaning row");
    try {
      lean(t - 1, it->second) = clamp_leaning(v);
    } catch (const ValidationError& e) {
      throw ValidationError(loc + ": " + e.what());
    }
  }
  for (Eigen::Index t = 0; t < T; ++t) {
    for (Eigen::Index i = 0; i < N; ++i) {
      if (std::isnan(lean(t, i))) {
        throw IngestionError(path + ": missing leaning for node '" + layer.node_names[static_cast<std::size_t>(i)] +
                             "' at t=" + std::to_string(t + 1));
      }
    }
  }
  layer.leaning = lean;
}

void load_exposure(const std::string& path, Layer& layer) {
  const CsvTable tab = read_csv(path);
  const std::size_t ct = tab.column("t", path), cv = tab.column("total", path);
  const auto T = static_cast<Eigen::Index>(layer.n_periods);
  Eigen::VectorXd e = Eigen::VectorXd::Constant(T, std::nan(""));
  for (std::size_t r = 0; r < tab.rows.size(); ++r) {
    const std::string loc = where(path, tab.line_numbers[r]);
    const long t = parse_long(tab.rows[r][ct], "t", loc);
    if (t < 1 || t > T) throw IngestionError(loc + ": period outside the panel");
    const double v = parse_double(tab.rows[r][cv], "total", loc);
    if (!(v > 0.0)) throw ValidationError(loc + ": exposure must be positive");
    e(t - 1) = v;
  }
  for (Eigen::Index t = 0; t < T; ++t) {
    if (std::isnan(e(t))) throw IngestionError(path + ": missing exposure at t=" + std::to_string(t + 1));
  }
  layer.exposure = e;
}

void write_edge_list(const Layer& layer, const std::string& path, bool include_zeros) {
  auto out = open_out(path);
  out << "i,j,t,w\n";
  for (std::size_t t = 0; t < layer.n_periods; ++t) {
    for (std::size_t i = 0; i < layer.n_nodes; ++i) {
      for (std::size_t j = i + 1; j < layer.n_nodes; ++j) {
        const int w = layer.weight(t, i, j);
        if (w == 0 && !include_zeros) continue;
        out << layer.node_names[i] << ',' << layer.node_names[j] << ',' << t + 1 << ',' << w << '\n';
      }
    }
  }
}

void write_leaning(const Layer& layer, const std::string& path) {
  auto out = open_out(path);
  out << "i,t,leaning\n";
  for (std::size_t t = 0; t < layer.n_periods; ++t) {
    for (std::size_t i = 0; i < layer.n_nodes; ++i) {
      out << layer.node_names[i] << ',' << t + 1 << ','
          << layer.leaning(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i)) << '\n';
    }
  }
}

Eigen::MatrixXi project_bipartite(const Eigen::MatrixXi& B) {
  if ((B.array() < 0).any()) throw ValidationError("project_bipartite: negative entries");
  return B.transpose() * B;
}

std::pair<Layer, std::vector<std::string>> filter_inactive(const Layer& layer, int max_gap) {
  Layer cur = layer;
  std::vector<std::string> removed;
  for (;;) {
    const auto N = static_cast<Eigen::Index>(cur.n_nodes);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < N; ++i) {
      int run = 0, longest = 0;
      for (std::size_t t = 0; t < cur.n_periods; ++t) {
        const long s = cur.weights[t].row(i).sum() - cur.weights[t](i, i);
        run = s == 0 ? run + 1 : 0;
        longest = std::max(longest, run);
      }
      if (longest > max_gap) {
        removed.push_back(cur.node_names[static_cast<std::size_t>(i)]);
      } else {
        keep.push_back(i);
      }
    }
    if (static_cast<Eigen::Index>(keep.size()) == N) return {cur, removed};
    Layer next;
    next.n_nodes = keep.size();
    next.n_periods = cur.n_periods;
    next.exposure = cur.exposure;
    const auto M = static_cast<Eigen::Index>(keep.size());
    for (auto i : keep) next.node_names.push_back(cur.node_names[static_cast<std::size_t>(i)]);
    for (std::size_t t = 0; t < cur.n_periods; ++t) {
      IntMatrix w(M, M);
      for (Eigen::Index a = 0; a < M; ++a) {
        for (Eigen::Index b = 0; b < M; ++b) w(a, b) = cur.weights[t](keep[a], keep[b]);
      }
      next.weights.push_back(w);
    }
    if (cur.has_leaning()) {
      next.leaning.resize(static_cast<Eigen::Index>(cur.n_periods), M);
      for (Eigen::Index a = 0; a < M; ++a) next.leaning.col(a) = cur.leaning.col(keep[a]);
    }
    cur = std::move(next);
  }
}

double pearson_correlation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 3) throw ValidationError("pearson: need equal lengths >= 3");
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!std::isfinite(a[k]) || !std::isfinite(b[k])) throw ValidationError("pearson: non-finite input");
    ma += a[k];
    mb += b[k];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    sab += (a[k] - ma) * (b[k] - mb);
    saa += (a[k] - ma) * (a[k] - ma);
    sbb += (b[k] - mb) * (b[k] - mb);
  }
  if (saa <= 0.0 || sbb <= 0.0) throw ValidationError("pearson: zero variance");
  return sab / std::sqrt(saa * sbb);
}

}  // namespace msls
