#include "msls/slant.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>

#include "msls/data_io.hpp"
#include "msls/types.hpp"

namespace msls {

void SlantInputs::validate() const {
  const auto V = static_cast<Eigen::Index>(tokens.size());
  const auto O = static_cast<Eigen::Index>(outlets.size());
  const auto P = static_cast<Eigen::Index>(parties.size());
  if (V == 0 || O == 0 || P == 0 || outlet_counts.empty()) throw ValidationError("slant: empty inputs");
  if (party_counts.rows() != V || party_counts.cols() != P) throw ValidationError("slant: party counts must be V x P");
  if (scores.size() != P) throw ValidationError("slant: one score per party");
  if ((party_counts.array() < 0.0).any()) throw ValidationError("slant: negative party counts");
  for (const auto& x : outlet_counts) {
    if (x.rows() != V || x.cols() != O) throw ValidationError("slant: outlet counts must be V x O per day");
    if ((x.array() < 0.0).any()) throw ValidationError("slant: negative outlet counts");
  }
  if (top_tokens == 0) throw ValidationError("slant: top_tokens must be positive");
}

Eigen::MatrixXd party_tfidf(const Eigen::MatrixXd& party_counts) {
  const auto P = static_cast<double>(party_counts.cols());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(party_counts.rows(), party_counts.cols());
  for (Eigen::Index k = 0; k < party_counts.rows(); ++k) {
    const double df = static_cast<double>((party_counts.row(k).array() > 0.0).count());
    if (df == 0.0) continue;
    out.row(k) = party_counts.row(k) * std::log(P / df);
  }
  return out;
}

double cosine_similarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw ValidationError("cosine: length mismatch");
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.dot(b) / (na * nb);
}

std::vector<std::size_t> top_tfidf_tokens(const Eigen::VectorXd& tfidf, const std::vector<bool>& allowed, std::size_t n) {
  std::vector<std::size_t> idx;
  for (Eigen::Index k = 0; k < tfidf.size(); ++k) {
    if (allowed[static_cast<std::size_t>(k)] && tfidf(k) > 0.0) idx.push_back(static_cast<std::size_t>(k));
  }
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return tfidf(static_cast<Eigen::Index>(a)) > tfidf(static_cast<Eigen::Index>(b));
  });
  if (idx.size() > n) idx.resize(n);
  std::sort(idx.begin(), idx.end());
  return idx;
}

Eigen::VectorXd fixed_effects_residuals(const Eigen::VectorXd& y, const std::vector<int>& outlet_level,
                                        const std::vector<int>& party_level, const std::vector<std::string>& outlet_names,
                                        const std::vector<std::string>& party_names) {
  const auto n = y.size();
  const auto O = static_cast<Eigen::Index>(outlet_names.size());
  const auto P = static_cast<Eigen::Index>(party_names.size());
  if (static_cast<Eigen::Index>(outlet_level.size()) != n || static_cast<Eigen::Index>(party_level.size()) != n) {
    throw ValidationError("fixed effects: level vectors must match y");
  }
  const Eigen::Index p = 1 + (O - 1) + (P - 1);
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n, p);
  std::vector<std::string> col_names{"(constant)"};
  for (Eigen::Index o = 1; o < O; ++o) col_names.push_back("outlet:" + outlet_names[static_cast<std::size_t>(o)]);
  for (Eigen::Index q = 1; q < P; ++q) col_names.push_back("party:" + party_names[static_cast<std::size_t>(q)]);
  for (Eigen::Index r = 0; r < n; ++r) {
    X(r, 0) = 1.0;
    const int o = outlet_level[static_cast<std::size_t>(r)];
    const int q = party_level[static_cast<std::size_t>(r)];
    if (o > 0) X(r, o) = 1.0;
    if (q > 0) X(r, (O - 1) + q) = 1.0;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < p) {
    // columns beyond the rank in pivot order are the ones the design cannot separate
    std::string msg = "fixed effects: rank-deficient design, collinear levels:";
    const auto perm = qr.colsPermutation().indices();
    for (Eigen::Index c = qr.rank(); c < p; ++c) msg += " " + col_names[static_cast<std::size_t>(perm(c))];
    throw ValidationError(msg);
  }
  const Eigen::VectorXd b = qr.solve(y);
  return y - X * b;
}

SlantResult slant_index(const SlantInputs& in) {
  in.validate();
  const auto V = static_cast<Eigen::Index>(in.tokens.size());
  const auto O = static_cast<Eigen::Index>(in.outlets.size());
  const auto P = static_cast<Eigen::Index>(in.parties.size());
  const std::size_t T = in.n_days();

  std::vector<bool> in_outlets(static_cast<std::size_t>(V), false);
  for (const auto& x : in.outlet_counts) {
    for (Eigen::Index k = 0; k < V; ++k) {
      if ((x.row(k).array() > 0.0).any()) in_outlets[static_cast<std::size_t>(k)] = true;
    }
  }
  const Eigen::MatrixXd tfidf = party_tfidf(in.party_counts);

  SlantResult res;
  // party profile: raw counts on its selected tokens, zero elsewhere
  Eigen::MatrixXd profile = Eigen::MatrixXd::Zero(V, P);
  for (Eigen::Index q = 0; q < P; ++q) {
    res.selected.push_back(top_tfidf_tokens(tfidf.col(q), in_outlets, in.top_tokens));
    for (auto k : res.selected.back()) {
      profile(static_cast<Eigen::Index>(k), q) = in.party_counts(static_cast<Eigen::Index>(k), q);
    }
  }

  res.similarity.assign(T, Eigen::MatrixXd::Zero(P, O));
#pragma omp parallel for schedule(static)
  for (std::size_t t = 0; t < T; ++t) {
    for (Eigen::Index o = 0; o < O; ++o) {
      for (Eigen::Index q = 0; q < P; ++q) {
        res.similarity[t](q, o) = cosine_similarity(in.outlet_counts[t].col(o), profile.col(q));
      }
    }
  }

  const auto n = static_cast<Eigen::Index>(T) * O * P;
  Eigen::VectorXd y(n);
  std::vector<int> ol(static_cast<std::size_t>(n)), pl(static_cast<std::size_t>(n));
  Eigen::Index r = 0;
  for (std::size_t t = 0; t < T; ++t) {
    for (Eigen::Index o = 0; o < O; ++o) {
      for (Eigen::Index q = 0; q < P; ++q, ++r) {
        y(r) = res.similarity[t](q, o);
        ol[static_cast<std::size_t>(r)] = static_cast<int>(o);
        pl[static_cast<std::size_t>(r)] = static_cast<int>(q);
      }
    }
  }
  const Eigen::VectorXd eps = fixed_effects_residuals(y, ol, pl, in.outlets, in.parties);

  res.residual.assign(T, Eigen::MatrixXd::Zero(P, O));
  res.slant = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(T), O);
  r = 0;
  for (std::size_t t = 0; t < T; ++t) {
    for (Eigen::Index o = 0; o < O; ++o) {
      for (Eigen::Index q = 0; q < P; ++q, ++r) res.residual[t](q, o) = eps(r);
      res.slant(static_cast<Eigen::Index>(t), o) = res.residual[t].col(o).dot(in.scores);
    }
  }
  return res;
}

namespace {

int index_of(std::map<std::string, int>& m, std::vector<std::string>& names, const std::string& key) {
  const auto it = m.find(key);
  if (it != m.end()) return it->second;
  const int id = static_cast<int>(names.size());
  m.emplace(key, id);
  names.push_back(key);
  return id;
}

double to_double(const std::string& s, const std::string& loc) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw IngestionError(loc + ": '" + s + "' is not a number");
}

}  // namespace

SlantInputs load_slant_inputs(const std::string& outlet_path, const std::string& party_path,
                              const std::string& scores_path) {
  const CsvTable ot = read_csv(outlet_path);
  const CsvTable pt = read_csv(party_path);
  const CsvTable st = read_csv(scores_path);
  std::map<std::string, int> tok_ix, out_ix, par_ix;
  SlantInputs in;

  struct Cell {
    int k, e, t;
    double c;
  };
  std::vector<Cell> ocells, pcells;
  int T = 0;
  {
    const auto ck = ot.column("token", outlet_path), ce = ot.column("entity", outlet_path),
               ctt = ot.column("t", outlet_path), cc = ot.column("count", outlet_path);
    for (std::size_t r = 0; r < ot.rows.size(); ++r) {
      const std::string loc = outlet_path + ":" + std::to_string(ot.line_numbers[r]);
      const auto& row = ot.rows[r];
      const double t = to_double(row[ctt], loc);
      if (t < 1 || t != std::floor(t)) throw IngestionError(loc + ": day index must be a positive integer");
      const double c = to_double(row[cc], loc);
      if (c < 0) throw IngestionError(loc + ": negative count");
      ocells.push_back({index_of(tok_ix, in.tokens, row[ck]), index_of(out_ix, in.outlets, row[ce]), static_cast<int>(t), c});
      T = std::max(T, static_cast<int>(t));
    }
  }
  {
    const auto ck = pt.column("token", party_path), ce = pt.column("entity", party_path),
               cc = pt.column("count", party_path);
    for (std::size_t r = 0; r < pt.rows.size(); ++r) {
      const std::string loc = party_path + ":" + std::to_string(pt.line_numbers[r]);
      const auto& row = pt.rows[r];
      const double c = to_double(row[cc], loc);
      if (c < 0) throw IngestionError(loc + ": negative count");
      pcells.push_back({index_of(tok_ix, in.tokens, row[ck]), index_of(par_ix, in.parties, row[ce]), 0, c});
    }
  }
  if (T == 0) throw IngestionError(outlet_path + ": no outlet rows");
  const auto V = static_cast<Eigen::Index>(in.tokens.size());
  in.outlet_counts.assign(static_cast<std::size_t>(T),
                          Eigen::MatrixXd::Zero(V, static_cast<Eigen::Index>(in.outlets.size())));
  for (const auto& c : ocells) in.outlet_counts[static_cast<std::size_t>(c.t - 1)](c.k, c.e) += c.c;
  in.party_counts = Eigen::MatrixXd::Zero(V, static_cast<Eigen::Index>(in.parties.size()));
  for (const auto& c : pcells) in.party_counts(c.k, c.e) += c.c;

  in.scores = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(in.parties.size()), std::nan(""));
  const auto cp = st.column("party", scores_path), cs = st.column("score", scores_path);
  for (std::size_t r = 0; r < st.rows.size(); ++r) {
    const std::string loc = scores_path + ":" + std::to_string(st.line_numbers[r]);
    const auto it = par_ix.find(st.rows[r][cp]);
    if (it == par_ix.end()) continue;  // party without posts
    in.scores(it->second) = to_double(st.rows[r][cs], loc);
  }
  for (Eigen::Index q = 0; q < in.scores.size(); ++q) {
    if (std::isnan(in.scores(q))) throw IngestionError(scores_path + ": no score for party '" + in.parties[static_cast<std::size_t>(q)] + "'");
  }
  return in;
}

void write_slant(const SlantResult& r, const SlantInputs& in, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IngestionError("cannot write " + path);
  out.precision(17);
  out << "outlet,t,slant\n";
  for (Eigen::Index t = 0; t < r.slant.rows(); ++t) {
    for (Eigen::Index o = 0; o < r.slant.cols(); ++o) {
      out << in.outlets[static_cast<std::size_t>(o)] << ',' << t + 1 << ',' << r.slant(t, o) << '\n';
    }
  }
}

}  // namespace msls
