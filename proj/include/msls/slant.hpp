#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace msls {

/// Token counts on an aligned vocabulary.
struct SlantInputs {
  std::vector<std::string> tokens;
  std::vector<std::string> outlets;
  std::vector<std::string> parties;
  std::vector<Eigen::MatrixXd> outlet_counts;  // per day, V x O
  Eigen::MatrixXd party_counts;                // V x P
  Eigen::VectorXd scores;                      // P
  std::size_t top_tokens = 100;

  std::size_t n_days() const { return outlet_counts.size(); }
  void validate() const;
};

struct SlantResult {
  std::vector<std::vector<std::size_t>> selected;  // per party, token indices
  std::vector<Eigen::MatrixXd> similarity;         // per day, P x O
  std::vector<Eigen::MatrixXd> residual;           // per day, P x O
  Eigen::MatrixXd slant;                           // T x O
};

/// tf * log(P / df) with parties as documents. V x P.
Eigen::MatrixXd party_tfidf(const Eigen::MatrixXd& party_counts);
/// 0 when either vector has zero norm.
double cosine_similarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b);
/// Top-n TF-IDF tokens of one party among the allowed tokens (ties by index),
/// returned in index order. Tokens scoring 0 (used by every party) are never picked.
std::vector<std::size_t> top_tfidf_tokens(const Eigen::VectorXd& tfidf, const std::vector<bool>& allowed, std::size_t n);

/// Residuals of y on a constant plus outlet and party dummies (first level of
/// each dropped), pooled over all rows. Throws ValidationError naming the
/// collinear levels when the design is rank deficient.
Eigen::VectorXd fixed_effects_residuals(const Eigen::VectorXd& y, const std::vector<int>& outlet_level,
                                        const std::vector<int>& party_level, const std::vector<std::string>& outlet_names,
                                        const std::vector<std::string>& party_names);

SlantResult slant_index(const SlantInputs& in);

/// token,entity,t,count rows for outlets and token,entity,count (t optional, summed) for parties;
/// party,score for scores. The vocabulary is the union of tokens seen in either file.
SlantInputs load_slant_inputs(const std::string& outlet_path, const std::string& party_path,
                              const std::string& scores_path);
void write_slant(const SlantResult& r, const SlantInputs& in, const std::string& path);

}  // namespace msls
