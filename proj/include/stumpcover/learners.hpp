#pragma once

#include "stumpcover/bounds.hpp"
#include "stumpcover/stumps.hpp"
#include "stumpcover/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace stumpcover {

enum class LearnerKind { Sc, Occam, PacBayes, PacBayesFixed };
enum class Target { Conjunction, Disjunction };

std::string to_string(LearnerKind kind);
std::string to_string(Target target);
LearnerKind learner_kind_from_string(const std::string& s);
Target target_from_string(const std::string& s);

struct LearnerParams {
  double penalty = 1.0;      // p: cost of covering (erring on) a positive example
  double eta = 0.0;          // bit cost (Occam) or margin cost (PAC-Bayes)
  Index v_max = 10;          // stump cap
  double gamma = 0.0;        // fixed-margin half-width
  bool gamma_fraction = false;  // interpret gamma as a fraction of each attribute range
  SizePrior prior = SizePrior::quadratic();
};

/// Dyadic threshold code: the set Lambda_l holds the 2^l values
/// (1 - (2j-1)/2^{l+1}) A + ((2j-1)/2^{l+1}) B for j = 1..2^l.
struct DyadicCode {
  int bits = 0;        // smallest l with Lambda_l intersecting [a, b]
  Index index = 1;     // 1-based j of the chosen element (smallest on ties)
  double threshold = 0.0;
};

/// Requires A <= a < b <= B and A < B. The returned l never exceeds
/// floor(log2((B-A)/(b-a))).
DyadicCode dyadic_code(double A, double B, double a, double b);

/// Conjunction whose thresholds sit on training-example values; stump j is
/// reconstructible from its anchor example and (attribute, direction).
struct CompressionModel {
  StumpConjunction conjunction;
  std::vector<Index> anchors;  // per stump, aligned with conjunction.stumps

  /// sorted example indices (the compression set)
  std::vector<Index> compression_indices() const;
};

/// Rebuild the classifier from the compression examples and the message
/// (attributes and directions): threshold j = anchor row's value at
/// attribute j.
StumpConjunction reconstruct_from_compression(const Eigen::Ref<const Matrix>& compression_rows,
                                              const std::vector<Index>& attributes,
                                              const std::vector<int>& directions);

/// Conjunction with dyadically coded thresholds.
struct OccamModel {
  StumpConjunction conjunction;
  std::vector<int> bit_lengths;                   // l_i per stump
  std::vector<Index> code_indices;                // j into Lambda_{l_i}
  std::vector<std::pair<double, double>> gaps;    // the equally-good interval per stump
};

/// Hard greedy with utility |Q_i| - p |R_i| over stumps anchored at negative
/// example values; emits the compression set alongside the conjunction.
CompressionModel greedy_sc_learn(const Eigen::Ref<const Matrix>& X, const Labels& y,
                                 const Ranges& ranges, const LearnerParams& params,
                                 std::vector<std::string>* warnings = nullptr,
                                 std::vector<Index>* selection_order = nullptr);

/// Hard greedy with utility |Q_i|/|N'| - p |R_i|/|P| - eta l_i; candidate
/// intervals are the maximal gaps between consecutive sorted attribute
/// values, coded dyadically.
OccamModel occam_learn(const Eigen::Ref<const Matrix>& X, const Labels& y, const Ranges& ranges,
                       const LearnerParams& params, std::vector<std::string>* warnings = nullptr,
                       std::vector<Index>* selection_order = nullptr);

/// Soft greedy over margin intervals with utility
/// C_i/N - p E_i/|P| - eta ln((B_i-A_i)/(b_i-a_i)).
GibbsConjunction pacbayes_learn(const Eigen::Ref<const Matrix>& X, const Labels& y,
                                const Ranges& ranges, const LearnerParams& params,
                                std::vector<std::string>* warnings = nullptr,
                                std::vector<Index>* selection_order = nullptr);

/// Same soft greedy, but every candidate interval is [c - gamma, c + gamma]
/// clipped to the attribute range, centered on example values.
GibbsConjunction fixed_margin_learn(const Eigen::Ref<const Matrix>& X, const Labels& y,
                                    const Ranges& ranges, const LearnerParams& params,
                                    std::vector<std::string>* warnings = nullptr,
                                    std::vector<Index>* selection_order = nullptr);

/// Occam selection score for one candidate; exposed for direct checks.
double occam_utility(Index covered_negatives, Index remaining_negatives, double penalty,
                     Index erred_positives, Index total_positives, double eta, int bits);

double interval_ratio(const IntervalStump& s, const Ranges& ranges);

/// A trained model of any kind, with its learner metadata and the
/// conjunction/disjunction flag baked into prediction.
struct LearnedModel {
  LearnerKind kind = LearnerKind::Sc;
  Target target = Target::Conjunction;
  Index n = 0;  // attribute count the model was trained for

  StumpConjunction conjunction;  // sc / occam
  GibbsConjunction gibbs;        // pacbayes / pacbayes-fixed

  std::vector<int> bit_lengths;                 // occam
  std::vector<Index> code_indices;              // occam
  std::vector<std::pair<double, double>> gaps;  // occam
  std::vector<Index> anchors;                   // sc
  std::vector<double> ratios;                   // pacbayes / pacbayes-fixed

  LearnerParams params;
  std::vector<std::string> label_names;

  Index size() const;

  /// Native prediction: conjunction output for hard kinds, Bayes vote for
  /// pacbayes, midpoint conjunction for the fixed-margin heuristic; the
  /// output is complemented for disjunction targets.
  template <typename Row>
  int predict_row(const Row& x) const {
    int out;
    switch (kind) {
      case LearnerKind::PacBayes:
        out = gibbs.bayes_predict_row(x);
        break;
      case LearnerKind::PacBayesFixed:
        out = gibbs.midpoint_conjunction().predict_row(x);
        break;
      default:
        out = conjunction.predict_row(x);
    }
    return target == Target::Disjunction ? 1 - out : out;
  }

  int predict(const Eigen::Ref<const Vector>& x) const { return predict_row(x); }

  Index errors_on(const Eigen::Ref<const Matrix>& X, const Labels& y) const;

  /// Gibbs risk of the underlying stochastic conjunction against the labels
  /// this model is trained to match (complemented for disjunctions).
  double gibbs_risk_on(const Eigen::Ref<const Matrix>& X, const Labels& y) const;

  /// Expected number of errors of the Gibbs classifier on (X, y).
  double gibbs_errors_on(const Eigen::Ref<const Matrix>& X, const Labels& y) const;

  /// The regime's risk bound computed on the given training set.
  BoundReport bound_on_train(const Eigen::Ref<const Matrix>& X, const Labels& y,
                             double delta) const;
};

/// Dispatch on kind and target; disjunctions are learned on complemented
/// labels, per-kind metadata is collected into the model.
LearnedModel train_model(const Eigen::Ref<const Matrix>& X, const Labels& y, const Ranges& ranges,
                         LearnerKind kind, Target target, const LearnerParams& params,
                         std::vector<std::string>* warnings = nullptr);

}  // namespace stumpcover
