#pragma once

#include "stumpcover/dataset.hpp"
#include "stumpcover/learners.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace stumpcover {

/// Parameter grid for nested cross-validation. A nonpositive penalty entry is
/// the "p = m" surrogate, resolved against the training-set size at each
/// training call. Gamma entries are fractions of each attribute range.
struct ParamGrid {
  std::vector<double> penalties{1.0};
  std::vector<double> etas{0.0};
  std::vector<double> gammas{0.0};  // used by the fixed-margin learner only
  std::vector<Index> v_values{10};

  bool empty() const {
    return penalties.empty() || etas.empty() || gammas.empty() || v_values.empty();
  }
};

ParamGrid default_grid(LearnerKind kind);

/// Resolve the p = m surrogate for a concrete training-set size.
double resolve_penalty(double grid_value, Index train_m);

struct CVPlan {
  int outer_folds = 5;
  int inner_folds = 5;
  int permutations = 20;
  std::uint64_t seed = 0;
  double delta = 0.05;
  SizePrior prior = SizePrior::quadratic();
  ParamGrid grid;
};

/// Partition of [0, m) into k index sets with per-class counts within one of
/// each other across folds. Deterministic per seed.
std::vector<std::vector<Index>> stratified_kfold(Index m, const Labels& y, int k,
                                                 std::uint64_t seed);

struct FoldRecord {
  int permutation = 0;
  int fold = 0;
  // chosen grid point
  double penalty = 0.0;
  double eta = 0.0;
  double gamma = 0.0;
  Index v = 0;
  // outcomes
  Index train_size = 0;
  Index test_size = 0;
  Index train_errors = 0;
  Index test_errors = 0;
  Index model_size = 0;
  double gibbs_train_risk = 0.0;   // soft kinds only
  double gibbs_test_errors = 0.0;  // expected error count on the test fold
  Index bayes_test_errors = 0;
  double bound = 1.0;
  double mean_ratio = 0.0;
  double total_bits = 0.0;  // occam
  std::vector<Index> attributes;  // the fold model's attribute set, ascending
  bool failed = false;
  std::string message;
};

struct CVAggregates {
  double mean_errors = 0.0, std_errors = 0.0;    // per-permutation error counts
  double mean_size = 0.0, std_size = 0.0;        // per-fold model size
  double mean_gibbs_errors = 0.0, std_gibbs_errors = 0.0;
  double mean_bayes_errors = 0.0, std_bayes_errors = 0.0;
  double mean_bound = 0.0;
  double mean_ratio = 0.0;
  double mean_bits = 0.0;
  // most frequently selected attribute set across fold models (ties resolved
  // toward the lexicographically smallest set)
  std::vector<Index> modal_attributes;
  int warning_count = 0;
};

struct CVResult {
  LearnerKind kind = LearnerKind::Sc;
  Index m = 0;
  Index n = 0;
  std::vector<FoldRecord> records;
  CVAggregates aggregates;
};

/// Aggregates recomputed from the per-fold records; the stored aggregates
/// always equal this.
CVAggregates compute_aggregates(const std::vector<FoldRecord>& records, int permutations);

/// The experiment protocol: per permutation, an outer stratified k-fold; per
/// outer fold, an inner k-fold over the outer-training set alone selects the
/// grid point with minimal mean inner error (ties: smaller model, then first
/// grid order); a model trained on the outer-training set with that point is
/// scored on the outer test fold. Ranges are inferred from training splits
/// only.
CVResult nested_cv(const Dataset& ds, LearnerKind kind, Target target, const CVPlan& plan);

/// Delimited summary table (Name ex Genes Errs S [bits] [G-errs B-errs Ratio
/// Bound]) followed by one `fold` key=value line per record.
std::string render_cv_table(const std::string& name, const CVResult& result);

}  // namespace stumpcover
