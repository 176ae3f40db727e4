#include "stumpcover/modelsel.hpp"

#include "stumpcover/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace stumpcover {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Matrix rows_of(const Eigen::Ref<const Matrix>& X, const std::vector<Index>& idx) {
  Matrix out(static_cast<Index>(idx.size()), X.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Index>(i)) = X.row(idx[i]);
  return out;
}

Labels labels_of(const Labels& y, const std::vector<Index>& idx) {
  Labels out(static_cast<Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out[static_cast<Index>(i)] = y[idx[i]];
  return out;
}

std::vector<Index> complement_of(Index m, const std::vector<Index>& idx) {
  std::vector<char> in(static_cast<std::size_t>(m), 0);
  for (Index i : idx) in[static_cast<std::size_t>(i)] = 1;
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(m) - idx.size());
  for (Index i = 0; i < m; ++i)
    if (!in[static_cast<std::size_t>(i)]) out.push_back(i);
  return out;
}

// Greedy prefixes: the model truncated to the first v selected stumps, which
// equals the model the learner would have produced with v_max = v.
template <typename ModelT>
ModelT prefix_of(const ModelT& model, const std::vector<Index>& selection_order, Index v) {
  ModelT out;
  const std::set<Index> keep(selection_order.begin(),
                             selection_order.begin() +
                                 std::min<std::size_t>(selection_order.size(),
                                                       static_cast<std::size_t>(v)));
  for (const auto& s : model.stumps)
    if (keep.count(s.attribute)) out.stumps.push_back(s);
  return out;
}

struct TrainedOnce {
  StumpConjunction conjunction;
  GibbsConjunction gibbs;
  std::vector<Index> selection_order;
  bool failed = false;
};

TrainedOnce train_raw(const Eigen::Ref<const Matrix>& X, const Labels& y, const Ranges& ranges,
                      LearnerKind kind, const LearnerParams& params) {
  TrainedOnce t;
  try {
    switch (kind) {
      case LearnerKind::Sc:
        t.conjunction = greedy_sc_learn(X, y, ranges, params, nullptr, &t.selection_order)
                            .conjunction;
        break;
      case LearnerKind::Occam:
        t.conjunction = occam_learn(X, y, ranges, params, nullptr, &t.selection_order).conjunction;
        break;
      case LearnerKind::PacBayes:
        t.gibbs = pacbayes_learn(X, y, ranges, params, nullptr, &t.selection_order);
        break;
      case LearnerKind::PacBayesFixed:
        t.gibbs = fixed_margin_learn(X, y, ranges, params, nullptr, &t.selection_order);
        break;
    }
  } catch (const std::exception&) {
    t.failed = true;
  }
  return t;
}

Index prefix_errors(LearnerKind kind, Target target, const TrainedOnce& t, Index v,
                    const Eigen::Ref<const Matrix>& X, const Labels& y) {
  const bool soft = kind == LearnerKind::PacBayes || kind == LearnerKind::PacBayesFixed;
  Index errors = 0;
  if (soft) {
    GibbsConjunction g = prefix_of(t.gibbs, t.selection_order, v);
    const StumpConjunction mid =
        kind == LearnerKind::PacBayesFixed ? g.midpoint_conjunction() : StumpConjunction{};
    for (Index i = 0; i < X.rows(); ++i) {
      int out = kind == LearnerKind::PacBayes ? g.bayes_predict_row(X.row(i))
                                              : mid.predict_row(X.row(i));
      if (target == Target::Disjunction) out = 1 - out;
      if (out != y[i]) ++errors;
    }
  } else {
    StumpConjunction c = prefix_of(t.conjunction, t.selection_order, v);
    for (Index i = 0; i < X.rows(); ++i) {
      int out = c.predict_row(X.row(i));
      if (target == Target::Disjunction) out = 1 - out;
      if (out != y[i]) ++errors;
    }
  }
  return errors;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mu = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - mu) * (x - mu);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

ParamGrid default_grid(LearnerKind kind) {
  ParamGrid g;
  g.penalties = {0.5, 1.0, 2.0, 4.0, -1.0};  // -1 is the p = m surrogate
  g.v_values = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  switch (kind) {
    case LearnerKind::Sc:
      g.etas = {0.0};
      g.gammas = {0.0};
      break;
    case LearnerKind::Occam:
    case LearnerKind::PacBayes:
      g.etas = {0.0, 0.01, 0.1, 0.5, 1.0};
      g.gammas = {0.0};
      break;
    case LearnerKind::PacBayesFixed:
      g.etas = {0.0};
      g.gammas = {0.05, 0.1, 0.2, 0.4};  // fractions of each attribute range
      break;
  }
  return g;
}

double resolve_penalty(double grid_value, Index train_m) {
  return grid_value > 0.0 ? grid_value : static_cast<double>(train_m);
}

std::vector<std::vector<Index>> stratified_kfold(Index m, const Labels& y, int k,
                                                 std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("stratified_kfold: k < 1");
  if (static_cast<Index>(k) > m) throw std::invalid_argument("stratified_kfold: k > m");
  if (y.size() != m) throw std::invalid_argument("stratified_kfold: label count mismatch");
  std::vector<std::vector<Index>> folds(static_cast<std::size_t>(k));
  for (int label = 0; label <= 1; ++label) {
    std::vector<Index> members;
    for (Index i = 0; i < m; ++i)
      if (y[i] == label) members.push_back(i);
    Rng rng(mix_seed(seed, 0x5f01dULL, static_cast<std::uint64_t>(label)));
    rng.shuffle(members);
    for (std::size_t i = 0; i < members.size(); ++i)
      folds[i % static_cast<std::size_t>(k)].push_back(members[i]);
  }
  for (auto& fold : folds) std::sort(fold.begin(), fold.end());
  return folds;
}

CVAggregates compute_aggregates(const std::vector<FoldRecord>& records, int permutations) {
  CVAggregates agg;
  std::vector<double> perm_errors(static_cast<std::size_t>(permutations), 0.0);
  std::vector<double> perm_gibbs(static_cast<std::size_t>(permutations), 0.0);
  std::vector<double> perm_bayes(static_cast<std::size_t>(permutations), 0.0);
  std::vector<std::vector<double>> perm_sizes(static_cast<std::size_t>(permutations));
  std::vector<double> bounds, ratios, bits;
  for (const auto& rec : records) {
    if (rec.failed) {
      ++agg.warning_count;
      continue;
    }
    auto p = static_cast<std::size_t>(rec.permutation);
    perm_errors[p] += static_cast<double>(rec.test_errors);
    perm_gibbs[p] += rec.gibbs_test_errors;
    perm_bayes[p] += static_cast<double>(rec.bayes_test_errors);
    perm_sizes[p].push_back(static_cast<double>(rec.model_size));
    bounds.push_back(rec.bound);
    ratios.push_back(rec.mean_ratio);
    bits.push_back(rec.total_bits);
  }
  std::map<std::vector<Index>, int> attribute_sets;
  for (const auto& rec : records)
    if (!rec.failed) ++attribute_sets[rec.attributes];
  int best_count = 0;
  for (const auto& [attrs, count] : attribute_sets) {
    if (count > best_count) {
      best_count = count;
      agg.modal_attributes = attrs;
    }
  }
  std::vector<double> size_means;
  for (const auto& s : perm_sizes) size_means.push_back(mean_of(s));
  agg.mean_errors = mean_of(perm_errors);
  agg.std_errors = sample_std(perm_errors);
  agg.mean_size = mean_of(size_means);
  agg.std_size = sample_std(size_means);
  agg.mean_gibbs_errors = mean_of(perm_gibbs);
  agg.std_gibbs_errors = sample_std(perm_gibbs);
  agg.mean_bayes_errors = mean_of(perm_bayes);
  agg.std_bayes_errors = sample_std(perm_bayes);
  agg.mean_bound = mean_of(bounds);
  agg.mean_ratio = mean_of(ratios);
  agg.mean_bits = mean_of(bits);
  return agg;
}

CVResult nested_cv(const Dataset& ds, LearnerKind kind, Target target, const CVPlan& plan) {
  if (!ds.labeled()) throw std::invalid_argument("nested_cv: dataset has no labels");
  if (plan.grid.empty()) throw std::invalid_argument("nested_cv: empty parameter grid");
  if (plan.outer_folds < 2 || plan.inner_folds < 2)
    throw std::invalid_argument("nested_cv: folds must be >= 2");
  if (plan.permutations < 1) throw std::invalid_argument("nested_cv: permutations must be >= 1");

  const Index m = ds.m();
  const ParamGrid& grid = plan.grid;
  const Index max_v = *std::max_element(grid.v_values.begin(), grid.v_values.end());

  CVResult result;
  result.kind = kind;
  result.m = m;
  result.n = ds.n();

  for (int perm = 0; perm < plan.permutations; ++perm) {
    const auto outer =
        stratified_kfold(m, ds.y, plan.outer_folds, mix_seed(plan.seed, 1, static_cast<std::uint64_t>(perm)));
    for (int fold = 0; fold < plan.outer_folds; ++fold) {
      FoldRecord rec;
      rec.permutation = perm;
      rec.fold = fold;
      const std::vector<Index>& test_idx = outer[static_cast<std::size_t>(fold)];
      const std::vector<Index> train_idx = complement_of(m, test_idx);
      const Matrix Xtr = rows_of(ds.X, train_idx);
      const Labels ytr = labels_of(ds.y, train_idx);
      const Matrix Xte = rows_of(ds.X, test_idx);
      const Labels yte = labels_of(ds.y, test_idx);
      rec.train_size = Xtr.rows();
      rec.test_size = Xte.rows();

      // inner CV over the outer-training set alone
      const auto inner = stratified_kfold(
          Xtr.rows(), ytr, plan.inner_folds,
          mix_seed(mix_seed(plan.seed, 2, static_cast<std::uint64_t>(perm)), 3,
                   static_cast<std::uint64_t>(fold)));

      struct ComboScore {
        double error_rate = kInf;
        double mean_size = kInf;
        long order = -1;
        double penalty = 0, eta = 0, gamma = 0;
        Index v = 0;
      };
      ComboScore best;
      long order = 0;
      const std::size_t n_v = grid.v_values.size();
      for (double pval : grid.penalties) {
        for (double eta : grid.etas) {
          for (double gamma : grid.gammas) {
            std::vector<double> err_sum(n_v, 0.0), size_sum(n_v, 0.0);
            std::vector<Index> test_total(n_v, 0);
            bool combo_failed = false;
            for (int g = 0; g < plan.inner_folds && !combo_failed; ++g) {
              const std::vector<Index>& in_test = inner[static_cast<std::size_t>(g)];
              const std::vector<Index> in_train = complement_of(Xtr.rows(), in_test);
              const Matrix Xin = rows_of(Xtr, in_train);
              Labels yin = labels_of(ytr, in_train);
              const Matrix Xinte = rows_of(Xtr, in_test);
              const Labels yinte = labels_of(ytr, in_test);
              if (target == Target::Disjunction) yin = complement_labels(yin);
              LearnerParams lp;
              lp.penalty = resolve_penalty(pval, Xin.rows());
              lp.eta = eta;
              lp.gamma = gamma;
              lp.gamma_fraction = true;
              lp.v_max = max_v;
              lp.prior = plan.prior;
              const Ranges ranges_in = infer_ranges(Xin);
              const TrainedOnce t = train_raw(Xin, yin, ranges_in, kind, lp);
              if (t.failed) {
                combo_failed = true;
                break;
              }
              for (std::size_t vi = 0; vi < n_v; ++vi) {
                const Index v = grid.v_values[vi];
                err_sum[vi] += static_cast<double>(
                    prefix_errors(kind, target, t, v, Xinte, yinte));
                size_sum[vi] += static_cast<double>(
                    std::min<std::size_t>(t.selection_order.size(), static_cast<std::size_t>(v)));
                test_total[vi] += Xinte.rows();
              }
            }
            for (std::size_t vi = 0; vi < n_v; ++vi, ++order) {
              if (combo_failed) continue;
              const double rate = err_sum[vi] / static_cast<double>(test_total[vi]);
              const double msize = size_sum[vi] / static_cast<double>(plan.inner_folds);
              const bool better = rate < best.error_rate ||
                                  (rate == best.error_rate && msize < best.mean_size);
              if (better)
                best = {rate, msize, order, pval, eta, gamma, grid.v_values[vi]};
            }
          }
        }
      }

      if (best.order < 0) {
        rec.failed = true;
        rec.message = "all grid points failed in inner cross-validation";
        result.records.push_back(rec);
        continue;
      }

      rec.penalty = resolve_penalty(best.penalty, Xtr.rows());
      rec.eta = best.eta;
      rec.gamma = best.gamma;
      rec.v = best.v;

      LearnerParams lp;
      lp.penalty = rec.penalty;
      lp.eta = rec.eta;
      lp.gamma = rec.gamma;
      lp.gamma_fraction = true;
      lp.v_max = rec.v;
      lp.prior = plan.prior;
      try {
        const Ranges ranges_tr = infer_ranges(Xtr);
        const LearnedModel model = train_model(Xtr, ytr, ranges_tr, kind, target, lp);
        rec.model_size = model.size();
        const bool soft =
            kind == LearnerKind::PacBayes || kind == LearnerKind::PacBayesFixed;
        if (soft)
          for (const auto& s : model.gibbs.stumps) rec.attributes.push_back(s.attribute);
        else
          for (const auto& s : model.conjunction.stumps) rec.attributes.push_back(s.attribute);
        rec.train_errors = model.errors_on(Xtr, ytr);
        rec.test_errors = model.errors_on(Xte, yte);
        if (soft) {
          rec.gibbs_train_risk = model.gibbs_risk_on(Xtr, ytr);
          rec.gibbs_test_errors = model.gibbs_errors_on(Xte, yte);
          Index bayes_errors = 0;
          for (Index i = 0; i < Xte.rows(); ++i) {
            int out = model.gibbs.bayes_predict_row(Xte.row(i));
            if (target == Target::Disjunction) out = 1 - out;
            if (out != yte[i]) ++bayes_errors;
          }
          rec.bayes_test_errors = bayes_errors;
          double rsum = 0.0;
          for (double r : model.ratios) rsum += r;
          rec.mean_ratio = model.ratios.empty() ? 1.0 : rsum / static_cast<double>(model.ratios.size());
        } else {
          rec.gibbs_test_errors = static_cast<double>(rec.test_errors);
          rec.bayes_test_errors = rec.test_errors;
          rec.mean_ratio = 1.0;
        }
        for (int b : model.bit_lengths) rec.total_bits += b;
        rec.bound = model.bound_on_train(Xtr, ytr, plan.delta).bound;
      } catch (const std::exception& e) {
        rec.failed = true;
        rec.message = e.what();
      }
      result.records.push_back(rec);
    }
  }

  result.aggregates = compute_aggregates(result.records, plan.permutations);
  return result;
}

std::string render_cv_table(const std::string& name, const CVResult& result) {
  const bool soft = result.kind == LearnerKind::PacBayes || result.kind == LearnerKind::PacBayesFixed;
  const bool occam = result.kind == LearnerKind::Occam;
  std::ostringstream out;
  out << "Name\tex\tGenes\tErrs\tS";
  if (occam) out << "\tbits";
  if (soft) out << "\tG-errs\tB-errs\tRatio\tBound";
  out << '\n';
  const auto& a = result.aggregates;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s\t%lld\t%lld\t%.2f±%.2f\t%.2f±%.2f", name.c_str(),
                static_cast<long long>(result.m), static_cast<long long>(result.n), a.mean_errors,
                a.std_errors, a.mean_size, a.std_size);
  out << buf;
  if (occam) {
    std::snprintf(buf, sizeof buf, "\t%.2f", a.mean_bits);
    out << buf;
  }
  if (soft) {
    std::snprintf(buf, sizeof buf, "\t%.2f±%.2f\t%.2f±%.2f\t%.3g\t%.2f", a.mean_gibbs_errors,
                  a.std_gibbs_errors, a.mean_bayes_errors, a.std_bayes_errors, a.mean_ratio,
                  a.mean_bound * static_cast<double>(result.m));
    out << buf;
  }
  out << '\n';
  out << "modal_size=" << a.modal_attributes.size() << '\n';
  out << "modal_attributes=";
  for (std::size_t i = 0; i < a.modal_attributes.size(); ++i)
    out << (i ? "," : "") << a.modal_attributes[i];
  out << '\n';
  if (a.warning_count > 0) out << "warnings=" << a.warning_count << '\n';
  for (const auto& rec : result.records) {
    out << "fold perm=" << rec.permutation << " fold=" << rec.fold
        << " penalty=" << format_real17(rec.penalty) << " eta=" << format_real17(rec.eta)
        << " gamma=" << format_real17(rec.gamma) << " v=" << rec.v
        << " train_size=" << rec.train_size << " test_size=" << rec.test_size
        << " train_errors=" << rec.train_errors << " test_errors=" << rec.test_errors
        << " model_size=" << rec.model_size;
    if (soft) {
      out << " gibbs_train_risk=" << format_real17(rec.gibbs_train_risk)
          << " gibbs_test_errors=" << format_real17(rec.gibbs_test_errors)
          << " bayes_test_errors=" << rec.bayes_test_errors
          << " mean_ratio=" << format_real17(rec.mean_ratio);
    }
    if (occam) out << " bits=" << format_real17(rec.total_bits);
    out << " bound=" << format_real17(rec.bound);
    if (rec.failed) out << " failed=1 message=" << rec.message;
    out << '\n';
  }
  return out.str();
}

}  // namespace stumpcover
