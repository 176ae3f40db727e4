#include "stumpcover/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <set>

namespace stumpcover {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSoftMassFloor = 1e-9;

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

void warn(std::vector<std::string>* warnings, const std::string& msg) {
  if (warnings) warnings->push_back(msg);
}

// Deterministic preference among equal-utility candidates: lowest attribute,
// then direction +1, then smallest threshold (smallest a, then b for soft
// intervals).
bool improves(double u, Index k, int d, double a, double b, double bu, Index bk, int bd,
              double ba, double bb) {
  if (u != bu) return u > bu;
  if (k != bk) return k < bk;
  if (d != bd) return d > bd;
  if (a != ba) return a < ba;
  return b < bb;
}

std::vector<std::vector<Index>> sort_columns(const Eigen::Ref<const Matrix>& X) {
  std::vector<std::vector<Index>> order(static_cast<std::size_t>(X.cols()));
  for (Index k = 0; k < X.cols(); ++k) {
    auto& ord = order[static_cast<std::size_t>(k)];
    ord.resize(static_cast<std::size_t>(X.rows()));
    std::iota(ord.begin(), ord.end(), Index{0});
    std::sort(ord.begin(), ord.end(), [&](Index i, Index j) {
      return X(i, k) != X(j, k) ? X(i, k) < X(j, k) : i < j;
    });
  }
  return order;
}

struct Group {
  double value = 0.0;
  Index neg = 0;
  Index pos = 0;
  Index min_neg = -1;  // smallest negative example index holding this value
};

void build_groups(const Eigen::Ref<const Matrix>& X, const Labels& y,
                  const std::vector<Index>& order_k, const std::vector<char>& active,
                  Index attribute, std::vector<Group>& out) {
  out.clear();
  for (Index idx : order_k) {
    if (!active[static_cast<std::size_t>(idx)]) continue;
    const double v = X(idx, attribute);
    if (out.empty() || out.back().value != v) out.push_back({v, 0, 0, -1});
    Group& g = out.back();
    if (y[idx] == 1) {
      ++g.pos;
    } else {
      ++g.neg;
      if (g.min_neg < 0) g.min_neg = idx;
    }
  }
}

std::optional<DyadicCode> try_dyadic_code(double A, double B, double a, double b) {
  const double span = B - A;
  const double alpha = (a - A) / span;
  for (int l = 0; l <= 62; ++l) {
    const double denom = std::ldexp(1.0, l + 1);
    const double jmax = std::ldexp(1.0, l);
    double jr = std::ceil((alpha * denom + 1.0) / 2.0);
    jr = std::min(std::max(jr, 1.0), jmax);
    const Index j = static_cast<Index>(jr);
    for (Index jj = std::max<Index>(1, j - 1); jj <= j + 1; ++jj) {
      if (static_cast<double>(jj) > jmax) break;
      const double c = (2.0 * static_cast<double>(jj) - 1.0) / denom;
      const double t = (1.0 - c) * A + c * B;
      if (t >= a && t <= b) return DyadicCode{l, jj, t};
    }
  }
  return std::nullopt;
}

// Per-attribute view of the still-active weighted examples, aggregated by
// distinct value with prefix sums of the negative/positive soft masses.
struct SoftColumn {
  std::vector<double> u;                   // distinct values, ascending
  std::vector<double> nw, nwx, pw, pwx;    // prefix sums, size q+1

  Index q() const { return static_cast<Index>(u.size()); }
};

void build_soft_column(const Eigen::Ref<const Matrix>& X, const Labels& y,
                       const std::vector<Index>& order_k, const std::vector<char>& active,
                       const Array& w, Index attribute, SoftColumn& col) {
  col.u.clear();
  col.nw.assign(1, 0.0);
  col.nwx.assign(1, 0.0);
  col.pw.assign(1, 0.0);
  col.pwx.assign(1, 0.0);
  for (Index idx : order_k) {
    if (!active[static_cast<std::size_t>(idx)]) continue;
    const double v = X(idx, attribute);
    if (col.u.empty() || col.u.back() != v) {
      col.u.push_back(v);
      col.nw.push_back(col.nw.back());
      col.nwx.push_back(col.nwx.back());
      col.pw.push_back(col.pw.back());
      col.pwx.push_back(col.pwx.back());
    }
    const double weight = w[idx];
    if (y[idx] == 1) {
      col.pw.back() += weight;
      col.pwx.back() += weight * v;
    } else {
      col.nw.back() += weight;
      col.nwx.back() += weight * v;
    }
  }
}

// Soft covering contribution C and positive-side error contribution E of the
// candidate interval [a, b]; groups lo..hi are the values inside [a, b].
struct SoftScore {
  double covering = 0.0;
  double error = 0.0;
};

SoftScore soft_score(const SoftColumn& col, double a, double b, Index lo, Index hi, int d) {
  const Index q = col.q();
  const double width = b - a;
  const double in_nw = col.nw[hi + 1] - col.nw[lo];
  const double in_nwx = col.nwx[hi + 1] - col.nwx[lo];
  const double in_pw = col.pw[hi + 1] - col.pw[lo];
  const double in_pwx = col.pwx[hi + 1] - col.pwx[lo];
  SoftScore s;
  if (d > 0) {
    s.covering = col.nw[lo] + (b * in_nw - in_nwx) / width;
    s.error = col.pw[lo] + (b * in_pw - in_pwx) / width;
  } else {
    s.covering = (col.nw[q] - col.nw[hi + 1]) + (in_nwx - a * in_nw) / width;
    s.error = (col.pw[q] - col.pw[hi + 1]) + (in_pwx - a * in_pw) / width;
  }
  s.covering = std::max(0.0, s.covering);
  s.error = std::max(0.0, s.error);
  return s;
}

struct SoftBest {
  double utility = -kInf;
  Index attribute = -1;
  int direction = +1;
  double a = 0.0, b = 0.0;
  bool valid() const { return attribute >= 0; }
};

}  // namespace

std::string to_string(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::Sc: return "sc";
    case LearnerKind::Occam: return "occam";
    case LearnerKind::PacBayes: return "pacbayes";
    case LearnerKind::PacBayesFixed: return "pacbayes-fixed";
  }
  return "?";
}

std::string to_string(Target target) {
  return target == Target::Conjunction ? "conjunction" : "disjunction";
}

LearnerKind learner_kind_from_string(const std::string& s) {
  if (s == "sc") return LearnerKind::Sc;
  if (s == "occam") return LearnerKind::Occam;
  if (s == "pacbayes") return LearnerKind::PacBayes;
  if (s == "pacbayes-fixed") return LearnerKind::PacBayesFixed;
  throw std::invalid_argument("unknown learner kind '" + s + "'");
}

Target target_from_string(const std::string& s) {
  if (s == "conjunction") return Target::Conjunction;
  if (s == "disjunction") return Target::Disjunction;
  throw std::invalid_argument("unknown target '" + s + "'");
}

DyadicCode dyadic_code(double A, double B, double a, double b) {
  if (!(a < b)) throw std::invalid_argument("dyadic_code: a >= b");
  if (!(A <= a && b <= B && A < B))
    throw std::invalid_argument("dyadic_code: need A <= a < b <= B with A < B");
  auto code = try_dyadic_code(A, B, a, b);
  if (!code) throw std::runtime_error("dyadic_code: interval narrower than 2^-62 of the range");
  return *code;
}

double occam_utility(Index covered_negatives, Index remaining_negatives, double penalty,
                     Index erred_positives, Index total_positives, double eta, int bits) {
  double u = static_cast<double>(covered_negatives) / static_cast<double>(remaining_negatives);
  if (total_positives > 0)
    u -= penalty * static_cast<double>(erred_positives) / static_cast<double>(total_positives);
  return u - eta * static_cast<double>(bits);
}

std::vector<Index> CompressionModel::compression_indices() const {
  std::vector<Index> idx = anchors;
  std::sort(idx.begin(), idx.end());
  return idx;
}

StumpConjunction reconstruct_from_compression(const Eigen::Ref<const Matrix>& compression_rows,
                                              const std::vector<Index>& attributes,
                                              const std::vector<int>& directions) {
  if (attributes.size() != directions.size() ||
      static_cast<Index>(attributes.size()) != compression_rows.rows())
    throw std::invalid_argument("reconstruct_from_compression: one row per stump required");
  StumpConjunction c;
  for (std::size_t j = 0; j < attributes.size(); ++j)
    c.stumps.push_back({attributes[j], directions[j],
                        compression_rows(static_cast<Index>(j), attributes[j])});
  std::sort(c.stumps.begin(), c.stumps.end(),
            [](const DecisionStump& x, const DecisionStump& y) { return x.attribute < y.attribute; });
  return c;
}

CompressionModel greedy_sc_learn(const Eigen::Ref<const Matrix>& X, const Labels& y,
                                 const Ranges& ranges, const LearnerParams& params,
                                 std::vector<std::string>* warnings,
                                 std::vector<Index>* selection_order) {
  const Index m = X.rows();
  const Index n = X.cols();
  if (y.size() != m) throw std::invalid_argument("greedy_sc_learn: label count mismatch");
  CompressionModel model;
  Index negatives = m - y.sum();
  if (negatives == 0) {
    warn(warnings, "no negative examples; returning the empty conjunction");
    return model;
  }

  const auto order = sort_columns(X);
  std::vector<char> active(static_cast<std::size_t>(m), 1);
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  std::vector<Group> groups;

  struct Best {
    double utility = -kInf;
    Index attribute = -1;
    int direction = +1;
    double threshold = 0.0;
    Index anchor = -1;
    bool valid() const { return attribute >= 0; }
  };

  while (negatives > 0 && model.conjunction.size() < params.v_max) {
    Best best;
    for (Index k = 0; k < n; ++k) {
      if (used[static_cast<std::size_t>(k)] || ranges.degenerate(k)) continue;
      build_groups(X, y, order[static_cast<std::size_t>(k)], active, k, groups);
      // direction +1 covers x <= t; anchors at negative example values
      Index cn = 0, cp = 0;
      for (const Group& g : groups) {
        cn += g.neg;
        cp += g.pos;
        if (g.neg == 0) continue;
        const double u = static_cast<double>(cn) - params.penalty * static_cast<double>(cp);
        if (improves(u, k, +1, g.value, 0.0, best.utility, best.attribute, best.direction,
                     best.threshold, 0.0))
          best = {u, k, +1, g.value, g.min_neg};
      }
      // direction -1 covers x >= t
      cn = cp = 0;
      for (auto it = groups.rbegin(); it != groups.rend(); ++it) {
        cn += it->neg;
        cp += it->pos;
        if (it->neg == 0) continue;
        const double u = static_cast<double>(cn) - params.penalty * static_cast<double>(cp);
        if (improves(u, k, -1, it->value, 0.0, best.utility, best.attribute, best.direction,
                     best.threshold, 0.0))
          best = {u, k, -1, it->value, it->min_neg};
      }
    }
    if (!best.valid() || best.utility <= 0.0) break;

    const DecisionStump stump{best.attribute, best.direction, best.threshold};
    model.conjunction.stumps.push_back(stump);
    model.anchors.push_back(best.anchor);
    if (selection_order) selection_order->push_back(best.attribute);
    used[static_cast<std::size_t>(best.attribute)] = 1;
    for (Index i = 0; i < m; ++i) {
      if (!active[static_cast<std::size_t>(i)]) continue;
      if (stump.predict(X(i, best.attribute)) == 0) {
        active[static_cast<std::size_t>(i)] = 0;
        if (y[i] == 0) --negatives;
      }
    }
  }

  // sort stumps by attribute, keeping anchors aligned
  std::vector<std::size_t> perm(model.anchors.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::sort(perm.begin(), perm.end(), [&](std::size_t i, std::size_t j) {
    return model.conjunction.stumps[i].attribute < model.conjunction.stumps[j].attribute;
  });
  CompressionModel sorted;
  for (std::size_t i : perm) {
    sorted.conjunction.stumps.push_back(model.conjunction.stumps[i]);
    sorted.anchors.push_back(model.anchors[i]);
  }
  return sorted;
}

OccamModel occam_learn(const Eigen::Ref<const Matrix>& X, const Labels& y, const Ranges& ranges,
                       const LearnerParams& params, std::vector<std::string>* warnings,
                       std::vector<Index>* selection_order) {
  const Index m = X.rows();
  const Index n = X.cols();
  if (y.size() != m) throw std::invalid_argument("occam_learn: label count mismatch");
  OccamModel model;
  Index negatives = m - y.sum();
  const Index total_positives = y.sum();
  if (negatives == 0) {
    warn(warnings, "no negative examples; returning the empty conjunction");
    return model;
  }

  const auto order = sort_columns(X);
  std::vector<char> active(static_cast<std::size_t>(m), 1);
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  std::vector<Group> groups;

  struct Best {
    double utility = -kInf;
    Index attribute = -1;
    int direction = +1;
    double threshold = 0.0;
    double gap_lo = 0.0, gap_hi = 0.0;
    int bits = 0;
    Index code_index = 1;
    bool valid() const { return attribute >= 0; }
  };

  while (negatives > 0 && model.conjunction.size() < params.v_max) {
    Best best;
    for (Index k = 0; k < n; ++k) {
      if (used[static_cast<std::size_t>(k)] || ranges.degenerate(k)) continue;
      build_groups(X, y, order[static_cast<std::size_t>(k)], active, k, groups);
      const Index q = static_cast<Index>(groups.size());
      if (q == 0) continue;
      std::vector<Index> cn(static_cast<std::size_t>(q) + 1, 0), cp(static_cast<std::size_t>(q) + 1, 0);
      for (Index g = 0; g < q; ++g) {
        cn[static_cast<std::size_t>(g) + 1] = cn[static_cast<std::size_t>(g)] + groups[static_cast<std::size_t>(g)].neg;
        cp[static_cast<std::size_t>(g) + 1] = cp[static_cast<std::size_t>(g)] + groups[static_cast<std::size_t>(g)].pos;
      }
      const Index totn = cn[static_cast<std::size_t>(q)];
      const Index totp = cp[static_cast<std::size_t>(q)];
      const double A = ranges.lower[k], B = ranges.upper[k];

      auto consider = [&](double ga, double gb, int d, Index covered_neg, Index covered_pos) {
        if (covered_neg == 0) return;
        auto code = try_dyadic_code(A, B, ga, gb);
        if (!code) return;
        const double u = occam_utility(covered_neg, negatives, params.penalty, covered_pos,
                                       total_positives, params.eta, code->bits);
        if (improves(u, k, d, code->threshold, 0.0, best.utility, best.attribute, best.direction,
                     best.threshold, 0.0))
          best = {u, k, d, code->threshold, ga, gb, code->bits, code->index};
      };

      for (Index g = 0; g + 1 < q; ++g) {
        const double ga = groups[static_cast<std::size_t>(g)].value;
        const double gb = groups[static_cast<std::size_t>(g) + 1].value;
        consider(ga, gb, +1, cn[static_cast<std::size_t>(g) + 1], cp[static_cast<std::size_t>(g) + 1]);
        consider(ga, gb, -1, totn - cn[static_cast<std::size_t>(g) + 1], totp - cp[static_cast<std::size_t>(g) + 1]);
      }
      // thresholds below all values cover everything for d=-1, and above all
      // values cover everything for d=+1
      if (A < groups.front().value) consider(A, groups.front().value, -1, totn, totp);
      if (groups.back().value < B) consider(groups.back().value, B, +1, totn, totp);
    }
    if (!best.valid() || best.utility <= 0.0) break;

    model.conjunction.stumps.push_back({best.attribute, best.direction, best.threshold});
    if (selection_order) selection_order->push_back(best.attribute);
    model.bit_lengths.push_back(best.bits);
    model.code_indices.push_back(best.code_index);
    model.gaps.emplace_back(best.gap_lo, best.gap_hi);
    used[static_cast<std::size_t>(best.attribute)] = 1;
    for (Index i = 0; i < m; ++i) {
      if (!active[static_cast<std::size_t>(i)]) continue;
      const double v = X(i, best.attribute);
      const bool covered = best.direction > 0 ? v <= best.gap_lo : v >= best.gap_hi;
      if (covered) {
        active[static_cast<std::size_t>(i)] = 0;
        if (y[i] == 0) --negatives;
      }
    }
  }

  std::vector<std::size_t> perm(model.bit_lengths.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::sort(perm.begin(), perm.end(), [&](std::size_t i, std::size_t j) {
    return model.conjunction.stumps[i].attribute < model.conjunction.stumps[j].attribute;
  });
  OccamModel sorted;
  for (std::size_t i : perm) {
    sorted.conjunction.stumps.push_back(model.conjunction.stumps[i]);
    sorted.bit_lengths.push_back(model.bit_lengths[i]);
    sorted.code_indices.push_back(model.code_indices[i]);
    sorted.gaps.push_back(model.gaps[i]);
  }
  return sorted;
}

namespace {

// Shared soft-greedy loop; the candidate enumerator differs between the
// PAC-Bayes learner (all value pairs plus the full range) and the fixed
// margin heuristic (fixed-width intervals centered on values).
template <typename EnumerateCandidates>
GibbsConjunction soft_greedy(const Eigen::Ref<const Matrix>& X, const Labels& y,
                             const Ranges& ranges, const LearnerParams& params,
                             std::vector<std::string>* warnings,
                             std::vector<Index>* selection_order,
                             EnumerateCandidates&& enumerate,
                             const std::vector<char>& attribute_usable) {
  const Index m = X.rows();
  const Index n = X.cols();
  if (y.size() != m) throw std::invalid_argument("soft greedy: label count mismatch");
  GibbsConjunction model;
  const Index total_positives = y.sum();
  if (m - total_positives == 0) {
    warn(warnings, "no negative examples; returning the empty conjunction");
    return model;
  }

  const auto order = sort_columns(X);
  std::vector<char> active(static_cast<std::size_t>(m), 1);
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  Array w = Array::Ones(m);
  SoftColumn col;

  while (model.size() < params.v_max) {
    double soft_neg_mass = 0.0;
    for (Index i = 0; i < m; ++i)
      if (y[i] == 0) soft_neg_mass += w[i];
    if (soft_neg_mass < kSoftMassFloor) break;

    SoftBest best;
    for (Index k = 0; k < n; ++k) {
      if (used[static_cast<std::size_t>(k)] || !attribute_usable[static_cast<std::size_t>(k)])
        continue;
      build_soft_column(X, y, order[static_cast<std::size_t>(k)], active, w, k, col);
      if (col.q() < 2) continue;  // fewer than 2 distinct values
      enumerate(k, col, [&](double a, double b, Index lo, Index hi) {
        for (int d : {+1, -1}) {
          const SoftScore s = soft_score(col, a, b, lo, hi, d);
          if (s.covering <= 0.0) continue;
          double u = s.covering / soft_neg_mass;
          if (total_positives > 0)
            u -= params.penalty * s.error / static_cast<double>(total_positives);
          u -= params.eta * std::log(ranges.width(k) / (b - a));
          if (improves(u, k, d, a, b, best.utility, best.attribute, best.direction, best.a,
                       best.b))
            best = {u, k, d, a, b};
        }
      });
    }
    if (!best.valid() || best.utility <= 0.0) break;

    const IntervalStump stump{best.attribute, best.direction, best.a, best.b};
    model.stumps.push_back(stump);
    if (selection_order) selection_order->push_back(best.attribute);
    used[static_cast<std::size_t>(best.attribute)] = 1;
    for (Index i = 0; i < m; ++i) {
      if (!active[static_cast<std::size_t>(i)]) continue;
      w[i] *= sigma(stump, X(i, best.attribute));
      if (w[i] == 0.0) active[static_cast<std::size_t>(i)] = 0;
    }
  }

  std::sort(model.stumps.begin(), model.stumps.end(),
            [](const IntervalStump& a, const IntervalStump& b) { return a.attribute < b.attribute; });
  return model;
}

}  // namespace

GibbsConjunction pacbayes_learn(const Eigen::Ref<const Matrix>& X, const Labels& y,
                                const Ranges& ranges, const LearnerParams& params,
                                std::vector<std::string>* warnings,
                                std::vector<Index>* selection_order) {
  std::vector<char> usable(static_cast<std::size_t>(X.cols()), 0);
  for (Index k = 0; k < X.cols(); ++k) usable[static_cast<std::size_t>(k)] = !ranges.degenerate(k);
  auto enumerate = [&](Index k, const SoftColumn& col, auto&& emit) {
    const Index q = col.q();
    for (Index s = 0; s < q; ++s)
      for (Index e = s + 1; e < q; ++e) emit(col.u[static_cast<std::size_t>(s)], col.u[static_cast<std::size_t>(e)], s, e);
    // the full-range interval keeps the margin-dominant regime reachable
    if (ranges.lower[k] < col.u.front() || col.u.back() < ranges.upper[k])
      emit(ranges.lower[k], ranges.upper[k], Index{0}, q - 1);
  };
  return soft_greedy(X, y, ranges, params, warnings, selection_order, enumerate, usable);
}

GibbsConjunction fixed_margin_learn(const Eigen::Ref<const Matrix>& X, const Labels& y,
                                    const Ranges& ranges, const LearnerParams& params,
                                    std::vector<std::string>* warnings,
                                    std::vector<Index>* selection_order) {
  if (!(params.gamma > 0.0)) throw std::invalid_argument("fixed_margin_learn: gamma must be > 0");
  const Index n = X.cols();
  auto half_margin = [&](Index k) {
    return params.gamma_fraction ? params.gamma * ranges.width(k) : params.gamma;
  };
  std::vector<char> usable(static_cast<std::size_t>(n), 0);
  bool any_usable = false;
  for (Index k = 0; k < n; ++k) {
    if (ranges.degenerate(k)) continue;
    if (2.0 * half_margin(k) > ranges.width(k)) continue;
    usable[static_cast<std::size_t>(k)] = 1;
    any_usable = true;
  }
  if (!any_usable) fail("fixed_margin_learn: margin exceeds every attribute range");

  auto enumerate = [&](Index k, const SoftColumn& col, auto&& emit) {
    const double gamma = half_margin(k);
    const double A = ranges.lower[k], B = ranges.upper[k];
    for (double c : col.u) {
      const double a = std::max(A, c - gamma);
      const double b = std::min(B, c + gamma);
      if (!(a < b)) continue;
      const Index lo = static_cast<Index>(std::lower_bound(col.u.begin(), col.u.end(), a) -
                                          col.u.begin());
      const Index hi = static_cast<Index>(std::upper_bound(col.u.begin(), col.u.end(), b) -
                                          col.u.begin()) - 1;
      if (lo > hi) continue;
      emit(a, b, lo, hi);
    }
  };
  return soft_greedy(X, y, ranges, params, warnings, selection_order, enumerate, usable);
}

double interval_ratio(const IntervalStump& s, const Ranges& ranges) {
  return (s.b - s.a) / ranges.width(s.attribute);
}

Index LearnedModel::size() const {
  return kind == LearnerKind::PacBayes || kind == LearnerKind::PacBayesFixed
             ? gibbs.size()
             : conjunction.size();
}

Index LearnedModel::errors_on(const Eigen::Ref<const Matrix>& X, const Labels& y) const {
  return error_count([this](const auto& row) { return predict_row(row); }, X, y);
}

double LearnedModel::gibbs_risk_on(const Eigen::Ref<const Matrix>& X, const Labels& y) const {
  if (X.rows() < 1) throw std::invalid_argument("gibbs_risk_on: empty sample");
  double sum = 0.0;
  for (Index i = 0; i < X.rows(); ++i) {
    const int label = target == Target::Disjunction ? 1 - y[i] : y[i];
    sum += gibbs_example_risk_row(gibbs, X.row(i), label);
  }
  return sum / static_cast<double>(X.rows());
}

double LearnedModel::gibbs_errors_on(const Eigen::Ref<const Matrix>& X, const Labels& y) const {
  return gibbs_risk_on(X, y) * static_cast<double>(X.rows());
}

BoundReport LearnedModel::bound_on_train(const Eigen::Ref<const Matrix>& X, const Labels& y,
                                         double delta) const {
  const Index m = X.rows();
  switch (kind) {
    case LearnerKind::Sc: {
      std::set<Index> in_set(anchors.begin(), anchors.end());
      Index outside_errors = 0;
      for (Index i = 0; i < m; ++i) {
        if (in_set.count(i)) continue;
        if (predict_row(X.row(i)) != y[i]) ++outside_errors;
      }
      return sc_bound(m, conjunction.size(), outside_errors, n, delta);
    }
    case LearnerKind::Occam:
      return occam_bound(m, errors_on(X, y), n, bit_lengths, delta, params.prior);
    default:
      return pacbayes_report(m, n, ratios, gibbs_risk_on(X, y), delta, params.prior);
  }
}

LearnedModel train_model(const Eigen::Ref<const Matrix>& X, const Labels& y, const Ranges& ranges,
                         LearnerKind kind, Target target, const LearnerParams& params,
                         std::vector<std::string>* warnings) {
  LearnedModel model;
  model.kind = kind;
  model.target = target;
  model.n = X.cols();
  model.params = params;
  const Labels labels = target == Target::Disjunction ? complement_labels(y) : y;
  switch (kind) {
    case LearnerKind::Sc: {
      CompressionModel cm = greedy_sc_learn(X, labels, ranges, params, warnings);
      model.conjunction = std::move(cm.conjunction);
      model.anchors = std::move(cm.anchors);
      break;
    }
    case LearnerKind::Occam: {
      OccamModel om = occam_learn(X, labels, ranges, params, warnings);
      model.conjunction = std::move(om.conjunction);
      model.bit_lengths = std::move(om.bit_lengths);
      model.code_indices = std::move(om.code_indices);
      model.gaps = std::move(om.gaps);
      break;
    }
    case LearnerKind::PacBayes:
      model.gibbs = pacbayes_learn(X, labels, ranges, params, warnings);
      break;
    case LearnerKind::PacBayesFixed:
      model.gibbs = fixed_margin_learn(X, labels, ranges, params, warnings);
      break;
  }
  for (const auto& s : model.gibbs.stumps) model.ratios.push_back(interval_ratio(s, ranges));
  return model;
}

}  // namespace stumpcover
