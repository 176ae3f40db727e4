#pragma once

#include "stumpcover/types.hpp"

#include <cstdlib>
#include <vector>

namespace stumpcover {

/// Single-attribute threshold classifier: outputs 1 iff (x_k - t) * d > 0.
/// Ties x_k == t are assigned 0.
struct DecisionStump {
  Index attribute = 0;
  int direction = +1;  // +1: class 1 on large values, -1: class 1 on small values
  double threshold = 0.0;

  int predict(double x) const { return (x - threshold) * direction > 0.0 ? 1 : 0; }

  template <typename Row>
  int predict_row(const Row& x) const {
    return predict(x[attribute]);
  }
};

/// Conjunction of decision stumps, at most one per attribute, sorted by
/// strictly ascending attribute index. The empty conjunction outputs 1.
struct StumpConjunction {
  std::vector<DecisionStump> stumps;

  Index size() const { return static_cast<Index>(stumps.size()); }
  bool empty() const { return stumps.empty(); }

  template <typename Row>
  int predict_row(const Row& x) const {
    for (const auto& s : stumps)
      if (s.predict_row(x) == 0) return 0;
    return 1;
  }

  int predict(const Eigen::Ref<const Vector>& x) const { return predict_row(x); }
};

/// Stump whose threshold is drawn uniformly from the margin interval [a, b].
/// a == b is the deterministic degenerate case.
struct IntervalStump {
  Index attribute = 0;
  int direction = +1;
  double a = 0.0;
  double b = 0.0;
};

/// Probability, over t ~ U[a, b], that the stump outputs 1 on value x.
/// Piecewise linear in x; degenerates to the indicator (x - a) d > 0 at a == b.
inline double sigma(const IntervalStump& s, double x) {
  if (s.a == s.b) return (x - s.a) * s.direction > 0.0 ? 1.0 : 0.0;
  if (s.direction > 0) {
    if (x < s.a) return 0.0;
    if (x > s.b) return 1.0;
    return (x - s.a) / (s.b - s.a);
  }
  if (x < s.a) return 1.0;
  if (x > s.b) return 0.0;
  return (s.b - x) / (s.b - s.a);
}

/// Stochastic conjunction: thresholds drawn independently per stump. Houses
/// the index, direction and margin-interval vectors.
struct GibbsConjunction {
  std::vector<IntervalStump> stumps;

  Index size() const { return static_cast<Index>(stumps.size()); }
  bool empty() const { return stumps.empty(); }

  template <typename Row>
  double product_sigma_row(const Row& x) const {
    double p = 1.0;
    for (const auto& s : stumps) p *= sigma(s, x[s.attribute]);
    return p;
  }

  double product_sigma(const Eigen::Ref<const Vector>& x) const { return product_sigma_row(x); }

  /// Majority vote of the threshold posterior: 1 iff the product of sigmas
  /// exceeds 1/2 (ties to 0).
  template <typename Row>
  int bayes_predict_row(const Row& x) const {
    return product_sigma_row(x) > 0.5 ? 1 : 0;
  }

  int bayes_predict(const Eigen::Ref<const Vector>& x) const { return bayes_predict_row(x); }

  /// Deterministic conjunction at the interval midpoints.
  StumpConjunction midpoint_conjunction() const {
    StumpConjunction c;
    c.stumps.reserve(stumps.size());
    for (const auto& s : stumps)
      c.stumps.push_back({s.attribute, s.direction, 0.5 * (s.a + s.b)});
    return c;
  }
};

/// Probability that a threshold draw misclassifies (x, y):
/// (1 - 2y) [ prod_k sigma_k(x_k) - y ].
template <typename Row>
double gibbs_example_risk_row(const GibbsConjunction& g, const Row& x, int y) {
  return (1.0 - 2.0 * y) * (g.product_sigma_row(x) - y);
}

inline double gibbs_example_risk(const GibbsConjunction& g, const Eigen::Ref<const Vector>& x, int y) {
  return gibbs_example_risk_row(g, x, y);
}

inline double gibbs_empirical_risk(const GibbsConjunction& g, const Eigen::Ref<const Matrix>& X,
                                   const Labels& y) {
  if (X.rows() < 1) throw std::invalid_argument("gibbs_empirical_risk: empty sample");
  double sum = 0.0;
  for (Index i = 0; i < X.rows(); ++i) sum += gibbs_example_risk_row(g, X.row(i), y[i]);
  return sum / static_cast<double>(X.rows());
}

/// Fraction of misclassified examples under an arbitrary row-predictor.
template <typename Predictor>
double empirical_risk(Predictor&& f, const Eigen::Ref<const Matrix>& X, const Labels& y) {
  if (X.rows() < 1) throw std::invalid_argument("empirical_risk: empty sample");
  Index errors = 0;
  for (Index i = 0; i < X.rows(); ++i)
    if (f(X.row(i)) != y[i]) ++errors;
  return static_cast<double>(errors) / static_cast<double>(X.rows());
}

template <typename Predictor>
Index error_count(Predictor&& f, const Eigen::Ref<const Matrix>& X, const Labels& y) {
  Index errors = 0;
  for (Index i = 0; i < X.rows(); ++i)
    if (f(X.row(i)) != y[i]) ++errors;
  return errors;
}

}  // namespace stumpcover
