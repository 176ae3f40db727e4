#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <vector>

namespace stumpcover {

using Matrix = Eigen::MatrixXd;   // examples as rows, attributes as columns
using Vector = Eigen::VectorXd;
using Array = Eigen::ArrayXd;
using Labels = Eigen::VectorXi;   // entries in {0,1}
using Index = Eigen::Index;

/// Per-attribute a-priori value ranges [lower_i, upper_i].
struct Ranges {
  Vector lower;
  Vector upper;

  Index size() const { return lower.size(); }
  double width(Index i) const { return upper[i] - lower[i]; }

  // Attributes with lower == upper carry no threshold information and are
  // excluded from candidate stumps.
  bool degenerate(Index i) const { return lower[i] == upper[i]; }

  bool contains(Index i, double x) const { return lower[i] <= x && x <= upper[i]; }
};

/// Tightest ranges bracketing every value of X: lower_i = min, upper_i = max.
inline Ranges infer_ranges(const Eigen::Ref<const Matrix>& X) {
  if (X.rows() < 1) throw std::invalid_argument("infer_ranges: need at least one example");
  Ranges r;
  r.lower = X.colwise().minCoeff();
  r.upper = X.colwise().maxCoeff();
  return r;
}

inline Labels complement_labels(const Labels& y) {
  return (Labels::Ones(y.size()) - y).eval();
}

}  // namespace stumpcover
