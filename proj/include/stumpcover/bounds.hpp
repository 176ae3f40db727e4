#pragma once

#include "stumpcover/types.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace stumpcover {

/// Prior over the number of stumps in a conjunction.
struct SizePrior {
  enum Kind { Quadratic, Uniform };

  Kind kind = Quadratic;
  Index n = 0;  // attribute count; only the uniform prior depends on it

  static SizePrior quadratic() { return {Quadratic, 0}; }
  static SizePrior uniform(Index n) { return {Uniform, n}; }

  /// log p(d). Quadratic decay: p(d) = (6/pi^2) (d+1)^-2; uniform: 1/(n+1).
  double log_p(Index d) const;
};

/// A risk bound together with the named ingredients it was assembled from.
/// The components are sufficient to recompute the bound (see recompute_bound).
struct BoundReport {
  std::string regime;  // "occam" | "sc" | "pacbayes"
  double bound = 1.0;
  std::optional<double> delta;
  std::vector<std::pair<std::string, double>> components;

  double component(const std::string& key) const;
  bool has_component(const std::string& key) const;
};

/// ln C(m, k), exact in log space.
double log_binomial(Index m, Index k);

/// Bin(kappa, m, r) = sum_{i<=kappa} C(m,i) r^i (1-r)^{m-i}.
double binomial_tail(Index kappa, Index m, double r);
double log_binomial_tail(Index kappa, Index m, double r);

/// sup{ r : Bin(kappa, m, r) >= delta }, by bisection. Returned value v
/// satisfies Bin(v) <= delta <= Bin(v - 1e-12) for interior solutions.
double binomial_tail_inversion(Index kappa, Index m, double delta);
double binomial_tail_inversion_logdelta(Index kappa, Index m, double log_delta);

/// zeta(a) = (6/pi^2) (a+1)^-2; sums to 1 over the nonnegative integers.
double zeta(Index a);
double log_zeta(Index a);

/// log of C(n,|k|)^-1 p(|k|) 2^-|k| prod_i zeta(l_i) 2^-l_i.
double occam_log_prior(Index n, std::span<const int> bit_lengths, const SizePrior& prior);

/// Occam's-razor bound: binomial tail inversion at confidence prior(f) * delta.
BoundReport occam_bound(Index m, Index train_errors, Index n, std::span<const int> bit_lengths,
                        double delta, const SizePrior& prior);

/// log of C(n,|k|)^-1 2^-|k|, the message probability for the compression
/// scheme (attributes and directions; thresholds carried by the examples).
double sc_message_log_prob(Index n, Index k_size);

/// Sample-compression bound for a compression set of size |i| with |j|
/// training errors outside it.
BoundReport sc_bound(Index m, Index compress_size, Index outside_errors, Index n, double delta);

/// kl(q||p) between Bernoulli distributions, with 0 ln 0 = 0.
double kl_bernoulli(double q, double p);

/// sup{ eps in [q,1) : kl(q||eps) <= psi }, by bisection.
double kl_sup_inversion(double q, double psi);

/// Complexity term of the PAC-Bayes bound:
/// (1/m) [ ln( C(n,|k|) 2^|k| / p(|k|) * (m+1)/delta ) + sum_k ln(1/ratio_k) ]
/// where ratio_k = (b_k - a_k) / (B_k - A_k).
double pacbayes_psi(Index m, Index n, Index k_size, std::span<const double> interval_ratios,
                    double delta, const SizePrior& prior);

/// Gibbs risk bound kl_sup_inversion(risk, psi); the Bayes bound min(1, 2x)
/// is recorded alongside.
BoundReport pacbayes_bound(double gibbs_train_risk, double psi);

/// Full PAC-Bayes report with the psi ingredients recorded.
BoundReport pacbayes_report(Index m, Index n, std::span<const double> interval_ratios,
                            double gibbs_train_risk, double delta, const SizePrior& prior);

/// Re-derives the bound value from a report's components; used to check
/// report self-consistency.
double recompute_bound(const BoundReport& report);

/// key=value rendering, one component per line.
std::string render_report(const BoundReport& report);

}  // namespace stumpcover
