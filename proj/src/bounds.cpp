#include "stumpcover/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

namespace stumpcover {

namespace {

constexpr double kLogSixOverPiSq = -0.4977003024707453;  // ln(6/pi^2)

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// lgamma(n+1) - (n ln n - n + 0.5 ln(2 pi n)): the Stirling remainder, exact
// to a few ulp without the catastrophic lgamma-difference error at large n
double stirlerr(double n) {
  constexpr double s0 = 1.0 / 12.0, s1 = 1.0 / 360.0, s2 = 1.0 / 1260.0, s3 = 1.0 / 1680.0,
                   s4 = 1.0 / 1188.0;
  if (n < 16.0) {
    return std::lgamma(n + 1.0) -
           (n * std::log(n) - n + 0.5 * std::log(2.0 * std::numbers::pi * n));
  }
  const double nn = n * n;
  if (n > 500.0) return (s0 - s1 / nn) / n;
  if (n > 80.0) return (s0 - (s1 - s2 / nn) / nn) / n;
  return (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / n;
}

// x ln(x/np) + np - x, evaluated without cancellation when x is near np
double bd0(double x, double np) {
  if (std::abs(x - np) < 0.1 * (x + np)) {
    const double v = (x - np) / (x + np);
    double s = (x - np) * v;
    double ej = 2.0 * x * v;
    const double v2 = v * v;
    for (int j = 1;; ++j) {
      ej *= v2;
      const double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
  }
  return x * std::log(x / np) + np - x;
}

// ln of the binomial pmf, accurate in absolute terms even for m ~ 10^6
double log_binomial_pmf(Index i_, Index m_, double r, double log_r, double log_1mr) {
  const double i = static_cast<double>(i_);
  const double m = static_cast<double>(m_);
  if (i_ == 0) return m * log_1mr;
  if (i_ == m_) return m * log_r;
  return stirlerr(m) - stirlerr(i) - stirlerr(m - i) - bd0(i, m * r) -
         bd0(m - i, m * (1.0 - r)) +
         0.5 * std::log(m / (2.0 * std::numbers::pi * i * (m - i)));
}

}  // namespace

double SizePrior::log_p(Index d) const {
  require(d >= 0, "size prior: negative model size");
  if (kind == Uniform) {
    require(n >= 0 && d <= n, "uniform size prior: size exceeds attribute count");
    return -std::log(static_cast<double>(n + 1));
  }
  return kLogSixOverPiSq - 2.0 * std::log(static_cast<double>(d + 1));
}

double BoundReport::component(const std::string& key) const {
  for (const auto& [k, v] : components)
    if (k == key) return v;
  throw std::out_of_range("bound report has no component '" + key + "'");
}

bool BoundReport::has_component(const std::string& key) const {
  for (const auto& [k, v] : components)
    if (k == key) return true;
  return false;
}

double log_binomial(Index m, Index k) {
  require(m >= 0 && k >= 0 && k <= m, "log_binomial: need 0 <= k <= m");
  return std::lgamma(static_cast<double>(m) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(m - k) + 1.0);
}

double log_binomial_tail(Index kappa, Index m, double r) {
  require(0.0 <= r && r <= 1.0, "binomial_tail: r outside [0,1]");
  require(kappa >= 0 && kappa <= m && m >= 1, "binomial_tail: need 0 <= kappa <= m, m >= 1");
  if (kappa == m) return 0.0;  // full tail
  if (r == 0.0) return 0.0;    // only the i=0 term survives and equals 1
  if (r == 1.0) return -std::numeric_limits<double>::infinity();
  const double log_r = std::log(r);
  const double log_1mr = std::log1p(-r);
  // two passes: locate the max term, then Kahan-sum exp(term - max)
  double max_term = -std::numeric_limits<double>::infinity();
  auto term = [&](Index i) { return log_binomial_pmf(i, m, r, log_r, log_1mr); };
  for (Index i = 0; i <= kappa; ++i) max_term = std::max(max_term, term(i));
  double sum = 0.0, comp = 0.0;
  for (Index i = 0; i <= kappa; ++i) {
    double t = std::exp(term(i) - max_term) - comp;
    double s = sum + t;
    comp = (s - sum) - t;
    sum = s;
  }
  return std::min(0.0, max_term + std::log(sum));
}

double binomial_tail(Index kappa, Index m, double r) {
  return std::exp(log_binomial_tail(kappa, m, r));
}

double binomial_tail_inversion_logdelta(Index kappa, Index m, double log_delta) {
  require(log_delta <= 0.0, "binomial_tail_inversion: delta > 1");
  require(kappa >= 0 && kappa <= m && m >= 1, "binomial_tail_inversion: need 0 <= kappa <= m");
  if (kappa == m) return 1.0;   // Bin is identically 1
  if (log_delta == 0.0) return 0.0;  // only r = 0 attains Bin = 1 when kappa < m
  // Bin(kappa, m, .) decreases continuously from 1 to 0 on [0,1].
  double lo = 0.0, hi = 1.0;  // invariant: Bin(lo) >= delta > Bin(hi)
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    if (log_binomial_tail(kappa, m, mid) >= log_delta)
      lo = mid;
    else
      hi = mid;
  }
  // hi-side: Bin(result) <= delta, and the sup lies within 1e-12 below it
  return hi;
}

double binomial_tail_inversion(Index kappa, Index m, double delta) {
  require(delta > 0.0, "binomial_tail_inversion: delta <= 0");
  require(delta <= 1.0, "binomial_tail_inversion: delta > 1");
  return binomial_tail_inversion_logdelta(kappa, m, std::log(delta));
}

double zeta(Index a) {
  require(a >= 0, "zeta: negative argument");
  double d = static_cast<double>(a) + 1.0;
  return (6.0 / (std::numbers::pi * std::numbers::pi)) / (d * d);
}

double log_zeta(Index a) {
  require(a >= 0, "zeta: negative argument");
  return kLogSixOverPiSq - 2.0 * std::log(static_cast<double>(a) + 1.0);
}

double occam_log_prior(Index n, std::span<const int> bit_lengths, const SizePrior& prior) {
  const Index k = static_cast<Index>(bit_lengths.size());
  require(k <= n, "occam prior: more stumps than attributes");
  double lp = -log_binomial(n, k) + prior.log_p(k) -
              static_cast<double>(k) * std::numbers::ln2;
  for (int l : bit_lengths) {
    require(l >= 0, "occam prior: negative bit length");
    lp += log_zeta(l) - static_cast<double>(l) * std::numbers::ln2;
  }
  return lp;
}

BoundReport occam_bound(Index m, Index train_errors, Index n, std::span<const int> bit_lengths,
                        double delta, const SizePrior& prior) {
  require(train_errors >= 0 && train_errors <= m, "occam_bound: train_errors > m");
  require(delta > 0.0 && delta <= 1.0, "occam_bound: delta outside (0,1]");
  const double log_prior = occam_log_prior(n, bit_lengths, prior);
  const double log_delta_prime = log_prior + std::log(delta);
  BoundReport rep;
  rep.regime = "occam";
  rep.delta = delta;
  rep.bound = binomial_tail_inversion_logdelta(train_errors, m, log_delta_prime);
  int bits_total = 0;
  for (int l : bit_lengths) bits_total += l;
  rep.components = {
      {"m", static_cast<double>(m)},
      {"train_errors", static_cast<double>(train_errors)},
      {"n", static_cast<double>(n)},
      {"k_size", static_cast<double>(bit_lengths.size())},
      {"bits_total", static_cast<double>(bits_total)},
      {"log_prior", log_prior},
      {"delta", delta},
      {"log_delta_prime", log_delta_prime},
      {"train_risk", static_cast<double>(train_errors) / static_cast<double>(m)},
  };
  return rep;
}

double sc_message_log_prob(Index n, Index k_size) {
  require(k_size >= 0 && k_size <= n, "sc message: k_size outside [0, n]");
  return -log_binomial(n, k_size) - static_cast<double>(k_size) * std::numbers::ln2;
}

BoundReport sc_bound(Index m, Index compress_size, Index outside_errors, Index n, double delta) {
  require(compress_size >= 0 && outside_errors >= 0, "sc_bound: negative counts");
  require(compress_size + outside_errors < m, "sc_bound: |i| + |j| >= m");
  require(delta > 0.0 && delta <= 1.0, "sc_bound: delta outside (0,1]");
  const double log_choose_i = log_binomial(m, compress_size);
  const double log_choose_j = log_binomial(m - compress_size, outside_errors);
  const double log_message = sc_message_log_prob(n, compress_size);
  const double total = log_choose_i + log_choose_j - log_message - log_zeta(compress_size) -
                       log_zeta(outside_errors) - std::log(delta);
  const double denom = static_cast<double>(m - compress_size - outside_errors);
  const double bound = 1.0 - std::exp(-total / denom);
  BoundReport rep;
  rep.regime = "sc";
  rep.delta = delta;
  rep.bound = bound;
  rep.components = {
      {"m", static_cast<double>(m)},
      {"compress_size", static_cast<double>(compress_size)},
      {"outside_errors", static_cast<double>(outside_errors)},
      {"n", static_cast<double>(n)},
      {"log_choose_i", log_choose_i},
      {"log_choose_j", log_choose_j},
      {"log_message_prob", log_message},
      {"log_zeta_i", log_zeta(compress_size)},
      {"log_zeta_j", log_zeta(outside_errors)},
      {"delta", delta},
  };
  return rep;
}

double kl_bernoulli(double q, double p) {
  require(0.0 <= q && q <= 1.0, "kl_bernoulli: q outside [0,1]");
  if (p <= 0.0 || p >= 1.0) {
    // only the matching degenerate q is compatible
    if ((p == 0.0 && q == 0.0) || (p == 1.0 && q == 1.0)) return 0.0;
    throw std::invalid_argument("kl_bernoulli: p in {0,1} with incompatible q");
  }
  double kl = 0.0;
  if (q > 0.0) kl += q * std::log(q / p);
  if (q < 1.0) kl += (1.0 - q) * std::log((1.0 - q) / (1.0 - p));
  return std::max(0.0, kl);
}

double kl_sup_inversion(double q, double psi) {
  require(0.0 <= q && q <= 1.0, "kl_sup_inversion: q outside [0,1]");
  require(psi >= 0.0, "kl_sup_inversion: negative psi");
  if (q >= 1.0) return 1.0;
  if (psi == 0.0) return q;
  // kl(q||eps) increases from 0 to +inf as eps runs over [q, 1)
  double lo = q, hi = 1.0;  // invariant: kl(lo) <= psi < kl(hi)
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    if (kl_bernoulli(q, mid) <= psi)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

double pacbayes_psi(Index m, Index n, Index k_size, std::span<const double> interval_ratios,
                    double delta, const SizePrior& prior) {
  require(m >= 1, "pacbayes_psi: m < 1");
  require(static_cast<Index>(interval_ratios.size()) == k_size,
          "pacbayes_psi: one ratio per stump required");
  require(delta > 0.0 && delta <= 1.0, "pacbayes_psi: delta outside (0,1]");
  double sum = log_binomial(n, k_size) + static_cast<double>(k_size) * std::numbers::ln2 -
               prior.log_p(k_size) + std::log(static_cast<double>(m + 1)) - std::log(delta);
  for (double ratio : interval_ratios) {
    require(ratio > 0.0, "pacbayes_psi: interval ratio <= 0");
    require(ratio <= 1.0, "pacbayes_psi: interval ratio > 1");
    sum -= std::log(ratio);
  }
  return sum / static_cast<double>(m);
}

BoundReport pacbayes_bound(double gibbs_train_risk, double psi) {
  require(0.0 <= gibbs_train_risk && gibbs_train_risk <= 1.0,
          "pacbayes_bound: risk outside [0,1]");
  require(psi >= 0.0, "pacbayes_bound: negative psi");
  BoundReport rep;
  rep.regime = "pacbayes";
  rep.bound = kl_sup_inversion(gibbs_train_risk, psi);
  rep.components = {
      {"gibbs_train_risk", gibbs_train_risk},
      {"psi", psi},
      {"bayes_bound", std::min(1.0, 2.0 * rep.bound)},
  };
  return rep;
}

BoundReport pacbayes_report(Index m, Index n, std::span<const double> interval_ratios,
                            double gibbs_train_risk, double delta, const SizePrior& prior) {
  const Index k = static_cast<Index>(interval_ratios.size());
  const double psi = pacbayes_psi(m, n, k, interval_ratios, delta, prior);
  BoundReport rep = pacbayes_bound(gibbs_train_risk, psi);
  rep.delta = delta;
  rep.components.insert(rep.components.begin(),
                        {{"m", static_cast<double>(m)},
                         {"n", static_cast<double>(n)},
                         {"k_size", static_cast<double>(k)},
                         {"delta", delta}});
  double ratio_sum = 0.0;
  for (double r : interval_ratios) ratio_sum += r;
  rep.components.emplace_back("mean_ratio", k > 0 ? ratio_sum / static_cast<double>(k) : 1.0);
  return rep;
}

double recompute_bound(const BoundReport& report) {
  if (report.regime == "occam") {
    return binomial_tail_inversion_logdelta(static_cast<Index>(report.component("train_errors")),
                                            static_cast<Index>(report.component("m")),
                                            report.component("log_delta_prime"));
  }
  if (report.regime == "sc") {
    const double total = report.component("log_choose_i") + report.component("log_choose_j") -
                         report.component("log_message_prob") - report.component("log_zeta_i") -
                         report.component("log_zeta_j") - std::log(report.component("delta"));
    const double denom = report.component("m") - report.component("compress_size") -
                         report.component("outside_errors");
    return 1.0 - std::exp(-total / denom);
  }
  if (report.regime == "pacbayes") {
    return kl_sup_inversion(report.component("gibbs_train_risk"), report.component("psi"));
  }
  throw std::invalid_argument("recompute_bound: unknown regime '" + report.regime + "'");
}

std::string render_report(const BoundReport& report) {
  std::ostringstream out;
  out << "regime=" << report.regime << '\n';
  char buf[64];
  for (const auto& [key, value] : report.components) {
    std::snprintf(buf, sizeof buf, "%.17g", value);
    out << key << '=' << buf << '\n';
  }
  std::snprintf(buf, sizeof buf, "%.17g", report.bound);
  out << "bound=" << buf << '\n';
  return out.str();
}

}  // namespace stumpcover
