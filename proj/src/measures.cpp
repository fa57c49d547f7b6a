#include "bdp/measures.hpp"

#include <cmath>

namespace bdp {

MeasureTable build_measures(const Rates& rates, Index horizon, const TailPolicy& policy) {
  if (horizon < 1) throw std::invalid_argument("build_measures: horizon >= 1 required");
  MeasureTable out;
  out.horizon = horizon;
  out.mu_total = series_mu(rates, policy);

  const Index m = horizon + 1;
  out.mu.resize(m);
  out.log_mu.resize(m);

  std::vector<double> lmu(std::size_t(m)), lpre(std::size_t(m));
  lmu[0] = 0.0;
  lpre[0] = 0.0;
  for (Index i = 1; i <= horizon; ++i) {
    lmu[std::size_t(i)] = lmu[std::size_t(i - 1)] + rates.log_b(i - 1) - rates.log_a(i);
    lpre[std::size_t(i)] = log_add_exp(lpre[std::size_t(i - 1)], lmu[std::size_t(i)]);
  }
  for (Index i = 0; i <= horizon; ++i) {
    out.log_mu[i] = lmu[std::size_t(i)];
    out.mu[i] = std::exp(lmu[std::size_t(i)]);
  }

  if (out.mu_total.finite()) {
    const double lmu_total = std::log(out.mu_total.value);
    out.pi.resize(m);
    out.H.resize(m);
    out.H_tail.resize(m);
    // suffix within the table window, then the remainder of the series
    const double total_past_horizon =
        std::max(0.0, out.mu_total.value - std::exp(lpre[std::size_t(horizon)]));
    double lsuf = total_past_horizon > 0.0 ? std::log(total_past_horizon) : -kInf;
    for (Index i = horizon; i >= 0; --i) {
      out.pi[i] = std::exp(lmu[std::size_t(i)] - lmu_total);
      out.H[i] = std::min(1.0, std::exp(lpre[std::size_t(i)] - lmu_total));
      out.H_tail[i] = std::exp(lsuf - lmu_total);
      lsuf = log_add_exp(lsuf, lmu[std::size_t(i)]);
    }
  }
  return out;
}

double eigentime_sum_up(const Rates& rates, Index n) {
  if (n < 1) throw std::invalid_argument("eigentime_sum_up: n >= 1 required");
  CompensatedSum<double> sum;
  double lmu = 0.0, lpre = 0.0;
  for (Index k = 0; k < n; ++k) {
    if (k > 0) {
      lmu += rates.log_b(k - 1) - rates.log_a(k);
      lpre = log_add_exp(lpre, lmu);
    }
    sum.add(std::exp(lpre - lmu - rates.log_b(k)));
  }
  return sum.value();
}

double eigentime_sum_reflected(const Rates& rates, Index n, Index N) {
  if (!(0 <= n && n < N)) throw std::invalid_argument("eigentime_sum_reflected: 0 <= n < N");
  const std::size_t m = std::size_t(N + 1);
  std::vector<double> lmu(m), lb(m);
  lmu[0] = 0.0;
  lb[0] = rates.log_b(0);
  for (Index i = 1; i <= N; ++i) {
    lmu[std::size_t(i)] = lmu[std::size_t(i - 1)] + lb[std::size_t(i - 1)] - rates.log_a(i);
    lb[std::size_t(i)] = rates.log_b(i);
  }
  CompensatedSum<double> sum;
  double lsuf = -kInf;  // log sum_{i=j+1}^{N} mu_i
  for (Index j = N; j >= n; --j) {
    if (j < N) lsuf = log_add_exp(lsuf, lmu[std::size_t(j + 1)]);
    sum.add(std::exp(lsuf - lmu[std::size_t(j)] - lb[std::size_t(j)]));
  }
  return sum.value();
}

}  // namespace bdp
