#pragma once

#include <Eigen/Dense>

#include "bdp/numeric.hpp"
#include "bdp/rates.hpp"
#include "bdp/series.hpp"

namespace bdp {

// Tabulated mu_i = prod_{j<i} b_j / prod_{j<=i} a_j with mu_0 = 1, plus
// the stationary quantities when mu = sum mu_i is finite. mu_i routinely
// overflows or underflows doubles (exit chains have super-exponential mu),
// so log_mu is the authoritative representation; mu is exp(log_mu) for
// convenience and may saturate to inf/0.
struct MeasureTable {
  Index horizon = 0;
  Eigen::ArrayXd mu;
  Eigen::ArrayXd log_mu;
  SeriesResult mu_total;
  // Filled only when mu_total is Finite: pi_i = mu_i/mu, H_i = sum_{j<=i} pi_j,
  // and H_tail_i = 1 - H_i computed from suffix sums (not by subtraction).
  Eigen::ArrayXd pi;
  Eigen::ArrayXd H;
  Eigen::ArrayXd H_tail;

  bool has_pi() const { return pi.size() > 0; }
};

MeasureTable build_measures(const Rates& rates, Index horizon, const TailPolicy& policy = {});

// sum_{k<n} (1/(mu_k b_k)) sum_{j<=k} mu_j  — the mean of T_{0,n}.
double eigentime_sum_up(const Rates& rates, Index n);

// sum_{j=n}^{N} (1/(mu_j b_j)) sum_{i=j+1}^{N} mu_i  — the mean of T_{N,n}
// on the chain reflected at N (pi cancels, so mu may be infinite).
double eigentime_sum_reflected(const Rates& rates, Index n, Index N);

}  // namespace bdp
