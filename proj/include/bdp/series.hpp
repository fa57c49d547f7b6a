#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "bdp/numeric.hpp"
#include "bdp/rates.hpp"

namespace bdp {

// Knobs for series convergence decisions. Passed by value everywhere;
// verdicts are reproducible functions of (rates, policy).
struct TailPolicy {
  Index horizon = 10000;   // max number of terms before giving up
  double delta = 0.05;     // empirical rule: window ratios must stay <= 1 - delta
  double abs_tol = 1e-10;  // refine finite sums until the tail bound drops below
};

enum class Verdict { Finite, Infinite, Undetermined };

std::string to_string(Verdict v);

// Outcome of a positive-series evaluation. For Finite verdicts the true
// sum lies in [value - error_bound, value + error_bound]; for Infinite
// and Undetermined verdicts `witness` explains what was observed.
struct SeriesResult {
  Verdict verdict = Verdict::Undetermined;
  double value = kNaN;
  double error_bound = kInf;
  double partial_sum = kNaN;
  std::string certificate;
  std::string witness;
  Index terms_used = 0;
  std::vector<std::pair<Index, double>> checkpoints;

  bool finite() const { return verdict == Verdict::Finite; }
  bool infinite() const { return verdict == Verdict::Infinite; }
};

// Analytic hints derived from a rate family; Unknown fields make the
// evaluator fall back to the empirical window rules.
struct SeriesHints {
  ExtReal ratio_limit = ExtReal::unknown();  // lim t_{i+1}/t_i
  std::optional<double> power_exponent;      // t_i ~ C i^kappa, used when ratio -> 1
  std::string label;
};

// Certified evaluation of sum_{i >= start} t_i with t_i = exp(log_term(i)) >= 0.
SeriesResult evaluate_positive_series(const std::function<double(Index)>& log_term, Index start,
                                      const TailPolicy& policy, const SeriesHints& hints);

// The boundary-classification series of the chain. R and S decide the
// boundary type at infinity; T is the average hitting time; u1 is the
// Dirichlet-form uniqueness series sum(1/(mu_i b_i) + mu_i).
SeriesResult series_mu(const Rates& rates, const TailPolicy& policy);
SeriesResult series_R(const Rates& rates, const TailPolicy& policy);
SeriesResult series_S(const Rates& rates, Index n, const TailPolicy& policy);
SeriesResult series_T(const Rates& rates, const TailPolicy& policy);
SeriesResult series_inv_mub(const Rates& rates, const TailPolicy& policy);
SeriesResult series_u1(const Rates& rates, const TailPolicy& policy);

enum class BoundaryClass { Regular, Exit, Entrance, Natural, Undetermined };

std::string to_string(BoundaryClass c);

struct BoundaryReport {
  SeriesResult R;
  SeriesResult S;
  SeriesResult T;
  SeriesResult u1;
  SeriesResult mu_total;
  SeriesResult inv_mub;
  BoundaryClass classification = BoundaryClass::Undetermined;
  // Dirichlet-form uniqueness: the generator has a unique associated
  // process iff u1 diverges. Meaningful only when u1 is decided.
  bool dirichlet_unique = false;
  std::string notes;
};

BoundaryReport classify_boundary(const Rates& rates, const TailPolicy& policy);

}  // namespace bdp
