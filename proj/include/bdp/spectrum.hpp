#pragma once

#include <vector>

#include "bdp/generator.hpp"
#include "bdp/numeric.hpp"
#include "bdp/series.hpp"

namespace bdp {

// Sorted distinct positive eigenvalues of (possibly truncated) minus-generators.
struct Spectrum {
  std::vector<double> values;  // strictly increasing, all > 0
  GeneratorKind kind = GeneratorKind::AbsorbedAtTop;
  Index level = 0;  // dimension parameter of the matrix that produced it
  Index start = 0;  // absorbing level n for reflected/bottom kinds
  double reciprocal_sum = kNaN;

  // set for limit spectra of infinite chains
  bool truncated_infinite = false;
  double tail_bound = 0.0;   // certified bound on sum of neglected 1/lambda
  Index final_level = 0;     // truncation at which the limit converged
  double max_rel_change = kNaN;
  bool budget_exhausted = false;

  Index count() const { return Index(values.size()); }
};

// All eigenvalues of the symmetrized window, bisected to relative
// `reltol`. Simplicity (positive off-diagonals) is asserted: a gap below
// 1e-14 * lambda_max is a hard error. For the ergodic kind the known
// zero eigenvalue is checked and dropped.
Spectrum eigen_spectrum(const GeneratorMatrix& g, double reltol = 1e-12);

struct LimitOptions {
  Index count = 0;          // eigenvalues to track; 0 = auto from the tail rule
  double tol = 1e-8;        // per-eigenvalue Cauchy stop (relative)
  Index max_level = Index(1) << 14;
  double tail_rel_tol = 1e-7;  // auto mode: grow count until tail < this * series value
  TailPolicy policy{};
};

// lambda_nu = lim_n lambda_nu^{(n)} for exit-boundary chains, driven over
// doubling n with the monotone-decrease guarantee asserted at every step.
// Validates sum 1/lambda against series R and certifies the tail.
Spectrum limit_spectrum_exit(const Rates& rates, const LimitOptions& opts = {});

// lambdahat_{n,nu} = lim_N lambdahat_{n,nu}^{(N)} for entrance-boundary
// chains; the reciprocal sum is validated against S_n.
Spectrum limit_spectrum_entrance(const Rates& rates, Index n, const LimitOptions& opts = {});

struct ErgodicLimit {
  Spectrum spectrum;          // first `count` positive eigenvalues at the final level
  double eigentime_sum = kNaN;  // lim_N sum over ALL positive eigenvalues of 1/lambda
  Index final_level = 0;
};

// Positive spectrum of the conservative chain via reflected truncations.
// No monotonicity theorem covers this family, so only Cauchy stopping is
// applied. The full reciprocal sum converges to the average hitting time.
ErgodicLimit limit_spectrum_ergodic(const Rates& rates, const LimitOptions& opts = {});

}  // namespace bdp
