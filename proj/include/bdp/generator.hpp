#pragma once

#include <Eigen/Dense>

#include "bdp/numeric.hpp"
#include "bdp/rates.hpp"
#include "bdp/tridiag.hpp"

namespace bdp {

enum class GeneratorKind {
  AbsorbedAtTop,              // states 0..n-1, killed at n through b_{n-1}
  AbsorbedBottomReflectedTop, // states n+1..N, killed at n through a_{n+1}, reflected at N
  ErgodicReflected,           // states 0..N, conservative (reflected at N)
};

std::string to_string(GeneratorKind k);

// Tridiagonal generator window. `sub[i]` couples row i+1 to row i (an a
// rate), `super[i]` couples row i to row i+1 (a b rate). log_weight is
// log mu restricted to the window, the diagonal symmetrizer.
struct GeneratorMatrix {
  GeneratorKind kind = GeneratorKind::AbsorbedAtTop;
  Index first_state = 0;
  Index n = 0;  // absorbing level parameter
  Index N = 0;  // reflecting level (reflected kinds)
  Eigen::VectorXd diag;
  Eigen::VectorXd super;
  Eigen::VectorXd sub;
  Eigen::VectorXd log_weight;

  Index dim() const { return Index(diag.size()); }
};

// Q^{(n)}: the chain on 0..n-1 absorbed at n.
GeneratorMatrix build_absorbed_top(const Rates& rates, Index n);

// Qhat_n^{(N)}: the chain on n+1..N absorbed at n and reflected at N.
GeneratorMatrix build_absorbed_bottom_reflected_top(const Rates& rates, Index n, Index N);

// The conservative chain truncated to 0..N with reflection at N.
GeneratorMatrix build_ergodic_reflected(const Rates& rates, Index N);

// J = sqrt(mu)-similarity transform of -g: J_ii = -diag_i,
// J_{i,i+1} = -sqrt(super_i * sub_i); spectra of J and -g coincide.
SymTridiag<double> symmetrize(const GeneratorMatrix& g);

struct DirichletResidualEntry {
  double lambda = kNaN;
  double dirichlet_form = kNaN;  // D(f) including the killing boundary term
  double l2_norm = kNaN;         // mu(f^2)
  double relative_residual = kNaN;
  bool pass = false;
};

struct DirichletResidualReport {
  std::vector<DirichletResidualEntry> entries;
  double max_relative_residual = 0.0;
  double tol = 0.0;
  bool all_pass = true;
};

// For each eigenvalue, recover the eigenvector by inverse iteration and
// check the quadratic-form identity D(f) = lambda * mu(f^2) on the
// window. Evaluated in sqrt(mu)-coordinates, where the difference form
// is sum_i (sqrt(b_i) v_i - sqrt(a_{i+1}) v_{i+1})^2 plus the killing
// term, so the huge dynamic range of mu never materializes.
DirichletResidualReport dirichlet_residual(const GeneratorMatrix& g,
                                           const std::vector<double>& eigenvalues, double tol);

}  // namespace bdp
