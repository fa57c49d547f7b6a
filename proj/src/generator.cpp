#include "bdp/generator.hpp"

#include <cmath>
#include <sstream>

namespace bdp {

std::string to_string(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::AbsorbedAtTop: return "absorbed-top";
    case GeneratorKind::AbsorbedBottomReflectedTop: return "absorbed-bottom-reflected-top";
    default: return "ergodic-reflected";
  }
}

namespace {

void check_rate_window(const Rates& rates, Index lo_a, Index hi_a, Index lo_b, Index hi_b) {
  // builders work in natural units; reject windows whose rates leave
  // double range instead of silently saturating
  for (Index i = lo_a; i <= hi_a; ++i)
    if (!std::isfinite(rates.a(i))) throw std::domain_error("rate a overflows double in window");
  for (Index i = lo_b; i <= hi_b; ++i)
    if (!std::isfinite(rates.b(i))) throw std::domain_error("rate b overflows double in window");
}

Eigen::VectorXd window_log_mu(const Rates& rates, Index lo, Index hi) {
  Eigen::VectorXd w(hi - lo + 1);
  double lmu = 0.0;
  for (Index i = 1; i <= hi; ++i) {
    lmu += rates.log_b(i - 1) - rates.log_a(i);
    if (i >= lo) w[i - lo] = lmu;
  }
  if (lo == 0) w[0] = 0.0;
  return w;
}

}  // namespace

GeneratorMatrix build_absorbed_top(const Rates& rates, Index n) {
  if (n < 1) throw std::invalid_argument("build_absorbed_top: n >= 1 required");
  check_rate_window(rates, 1, n - 1 >= 1 ? n - 1 : 1, 0, n - 1);
  GeneratorMatrix g;
  g.kind = GeneratorKind::AbsorbedAtTop;
  g.first_state = 0;
  g.n = n;
  g.diag.resize(n);
  g.super.resize(n - 1);
  g.sub.resize(n - 1);
  g.diag[0] = -rates.b(0);
  for (Index i = 1; i < n; ++i) g.diag[i] = -(rates.a(i) + rates.b(i));
  for (Index i = 0; i + 1 < n; ++i) {
    g.super[i] = rates.b(i);
    g.sub[i] = rates.a(i + 1);
  }
  g.log_weight = window_log_mu(rates, 0, n - 1);
  return g;
}

GeneratorMatrix build_absorbed_bottom_reflected_top(const Rates& rates, Index n, Index N) {
  if (!(0 <= n && n < N))
    throw std::invalid_argument("build_absorbed_bottom_reflected_top: 0 <= n < N required");
  check_rate_window(rates, n + 1, N, n + 1, N - 1 >= n + 1 ? N - 1 : n + 1);
  const Index m = N - n;  // states n+1..N
  GeneratorMatrix g;
  g.kind = GeneratorKind::AbsorbedBottomReflectedTop;
  g.first_state = n + 1;
  g.n = n;
  g.N = N;
  g.diag.resize(m);
  g.super.resize(m - 1);
  g.sub.resize(m - 1);
  for (Index r = 0; r < m; ++r) {
    const Index state = n + 1 + r;
    g.diag[r] = (state == N) ? -rates.a(N) : -(rates.a(state) + rates.b(state));
  }
  for (Index r = 0; r + 1 < m; ++r) {
    const Index state = n + 1 + r;
    g.super[r] = rates.b(state);
    g.sub[r] = rates.a(state + 1);
  }
  g.log_weight = window_log_mu(rates, n + 1, N);
  return g;
}

GeneratorMatrix build_ergodic_reflected(const Rates& rates, Index N) {
  if (N < 1) throw std::invalid_argument("build_ergodic_reflected: N >= 1 required");
  check_rate_window(rates, 1, N, 0, N - 1);
  GeneratorMatrix g;
  g.kind = GeneratorKind::ErgodicReflected;
  g.first_state = 0;
  g.N = N;
  const Index m = N + 1;
  g.diag.resize(m);
  g.super.resize(m - 1);
  g.sub.resize(m - 1);
  g.diag[0] = -rates.b(0);
  for (Index i = 1; i < N; ++i) g.diag[i] = -(rates.a(i) + rates.b(i));
  g.diag[N] = -rates.a(N);
  for (Index i = 0; i < N; ++i) {
    g.super[i] = rates.b(i);
    g.sub[i] = rates.a(i + 1);
  }
  g.log_weight = window_log_mu(rates, 0, N);
  return g;
}

SymTridiag<double> symmetrize(const GeneratorMatrix& g) {
  const Index m = g.dim();
  SymTridiag<double> J;
  J.diag.resize(std::size_t(m));
  J.off.resize(std::size_t(m - 1));
  for (Index i = 0; i < m; ++i) J.diag[std::size_t(i)] = -g.diag[i];
  for (Index i = 0; i + 1 < m; ++i) {
    const double p = g.super[i] * g.sub[i];
    if (!(p > 0.0) || !std::isfinite(p))
      throw std::domain_error("symmetrize: off-diagonal product b_i * a_{i+1} must be positive");
    J.off[std::size_t(i)] = -std::sqrt(p);
  }
  return J;
}

DirichletResidualReport dirichlet_residual(const GeneratorMatrix& g,
                                           const std::vector<double>& eigenvalues, double tol) {
  const Index m = g.dim();
  const SymTridiag<double> J = symmetrize(g);
  DirichletResidualReport rep;
  rep.tol = tol;
  for (double lambda : eigenvalues) {
    const std::vector<double> v = tridiag_eigenvector(J, lambda);
    // D(f) in sqrt(mu)-coordinates: edge terms plus the killing term
    CompensatedSum<double> dform;
    for (Index i = 0; i + 1 < m; ++i) {
      const double d = std::sqrt(g.super[i]) * v[std::size_t(i)] -
                       std::sqrt(g.sub[i]) * v[std::size_t(i + 1)];
      dform.add(d * d);
    }
    if (g.kind == GeneratorKind::AbsorbedAtTop) {
      // mu_{n-1} b_{n-1} f_{n-1}^2 = b_{n-1} v_{n-1}^2
      dform.add((-g.diag[m - 1] - (m >= 2 ? g.sub[m - 2] : 0.0)) * v[std::size_t(m - 1)] *
                v[std::size_t(m - 1)]);
    } else if (g.kind == GeneratorKind::AbsorbedBottomReflectedTop) {
      // mu_n b_n f_{n+1}^2 = a_{n+1} mu_{n+1} f_{n+1}^2 = a_{n+1} v_0^2
      dform.add((-g.diag[0] - (m >= 2 ? g.super[0] : 0.0)) * v[0] * v[0]);
    }
    double norm2 = 0.0;
    for (double x : v) norm2 += x * x;

    DirichletResidualEntry e;
    e.lambda = lambda;
    e.dirichlet_form = dform.value();
    e.l2_norm = norm2;
    e.relative_residual = std::fabs(dform.value() - lambda * norm2) / (lambda * norm2);
    e.pass = e.relative_residual <= tol;
    rep.max_relative_residual = std::max(rep.max_relative_residual, e.relative_residual);
    rep.all_pass = rep.all_pass && e.pass;
    rep.entries.push_back(e);
  }
  return rep;
}

}  // namespace bdp
