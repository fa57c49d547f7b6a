#include "bdp/spectrum.hpp"

#include <cmath>
#include <sstream>

#include "bdp/errors.hpp"

namespace bdp {

namespace {

double reciprocal_sum_of(const std::vector<double>& v) {
  CompensatedSum<double> s;
  for (double x : v) s.add(1.0 / x);
  return s.value();
}

void assert_simple_positive(const std::vector<double>& v, bool require_positive,
                            const std::string& what) {
  if (v.empty()) return;
  const double lmax = std::fabs(v.back());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (require_positive && !(v[i] > 0.0)) {
      std::ostringstream os;
      os << what << ": eigenvalue " << i << " = " << v[i] << " is not positive";
      throw IdentityViolation(os.str());
    }
    if (i > 0 && !(v[i] - v[i - 1] > 1e-14 * lmax)) {
      std::ostringstream os;
      os << what << ": eigenvalue gap collapse at index " << i << " (" << v[i - 1] << ", " << v[i]
         << ")";
      throw IdentityViolation(os.str());
    }
  }
}

// largest rate magnitude on the window; guards the natural-unit budget
double window_scale(const GeneratorMatrix& g) {
  double s = 0.0;
  for (Index i = 0; i < g.dim(); ++i) s = std::max(s, std::fabs(g.diag[i]));
  return s;
}

}  // namespace

Spectrum eigen_spectrum(const GeneratorMatrix& g, double reltol) {
  SymTridiag<double> J = symmetrize(g);
  std::vector<double> vals = tridiag_eigenvalues_all(J, reltol);

  Spectrum s;
  s.kind = g.kind;
  s.start = g.n;
  s.level = (g.kind == GeneratorKind::AbsorbedAtTop) ? g.n : g.N;

  if (g.kind == GeneratorKind::ErgodicReflected) {
    // conservative window: lambda_0 = 0 structurally; verify and drop
    const double scale = window_scale(g);
    if (std::fabs(vals.front()) > 1e-10 * scale) {
      std::ostringstream os;
      os << "ergodic-reflected window: smallest eigenvalue " << vals.front()
         << " is not numerically zero (scale " << scale << ")";
      throw IdentityViolation(os.str());
    }
    vals.erase(vals.begin());
  }
  assert_simple_positive(vals, true, to_string(g.kind));
  s.values = std::move(vals);
  s.reciprocal_sum = reciprocal_sum_of(s.values);
  return s;
}

namespace {

struct DoublingResult {
  std::vector<double> values;
  Index final_level = 0;
  double max_rel_change = kNaN;
  bool budget_exhausted = false;
};

// Drive the first `count` eigenvalues of kind-specific truncations over a
// doubling schedule until the relative Cauchy criterion holds.
DoublingResult drive_doubling(
    const std::function<GeneratorMatrix(Index)>& build, Index count, Index level0,
    const LimitOptions& opts, bool assert_monotone, const char* what) {
  DoublingResult out;
  std::vector<double> prev;
  Index level = level0;
  while (true) {
    GeneratorMatrix g = build(level);
    if (window_scale(g) > 1e150) {
      // natural-unit budget: rates beyond this would spoil the Sturm
      // recurrence; report the last converged values as partial
      out.budget_exhausted = true;
      out.values = prev;
      return out;
    }
    SymTridiag<double> J = symmetrize(g);
    std::vector<double> cur = tridiag_eigenvalues(J, 0, count - 1, 1e-13);
    if (g.kind == GeneratorKind::ErgodicReflected) cur.erase(cur.begin());
    assert_simple_positive(cur, g.kind != GeneratorKind::ErgodicReflected, what);

    if (!prev.empty()) {
      double worst = 0.0;
      for (std::size_t k = 0; k < prev.size() && k < cur.size(); ++k) {
        if (assert_monotone && cur[k] > prev[k] * (1.0 + 1e-11)) {
          std::ostringstream os;
          os << what << ": eigenvalue " << k << " increased across the doubling step ("
             << prev[k] << " -> " << cur[k] << " at level " << level
             << "), violating the monotone-limit theorem";
          throw IdentityViolation(os.str());
        }
        worst = std::max(worst, std::fabs(cur[k] - prev[k]) / cur[k]);
      }
      out.max_rel_change = worst;
      if (worst < opts.tol) {
        out.values = std::move(cur);
        out.final_level = level;
        return out;
      }
    }
    if (level >= opts.max_level) {
      out.values = std::move(cur);
      out.final_level = level;
      out.budget_exhausted = true;
      return out;
    }
    prev = std::move(cur);
    level = std::min(opts.max_level, 2 * level);
  }
}

Spectrum limit_driver(const Rates& rates, Index n_for_entrance, bool exit_kind,
                      const LimitOptions& opts) {
  const SeriesResult target = exit_kind ? series_R(rates, opts.policy)
                                        : series_S(rates, n_for_entrance, opts.policy);
  const char* what = exit_kind ? "limit_spectrum_exit" : "limit_spectrum_entrance";
  if (!target.finite())
    throw PreconditionError(std::string(what) + ": eigentime series is not certified finite");

  Index count = opts.count;
  const bool auto_count = (count == 0);
  if (auto_count) count = 8;

  while (true) {
    auto build = [&](Index level) {
      return exit_kind ? build_absorbed_top(rates, level)
                       : build_absorbed_bottom_reflected_top(rates, n_for_entrance,
                                                             n_for_entrance + level);
    };
    const Index level0 = std::max<Index>(2 * count, 8);
    DoublingResult dr = drive_doubling(build, count, level0, opts, true, what);
    if (dr.values.empty())
      throw PreconditionError(std::string(what) + ": truncation budget exhausted before any converged level");

    Spectrum s;
    s.kind = exit_kind ? GeneratorKind::AbsorbedAtTop : GeneratorKind::AbsorbedBottomReflectedTop;
    s.start = n_for_entrance;
    s.values = dr.values;
    s.reciprocal_sum = reciprocal_sum_of(dr.values);
    s.truncated_infinite = true;
    s.final_level = dr.final_level;
    s.level = dr.final_level;
    s.max_rel_change = dr.max_rel_change;
    s.budget_exhausted = dr.budget_exhausted;

    // the eigentime identity gives the certified tail
    const double slack = target.error_bound + 1e-9 * target.value;
    if (s.reciprocal_sum > target.value + slack) {
      std::ostringstream os;
      os << what << ": partial reciprocal sum " << s.reciprocal_sum
         << " exceeds the eigentime series " << target.value << " (+" << slack << ")";
      throw IdentityViolation(os.str());
    }
    s.tail_bound = std::max(0.0, target.value + target.error_bound - s.reciprocal_sum);

    if (!auto_count || s.tail_bound <= opts.tail_rel_tol * target.value || s.budget_exhausted ||
        count >= 4096)
      return s;
    count *= 2;
  }
}

}  // namespace

Spectrum limit_spectrum_exit(const Rates& rates, const LimitOptions& opts) {
  const BoundaryReport rep = classify_boundary(rates, opts.policy);
  if (rep.classification != BoundaryClass::Exit) {
    throw PreconditionError("limit_spectrum_exit requires an exit-boundary chain; classification is " +
                            to_string(rep.classification));
  }
  return limit_driver(rates, 0, true, opts);
}

Spectrum limit_spectrum_entrance(const Rates& rates, Index n, const LimitOptions& opts) {
  if (n < 0) throw std::invalid_argument("limit_spectrum_entrance: n >= 0");
  const BoundaryReport rep = classify_boundary(rates, opts.policy);
  if (rep.classification != BoundaryClass::Entrance) {
    throw PreconditionError(
        "limit_spectrum_entrance requires an entrance-boundary chain; classification is " +
        to_string(rep.classification));
  }
  return limit_driver(rates, n, false, opts);
}

ErgodicLimit limit_spectrum_ergodic(const Rates& rates, const LimitOptions& opts) {
  Index count = opts.count > 0 ? opts.count : 8;
  ErgodicLimit out;
  std::vector<double> prev;
  double prev_sum = kNaN;
  Index level = std::max<Index>(2 * count, 16);
  while (true) {
    GeneratorMatrix g = build_ergodic_reflected(rates, level);
    if (window_scale(g) > 1e150) {
      out.spectrum.budget_exhausted = true;
      break;
    }
    Spectrum s = eigen_spectrum(g, 1e-13);
    const double full_sum = s.reciprocal_sum;
    std::vector<double> head(s.values.begin(),
                             s.values.begin() + std::min<std::size_t>(s.values.size(), std::size_t(count)));
    bool done = false;
    if (!prev.empty() && std::isfinite(prev_sum)) {
      double worst = std::fabs(full_sum - prev_sum) / full_sum;
      for (std::size_t k = 0; k < prev.size() && k < head.size(); ++k)
        worst = std::max(worst, std::fabs(head[k] - prev[k]) / head[k]);
      out.spectrum.max_rel_change = worst;
      done = worst < opts.tol;
    }
    out.spectrum.values = head;
    out.spectrum.kind = GeneratorKind::ErgodicReflected;
    out.spectrum.level = level;
    out.spectrum.final_level = level;
    out.spectrum.truncated_infinite = true;
    out.spectrum.reciprocal_sum = reciprocal_sum_of(head);
    out.eigentime_sum = full_sum;
    out.final_level = level;
    if (done) break;
    if (level >= opts.max_level) {
      out.spectrum.budget_exhausted = true;
      break;
    }
    prev = std::move(head);
    prev_sum = full_sum;
    level = std::min(opts.max_level, 2 * level);
  }
  return out;
}

}  // namespace bdp
