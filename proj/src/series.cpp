#include "bdp/series.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "bdp/measures.hpp"

namespace bdp {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Finite: return "finite";
    case Verdict::Infinite: return "infinite";
    default: return "undetermined";
  }
}

std::string to_string(BoundaryClass c) {
  switch (c) {
    case BoundaryClass::Regular: return "Regular";
    case BoundaryClass::Exit: return "Exit";
    case BoundaryClass::Entrance: return "Entrance";
    case BoundaryClass::Natural: return "Natural";
    default: return "Undetermined";
  }
}

namespace {

constexpr int kWindow = 16;
constexpr double kDivergencePartial = 1e15;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

SeriesResult finite_result(const std::string& cert, double partial, double tail_bound,
                           Index terms) {
  SeriesResult r;
  r.verdict = Verdict::Finite;
  const double slack = 4e-16 * std::fabs(partial);
  r.value = partial + 0.5 * tail_bound;
  r.error_bound = 0.5 * tail_bound + slack;
  r.certificate = cert;
  r.terms_used = terms;
  return r;
}

SeriesResult infinite_result(const std::string& cert, const std::string& witness, Index terms) {
  SeriesResult r;
  r.verdict = Verdict::Infinite;
  r.value = kInf;
  r.error_bound = 0.0;
  r.certificate = cert;
  r.witness = witness;
  r.terms_used = terms;
  return r;
}

}  // namespace

SeriesResult evaluate_positive_series(const std::function<double(Index)>& log_term, Index start,
                                      const TailPolicy& policy, const SeriesHints& hints) {
  CompensatedSum<double> sum;
  std::deque<double> win;  // last kWindow+1 log-terms
  std::vector<std::pair<Index, double>> checkpoints;
  Index next_checkpoint = 1;

  const ExtReal& rho = hints.ratio_limit;
  const bool rho_above_one = rho.is_infinite() || (rho.is_finite() && rho.value > 1.0);
  const bool rho_below_one = rho.is_zero() || (rho.is_finite() && rho.value < 1.0);
  const bool rho_is_one = rho.is_finite() && rho.value == 1.0;

  auto make_final = [&](SeriesResult r) {
    r.checkpoints = std::move(checkpoints);
    r.partial_sum = sum.value();
    return r;
  };

  for (Index k = 0; k < policy.horizon; ++k) {
    const Index i = start + k;
    const double lt = log_term(i);
    if (std::isnan(lt)) throw std::logic_error(hints.label + ": series term is NaN at i=" + std::to_string(i));
    const double t = std::min(std::exp(lt), 1e300);
    sum.add(t);
    win.push_back(lt);
    if ((Index)win.size() > kWindow + 1) win.pop_front();

    if (k + 1 == next_checkpoint) {
      checkpoints.emplace_back(i, sum.value());
      next_checkpoint *= 2;
    }

    if (sum.value() > kDivergencePartial) {
      return make_final(infinite_result("partial-sum-overflow",
                                        "partial sum exceeded 1e15 after " + std::to_string(k + 1) + " terms",
                                        k + 1));
    }

    if ((Index)win.size() < kWindow + 1) continue;

    // window statistics over the last kWindow ratios
    double max_ratio = 0.0, min_ratio = kInf;
    bool ratios_defined = true;
    for (std::size_t j = 0; j + 1 < win.size(); ++j) {
      double r;
      if (win[j] == -kInf && win[j + 1] == -kInf) {
        r = 0.0;
      } else if (win[j] == -kInf) {
        ratios_defined = false;
        break;
      } else {
        r = std::exp(win[j + 1] - win[j]);
      }
      max_ratio = std::max(max_ratio, r);
      min_ratio = std::min(min_ratio, r);
    }
    if (!ratios_defined) continue;
    const double t_last = std::exp(win.back());

    if (rho_above_one) {
      if (min_ratio >= 1.0 - 1e-9) {
        return make_final(infinite_result(
            "analytic-ratio(" + (rho.is_infinite() ? std::string("inf") : fmt(rho.value)) + ")",
            "term ratio tends to a limit > 1; window ratios all >= 1", k + 1));
      }
    } else if (rho_below_one) {
      const double gate = rho.is_zero() ? 0.5 : 0.5 * (1.0 + rho.value);
      if (max_ratio <= gate) {
        const double qbar = std::max(max_ratio, rho.is_finite() ? rho.value : 0.0);
        const double tail = t_last * qbar / (1.0 - qbar);
        if (tail < policy.abs_tol || tail < 1e-13 * sum.value()) {
          return make_final(finite_result(
              "analytic-ratio(" + (rho.is_zero() ? std::string("0") : fmt(rho.value)) +
                  "), window q=" + fmt(qbar),
              sum.value(), tail, k + 1));
        }
      }
    } else if (rho_is_one && hints.power_exponent) {
      const double kap = *hints.power_exponent;
      if (kap < -1.0) {
        // t_i ~ C i^kap; bound C over the window and use the integral tail
        double cbar = 0.0;
        bool nonincreasing = true;
        for (std::size_t j = 0; j + 1 < win.size(); ++j)
          if (win[j + 1] > win[j] + 1e-12) nonincreasing = false;
        for (std::size_t j = 0; j < win.size(); ++j) {
          const Index idx = i - Index(win.size() - 1 - j);
          if (idx >= 1) cbar = std::max(cbar, std::exp(win[j] - kap * std::log(double(idx))));
        }
        if (nonincreasing) {
          const double tail = cbar * std::pow(double(i), kap + 1.0) / (-kap - 1.0);
          if (tail < policy.abs_tol || tail < 1e-13 * sum.value()) {
            return make_final(finite_result("analytic-power(kappa=" + fmt(kap) + ")", sum.value(),
                                            tail, k + 1));
          }
        }
      } else {
        // terms ~ C i^kap with kap >= -1: divergent once the scale is visible
        double cmin = kInf;
        for (std::size_t j = 0; j < win.size(); ++j) {
          const Index idx = i - Index(win.size() - 1 - j);
          if (idx >= 1) cmin = std::min(cmin, std::exp(win[j] - kap * std::log(double(idx))));
        }
        if (cmin > 0.0 && std::isfinite(cmin)) {
          return make_final(infinite_result("analytic-power(kappa=" + fmt(kap) + ")",
                                            "terms behave like C*i^kappa with kappa >= -1, C >= " + fmt(cmin),
                                            k + 1));
        }
      }
    }

    // empirical geometric-window rule
    if (max_ratio <= 1.0 - policy.delta) {
      const double tail = t_last * max_ratio / (1.0 - max_ratio);
      if (tail < policy.abs_tol || tail < 1e-13 * sum.value()) {
        return make_final(
            finite_result("empirical-geometric(q=" + fmt(max_ratio) + ")", sum.value(), tail, k + 1));
      }
    }
  }

  // horizon exhausted
  if ((Index)win.size() == kWindow + 1) {
    bool nondecreasing = true;
    for (std::size_t j = 0; j + 1 < win.size(); ++j)
      if (win[j + 1] < win[j] - 1e-12) nondecreasing = false;
    if (nondecreasing && win.back() > -kInf) {
      return make_final(infinite_result("horizon-nondecreasing",
                                        "terms nondecreasing through the horizon, last term " +
                                            fmt(std::exp(win.back())),
                                        policy.horizon));
    }
  }
  SeriesResult r;
  r.verdict = Verdict::Undetermined;
  r.witness = "no decision rule fired within horizon " + std::to_string(policy.horizon) +
              "; last partial sum " + fmt(sum.value());
  r.terms_used = policy.horizon;
  r.checkpoints = std::move(checkpoints);
  r.partial_sum = sum.value();
  return r;
}

namespace detail {

// Incrementally extended log-domain table of mu and its prefix sums.
struct MuLogs {
  const Rates* rates;
  std::vector<double> lmu;   // log mu_i
  std::vector<double> lpre;  // log sum_{j<=i} mu_j
  std::vector<double> la;    // log a_i (entry 0 unused)
  std::vector<double> lb;    // log b_i

  explicit MuLogs(const Rates& r) : rates(&r) {
    lmu = {0.0};
    lpre = {0.0};
    la = {kNaN};
    lb = {r.log_b(0)};
  }

  void extend(Index upto) {
    while ((Index)lmu.size() <= upto) {
      const Index i = (Index)lmu.size();
      la.push_back(rates->log_a(i));
      const double v = lmu[i - 1] + lb[i - 1] - la[i];
      lmu.push_back(v);
      lpre.push_back(log_add_exp(lpre[i - 1], v));
      lb.push_back(rates->log_b(i));
    }
  }

  // mu_{i+1}/mu_i
  double ratio(Index i) {
    extend(i + 1);
    return std::exp(lb[i] - la[i + 1]);
  }
};

// log of a certified bound on sum_{i>h} mu_i, or +inf when none is
// available. Closed-form families have monotone mu-ratios past their
// table, so sup_{i>=h} ratio = max(ratio(h), lim); pure evaluators fall
// back to an observed-window bound with the policy margin.
double log_mu_tail_bound(MuLogs& ml, const RateAsymptotics& asym, Index h,
                         const TailPolicy& policy) {
  ml.extend(h + 1);
  double rbar;
  if (asym.known() && h >= asym.stable_from) {
    const ExtReal rho = asym.mu_ratio();
    if (rho.is_infinite()) return kInf;
    rbar = ml.ratio(h);
    if (rho.is_finite()) rbar = std::max(rbar, rho.value);
  } else {
    rbar = 0.0;
    for (Index i = std::max<Index>(0, h - kWindow); i <= h; ++i) rbar = std::max(rbar, ml.ratio(i));
    if (rbar > 1.0 - policy.delta) return kInf;
  }
  if (!(rbar < 1.0)) return kInf;
  return ml.lmu[h + 1] - std::log1p(-rbar);
}

SeriesHints hints_R(const RateAsymptotics& asym) {
  SeriesHints h;
  h.label = "R";
  if (!asym.known()) return h;
  const ExtReal rmu = asym.mu_ratio();
  if (rmu.is_unknown()) return h;
  if (rmu.is_infinite() || (rmu.is_finite() && rmu.value > 1.0)) {
    h.ratio_limit = ext_reciprocal(asym.b_step());
    if (asym.b_class.kind == GrowthClass::Kind::Polynomial) h.power_exponent = -asym.b_class.expo;
  } else {
    // mu bounded (ratio <= 1): prefix sums grow at most linearly
    h.ratio_limit = asym.a_over_b();
    if (rmu.is_finite() && rmu.value == 1.0 && h.ratio_limit.is_finite() &&
        h.ratio_limit.value == 1.0 && asym.b_class.kind == GrowthClass::Kind::Polynomial) {
      h.power_exponent = 1.0 - asym.b_class.expo;
    }
  }
  return h;
}

SeriesHints hints_S(const RateAsymptotics& asym) {
  SeriesHints h;
  h.label = "S";
  if (!asym.known()) return h;
  const ExtReal rmu = asym.mu_ratio();
  if (rmu.is_zero() || (rmu.is_finite() && rmu.value < 1.0)) {
    h.ratio_limit = ext_reciprocal(asym.a_step());
    if (asym.a_class.kind == GrowthClass::Kind::Polynomial) h.power_exponent = -asym.a_class.expo;
  }
  return h;
}

SeriesHints hints_mu(const RateAsymptotics& asym) {
  SeriesHints h;
  h.label = "mu";
  if (!asym.known()) return h;
  h.ratio_limit = asym.mu_ratio();
  if (h.ratio_limit.is_finite() && h.ratio_limit.value == 1.0) h.power_exponent = 0.0;
  return h;
}

SeriesHints hints_inv_mub(const RateAsymptotics& asym) {
  SeriesHints h;
  h.label = "inv_mub";
  if (!asym.known()) return h;
  h.ratio_limit = asym.a_over_b();
  if (h.ratio_limit.is_finite() && h.ratio_limit.value == 1.0) {
    if (asym.a_class.kind == GrowthClass::Kind::Geometric) {
      h.power_exponent = 0.0;
    } else {
      h.power_exponent = -asym.b_class.expo;
    }
  }
  return h;
}

// Shared skeleton for the suffix-sum series S_n and T: both need
// Suf_j = sum_{i>j} mu_i, which is only available up to a working
// horizon plus a certified mu tail. The horizon doubles until the
// series decides within it or the policy horizon is exhausted.
struct SuffixSeriesSpec {
  Index start = 0;
  bool weight_by_prefix = false;  // T multiplies by H_j = M_j / mu_total
  SeriesHints hints;
};

SeriesResult suffix_series(const Rates& rates, const TailPolicy& policy,
                           const SuffixSeriesSpec& spec, const SeriesResult& mu_total) {
  const RateAsymptotics asym = rates.asymptotics();
  MuLogs ml(rates);

  Index h = std::max<Index>(spec.start + 128, 256);
  const Index h_max = spec.start + policy.horizon + 4096;
  SeriesResult last;
  while (true) {
    ml.extend(h + 1);
    const double ltail = log_mu_tail_bound(ml, asym, h, policy);
    if (ltail == kInf) {
      SeriesResult r;
      r.verdict = Verdict::Undetermined;
      r.witness = spec.hints.label + ": mu tail not certifiable at working horizon " +
                  std::to_string(h);
      return r;
    }
    // backward suffix logs over [start, h]
    std::vector<double> lsuf(std::size_t(h - spec.start + 1));
    lsuf[std::size_t(h - spec.start)] = -kInf;
    for (Index j = h - 1; j >= spec.start; --j)
      lsuf[std::size_t(j - spec.start)] =
          log_add_exp(lsuf[std::size_t(j + 1 - spec.start)], ml.lmu[std::size_t(j + 1)]);

    const double lmu_total = log_add_exp(ml.lpre[std::size_t(h)], ltail - std::log(2.0));

    // terms are valid while the suffix truncation is negligible
    Index j_cap = spec.start;
    for (Index j = spec.start; j < h; ++j) {
      const double rel = ltail - lsuf[std::size_t(j - spec.start)];
      if (rel > std::log(1e-13)) break;
      j_cap = j + 1;
    }
    if (j_cap > spec.start) {
      TailPolicy local = policy;
      local.horizon = std::min<Index>(policy.horizon, j_cap - spec.start);
      auto log_term = [&](Index j) {
        double lt = lsuf[std::size_t(j - spec.start)] - ml.lmu[std::size_t(j)] -
                    ml.lb[std::size_t(j)];
        if (spec.weight_by_prefix) lt += ml.lpre[std::size_t(j)] - lmu_total;
        return lt;
      };
      SeriesResult r = evaluate_positive_series(log_term, spec.start, local, spec.hints);
      if (!(r.verdict == Verdict::Undetermined && local.horizon < policy.horizon)) {
        if (r.finite()) {
          // suffix-truncation bracket: each term was underestimated by
          // at most exp(ltail - lmu_j - lb_j)
          CompensatedSum<double> extra;
          for (Index j = spec.start; j < spec.start + r.terms_used; ++j)
            extra.add(std::exp(ltail - ml.lmu[std::size_t(j)] - ml.lb[std::size_t(j)]));
          r.value += 0.5 * extra.value();
          r.error_bound += 0.5 * extra.value();
          // mu_total midpoint uncertainty for the T weighting
          if (spec.weight_by_prefix) {
            const double rel = std::exp(ltail - lmu_total);
            r.error_bound += rel * std::fabs(r.value);
          }
        }
        return r;
      }
      last = r;
    }
    if (h >= h_max) {
      SeriesResult r = last;
      r.verdict = Verdict::Undetermined;
      if (r.witness.empty())
        r.witness = spec.hints.label + ": undecided at maximal working horizon " + std::to_string(h);
      return r;
    }
    h = std::min(h_max, 2 * h);
  }
  (void)mu_total;
}

}  // namespace detail

SeriesResult series_mu(const Rates& rates, const TailPolicy& policy) {
  detail::MuLogs ml(rates);
  auto log_term = [&](Index i) {
    ml.extend(i);
    return ml.lmu[std::size_t(i)];
  };
  return evaluate_positive_series(log_term, 0, policy, detail::hints_mu(rates.asymptotics()));
}

SeriesResult series_R(const Rates& rates, const TailPolicy& policy) {
  detail::MuLogs ml(rates);
  auto log_term = [&](Index i) {
    ml.extend(i);
    return ml.lpre[std::size_t(i)] - ml.lmu[std::size_t(i)] - ml.lb[std::size_t(i)];
  };
  return evaluate_positive_series(log_term, 0, policy, detail::hints_R(rates.asymptotics()));
}

SeriesResult series_S(const Rates& rates, Index n, const TailPolicy& policy) {
  if (n < 0) throw std::invalid_argument("series_S: n >= 0 required");
  SeriesResult mu_total = series_mu(rates, policy);
  if (mu_total.infinite())
    return [&] {
      SeriesResult r;
      r.verdict = Verdict::Infinite;
      r.value = kInf;
      r.error_bound = 0.0;
      r.certificate = "mu-infinite";
      r.witness = "mu = sum mu_i diverges, so every inner sum sum_{i>j} mu_i diverges";
      return r;
    }();
  if (!mu_total.finite()) {
    SeriesResult r;
    r.verdict = Verdict::Undetermined;
    r.witness = "mu verdict undetermined: " + mu_total.witness;
    return r;
  }
  detail::SuffixSeriesSpec spec;
  spec.start = n;
  spec.hints = detail::hints_S(rates.asymptotics());
  return detail::suffix_series(rates, policy, spec, mu_total);
}

SeriesResult series_T(const Rates& rates, const TailPolicy& policy) {
  SeriesResult mu_total = series_mu(rates, policy);
  if (mu_total.infinite()) {
    SeriesResult r;
    r.verdict = Verdict::Infinite;
    r.value = kInf;
    r.error_bound = 0.0;
    r.certificate = "mu-infinite";
    r.witness = "pi undefined (mu = inf), T = inf";
    return r;
  }
  if (!mu_total.finite()) {
    SeriesResult r;
    r.verdict = Verdict::Undetermined;
    r.witness = "mu verdict undetermined: " + mu_total.witness;
    return r;
  }
  detail::SuffixSeriesSpec spec;
  spec.start = 0;
  spec.weight_by_prefix = true;
  spec.hints = detail::hints_S(rates.asymptotics());
  spec.hints.label = "T";
  return detail::suffix_series(rates, policy, spec, mu_total);
}

SeriesResult series_inv_mub(const Rates& rates, const TailPolicy& policy) {
  detail::MuLogs ml(rates);
  auto log_term = [&](Index i) {
    ml.extend(i);
    return -ml.lmu[std::size_t(i)] - ml.lb[std::size_t(i)];
  };
  return evaluate_positive_series(log_term, 0, policy, detail::hints_inv_mub(rates.asymptotics()));
}

SeriesResult series_u1(const Rates& rates, const TailPolicy& policy) {
  const SeriesResult inv = series_inv_mub(rates, policy);
  const SeriesResult mu = series_mu(rates, policy);
  SeriesResult r;
  if (inv.infinite() || mu.infinite()) {
    r.verdict = Verdict::Infinite;
    r.value = kInf;
    r.error_bound = 0.0;
    r.certificate = "component-divergence";
    r.witness = inv.infinite() ? "sum 1/(mu_i b_i) diverges: " + inv.witness
                               : "sum mu_i diverges: " + mu.witness;
  } else if (inv.finite() && mu.finite()) {
    r.verdict = Verdict::Finite;
    r.value = inv.value + mu.value;
    r.error_bound = inv.error_bound + mu.error_bound;
    r.certificate = "sum of parts [" + inv.certificate + "; " + mu.certificate + "]";
    r.terms_used = std::max(inv.terms_used, mu.terms_used);
  } else {
    r.verdict = Verdict::Undetermined;
    r.witness = "components undecided";
  }
  return r;
}

BoundaryReport classify_boundary(const Rates& rates, const TailPolicy& policy) {
  BoundaryReport rep;
  rep.R = series_R(rates, policy);
  rep.S = series_S(rates, 0, policy);
  rep.T = series_T(rates, policy);
  rep.mu_total = series_mu(rates, policy);
  rep.inv_mub = series_inv_mub(rates, policy);
  rep.u1 = series_u1(rates, policy);

  std::ostringstream notes;
  bool consistent = true;
  if (rep.S.finite() && !rep.mu_total.finite()) {
    consistent = false;
    notes << "inconsistent certificates: S finite requires mu finite; ";
  }
  if (rep.R.finite() && rep.inv_mub.infinite()) {
    consistent = false;
    notes << "inconsistent certificates: R finite requires sum 1/(mu_i b_i) finite; ";
  }

  if (!consistent || rep.R.verdict == Verdict::Undetermined ||
      rep.S.verdict == Verdict::Undetermined) {
    rep.classification = BoundaryClass::Undetermined;
  } else if (rep.R.finite() && rep.S.infinite()) {
    rep.classification = BoundaryClass::Exit;
  } else if (rep.R.infinite() && rep.S.finite()) {
    rep.classification = BoundaryClass::Entrance;
  } else if (rep.R.finite() && rep.S.finite()) {
    rep.classification = BoundaryClass::Regular;
  } else {
    rep.classification = BoundaryClass::Natural;
  }

  rep.dirichlet_unique = rep.u1.infinite();
  if (rep.classification == BoundaryClass::Regular && rep.u1.finite())
    notes << "regular boundary with convergent uniqueness series: process not unique; ";
  rep.notes = notes.str();
  return rep;
}

}  // namespace bdp
