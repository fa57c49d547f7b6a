#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bdp/numeric.hpp"

namespace bdp {

// Symmetric tridiagonal matrix. Templated on the scalar so the same
// bisection code runs in double and in multiprecision where cancellation
// demands it.
template <typename Scalar>
struct SymTridiag {
  std::vector<Scalar> diag;
  std::vector<Scalar> off;  // off.size() == diag.size() - 1

  Index dim() const { return Index(diag.size()); }
};

namespace tridiag_detail {

template <typename Scalar>
Scalar scale_of(const SymTridiag<Scalar>& T) {
  using std::abs;
  Scalar s(0);
  for (const Scalar& d : T.diag) s = std::max(s, Scalar(abs(d)));
  for (const Scalar& e : T.off) s = std::max(s, Scalar(abs(e)));
  return s;
}

template <typename Scalar>
Scalar pivmin_of(const SymTridiag<Scalar>& T) {
  using std::abs;
  Scalar e2max(1);
  for (const Scalar& e : T.off) e2max = std::max(e2max, e * e);
  return std::numeric_limits<Scalar>::min() * e2max;
}

}  // namespace tridiag_detail

// Number of eigenvalues of T strictly below x, by the Sturm sign-count
// of the shifted LDL^T recurrence.
template <typename Scalar>
Index sturm_count_below(const SymTridiag<Scalar>& T, const Scalar& x, const Scalar& pivmin) {
  using std::abs;
  const Index n = T.dim();
  Index count = 0;
  Scalar d = T.diag[0] - x;
  if (abs(d) < pivmin) d = -pivmin;
  if (d < Scalar(0)) ++count;
  for (Index i = 1; i < n; ++i) {
    d = T.diag[std::size_t(i)] - x - T.off[std::size_t(i - 1)] * T.off[std::size_t(i - 1)] / d;
    if (abs(d) < pivmin) d = -pivmin;
    if (d < Scalar(0)) ++count;
  }
  return count;
}

// Eigenvalues with indices [k_lo, k_hi] (0-based, ascending) by bisection.
// Each eigenvalue is bracketed to relative width `reltol` (floored at a
// few ulps of the matrix scale).
template <typename Scalar>
std::vector<Scalar> tridiag_eigenvalues(const SymTridiag<Scalar>& T, Index k_lo, Index k_hi,
                                        double reltol) {
  using std::abs;
  const Index n = T.dim();
  if (n == 0) return {};
  if (!(0 <= k_lo && k_lo <= k_hi && k_hi < n))
    throw std::invalid_argument("tridiag_eigenvalues: bad index range");

  const Scalar pivmin = tridiag_detail::pivmin_of(T);

  // Gershgorin bounds
  Scalar glo = T.diag[0], ghi = T.diag[0];
  for (Index i = 0; i < n; ++i) {
    Scalar r(0);
    if (i > 0) r += abs(T.off[std::size_t(i - 1)]);
    if (i + 1 < n) r += abs(T.off[std::size_t(i)]);
    glo = std::min(glo, T.diag[std::size_t(i)] - r);
    ghi = std::max(ghi, T.diag[std::size_t(i)] + r);
  }
  const Scalar span = ghi - glo;
  glo -= std::numeric_limits<Scalar>::epsilon() * (abs(glo) + span) + pivmin;
  ghi += std::numeric_limits<Scalar>::epsilon() * (abs(ghi) + span) + pivmin;

  const Scalar rtol = Scalar(reltol);
  const Scalar eps4 = Scalar(4) * std::numeric_limits<Scalar>::epsilon();

  std::vector<Scalar> out;
  out.reserve(std::size_t(k_hi - k_lo + 1));
  for (Index k = k_lo; k <= k_hi; ++k) {
    Scalar lo = glo, hi = ghi;
    // eigenvalue k lies in (lo, hi]; invariant: count(lo) <= k < count(hi)
    while (true) {
      const Scalar width = hi - lo;
      const Scalar gate =
          std::max(rtol, eps4) * std::max(abs(lo), abs(hi)) + Scalar(2) * pivmin;
      if (width <= gate) break;
      const Scalar mid = lo + width / Scalar(2);
      if (mid <= lo || mid >= hi) break;  // interval at rounding resolution
      if (sturm_count_below(T, mid, pivmin) <= k)
        lo = mid;
      else
        hi = mid;
    }
    out.push_back(lo + (hi - lo) / Scalar(2));
  }
  return out;
}

template <typename Scalar>
std::vector<Scalar> tridiag_eigenvalues_all(const SymTridiag<Scalar>& T, double reltol) {
  return tridiag_eigenvalues(T, 0, T.dim() - 1, reltol);
}

// Inverse iteration for the eigenvector of an isolated eigenvalue.
// Tridiagonal solve with partial pivoting; a few iterations suffice for
// the well-separated spectra this library produces.
template <typename Scalar>
std::vector<Scalar> tridiag_eigenvector(const SymTridiag<Scalar>& T, const Scalar& lambda,
                                        int iterations = 4) {
  using std::abs;
  using std::sqrt;
  const Index n = T.dim();
  const Scalar scale = tridiag_detail::scale_of(T);
  const Scalar shift =
      lambda + Scalar(8) * std::numeric_limits<Scalar>::epsilon() * (abs(lambda) + scale * Scalar(1e-3));

  // band LU of (T - shift I) with partial pivoting: three working bands
  std::vector<Scalar> dl(std::size_t(n)), dd(std::size_t(n)), du(std::size_t(n)), du2(std::size_t(n));
  std::vector<int> piv(std::size_t(n), 0);
  for (Index i = 0; i < n; ++i) {
    dd[std::size_t(i)] = T.diag[std::size_t(i)] - shift;
    du[std::size_t(i)] = (i + 1 < n) ? T.off[std::size_t(i)] : Scalar(0);
    dl[std::size_t(i)] = (i + 1 < n) ? T.off[std::size_t(i)] : Scalar(0);
  }
  const Scalar tiny = tridiag_detail::pivmin_of(T) + std::numeric_limits<Scalar>::min();
  for (Index i = 0; i + 1 < n; ++i) {
    du2[std::size_t(i)] = Scalar(0);
    if (abs(dd[std::size_t(i)]) >= abs(dl[std::size_t(i)])) {
      if (abs(dd[std::size_t(i)]) < tiny) dd[std::size_t(i)] = tiny;
      const Scalar m = dl[std::size_t(i)] / dd[std::size_t(i)];
      dl[std::size_t(i)] = m;  // store multiplier
      dd[std::size_t(i + 1)] -= m * du[std::size_t(i)];
      piv[std::size_t(i)] = 0;
    } else {
      // swap rows i and i+1
      const Scalar m = dd[std::size_t(i)] / dl[std::size_t(i)];
      dd[std::size_t(i)] = dl[std::size_t(i)];
      dl[std::size_t(i)] = m;
      const Scalar tmp = du[std::size_t(i)];
      du[std::size_t(i)] = dd[std::size_t(i + 1)];
      dd[std::size_t(i + 1)] = tmp - m * dd[std::size_t(i + 1)];
      if (i + 2 < n) {
        du2[std::size_t(i)] = du[std::size_t(i + 1)];
        du[std::size_t(i + 1)] = -m * du[std::size_t(i + 1)];
      }
      piv[std::size_t(i)] = 1;
    }
  }
  if (abs(dd[std::size_t(n - 1)]) < tiny) dd[std::size_t(n - 1)] = tiny;

  auto solve = [&](std::vector<Scalar>& x) {
    for (Index i = 0; i + 1 < n; ++i) {
      if (piv[std::size_t(i)] == 0) {
        x[std::size_t(i + 1)] -= dl[std::size_t(i)] * x[std::size_t(i)];
      } else {
        const Scalar tmp = x[std::size_t(i)];
        x[std::size_t(i)] = x[std::size_t(i + 1)];
        x[std::size_t(i + 1)] = tmp - dl[std::size_t(i)] * x[std::size_t(i + 1)];
      }
    }
    x[std::size_t(n - 1)] /= dd[std::size_t(n - 1)];
    if (n >= 2) {
      x[std::size_t(n - 2)] =
          (x[std::size_t(n - 2)] - du[std::size_t(n - 2)] * x[std::size_t(n - 1)]) / dd[std::size_t(n - 2)];
    }
    for (Index i = n - 3; i >= 0; --i) {
      x[std::size_t(i)] = (x[std::size_t(i)] - du[std::size_t(i)] * x[std::size_t(i + 1)] -
                           du2[std::size_t(i)] * x[std::size_t(i + 2)]) /
                          dd[std::size_t(i)];
    }
  };

  std::vector<Scalar> v(std::size_t(n), Scalar(1));
  for (int it = 0; it < iterations; ++it) {
    solve(v);
    Scalar norm(0);
    for (const Scalar& x : v) norm += x * x;
    norm = sqrt(norm);
    if (!(norm > Scalar(0))) throw std::runtime_error("inverse iteration produced a zero vector");
    for (Scalar& x : v) x /= norm;
  }
  return v;
}

}  // namespace bdp
