#include "dwellflee/solve1d.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "dwellflee/mat2.hpp"

namespace dwellflee {

namespace {

double bisect(const ScalarFn& f, double lo, double hi, double f_lo, double tol) {
  // Invariant: sign(f(lo)) != sign(f(hi)) (or one endpoint is exactly zero).
  for (int i = 0; i < 400 && (hi - lo) > tol * (1.0 + std::fabs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double solve_monotone(const ScalarFn& f, double target, double t_start, double tol) {
  const double f0 = f(t_start) - target;
  if (f0 == 0.0) return t_start;
  if (f0 > 0.0) {
    // Increasing branch already past the target: the crossing is at t_start
    // only if f stays above; treat as degenerate hit.
    return t_start;
  }
  double lo = t_start;
  double f_lo = f0;
  double step = 1.0;
  for (int i = 0; i < 62; ++i) {
    const double hi = t_start + step;
    const double f_hi = f(hi) - target;
    if (f_hi == 0.0) return hi;
    if (f_hi > 0.0) return bisect([&](double t) { return f(t) - target; }, lo, hi, f_lo, tol);
    lo = hi;
    f_lo = f_hi;
    step *= 2.0;
  }
  throw Error(ErrorKind::NoBracket, "solve_monotone: no sign change before t_start + 2^60 (last t = " +
                                        std::to_string(lo) + ", f = " + std::to_string(f_lo + target) +
                                        ")");
}

double solve_up_crossing(const ScalarFn& f, double t_start, double tol) {
  double lo = t_start;
  double f_lo = f(lo);
  if (f_lo >= 0.0) {
    // Probe into the dip; if none is found the root degenerates to t_start.
    bool found = false;
    double step = 1e-9 * (1.0 + std::fabs(t_start));
    for (int i = 0; i < 80; ++i) {
      const double probe = t_start + step;
      const double fp = f(probe);
      if (fp < 0.0) {
        lo = probe;
        f_lo = fp;
        found = true;
        break;
      }
      step *= 2.0;
    }
    if (!found) return t_start;
  }
  return solve_monotone(f, 0.0, lo, tol);
}

double largest_root(const ScalarFn& f, double t_max_hint, int n_scan, double tol) {
  if (n_scan < 130) n_scan = 130;
  double T = t_max_hint > 0.0 ? t_max_hint : 1.0;
  constexpr int kGuard = 64;
  for (int grow = 0; grow < 40; ++grow) {
    std::vector<double> vals(static_cast<size_t>(n_scan));
    int last_change = -1;
    for (int i = 0; i < n_scan; ++i) {
      const double t = T * (static_cast<double>(i + 1) / n_scan);
      vals[static_cast<size_t>(i)] = f(t);
      if (i > 0) {
        const double prev = vals[static_cast<size_t>(i - 1)];
        if ((prev < 0.0) != (vals[static_cast<size_t>(i)] < 0.0)) last_change = i;
      }
    }
    bool tail_stable = last_change < n_scan - kGuard;
    if (tail_stable) {
      if (last_change < 0) throw Error(ErrorKind::NoRoot, "largest_root: no sign change in scan");
      const double lo = T * (static_cast<double>(last_change) / n_scan);
      const double hi = T * (static_cast<double>(last_change + 1) / n_scan);
      return bisect(f, lo, hi, vals[static_cast<size_t>(last_change - 1)], tol);
    }
    T *= 2.0;
  }
  throw Error(ErrorKind::NoRoot, "largest_root: tail sign never stabilized");
}

MinimizeResult minimize_scalar(const ScalarFn& g, double lo, double hi, double tol, int grid_points) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw Error(ErrorKind::InvalidInterval, "minimize_scalar: need finite lo < hi");
  if (grid_points < 3) grid_points = 3;

  double best_x = lo, best_v = g(lo);
  int best_i = 0;
  const double h = (hi - lo) / (grid_points - 1);
  for (int i = 1; i < grid_points; ++i) {
    const double x = (i == grid_points - 1) ? hi : lo + h * i;
    const double v = g(x);
    if (v < best_v) {
      best_v = v;
      best_x = x;
      best_i = i;
    }
  }

  // Golden-section refinement on the bracketing cell around the best point.
  double a = lo + h * std::max(0, best_i - 1);
  double b = lo + h * std::min(grid_points - 1, best_i + 1);
  b = std::min(b, hi);
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = g(x1), f2 = g(x2);
  for (int i = 0; i < 200 && (b - a) > tol * (1.0 + std::fabs(a) + std::fabs(b)); ++i) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = g(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = g(x2);
    }
  }
  const double xr = f1 < f2 ? x1 : x2;
  const double vr = std::min(f1, f2);
  MinimizeResult res;
  if (vr < best_v) {
    res.x = xr;
    res.value = vr;
  } else {
    res.x = best_x;
    res.value = best_v;
  }
  const double edge = tol * (1.0 + std::fabs(lo) + std::fabs(hi)) + h * 1e-6;
  res.boundary_minimum = (res.x - lo) <= edge || (hi - res.x) <= edge;
  return res;
}

}  // namespace dwellflee
