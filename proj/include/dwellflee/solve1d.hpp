#ifndef DWELLFLEE_SOLVE1D_HPP
#define DWELLFLEE_SOLVE1D_HPP

#include <functional>

namespace dwellflee {

using ScalarFn = std::function<double(double)>;

struct Bracket {
  double lo = 0.0, hi = 0.0;
  double f_lo = 0.0, f_hi = 0.0;
};

// Solves f(t) = target on the branch where f is eventually strictly increasing
// past its last sign change of f - target on [t_start, inf). Brackets by
// doubling hi from t_start + 1 until the sign changes, then bisects.
// Throws NoBracket if no sign change appears before hi ~ t_start + 2^60.
double solve_monotone(const ScalarFn& f, double target, double t_start, double tol = 1e-10);

// Root of f where f(t_start) <= 0, f is eventually positive, and f - 0 has a
// single upward crossing past an optional initial dip. Handles f(t_start) == 0
// exactly (nudges into the dip before bracketing).
double solve_up_crossing(const ScalarFn& f, double t_start, double tol = 1e-10);

// Largest root of f in (0, T), with T grown from t_max_hint by doubling until
// the scan tail keeps one sign over a 64-sample guard window. Uniform n_scan
// scan locates the last sign-change cell; bisection refines it.
double largest_root(const ScalarFn& f, double t_max_hint, int n_scan = 4096, double tol = 1e-10);

struct MinimizeResult {
  double x = 0.0;
  double value = 0.0;
  bool boundary_minimum = false;
};

// Coarse uniform grid (default 257 points) then golden-section refinement in
// the best cell. Never returns a value above the grid minimum.
MinimizeResult minimize_scalar(const ScalarFn& g, double lo, double hi, double tol = 1e-10,
                               int grid_points = 257);

}  // namespace dwellflee

#endif
