#ifndef DWELLFLEE_SRC_STABLE_EQ_HPP
#define DWELLFLEE_SRC_STABLE_EQ_HPP

#include <cmath>

// Overflow-safe evaluations of the asinh/sinh compositions appearing in the
// dwell-flee relations. The raw forms overflow once the sinh argument passes
// ~710, which the bracketing solvers routinely probe.

namespace dwellflee::detail {

// asinh(k * sinh(u)) for k > 0, u >= 0.
inline double asinh_scaled_sinh(double k, double u) {
  if (u < 30.0) return std::asinh(k * std::sinh(u));
  // Here k*sinh(u) = (k/2)e^u(1 - e^{-2u}) with e^{-2u} < 1e-26 negligible.
  const double log_x = std::log(0.5 * k) + u;
  if (log_x > 20.0) return M_LN2 + log_x;  // asinh(x) -> log(2x)
  return std::asinh(std::exp(log_x));
}

// asinh(A * cosh(u) + sinh(u)) for A >= 0, u >= 0.
inline double asinh_cosh_plus_sinh(double A, double u) {
  if (u < 30.0) return std::asinh(A * std::cosh(u) + std::sinh(u));
  // A*cosh(u) + sinh(u) = ((A+1)/2) e^u up to e^{-2u} terms.
  const double log_x = std::log1p(A) - M_LN2 + u;
  if (log_x > 20.0) return M_LN2 + log_x;
  return std::asinh(std::exp(log_x));
}

}  // namespace dwellflee::detail

#endif
