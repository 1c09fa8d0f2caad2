#ifndef DWELLFLEE_VERIFY_HPP
#define DWELLFLEE_VERIFY_HPP

#include <vector>

#include "dwellflee/dwellflee.hpp"

namespace dwellflee {

struct GridSpec {
  int n_t = 400;
  int n_s = 400;
  double t_span = -1.0;  // < 0: use 3*tau + 10
};

enum class ScalingPolicy { Prescribed, Sweep, PrescribedOrSweep, Both };

struct VerifyReport {
  bool pass = false;
  double max_norm = 0.0;
  double argmax_t = 0.0;
  double argmax_s = 0.0;
  GridSpec grid;
  ScalingParams scaling_used;
  int order_used = 0;  // 12 or 21; 0 when nothing passed
  bool tail_ok = false;
  double tol_pass = 1e-9;
};

// ||W^-1 e^{J2 s} W e^{J1 t}|| (order 12) or ||W e^{J1 t} W^-1 e^{J2 s}||
// (order 21) with W the case-appropriate scaled transition matrix
// W = S2^-1 M S1.
double grouping_norm(const SwitchedPair& pair, const ScalingParams& sc, double t, double s,
                     int order);

// Samples s in [0, eta] and t in [tau, tau + span]; passes when one grouping
// admits a single fixed scaling with uniform max norm <= 1 + tol_pass and a
// contraction argument covers the tail beyond the grid.
VerifyReport verify_rect(const SwitchedPair& pair, double tau, double eta, GridSpec grid = {},
                         ScalingPolicy policy = ScalingPolicy::PrescribedOrSweep,
                         double tol_pass = 1e-9);

struct OracleGrids {
  double t_max = 0.0;  // <= 0: auto (twice a crude upper estimate)
  int n_t = 400;
  int n_s = 96;
  int n_scalings = 33;  // per active parameter, log lambda / linear eps
};

// Smallest grid tau such that one grouping with one fixed swept scaling holds
// norm <= 1 + tol over [tau, t_max] x [0, eta]; +inf when none in range.
double brute_force_tau(const SwitchedPair& pair, double eta, OracleGrids grids = {},
                       double tol_pass = 1e-9);

namespace detail {

struct RectScan {
  double max_norm = 0.0;
  double argmax_t = 0.0;
  double argmax_s = 0.0;
};

// Max grouping norm over the rectangle grid; `bail_above` lets sweeps abandon
// a scaling early (the scan result is then a lower bound with max > bail).
RectScan rect_max_norm_serial(const SwitchedPair& pair, const ScalingParams& sc, int order,
                              double tau, double eta, int n_t, int n_s, double span,
                              double bail_above);
RectScan rect_max_norm_parallel(const SwitchedPair& pair, const ScalingParams& sc, int order,
                                double tau, double eta, int n_t, int n_s, double span,
                                double bail_above);

}  // namespace detail

}  // namespace dwellflee

#endif
