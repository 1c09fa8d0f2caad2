#ifndef DWELLFLEE_EXTEND_HPP
#define DWELLFLEE_EXTEND_HPP

#include <vector>

#include "dwellflee/dwellflee.hpp"
#include "dwellflee/simulate.hpp"

namespace dwellflee {

// Symmetric bilinear drive u(t): positive, bounded, piecewise constant.
struct BilinearInput {
  SwitchedPair pair;
  double u_lo = 1.0;  // liminf of u
  double u_hi = 1.0;  // limsup of u
  std::vector<std::pair<double, double>> u_pieces;  // (value, duration) timeline; last value persists
};

// Dwell time tau(u_hi * eta) / u_lo through the case's fixed-basis branch.
// Cases whose certificate needs re-verification get a verify_rect pass with
// the single fixed scaling first; failure raises UnsupportedBranch.
double sbs_tau(const BilinearInput& bi, double eta, const DwellFleeOpts& opts = {});

Trajectory flow_bilinear(const BilinearInput& bi, const Signal& sig, Vec2 x0,
                         int samples_per_interval = 16);

struct StarLeaf {
  Mat2 A;
  JordanDecomp d;
  Mat2 M;  // P_leaf^-1 * P_center, |det| = 1
};

struct StarSystem {
  Mat2 A1;
  JordanDecomp d1;  // Hurwitz center
  std::vector<StarLeaf> leaves;
};

StarSystem build_star(const Mat2& A1, const std::vector<Mat2>& leaf_mats, const Tols& tols = {});

struct StarOpts {
  double margin_scale = 1e-6;       // eps0 = margin_scale * (1 + eta) on boundary hits
  double search_tol = 1e-10;
  int grid_points = 257;
  double log_lambda_lo = -4.0, log_lambda_hi = 4.0;  // lambda search decades
  double eps_lo = -100.0, eps_hi = 100.0;            // shear search interval
};

struct StarResult {
  double tau = 0.0;
  double param = 0.0;  // minimizing lambda (RealDiag center) or eps (Defective center)
  bool boundary = false;
  double margin = 0.0;
  std::vector<double> leaf_taus;  // per-leaf dwell time at the chosen parameter
};

// Minimax dwell time over the shared center-basis scaling: inf_lambda (or
// min_eps) of max over leaves; plain max when the center is a complex pair.
StarResult star_tau(const StarSystem& star, double eta, const StarOpts& opts = {});

}  // namespace dwellflee

#endif
