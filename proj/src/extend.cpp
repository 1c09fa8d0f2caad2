#include "dwellflee/extend.hpp"

#include <algorithm>
#include <cmath>

#include "dwellflee/solve1d.hpp"
#include "dwellflee/verify.hpp"
#include "stable_eq.hpp"

namespace dwellflee {

using detail::asinh_scaled_sinh;

double sbs_tau(const BilinearInput& bi, double eta, const DwellFleeOpts& opts) {
  if (!(bi.u_lo > 0.0) || !(bi.u_hi >= bi.u_lo) || !std::isfinite(bi.u_hi))
    throw Error(ErrorKind::BadParams, "sbs_tau: need 0 < u_lo <= u_hi < inf");
  const double eta_eff = bi.u_hi * eta;
  const DwellFleeResult base = dwell_flee(bi.pair, eta_eff, opts);
  switch (bi.pair.tag) {
    case CaseTag::RC:
    case CaseTag::CR:
    case CaseTag::CC:
    case CaseTag::CN:
    case CaseTag::NC:
    case CaseTag::NN:
      // The winning branch here is certified by one fixed basis (scaling-free
      // or with the attained optimal shear); composition is immediate.
      break;
    case CaseTag::RR:
    case CaseTag::NR:
    case CaseTag::RN: {
      // Certificates in these cases fix the scaling per (tau, eta); confirm a
      // single fixed scaling covers the rectangle before composing.
      const double tiny = 1e-6 * (1.0 + base.tau);
      GridSpec grid;
      grid.n_t = 200;
      grid.n_s = 120;
      const VerifyReport rep = verify_rect(bi.pair, base.tau + tiny, eta_eff * (1.0 - 1e-9), grid);
      if (!rep.pass)
        throw Error(ErrorKind::UnsupportedBranch,
                    "sbs_tau: no single fixed-basis certificate found for this pair");
      break;
    }
  }
  return base.tau / bi.u_lo;
}

Trajectory flow_bilinear(const BilinearInput& bi, const Signal& sig, Vec2 x0,
                         int samples_per_interval) {
  if (samples_per_interval < 1) samples_per_interval = 1;
  for (const auto& [value, dur] : bi.u_pieces)
    if (!(value > 0.0) || !(dur > 0.0))
      throw Error(ErrorKind::BadParams, "flow_bilinear: u pieces need positive value and duration");

  // Integral of the piecewise-constant u over [0, t]; the last value persists
  // past the listed timeline (u == 1 when no pieces are given).
  auto integral_to = [&](double t) {
    double acc = 0.0, clock = 0.0, last = 1.0;
    for (const auto& [value, dur] : bi.u_pieces) {
      last = value;
      if (t <= clock + dur) return acc + value * (t - clock);
      acc += value * dur;
      clock += dur;
    }
    return acc + last * (t - clock);
  };

  Trajectory traj;
  double t0 = 0.0;
  Vec2 x = x0;
  for (size_t k = 0; k < sig.durations.size(); ++k) {
    const auto [mode, dt] = sig.durations[k];
    if (mode != 1 && mode != 2)
      throw Error(ErrorKind::BadParams, "flow_bilinear: bimodal signals only");
    const JordanDecomp& d = mode == 1 ? bi.pair.d1 : bi.pair.d2;
    if (k > 0) traj.switch_indices.push_back(traj.times.size());
    const Vec2 y = d.P.inverse() * x;
    const double base_integral = integral_to(t0);
    for (int j = 0; j <= samples_per_interval; ++j) {
      const double local = dt * j / samples_per_interval;
      const double warped = integral_to(t0 + local) - base_integral;
      traj.times.push_back(t0 + local);
      traj.states.push_back(d.P * (expm(d, warped) * y));
      traj.modes.push_back(mode);
    }
    x = traj.states.back();
    if (!(std::isfinite(x.x) && std::isfinite(x.y)))
      throw Error(ErrorKind::Overflow, "flow_bilinear: state overflowed");
    t0 += dt;
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Star-graph multimodal minimax
// ---------------------------------------------------------------------------

StarSystem build_star(const Mat2& A1, const std::vector<Mat2>& leaf_mats, const Tols& tols) {
  if (leaf_mats.empty()) throw Error(ErrorKind::BadParams, "build_star: need at least one leaf");
  StarSystem star;
  star.A1 = A1;
  star.d1 = real_jordan(A1, tols.decomp);
  if (stability_class(star.d1) != StabilityClass::Hurwitz)
    throw Error(ErrorKind::NotHurwitz, "build_star: center is not Hurwitz stable");
  star.leaves.reserve(leaf_mats.size());
  for (const Mat2& A : leaf_mats) {
    StarLeaf leaf;
    leaf.A = A;
    leaf.d = real_jordan(A, tols.decomp);
    if (stability_class(leaf.d) != StabilityClass::UnstableAdmissible)
      throw Error(ErrorKind::NotUnstable, "build_star: leaf is not admissibly unstable");
    leaf.M = transition(star.d1.P, leaf.d.P);
    star.leaves.push_back(leaf);
  }
  return star;
}

namespace {

struct LeafRates {
  double a, b, c, d;
};

LeafRates entries(const StarLeaf& leaf) { return {leaf.M.a, leaf.M.b, leaf.M.c, leaf.M.d}; }

// Center diag(-p1,-q1), bounded through the slow rate p1: per-leaf dwell time
// at scaling D = diag(lambda, 1/lambda), all closed forms.
double leaf_tau_real_center(const StarLeaf& leaf, double p1, double lambda, double eta) {
  const auto [a, b, c, d] = entries(leaf);
  const double l2 = lambda * lambda;
  switch (leaf.d.cls) {
    case JordanClass::ComplexPair: {
      const double arg = 0.5 * ((a * a + c * c) * l2 + (b * b + d * d) / l2);
      return (leaf.d.alpha() * eta + std::acosh(std::max(1.0, arg))) / p1;
    }
    case JordanClass::Defective: {
      const double arg = 0.5 * (c * c * l2 + d * d / l2);
      return (leaf.d.lambda() * eta + std::asinh(arg * eta)) / p1;
    }
    case JordanClass::RealDiag: {
      const double pj = leaf.d.diag_first(), qj = leaf.d.diag_second();
      const double q = b * d / l2 + a * c * l2;
      const double rhs = 0.5 * (pj + qj) * eta +
                         asinh_scaled_sinh(std::sqrt(1.0 + q * q), 0.5 * (qj - pj) * eta);
      return rhs / p1;
    }
  }
  return 0.0;
}

// Center defective with rate n1: the per-leaf relation is n1 tau - log
// theta(tau) = rhs_j(eps); the rhs alone orders the leaves.
double leaf_rhs_defective_center(const StarLeaf& leaf, double eps, double eta) {
  const auto [a, b, c, d] = entries(leaf);
  const double be = b + eps * a, de = d + eps * c;
  switch (leaf.d.cls) {
    case JordanClass::ComplexPair: {
      const double sum = a * a + be * be + c * c + de * de;
      return leaf.d.alpha() * eta + std::acosh(std::max(1.0, 0.5 * sum));
    }
    case JordanClass::Defective: {
      return leaf.d.lambda() * eta + std::asinh(0.5 * (c * c + de * de) * eta);
    }
    case JordanClass::RealDiag: {
      const double pj = leaf.d.diag_first(), qj = leaf.d.diag_second();
      const double kj = (a * a + be * be) * (c * c + de * de);
      return 0.5 * (pj + qj) * eta + asinh_scaled_sinh(std::sqrt(kj), 0.5 * (qj - pj) * eta);
    }
  }
  return 0.0;
}

double leaf_tau_complex_center(const StarLeaf& leaf, double al1, double eta) {
  const auto [a, b, c, d] = entries(leaf);
  switch (leaf.d.cls) {
    case JordanClass::ComplexPair: {
      const double sum = a * a + b * b + c * c + d * d;
      return (leaf.d.alpha() * eta + std::acosh(std::max(1.0, 0.5 * sum))) / al1;
    }
    case JordanClass::Defective:
      return (leaf.d.lambda() * eta + std::asinh(0.5 * (c * c + d * d) * eta)) / al1;
    case JordanClass::RealDiag: {
      const double pj = leaf.d.diag_first(), qj = leaf.d.diag_second();
      const double kj = (a * a + b * b) * (c * c + d * d);
      return (0.5 * (pj + qj) * eta +
              asinh_scaled_sinh(std::sqrt(kj), 0.5 * (qj - pj) * eta)) /
             al1;
    }
  }
  return 0.0;
}

}  // namespace

StarResult star_tau(const StarSystem& star, double eta, const StarOpts& opts) {
  if (eta < 0.0) throw Error(ErrorKind::BadParams, "star_tau: eta must be >= 0");
  StarResult out;
  const double eps0 = opts.margin_scale * (1.0 + eta);

  switch (star.d1.cls) {
    case JordanClass::RealDiag: {
      const double p1 = -star.d1.diag_first();  // slow rate bounds ||e^{J1 t}||
      auto worst = [&](double log_lambda) {
        const double lambda = std::pow(10.0, log_lambda);
        double m = 0.0;
        for (const StarLeaf& leaf : star.leaves)
          m = std::max(m, leaf_tau_real_center(leaf, p1, lambda, eta));
        return m;
      };
      const MinimizeResult min =
          minimize_scalar(worst, opts.log_lambda_lo, opts.log_lambda_hi, opts.search_tol,
                          opts.grid_points);
      out.param = std::pow(10.0, min.x);
      out.boundary = min.boundary_minimum;
      out.margin = min.boundary_minimum ? eps0 : 0.0;
      out.tau = min.value + out.margin;
      for (const StarLeaf& leaf : star.leaves)
        out.leaf_taus.push_back(leaf_tau_real_center(leaf, p1, out.param, eta));
      return out;
    }
    case JordanClass::Defective: {
      const double n1 = -star.d1.lambda();
      auto worst_rhs = [&](double eps) {
        double m = -std::numeric_limits<double>::infinity();
        for (const StarLeaf& leaf : star.leaves)
          m = std::max(m, leaf_rhs_defective_center(leaf, eps, eta));
        return m;
      };
      const MinimizeResult min =
          minimize_scalar(worst_rhs, opts.eps_lo, opts.eps_hi, opts.search_tol, opts.grid_points);
      out.param = min.x;
      out.boundary = min.boundary_minimum;
      out.margin = min.boundary_minimum ? eps0 : 0.0;
      auto g = [&](double t) { return n1 * t - log_theta(t); };
      out.tau = solve_monotone(g, min.value, 0.0, opts.search_tol) + out.margin;
      for (const StarLeaf& leaf : star.leaves)
        out.leaf_taus.push_back(
            solve_monotone(g, leaf_rhs_defective_center(leaf, out.param, eta), 0.0, opts.search_tol));
      return out;
    }
    case JordanClass::ComplexPair: {
      const double al1 = -star.d1.alpha();
      double m = 0.0;
      for (const StarLeaf& leaf : star.leaves) {
        const double t = leaf_tau_complex_center(leaf, al1, eta);
        out.leaf_taus.push_back(t);
        m = std::max(m, t);
      }
      out.tau = m;
      return out;
    }
  }
  throw Error(ErrorKind::SolverFailure, "star_tau: unreachable center class");
}

}  // namespace dwellflee
