#include "dwellflee/dwellflee.hpp"

#include <algorithm>
#include <cmath>

#include "dwellflee/solve1d.hpp"
#include "stable_eq.hpp"

namespace dwellflee {

using detail::asinh_cosh_plus_sinh;
using detail::asinh_scaled_sinh;

const char* to_string(CaseTag tag) {
  switch (tag) {
    case CaseTag::RR: return "RR";
    case CaseTag::RC: return "RC";
    case CaseTag::CR: return "CR";
    case CaseTag::NN: return "NN";
    case CaseTag::NC: return "NC";
    case CaseTag::CN: return "CN";
    case CaseTag::NR: return "NR";
    case CaseTag::RN: return "RN";
    case CaseTag::CC: return "CC";
  }
  return "?";
}

namespace {

CaseTag case_of(JordanClass c1, JordanClass c2) {
  const int i = static_cast<int>(c1) * 3 + static_cast<int>(c2);
  static constexpr CaseTag table[9] = {
      CaseTag::RR, CaseTag::RC, CaseTag::RN,   // stable RealDiag
      CaseTag::CR, CaseTag::CC, CaseTag::CN,   // stable ComplexPair
      CaseTag::NR, CaseTag::NC, CaseTag::NN};  // stable Defective
  return table[i];
}

bool is_zero_matrix(const Mat2& A) { return A.max_abs() == 0.0; }

bool is_scalar_decomp(const JordanDecomp& d) {
  return d.cls == JordanClass::RealDiag && d.J.a == d.J.d;
}

}  // namespace

SwitchedPair build_pair(const Mat2& A1, const Mat2& A2, const Tols& tols) {
  if (!A1.finite() || !A2.finite()) throw Error(ErrorKind::NonFinite, "build_pair: non-finite entry");
  if (is_zero_matrix(A1)) throw Error(ErrorKind::ZeroMatrix, "build_pair: A1 is the zero matrix");
  if (is_zero_matrix(A2)) throw Error(ErrorKind::ZeroMatrix, "build_pair: A2 is the zero matrix");

  SwitchedPair pair;
  pair.A1 = A1;
  pair.A2 = A2;
  pair.d1 = real_jordan(A1, tols.decomp);
  pair.d2 = real_jordan(A2, tols.decomp);
  if (stability_class(pair.d1) != StabilityClass::Hurwitz)
    throw Error(ErrorKind::NotHurwitz, "build_pair: A1 is not Hurwitz stable");
  if (stability_class(pair.d2) != StabilityClass::UnstableAdmissible)
    throw Error(ErrorKind::NotUnstable, "build_pair: A2 is not admissibly unstable");
  pair.tag = case_of(pair.d1.cls, pair.d2.cls);

  // A scalar factor admits every basis; sharing the other factor's basis makes
  // M = I and collapses the pair to the simultaneously-diagonalizable bounds.
  if (is_scalar_decomp(pair.d1) || is_scalar_decomp(pair.d2)) {
    if (is_scalar_decomp(pair.d1) && is_scalar_decomp(pair.d2)) {
      pair.d1.P = pair.d2.P = Mat2::identity();
    } else if (is_scalar_decomp(pair.d1)) {
      pair.d1.P = pair.d2.P;
    } else {
      pair.d2.P = pair.d1.P;
    }
    pair.M = Mat2::identity();
    pair.m_scale = 1.0;
    pair.shared_basis = true;
    return pair;
  }

  Mat2 m_raw = pair.d2.P.inverse() * pair.d1.P;
  pair.m_scale = 1.0 / std::sqrt(std::fabs(m_raw.det()));
  pair.M = pair.m_scale * m_raw;

  if (pair.M.det() < 0.0) {
    // A real-diagonalizable factor lets us flip one eigenvector column to
    // force det M = +1; the complex and defective factors cannot.
    if (pair.d2.cls == JordanClass::RealDiag) {
      pair.d2.P = pair.d2.P * Mat2::diag(-1.0, 1.0);
      pair.M = Mat2{-pair.M.a, -pair.M.b, pair.M.c, pair.M.d};
    } else if (pair.d1.cls == JordanClass::RealDiag) {
      pair.d1.P = pair.d1.P * Mat2::diag(1.0, -1.0);
      pair.M = Mat2{pair.M.a, -pair.M.b, pair.M.c, -pair.M.d};
    }
  }
  return pair;
}

// ---------------------------------------------------------------------------
// RR
// ---------------------------------------------------------------------------

TauPair tau_rr(const SwitchedPair& pair, double eta, double eps0, const Tols& tols) {
  const double p1 = pair.p1(), q1 = pair.q1(), p2 = pair.p2(), q2 = pair.q2();
  TauPair out;

  if (pair.shared_basis || q1 == p1 || q2 == p2) {
    // Simultaneously diagonalizable: both groupings reduce to the diagonal
    // norm, which needs t >= max(p2/p1, q2/q1) s.
    out.tau12 = out.tau21 = std::max(p2 / p1, q2 / q1) * eta;
    out.subcase = "RR/diag";
    return out;
  }

  const double a = pair.M.a, b = pair.M.b, c = pair.M.c, d = pair.M.d;
  const double ad = a * d;
  const double tolb = tols.boundary;

  if (std::fabs(ad - 1.0) <= tolb || std::min(std::fabs(b), std::fabs(c)) <= tolb) {
    out.tau12 = out.tau21 = std::max(q2 / q1, p2 / p1) * eta + eps0;
    out.subcase = "RR/zero-offdiag";
    out.margin = eps0;
    return out;
  }
  if (std::fabs(ad) <= tolb || std::min(std::fabs(a), std::fabs(d)) <= tolb) {
    out.tau12 = out.tau21 = (q2 / p1) * eta + eps0;
    out.subcase = "RR/zero-diag";
    out.margin = eps0;
    return out;
  }

  const double eq2 = std::exp(q2 * eta), ep2 = std::exp(p2 * eta);
  const double gap1 = q1 - p1;

  if (ad > 0.0 && ad < 1.0) {
    // eps = -1: both groupings share one relation, R+(t, eta) = ad, solved
    // past the line t = max(p2/p1, q2/q1) eta where R+ = 1 and decreasing.
    auto R_plus = [&](double t) {
      const double num = -(eq2 - std::exp(p1 * t)) * (std::exp(p2 * eta - q1 * t) - 1.0);
      const double den = (1.0 - std::exp(-gap1 * t)) * (eq2 - ep2);
      return num / den;
    };
    const double lo = std::max(p2 / p1, q2 / q1) * eta;
    out.tau12 = out.tau21 =
        solve_monotone([&](double t) { return -R_plus(t); }, -ad, lo + 1e-12, tols.solver);
    out.subcase = "RR/eps=-1";
    return out;
  }

  if (ad < 0.0) {
    // eps = +1, ad < 0.
    auto ell_minus_12 = [&](double t) {
      const double num = (eq2 - std::exp(p1 * t)) * (1.0 + std::exp(p2 * eta - q1 * t));
      const double den = (1.0 + std::exp(-gap1 * t)) * (eq2 - ep2);
      return num / den;
    };
    out.tau12 = solve_monotone([&](double t) { return -ell_minus_12(t); }, -ad, 1e-12, tols.solver);
    const double pt2 = std::max(0.0, p2);
    const double ept2 = std::exp(pt2 * eta);
    auto ell_plus_21 = [&](double t) {
      const double num = (std::exp(pt2 * eta - q1 * t) + 1.0) * (eq2 - std::exp(p1 * t));
      const double den = (ept2 + eq2) * (1.0 - std::exp(-gap1 * t));
      return num / den;
    };
    out.tau21 = solve_monotone([&](double t) { return -ell_plus_21(t); }, -ad, 1e-12, tols.solver);
    out.subcase = "RR/eps=+1/ad<0";
    return out;
  }

  // eps = +1, ad > 1.
  auto ell_plus_12 = [&](double t) {
    const double num = (eq2 + std::exp(p1 * t)) * (1.0 - std::exp(p2 * eta - q1 * t));
    const double den = (1.0 + std::exp(-gap1 * t)) * (eq2 - ep2);
    return num / den;
  };
  out.tau12 = std::max((p2 / p1) * eta, solve_monotone(ell_plus_12, ad, 1e-12, tols.solver));
  const double pt2 = std::max(0.0, p2);
  const double ept2 = std::exp(pt2 * eta);
  auto ell_minus_21 = [&](double t) {
    const double num = (1.0 - std::exp(pt2 * eta - q1 * t)) * (eq2 + std::exp(p1 * t));
    const double den = (ept2 + eq2) * (1.0 - std::exp(-gap1 * t));
    return num / den;
  };
  double root21 = -std::numeric_limits<double>::infinity();
  const double hint = 2.0 * (q2 / p1) * eta + (std::log(ad + 3.0) + 5.0) / p1;
  try {
    root21 = largest_root([&](double t) { return ell_minus_21(t) - ad; }, hint, 4096, tols.solver);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoRoot) throw;
  }
  out.tau21 = std::max((q2 / p1) * eta, root21);
  out.subcase = "RR/eps=+1/ad>1";
  return out;
}

// ---------------------------------------------------------------------------
// RC / CR
// ---------------------------------------------------------------------------

TauPair tau_rc(const SwitchedPair& pair, double eta, const Tols& tols) {
  const double p1 = pair.p1(), q1 = pair.q1(), al2 = pair.alpha2();
  const double a = pair.M.a, b = pair.M.b, c = pair.M.c, d = pair.M.d;
  const double R = std::fabs(a * b + c * d);
  const double K = (a * a + c * c) * (b * b + d * d);
  const double u = 0.5 * (q1 - p1), v = 0.5 * (q1 + p1);
  TauPair out;
  out.subcase = pair.shared_basis ? "RC/diag" : "RC";
  out.tau12 = solve_monotone(
      [&](double t) { return v * t - asinh_cosh_plus_sinh(R, u * t); }, al2 * eta, 0.0, tols.solver);
  out.tau21 = solve_monotone(
      [&](double t) { return v * t - asinh_scaled_sinh(std::sqrt(K), u * t); }, al2 * eta, 0.0,
      tols.solver);
  return out;
}

TauPair tau_cr(const SwitchedPair& pair, double eta, const Tols&) {
  const double al1 = pair.alpha1(), p2 = pair.p2(), q2 = pair.q2();
  const double a = pair.M.a, b = pair.M.b, c = pair.M.c, d = pair.M.d;
  const double K = (a * a + b * b) * (c * c + d * d);
  const double R = std::fabs(a * c + b * d);
  const double u = 0.5 * (q2 - p2), v = 0.5 * (q2 + p2);
  TauPair out;
  out.subcase = pair.shared_basis ? "CR/diag" : "CR";
  out.tau12 = (v * eta + asinh_scaled_sinh(std::sqrt(K), u * eta)) / al1;
  out.tau21 = (v * eta + asinh_cosh_plus_sinh(R, u * eta)) / al1;
  return out;
}

// ---------------------------------------------------------------------------
// NN / NC / CN / CC
// ---------------------------------------------------------------------------

TauPair tau_nn(const SwitchedPair& pair, double eta, const Tols& tols) {
  const double n1 = pair.n1(), n2 = pair.n2();
  const double a = pair.M.a, c = pair.M.c, d = pair.M.d;
  const double K = c != 0.0 ? 0.5 * c * c : 0.5 * d * d;
  const double L = c != 0.0 ? 0.5 * c * c : 0.5 * a * a;
  TauPair out;
  out.subcase = c != 0.0 ? "NN/c!=0" : "NN/c=0";
  out.tau12 = solve_monotone([&](double t) { return n1 * t - log_theta(t); },
                             n2 * eta + std::asinh(K * eta), 0.0, tols.solver);
  out.tau21 = solve_monotone([&](double t) { return n1 * t - std::asinh(L * t); },
                             n2 * eta + log_theta(eta), 0.0, tols.solver);
  return out;
}

TauPair tau_nc(const SwitchedPair& pair, double eta, const Tols& tols) {
  const double n1 = pair.n1(), al2 = pair.alpha2();
  const double a = pair.M.a, c = pair.M.c;
  const double A = a * a + c * c;
  const double radical = std::sqrt(std::max(0.0, 0.25 * (A + 1.0 / A) * (A + 1.0 / A) - 1.0));
  TauPair out;
  out.subcase = "NC";
  out.tau12 = solve_monotone([&](double t) { return n1 * t - log_theta(t); },
                             al2 * eta + std::asinh(radical), 0.0, tols.solver);
  out.tau21 = solve_monotone([&](double t) { return n1 * t - std::asinh(0.5 * A * t); }, al2 * eta,
                             0.0, tols.solver);
  return out;
}

TauPair tau_cn(const SwitchedPair& pair, double eta, const Tols&) {
  const double al1 = pair.alpha1(), n2 = pair.n2();
  const double c = pair.M.c, d = pair.M.d;
  const double A = c * c + d * d;
  const double radical = std::sqrt(std::max(0.0, 0.25 * (A + 1.0 / A) * (A + 1.0 / A) - 1.0));
  TauPair out;
  out.subcase = "CN";
  out.tau12 = (n2 * eta + std::asinh(0.5 * A * eta)) / al1;
  out.tau21 = (n2 * eta + log_theta(eta) + std::asinh(radical)) / al1;
  return out;
}

TauPair tau_cc(const SwitchedPair& pair, double eta, const Tols&) {
  const double al1 = pair.alpha1(), al2 = pair.alpha2();
  const Mat2& m = pair.M;
  const double s = m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d;
  TauPair out;
  out.subcase = "CC";
  out.tau12 = out.tau21 = (al2 * eta + std::acosh(std::max(1.0, 0.5 * s))) / al1;
  return out;
}

// ---------------------------------------------------------------------------
// NR / RN
// ---------------------------------------------------------------------------

TauPair tau_nr(const SwitchedPair& pair, double eta, double eps0, const Tols& tols) {
  const double n1 = pair.n1(), p2 = pair.p2(), q2 = pair.q2();
  const double a = pair.M.a, c = pair.M.c;
  const double ac = a * c;
  const double tolb = tols.boundary;
  TauPair out;

  {
    const double r = std::max(2.0 * std::fabs(ac), 1.0);
    const double K = 0.25 * (r + 1.0 / r) * (r + 1.0 / r);
    const double rhs = 0.5 * (p2 + q2) * eta + asinh_scaled_sinh(std::sqrt(K), 0.5 * (q2 - p2) * eta);
    out.tau12 = solve_monotone([&](double t) { return n1 * t - log_theta(t); }, rhs, 0.0, tols.solver);
  }

  const double pt2 = std::max(0.0, p2);
  const double mu = 0.5 * (q2 - pt2), nu = 0.5 * (q2 + pt2);
  const double ch = std::cosh(mu * eta), sh = std::sinh(mu * eta);

  if (std::fabs(ac) <= tolb) {
    out.tau21 = (q2 / n1) * eta + eps0;
    out.margin = eps0;
    out.subcase = "NR/ac=0";
  } else if (q2 == p2) {
    out.tau21 = solve_monotone([&](double t) { return n1 * t - std::asinh(std::fabs(ac) * t); },
                               q2 * eta, 0.0, tols.solver);
    out.subcase = "NR/p2=q2";
  } else if (ac > 0.0) {
    out.tau21 = solve_up_crossing(
        [&](double t) { return std::sinh(n1 * t - nu * eta) - ac * t * ch - sh; }, 0.0, tols.solver);
    out.subcase = "NR/ac>0";
  } else if (ac <= -n1 + tolb && std::fabs(ac + n1) > tolb) {
    out.tau21 = solve_up_crossing(
        [&](double t) { return sh + std::sinh(n1 * t - nu * eta) - std::fabs(ac) * t * ch; }, 0.0,
        tols.solver);
    out.subcase = "NR/ac<=-n1";
  } else {
    // ac in (-n1, 0): the zero set is bounded by the two curves ell+ = ac and
    // ell- = -n1; both constraints must hold.
    const double tp = solve_up_crossing(
        [&](double t) { return std::sinh(n1 * t - nu * eta) - sh - ac * t * ch; }, 0.0, tols.solver);
    const double tm = solve_up_crossing(
        [&](double t) { return sh + std::sinh(n1 * t - nu * eta) - n1 * t * ch; }, 0.0, tols.solver);
    out.tau21 = std::max(tp, tm);
    out.subcase = "NR/ac in(-n1,0)";
  }
  return out;
}

TauPair tau_rn(const SwitchedPair& pair, double eta, double eps0, const Tols& tols) {
  const double p1 = pair.p1(), q1 = pair.q1(), n2 = pair.n2();
  const double c = pair.M.c, d = pair.M.d;
  const double cd = c * d;
  const double tolb = tols.boundary;
  const double u = 0.5 * (q1 - p1), v = 0.5 * (q1 + p1);
  TauPair out;

  if (std::fabs(cd) <= tolb) {
    out.tau12 = (n2 / p1) * eta + eps0;
    out.margin = eps0;
    out.subcase = "RN/cd=0";
  } else if (cd > 0.0) {
    out.tau12 = solve_up_crossing(
        [&](double t) {
          return std::sinh(v * t - n2 * eta) - std::sinh(u * t) - cd * eta * std::cosh(u * t);
        },
        0.0, tols.solver);
    out.subcase = "RN/cd>0";
  } else {
    auto f_minus = [&](double t) {
      return std::sinh(u * t) + std::sinh(v * t - n2 * eta) - std::fabs(cd) * eta * std::cosh(u * t);
    };
    if (cd <= -n2 + tolb && std::fabs(cd + n2) > tolb) {
      out.tau12 = solve_up_crossing(f_minus, 0.0, tols.solver);
      out.subcase = "RN/cd<=-n2";
    } else {
      out.tau12 = std::max((n2 / p1) * eta, solve_up_crossing(f_minus, 0.0, tols.solver));
      out.subcase = "RN/cd in(-n2,0)";
    }
  }

  {
    const double r = std::max(2.0 * std::fabs(cd), 1.0);
    const double K = 0.25 * (r + 1.0 / r) * (r + 1.0 / r);
    const double target = n2 * eta + log_theta(eta);
    out.tau21 = solve_monotone(
        [&](double t) { return v * t - asinh_scaled_sinh(std::sqrt(K), u * t); }, target, 0.0,
        tols.solver);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dispatch, curves, prescribed scalings
// ---------------------------------------------------------------------------

DwellFleeResult dwell_flee(const SwitchedPair& pair, double eta, const DwellFleeOpts& opts) {
  if (eta < 0.0) throw Error(ErrorKind::BadParams, "dwell_flee: eta must be >= 0");
  const double eps0 = opts.margin_scale * (1.0 + eta);
  Tols tols;
  tols.solver = opts.solver_tol;
  TauPair tp;
  switch (pair.tag) {
    case CaseTag::RR: tp = tau_rr(pair, eta, eps0, tols); break;
    case CaseTag::RC: tp = tau_rc(pair, eta, tols); break;
    case CaseTag::CR: tp = tau_cr(pair, eta, tols); break;
    case CaseTag::NN: tp = tau_nn(pair, eta, tols); break;
    case CaseTag::NC: tp = tau_nc(pair, eta, tols); break;
    case CaseTag::CN: tp = tau_cn(pair, eta, tols); break;
    case CaseTag::NR: tp = tau_nr(pair, eta, eps0, tols); break;
    case CaseTag::RN: tp = tau_rn(pair, eta, eps0, tols); break;
    case CaseTag::CC: tp = tau_cc(pair, eta, tols); break;
  }
  DwellFleeResult res;
  res.eta = eta;
  res.tau12 = tp.tau12;
  res.tau21 = tp.tau21;
  res.subcase = tp.subcase;
  res.margin = tp.margin;
  if (tp.tau21 < tp.tau12) {
    res.tau = tp.tau21;
    res.tau_branch = 21;
  } else {
    res.tau = tp.tau12;
    res.tau_branch = 12;
  }
  res.scaling = certificate_scaling(pair, tp.tau12, tp.tau21, eta);
  return res;
}

TauCurve tau_curve(const SwitchedPair& pair, const std::vector<double>& etas,
                   const DwellFleeOpts& opts) {
  TauCurve curve;
  curve.points.reserve(etas.size());
  for (double eta : etas) curve.points.push_back(dwell_flee(pair, eta, opts));
  for (size_t i = 1; i < curve.points.size(); ++i) {
    if (curve.points[i].tau12 < curve.points[i - 1].tau12 - 1e-8) curve.monotone12 = false;
    if (curve.points[i].tau21 < curve.points[i - 1].tau21 - 1e-8) curve.monotone21 = false;
  }
  return curve;
}

double certificate_scaling_value(const SwitchedPair& pair, int order, double tau, double eta) {
  const double a = pair.M.a, b = pair.M.b, c = pair.M.c, d = pair.M.d;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (order == 12) {
    switch (pair.tag) {
      case CaseTag::RR: {
        if (a * b * c * d == 0.0) return nan;
        const double ratio = (b * b * d * d) / (a * a * c * c);
        return std::pow(ratio, 0.125) * std::exp(-(pair.q1() - pair.p1()) * tau / 4.0);
      }
      case CaseTag::RC: {
        const double ratio = (b * b + d * d) / (a * a + c * c);
        return std::pow(ratio, 0.25) * std::exp(-(pair.q1() - pair.p1()) * tau / 4.0);
      }
      case CaseTag::RN: {
        if (c * d == 0.0) return nan;
        return std::pow((d * d) / (c * c), 0.25) * std::exp(-(pair.q1() - pair.p1()) * tau / 4.0);
      }
      case CaseTag::NN:
        return c != 0.0 ? -d / c : 0.0;
      case CaseTag::NC:
        return -(a * b + c * d) / (a * a + c * c);
      case CaseTag::NR: {
        if (c != 0.0 && a == 0.0) return -d / c;
        if (a != 0.0 && c == 0.0) return -b / a;
        const double ac = a * c;
        return -(a * d + b * c) / (2.0 * ac) +
               std::sqrt(1.0 / std::min(2.0 * std::fabs(ac), 1.0) - 1.0);
      }
      default:
        return nan;  // complex stable factor: only scalar multiples, norm-free
    }
  }
  switch (pair.tag) {
    case CaseTag::RR: {
      if (a * b * c * d == 0.0) return nan;
      const double pt2 = std::max(0.0, pair.p2());
      const double ratio = (a * a * b * b) / (c * c * d * d);
      return std::pow(ratio, 0.125) * std::exp((pair.q2() - pt2) * eta / 4.0);
    }
    case CaseTag::CR: {
      const double ratio = (a * a + b * b) / (c * c + d * d);
      return std::pow(ratio, 0.25) * std::exp((pair.q2() - pair.p2()) * eta / 4.0);
    }
    case CaseTag::NR: {
      if (a * c == 0.0) return nan;
      const double mu = 0.5 * (pair.q2() - std::max(0.0, pair.p2()));
      return std::pow((a * a) / (c * c), 0.25) * std::exp(mu * eta / 2.0);
    }
    case CaseTag::NN:
      return c != 0.0 ? a / c : 0.0;
    case CaseTag::CN:
      return (a * c + b * d) / (c * c + d * d);
    case CaseTag::RN: {
      if (c != 0.0 && d == 0.0) return a / c;
      if (d != 0.0 && c == 0.0) return b / d;
      const double cd = c * d;
      return (a * d + b * c) / (2.0 * cd) +
             std::sqrt(1.0 / std::min(2.0 * std::fabs(cd), 1.0) - 1.0);
    }
    default:
      return nan;
  }
}

ScalingParams certificate_scaling(const SwitchedPair& pair, double tau12, double tau21, double eta) {
  ScalingParams sc;
  const double v12 = certificate_scaling_value(pair, 12, tau12, eta);
  const double v21 = certificate_scaling_value(pair, 21, tau21, eta);
  if (v12 == v12) {
    if (pair.d1.cls == JordanClass::RealDiag) sc.lambda1 = v12;
    if (pair.d1.cls == JordanClass::Defective) sc.eps1 = v12;
  }
  if (v21 == v21) {
    if (pair.d2.cls == JordanClass::RealDiag) sc.lambda2 = v21;
    if (pair.d2.cls == JordanClass::Defective) sc.eps2 = v21;
  }
  return sc;
}

}  // namespace dwellflee
