#include "dwellflee/jordan.hpp"

#include <algorithm>
#include <cmath>

namespace dwellflee {

namespace {

double disc_tolerance(const Mat2& A, double rel) {
  const double n = spectral_norm(A);
  return rel * (1.0 + n * n);
}

// Eigenvector for eigenvalue lam from the rows of A - lam*I; the two candidate
// kernels are (b, lam-a) and (lam-d, c). Picks the larger and fixes the sign so
// the dominant component is positive.
Vec2 eigenvector(const Mat2& A, double lam) {
  Vec2 v1{A.b, lam - A.a};
  Vec2 v2{lam - A.d, A.c};
  Vec2 v = v1.norm() >= v2.norm() ? v1 : v2;
  const double n = v.norm();
  if (n == 0.0) throw Error(ErrorKind::DegenerateBasis, "real_jordan: vanishing eigenvector");
  v = (1.0 / n) * v;
  const double dominant = std::fabs(v.x) >= std::fabs(v.y) ? v.x : v.y;
  if (dominant < 0.0) v = -1.0 * v;
  return v;
}

void check_residual(const Mat2& A, const JordanDecomp& d, double rel_tol) {
  const Mat2 r = d.P * d.J * d.P.inverse() - A;
  const double bound = rel_tol * (1.0 + spectral_norm(A));
  if (spectral_norm(r) > std::max(bound, 1e-12))
    throw Error(ErrorKind::DegenerateBasis, "real_jordan: residual exceeds tolerance");
}

}  // namespace

EigenKind classify_eigen(const Mat2& A, double tol_disc) {
  if (!A.finite()) throw Error(ErrorKind::NonFinite, "classify_eigen: non-finite entry");
  const double tr = A.trace();
  const double disc = tr * tr - 4.0 * A.det();
  if (disc < -tol_disc) return EigenKind::ComplexPair;
  if (disc <= tol_disc) {
    const double lam = 0.5 * tr;
    const bool scalar = std::fabs(A.a - lam) <= tol_disc && std::fabs(A.d - lam) <= tol_disc &&
                        std::fabs(A.b) <= tol_disc && std::fabs(A.c) <= tol_disc;
    return scalar ? EigenKind::RealRepeatedDiagonalizable : EigenKind::Defective;
  }
  return EigenKind::RealDistinct;
}

JordanDecomp real_jordan(const Mat2& A, const DecompTols& tols) {
  if (!A.finite()) throw Error(ErrorKind::NonFinite, "real_jordan: non-finite entry");
  const double tol = disc_tolerance(A, tols.disc_rel);
  const EigenKind kind = classify_eigen(A, tol);
  const double tr = A.trace();
  JordanDecomp d;

  switch (kind) {
    case EigenKind::RealRepeatedDiagonalizable: {
      d.cls = JordanClass::RealDiag;
      const double lam = 0.5 * tr;
      d.P = Mat2::identity();
      d.J = Mat2::diag(lam, lam);
      break;
    }
    case EigenKind::RealDistinct: {
      d.cls = JordanClass::RealDiag;
      const double root = std::sqrt(tr * tr - 4.0 * A.det());
      double lo = 0.5 * (tr - root);
      double hi = 0.5 * (tr + root);
      // Hurwitz: slow rate first (diag(-p,-q), p <= q). Otherwise ascending.
      double first = lo, second = hi;
      if (hi < 0.0) std::swap(first, second);
      const Vec2 u = eigenvector(A, first);
      const Vec2 w = eigenvector(A, second);
      d.P = Mat2{u.x, w.x, u.y, w.y};
      d.J = Mat2::diag(first, second);
      if (std::fabs(d.P.det()) < 1e-12)
        throw Error(ErrorKind::DegenerateBasis, "real_jordan: near-parallel eigenvectors");
      break;
    }
    case EigenKind::ComplexPair: {
      d.cls = JordanClass::ComplexPair;
      const double alpha = 0.5 * tr;
      const double beta = 0.5 * std::sqrt(4.0 * A.det() - tr * tr);
      // Complex eigenvector u + i v for alpha + i beta; P = [u v].
      Vec2 u, v;
      if (std::fabs(A.b) >= std::fabs(A.c)) {
        u = Vec2{A.b, alpha - A.a};
        v = Vec2{0.0, beta};
      } else {
        u = Vec2{alpha - A.d, A.c};
        v = Vec2{beta, 0.0};
      }
      Mat2 P{u.x, v.x, u.y, v.y};
      const double dt = std::fabs(P.det());
      if (dt == 0.0) throw Error(ErrorKind::DegenerateBasis, "real_jordan: degenerate complex basis");
      P = (1.0 / std::sqrt(dt)) * P;  // uniform scaling keeps J, sets |det P| = 1
      const double dominant = std::fabs(u.x) >= std::fabs(u.y) ? P.a : P.c;
      if (dominant < 0.0) P = -1.0 * P;
      d.P = P;
      d.J = Mat2{alpha, beta, -beta, alpha};
      break;
    }
    case EigenKind::Defective: {
      d.cls = JordanClass::Defective;
      const double lam = 0.5 * tr;
      const Vec2 v = eigenvector(A, lam);
      // Minimal-norm principal vector: rows of B = A - lam I are multiples of
      // v_perp, so B w = v has the solution w = v_perp / kappa with
      // kappa = (row coefficients) . v.
      const Mat2 B{A.a - lam, A.b, A.c, A.d - lam};
      const Vec2 vperp{-v.y, v.x};
      const double c1 = B.a * vperp.x + B.b * vperp.y;
      const double c2 = B.c * vperp.x + B.d * vperp.y;
      const double kappa = c1 * v.x + c2 * v.y;
      if (kappa == 0.0 || !std::isfinite(kappa))
        throw Error(ErrorKind::DegenerateBasis, "real_jordan: defective block too close to scalar");
      const Vec2 w = (1.0 / kappa) * vperp;
      d.P = Mat2{v.x, w.x, v.y, w.y};
      d.J = Mat2{lam, 1.0, 0.0, lam};
      break;
    }
  }

  check_residual(A, d, tols.residual);
  return d;
}

StabilityClass stability_class(const JordanDecomp& d) {
  switch (d.cls) {
    case JordanClass::RealDiag: {
      const double l1 = d.diag_first(), l2 = d.diag_second();
      if (l1 < 0.0 && l2 < 0.0) return StabilityClass::Hurwitz;
      if (std::max(l1, l2) > 0.0) return StabilityClass::UnstableAdmissible;
      return StabilityClass::Rejected;  // marginal: no growth direction
    }
    case JordanClass::ComplexPair:
      if (d.alpha() < 0.0) return StabilityClass::Hurwitz;
      if (d.alpha() > 0.0) return StabilityClass::UnstableAdmissible;
      return StabilityClass::Rejected;
    case JordanClass::Defective:
      if (d.lambda() < 0.0) return StabilityClass::Hurwitz;
      return StabilityClass::UnstableAdmissible;  // lambda >= 0: shear growth
  }
  return StabilityClass::Rejected;
}

Mat2 transition(const Mat2& P1, const Mat2& P2) {
  if (std::fabs(P1.det()) < 1e-300 || std::fabs(P2.det()) < 1e-300)
    throw Error(ErrorKind::SingularBasis, "transition: singular basis");
  const Mat2 m = P2.inverse() * P1;
  const double dt = std::fabs(m.det());
  if (dt == 0.0 || !std::isfinite(dt))
    throw Error(ErrorKind::SingularBasis, "transition: singular transition matrix");
  return (1.0 / std::sqrt(dt)) * m;
}

Mat2 expm(const JordanDecomp& d, double t) {
  if (!std::isfinite(t)) throw Error(ErrorKind::NonFinite, "expm: non-finite time");
  Mat2 e;
  switch (d.cls) {
    case JordanClass::RealDiag:
      e = Mat2::diag(std::exp(d.diag_first() * t), std::exp(d.diag_second() * t));
      break;
    case JordanClass::ComplexPair: {
      const double g = std::exp(d.alpha() * t);
      const double ct = std::cos(d.beta() * t), st = std::sin(d.beta() * t);
      e = Mat2{g * ct, g * st, -g * st, g * ct};
      break;
    }
    case JordanClass::Defective: {
      const double g = std::exp(d.lambda() * t);
      e = Mat2{g, g * t, 0.0, g};
      break;
    }
  }
  if (!e.finite()) throw Error(ErrorKind::Overflow, "expm: entry exceeded representable range");
  return e;
}

Mat2 expm_full(const JordanDecomp& d, double t) {
  const Mat2 e = d.P * expm(d, t) * d.P.inverse();
  if (!e.finite()) throw Error(ErrorKind::Overflow, "expm_full: entry exceeded representable range");
  return e;
}

double sup_expm_norm(const JordanDecomp& d) {
  switch (d.cls) {
    case JordanClass::RealDiag:
    case JordanClass::ComplexPair:
      return 1.0;
    case JordanClass::Defective: {
      const double n = -d.lambda();
      if (n <= 0.0) throw Error(ErrorKind::BadParams, "sup_expm_norm: block is not Hurwitz");
      if (n >= 0.5) return 1.0;
      // d/dt [log theta(t) - n t] = 0 at sqrt(1 + t^2/4) = 1/(2n)
      const double tstar = 2.0 * std::sqrt(1.0 / (4.0 * n * n) - 1.0);
      return std::exp(-n * tstar) * theta(tstar);
    }
  }
  return 1.0;
}

double sup_expm_norm(const JordanDecomp& d, double horizon) {
  switch (d.cls) {
    case JordanClass::RealDiag: {
      const double top = std::max(d.diag_first(), d.diag_second());
      return std::exp(std::max(top, 0.0) * horizon);
    }
    case JordanClass::ComplexPair:
      return std::exp(std::max(d.alpha(), 0.0) * horizon);
    case JordanClass::Defective: {
      const double lam = d.lambda();
      if (lam >= 0.0) return std::exp(lam * horizon) * theta(horizon);
      const double n = -lam;
      if (n >= 0.5) return 1.0;
      const double tstar = 2.0 * std::sqrt(1.0 / (4.0 * n * n) - 1.0);
      if (horizon >= tstar) return sup_expm_norm(d);
      return std::exp(lam * horizon) * theta(horizon);
    }
  }
  return 1.0;
}

}  // namespace dwellflee
