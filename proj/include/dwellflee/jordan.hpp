#ifndef DWELLFLEE_JORDAN_HPP
#define DWELLFLEE_JORDAN_HPP

#include "dwellflee/mat2.hpp"

namespace dwellflee {

enum class EigenKind { RealDistinct, RealRepeatedDiagonalizable, Defective, ComplexPair };

enum class JordanClass { RealDiag, ComplexPair, Defective };

enum class StabilityClass { Hurwitz, UnstableAdmissible, Rejected };

struct DecompTols {
  double disc_rel = 1e-9;    // discriminant threshold scale: tol = disc_rel * (1 + ||A||^2)
  double residual = 1e-9;    // relative residual bound for ||P J P^-1 - A||
};

// Real Jordan decomposition of a 2x2 matrix: A = P J P^-1 with J in one of the
// three canonical shapes.
//
//   RealDiag:    J = diag(l1, l2). Hurwitz matrices store the slow rate first
//                (J = diag(-p, -q), 0 < p <= q); otherwise ascending (p <= q).
//   ComplexPair: J = [[alpha, beta], [-beta, alpha]], beta > 0.
//   Defective:   J = [[lambda, 1], [0, lambda]].
struct JordanDecomp {
  JordanClass cls = JordanClass::RealDiag;
  Mat2 P;  // basis, unit-norm eigenvector columns where the class permits
  Mat2 J;

  // Named parameter accessors (valid per class).
  double diag_first() const { return J.a; }
  double diag_second() const { return J.d; }
  double alpha() const { return J.a; }
  double beta() const { return J.b; }
  double lambda() const { return J.a; }
};

EigenKind classify_eigen(const Mat2& A, double tol_disc);

JordanDecomp real_jordan(const Mat2& A, const DecompTols& tols = {});

StabilityClass stability_class(const JordanDecomp& d);

// M = s * P2^-1 * P1 with s > 0 chosen so that |det M| = 1.
Mat2 transition(const Mat2& P1, const Mat2& P2);

// Closed-form exponential of the canonical form: e^{J t}.
Mat2 expm(const JordanDecomp& d, double t);

// e^{A t} = P e^{J t} P^-1.
Mat2 expm_full(const JordanDecomp& d, double t);

// sup_{t >= 0} ||e^{J t}|| for a Hurwitz canonical form (1 unless the block is
// defective with rate below 1/2, where the shear transiently overshoots).
double sup_expm_norm(const JordanDecomp& d);

// sup_{t in [0, horizon]} ||e^{J t}||.
double sup_expm_norm(const JordanDecomp& d, double horizon);

}  // namespace dwellflee

#endif
