#ifndef DWELLFLEE_MAT2_HPP
#define DWELLFLEE_MAT2_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dwellflee {

// Error kinds surfaced by the library. Everything throws Error; `kind` is the
// machine-readable tag, what() carries context.
enum class ErrorKind {
  NonFinite,
  DegenerateBasis,
  SingularBasis,
  NotHurwitz,
  NotUnstable,
  ZeroMatrix,
  NegativeArgument,
  Overflow,
  NoBracket,
  NoRoot,
  InvalidInterval,
  SolverFailure,
  UnsupportedBranch,
  BadParams,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

struct Vec2 {
  double x = 0.0, y = 0.0;

  double norm() const { return std::hypot(x, y); }
};

inline Vec2 operator+(Vec2 u, Vec2 v) { return {u.x + v.x, u.y + v.y}; }
inline Vec2 operator-(Vec2 u, Vec2 v) { return {u.x - v.x, u.y - v.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }

// 2x2 real matrix, row-major [[a,b],[c,d]].
struct Mat2 {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Mat2 diag(double x, double y) { return {x, 0.0, 0.0, y}; }

  double det() const { return a * d - b * c; }
  double trace() const { return a + d; }

  bool finite() const {
    return std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d);
  }

  Mat2 inverse() const {
    const double dt = det();
    if (dt == 0.0 || !std::isfinite(dt)) throw Error(ErrorKind::SingularBasis, "singular 2x2 matrix");
    return {d / dt, -b / dt, -c / dt, a / dt};
  }

  Mat2 transpose() const { return {a, c, b, d}; }

  double max_abs() const {
    return std::max(std::max(std::fabs(a), std::fabs(b)), std::max(std::fabs(c), std::fabs(d)));
  }
};

inline Mat2 operator*(const Mat2& l, const Mat2& r) {
  return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d,
          l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
}

inline Vec2 operator*(const Mat2& m, Vec2 v) {
  return {m.a * v.x + m.b * v.y, m.c * v.x + m.d * v.y};
}

inline Mat2 operator*(double s, const Mat2& m) { return {s * m.a, s * m.b, s * m.c, s * m.d}; }
inline Mat2 operator+(const Mat2& l, const Mat2& r) { return {l.a + r.a, l.b + r.b, l.c + r.c, l.d + r.d}; }
inline Mat2 operator-(const Mat2& l, const Mat2& r) { return {l.a - r.a, l.b - r.b, l.c - r.c, l.d - r.d}; }

// Spectral norm via the exact singular-value identity
//   2*sigma_max = sqrt((a+d)^2+(b-c)^2) + sqrt((a-d)^2+(b+c)^2),
// which is stable for all entry magnitudes.
inline double spectral_norm(const Mat2& m) {
  const double p = std::hypot(m.a + m.d, m.b - m.c);
  const double q = std::hypot(m.a - m.d, m.b + m.c);
  return 0.5 * (p + q);
}

// Trace/determinant test for ||K|| < 1, evaluated on the Gram matrix K^T K:
// (C1) |det(K^T K)| < 1 and (C2) |tr(K^T K)| < 1 + det(K^T K).
bool fleming_lt1(const Mat2& k);

// Spectral norm of the unit shear [[1,t],[0,1]].
double theta(double t);

// log(theta(t)); equals asinh(t/2) exactly and stays accurate for large t.
inline double log_theta(double t) { return std::asinh(0.5 * t); }

}  // namespace dwellflee

#endif
