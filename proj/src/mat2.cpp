#include "dwellflee/mat2.hpp"

namespace dwellflee {

bool fleming_lt1(const Mat2& k) {
  if (!k.finite()) throw Error(ErrorKind::NonFinite, "fleming_lt1: non-finite entry");
  const Mat2 g = k.transpose() * k;
  const double det_g = g.det();
  const double tr_g = g.trace();
  return std::fabs(det_g) < 1.0 && std::fabs(tr_g) < 1.0 + det_g;
}

double theta(double t) {
  if (t < 0.0) throw Error(ErrorKind::NegativeArgument, "theta: t must be >= 0");
  return std::sqrt(1.0 + 0.5 * t * t + t * std::sqrt(1.0 + 0.25 * t * t));
}

}  // namespace dwellflee
