#ifndef DWELLFLEE_DWELLFLEE_HPP
#define DWELLFLEE_DWELLFLEE_HPP

#include <limits>
#include <string>
#include <vector>

#include "dwellflee/jordan.hpp"
#include "dwellflee/mat2.hpp"

namespace dwellflee {

// Jordan-class pair, stable side first: R = real-diagonalizable,
// C = non-real eigenvalue pair, N = defective.
enum class CaseTag { RR, RC, CR, NN, NC, CN, NR, RN, CC };

const char* to_string(CaseTag tag);

struct Tols {
  DecompTols decomp;
  double boundary = 1e-12;  // sub-case boundary snap (entries, ad, ac, cd)
  double solver = 1e-10;
};

// Validated (Hurwitz, unstable) pair with both decompositions and the
// normalized transition matrix M = m_scale * P2^-1 * P1, |det M| = 1.
// det M = +1 whenever either factor is real-diagonalizable (a column sign on
// the diagonalizable side is always free). When one matrix is scalar, both
// factors share a basis and M = I.
struct SwitchedPair {
  Mat2 A1, A2;
  JordanDecomp d1, d2;
  Mat2 M;
  double m_scale = 1.0;
  CaseTag tag = CaseTag::RR;
  bool shared_basis = false;

  // Stable-side rates.
  double p1() const { return -d1.diag_first(); }
  double q1() const { return -d1.diag_second(); }
  double alpha1() const { return -d1.alpha(); }
  double beta1() const { return d1.beta(); }
  double n1() const { return -d1.lambda(); }
  // Unstable-side rates.
  double p2() const { return d2.diag_first(); }
  double q2() const { return d2.diag_second(); }
  double alpha2() const { return d2.alpha(); }
  double beta2() const { return d2.beta(); }
  double n2() const { return d2.lambda(); }
};

SwitchedPair build_pair(const Mat2& A1, const Mat2& A2, const Tols& tols = {});

// Scaling parameters for Jordan-basis variation: diagonal D = diag(lambda,
// 1/lambda) on a real-diagonalizable factor, shear E = [[1,eps],[0,1]] on a
// defective factor. NaN marks an inactive parameter.
struct ScalingParams {
  double lambda1 = std::numeric_limits<double>::quiet_NaN();
  double lambda2 = std::numeric_limits<double>::quiet_NaN();
  double eps1 = std::numeric_limits<double>::quiet_NaN();
  double eps2 = std::numeric_limits<double>::quiet_NaN();

  bool has_lambda1() const { return lambda1 == lambda1; }
  bool has_lambda2() const { return lambda2 == lambda2; }
  bool has_eps1() const { return eps1 == eps1; }
  bool has_eps2() const { return eps2 == eps2; }
};

struct TauPair {
  double tau12 = 0.0;
  double tau21 = 0.0;
  std::string subcase;
  double margin = 0.0;  // additive eps0 applied on "+eps" sub-cases, else 0
};

struct DwellFleeOpts {
  double margin_scale = 1e-6;  // eps0 = margin_scale * (1 + eta)
  double solver_tol = 1e-10;
};

struct DwellFleeResult {
  double eta = 0.0;
  double tau12 = 0.0;
  double tau21 = 0.0;
  double tau = 0.0;
  int tau_branch = 12;  // which branch attains the min
  std::string subcase;
  double margin = 0.0;
  ScalingParams scaling;  // realized certificate parameters
};

// Per-case dwell-flee relations; eta >= 0. eps0 is the additive margin used by
// the sub-cases stated with "+eps".
TauPair tau_rr(const SwitchedPair& pair, double eta, double eps0, const Tols& tols = {});
TauPair tau_rc(const SwitchedPair& pair, double eta, const Tols& tols = {});
TauPair tau_cr(const SwitchedPair& pair, double eta, const Tols& tols = {});
TauPair tau_nn(const SwitchedPair& pair, double eta, const Tols& tols = {});
TauPair tau_nc(const SwitchedPair& pair, double eta, const Tols& tols = {});
TauPair tau_cn(const SwitchedPair& pair, double eta, const Tols& tols = {});
TauPair tau_nr(const SwitchedPair& pair, double eta, double eps0, const Tols& tols = {});
TauPair tau_rn(const SwitchedPair& pair, double eta, double eps0, const Tols& tols = {});
TauPair tau_cc(const SwitchedPair& pair, double eta, const Tols& tols = {});

DwellFleeResult dwell_flee(const SwitchedPair& pair, double eta, const DwellFleeOpts& opts = {});

struct TauCurve {
  std::vector<DwellFleeResult> points;
  bool monotone12 = true;
  bool monotone21 = true;
};

TauCurve tau_curve(const SwitchedPair& pair, const std::vector<double>& etas,
                   const DwellFleeOpts& opts = {});

// The proof-prescribed scaling value certifying one grouping, when a closed
// recipe exists: order 12 varies the stable-side basis, order 21 the unstable
// side. `tau` is the dwell time the rectangle starts at.
// Returns NaN when the sub-case has no closed recipe (sweep territory).
double certificate_scaling_value(const SwitchedPair& pair, int order, double tau, double eta);

// Assembles ScalingParams with both directions' prescribed values.
ScalingParams certificate_scaling(const SwitchedPair& pair, double tau12, double tau21, double eta);

}  // namespace dwellflee

#endif
