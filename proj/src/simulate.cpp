#include "dwellflee/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

namespace dwellflee {

int Signal::periods() const { return static_cast<int>(durations.size() / 2); }

Signal make_signal(double tau, double eta, SignalPolicy policy, int n_periods, double delta,
                   std::uint64_t seed) {
  if (tau <= 0.0 || eta <= 0.0 || n_periods < 1)
    throw Error(ErrorKind::BadParams, "make_signal: need tau, eta > 0 and n_periods >= 1");
  if (policy != SignalPolicy::Corner && delta <= 0.0)
    throw Error(ErrorKind::BadParams, "make_signal: jitter/random need delta > 0");
  Signal sig;
  sig.durations.reserve(static_cast<size_t>(2 * n_periods));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ut(tau, tau + delta);
  std::uniform_real_distribution<double> us(0.5 * eta, eta);
  for (int k = 0; k < n_periods; ++k) {
    double t = tau, s = eta;
    switch (policy) {
      case SignalPolicy::Corner: break;
      case SignalPolicy::Jitter:
        t = tau + delta;
        s = eta - std::min(delta, 0.5 * eta);
        break;
      case SignalPolicy::Random:
        t = ut(rng);
        s = us(rng);
        break;
    }
    sig.durations.emplace_back(1, t);
    sig.durations.emplace_back(2, s);
  }
  return sig;
}

Signal signal_from_deltas(const std::vector<double>& deltas) {
  Signal sig;
  sig.durations.reserve(deltas.size());
  for (size_t k = 0; k < deltas.size(); ++k) {
    if (deltas[k] <= 0.0) throw Error(ErrorKind::BadParams, "signal: durations must be positive");
    sig.durations.emplace_back(k % 2 == 0 ? 1 : 2, deltas[k]);
  }
  return sig;
}

SignalClass signal_in_class(const Signal& sig, double tau, double eta, double tol,
                            double eps_class) {
  std::vector<std::pair<double, double>> periods;
  for (size_t k = 0; k + 1 < sig.durations.size(); k += 2)
    periods.emplace_back(sig.durations[k].second, sig.durations[k + 1].second);
  for (const auto& [t, s] : periods)
    if (t < tau - tol || s > eta + tol) return SignalClass::NotInS;
  if (sig.durations.size() % 2 == 1 && sig.durations.back().second < tau - tol)
    return SignalClass::NotInS;

  // Finite proxy for "does not converge to (tau, eta)": the final half of the
  // periods stays eps_class away from the corner in max-norm.
  const size_t np = periods.size();
  if (np == 0) return SignalClass::SOnly;
  const size_t tail_start = np - (np + 1) / 2;
  for (size_t k = tail_start; k < np; ++k) {
    const double dist =
        std::max(std::fabs(periods[k].first - tau), std::fabs(periods[k].second - eta));
    if (dist < eps_class) return SignalClass::SOnly;
  }
  return SignalClass::SPrime;
}

bool signal_in_dynamic_class(const Signal& sig, const SwitchedPair& pair, DynClass which,
                             const DwellFleeOpts& opts) {
  const bool s12 = which == DynClass::S12;
  bool supported = false;
  switch (pair.tag) {
    case CaseTag::RC: supported = !s12; break;
    case CaseTag::CR: supported = s12; break;
    case CaseTag::NR: supported = s12; break;
    case CaseTag::RN: supported = !s12; break;
    case CaseTag::NN:
    case CaseTag::NC:
    case CaseTag::CN:
    case CaseTag::CC: supported = true; break;
    case CaseTag::RR: supported = false; break;
  }
  if (!supported)
    throw Error(ErrorKind::UnsupportedBranch,
                "signal_in_dynamic_class: no per-step certificate for this case/direction");

  std::vector<std::pair<double, double>> periods;
  for (size_t k = 0; k + 1 < sig.durations.size(); k += 2)
    periods.emplace_back(sig.durations[k].second, sig.durations[k + 1].second);

  for (size_t k = 0; k < periods.size(); ++k) {
    const double s_k = periods[k].second;
    const DwellFleeResult r = dwell_flee(pair, s_k, opts);
    if (s12) {
      if (periods[k].first < r.tau12) return false;
    } else {
      // t_{k+1} >= tau21(s_k): the next stable interval undoes this excursion.
      if (k + 1 < periods.size() && periods[k + 1].first < r.tau21) return false;
      if (k + 1 == periods.size() && sig.durations.size() % 2 == 1 &&
          sig.durations.back().second < r.tau21)
        return false;
    }
  }
  return true;
}

Trajectory flow(const SwitchedPair& pair, const Signal& sig, Vec2 x0, int samples_per_interval) {
  if (!(std::isfinite(x0.x) && std::isfinite(x0.y)))
    throw Error(ErrorKind::NonFinite, "flow: non-finite initial state");
  if (samples_per_interval < 1) samples_per_interval = 1;
  Trajectory traj;
  traj.times.reserve(sig.durations.size() * static_cast<size_t>(samples_per_interval + 1) + 1);

  double t0 = 0.0;
  Vec2 x = x0;
  for (size_t k = 0; k < sig.durations.size(); ++k) {
    const auto [mode, dt] = sig.durations[k];
    if (mode != 1 && mode != 2) throw Error(ErrorKind::BadParams, "flow: bimodal signals only");
    if (dt <= 0.0) throw Error(ErrorKind::BadParams, "flow: durations must be positive");
    const JordanDecomp& d = mode == 1 ? pair.d1 : pair.d2;
    if (k > 0) traj.switch_indices.push_back(traj.times.size());
    const Mat2 frame = d.P;
    const Vec2 y = d.P.inverse() * x;  // Jordan-frame coordinates for this interval
    // Rows j = 0..spi: interval start, interiors, and a closing row at the
    // switch instant; the next interval re-emits that instant with its mode.
    for (int j = 0; j <= samples_per_interval; ++j) {
      const double local = dt * j / samples_per_interval;
      traj.times.push_back(t0 + local);
      traj.states.push_back(frame * (expm(d, local) * y));
      traj.modes.push_back(mode);
    }
    x = traj.states.back();
    if (!(std::isfinite(x.x) && std::isfinite(x.y)))
      throw Error(ErrorKind::Overflow, "flow: state overflowed in interval " + std::to_string(k));
    t0 += dt;
  }
  return traj;
}

std::vector<double> decay_envelope(const Trajectory& traj) {
  // States at the even switching instants d_0, d_2, d_4, ...
  std::vector<double> norms;
  norms.push_back(traj.states.empty() ? 0.0 : traj.states.front().norm());
  for (size_t k = 1; k < traj.switch_indices.size(); k += 2)
    norms.push_back(traj.states[traj.switch_indices[k]].norm());
  if ((traj.switch_indices.size() % 2) == 1)
    norms.push_back(traj.states.back().norm());  // final point closes a period
  std::vector<double> ratios;
  for (size_t k = 1; k < norms.size(); ++k)
    ratios.push_back(norms[k - 1] > 0.0 ? norms[k] / norms[k - 1] : 0.0);
  return ratios;
}

FlowBound flow_bound_constants(const SwitchedPair& pair, const ScalingParams& sc, double eta) {
  auto scale_mat = [](JordanClass cls, double lambda, double eps) {
    if (cls == JordanClass::RealDiag && lambda == lambda) return Mat2::diag(lambda, 1.0 / lambda);
    if (cls == JordanClass::Defective && eps == eps) return Mat2{1.0, eps, 0.0, 1.0};
    return Mat2::identity();
  };
  const Mat2 v1 = pair.d1.P * scale_mat(pair.d1.cls, sc.lambda1, sc.eps1);
  const Mat2 v2 = (1.0 / pair.m_scale) * (pair.d2.P * scale_mat(pair.d2.cls, sc.lambda2, sc.eps2));
  const Mat2 v1i = v1.inverse(), v2i = v2.inverse();
  const double n_v1 = spectral_norm(v1);
  const double n_v12 = spectral_norm(v1i * v2);
  const double n_v21 = spectral_norm(v2i * v1);
  FlowBound fb;
  fb.zeta = std::max(n_v1 * n_v12 * n_v21 * spectral_norm(v1i), n_v1 * n_v12 * spectral_norm(v2i));
  const double sup1 = sup_expm_norm(pair.d1);
  fb.xi = sup1 * sup1 * sup_expm_norm(pair.d2, eta);
  return fb;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,x1,x2,mode\n";
  char buf[128];
  for (size_t k = 0; k < traj.times.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%d\n", traj.times[k], traj.states[k].x,
                  traj.states[k].y, traj.modes[k]);
    os << buf;
  }
}

}  // namespace dwellflee
