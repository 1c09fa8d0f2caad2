#ifndef DWELLFLEE_SIMULATE_HPP
#define DWELLFLEE_SIMULATE_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "dwellflee/dwellflee.hpp"

namespace dwellflee {

// Alternating (mode, duration) list with sigma(0) = 1. Bimodal signals
// alternate 1,2,1,2,...; multimodal star signals keep mode 1 in the odd slots
// and any leaf index in the even slots.
struct Signal {
  std::vector<std::pair<int, double>> durations;

  int periods() const;  // complete (stable, unstable) pairs
};

enum class SignalPolicy { Corner, Jitter, Random };

Signal make_signal(double tau, double eta, SignalPolicy policy, int n_periods, double delta = 0.1,
                   std::uint64_t seed = 0);

Signal signal_from_deltas(const std::vector<double>& deltas);

enum class SignalClass { SPrime, SOnly, NotInS };

SignalClass signal_in_class(const Signal& sig, double tau, double eta, double tol = 1e-12,
                            double eps_class = 1e-9);

enum class DynClass { S12, S21 };

// Membership in the per-step classes t_k >= tau12(s_k) (S12) resp.
// t_{k+1} >= tau21(s_k) (S21), using the branch certified for the pair's case;
// throws UnsupportedBranch where no such certificate exists (RR).
bool signal_in_dynamic_class(const Signal& sig, const SwitchedPair& pair, DynClass which,
                             const DwellFleeOpts& opts = {});

struct Trajectory {
  std::vector<double> times;
  std::vector<Vec2> states;
  std::vector<int> modes;                 // outgoing mode of each sample
  std::vector<std::size_t> switch_indices;  // rows that start a new interval
};

// Exact piecewise-exponential propagation in the Jordan frame; interior
// samples use the same closed form, so there is no integrator error.
Trajectory flow(const SwitchedPair& pair, const Signal& sig, Vec2 x0, int samples_per_interval = 16);

// r_k = ||x(d_{2k})|| / ||x(d_{2k-2})|| over complete periods.
std::vector<double> decay_envelope(const Trajectory& traj);

struct FlowBound {
  double zeta = 0.0;
  double xi = 0.0;
};

// Constants of the flow estimate ||x(t)|| <= zeta * xi * prod(...) * ||x0||
// for the certificate bases P1 S1, P2 S2 (NaN scaling entries mean identity).
FlowBound flow_bound_constants(const SwitchedPair& pair, const ScalingParams& sc, double eta);

// CSV rows `t,x1,x2,mode`; switch instants appear twice, the duplicate row
// carrying the outgoing mode.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace dwellflee

#endif
