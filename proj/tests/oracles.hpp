// Test-only oracles, independent of the library's computation paths.
#ifndef DWELLFLEE_TESTS_ORACLES_HPP
#define DWELLFLEE_TESTS_ORACLES_HPP

#include <cmath>
#include <random>

#include "dwellflee/dwellflee.hpp"

namespace oracles {

using dwellflee::Mat2;
using dwellflee::Vec2;

// Spectral norm by power iteration on A^T A.
inline double power_iteration_norm(const Mat2& A, int steps = 100) {
  const Mat2 g = A.transpose() * A;
  Vec2 v{0.6, 0.8};
  for (int i = 0; i < steps; ++i) {
    Vec2 w = g * v;
    const double n = w.norm();
    if (n == 0.0) return 0.0;
    v = (1.0 / n) * w;
  }
  const Vec2 w = g * v;
  return std::sqrt(w.norm());
}

// Truncated Taylor series for e^{J t}; remainder < 1e-12 for the small
// arguments the tests use.
inline Mat2 taylor_expm(const Mat2& J, double t, int terms = 20) {
  Mat2 sum = Mat2::identity();
  Mat2 term = Mat2::identity();
  for (int k = 1; k <= terms; ++k) {
    term = (t / k) * (term * J);
    sum = sum + term;
  }
  return sum;
}

// Random well-conditioned basis: rotation * diag(r, 1/r) * rotation.
inline Mat2 random_basis(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 3.14159265358979);
  std::uniform_real_distribution<double> stretch(0.6, 1.8);
  auto rot = [](double th) {
    return Mat2{std::cos(th), std::sin(th), -std::sin(th), std::cos(th)};
  };
  const double r = stretch(rng);
  return rot(angle(rng)) * Mat2::diag(r, 1.0 / r) * rot(angle(rng));
}

enum class Kind { RealDiag, Complex, Defective };

// Random admissible matrix of the requested kind (Hurwitz when stable).
inline Mat2 random_matrix(std::mt19937_64& rng, Kind kind, bool stable) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Mat2 p = random_basis(rng);
  Mat2 j;
  switch (kind) {
    case Kind::RealDiag: {
      if (stable) {
        const double p1 = 0.15 + 1.0 * u(rng);
        const double q1 = p1 + 0.05 + 0.8 * u(rng);
        j = Mat2::diag(-p1, -q1);
      } else {
        const double q2 = 0.15 + 0.8 * u(rng);
        const double p2 = -0.4 + (q2 * 0.95 + 0.4) * u(rng);
        j = Mat2::diag(p2, q2);
      }
      break;
    }
    case Kind::Complex: {
      const double al = 0.1 + 0.9 * u(rng);
      const double be = 0.5 + 2.0 * u(rng);
      j = stable ? Mat2{-al, be, -be, -al} : Mat2{al, be, -be, al};
      break;
    }
    case Kind::Defective: {
      const double n = stable ? 0.1 + 0.9 * u(rng) : 0.8 * u(rng);
      j = stable ? Mat2{-n, 1.0, 0.0, -n} : Mat2{n, 1.0, 0.0, n};
      break;
    }
  }
  return p * j * p.inverse();
}

inline dwellflee::SwitchedPair random_pair(std::mt19937_64& rng, Kind stable_kind,
                                           Kind unstable_kind) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    try {
      return dwellflee::build_pair(random_matrix(rng, stable_kind, true),
                                   random_matrix(rng, unstable_kind, false));
    } catch (const dwellflee::Error&) {
      continue;  // rare near-degenerate draw
    }
  }
  throw std::runtime_error("random_pair: generation kept failing");
}

inline Kind kind_of(char c) {
  switch (c) {
    case 'R': return Kind::RealDiag;
    case 'C': return Kind::Complex;
    default: return Kind::Defective;
  }
}

inline dwellflee::SwitchedPair random_pair_for_case(std::mt19937_64& rng, dwellflee::CaseTag tag) {
  const char* name = dwellflee::to_string(tag);
  return random_pair(rng, kind_of(name[0]), kind_of(name[1]));
}

}  // namespace oracles

#endif
