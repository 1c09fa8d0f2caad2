#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dwellflee/extend.hpp"
#include "dwellflee/solve1d.hpp"
#include "dwellflee/verify.hpp"
#include "oracles.hpp"

using namespace dwellflee;

namespace {

SwitchedPair pair_from(const Mat2& j1, const Mat2& j2, const Mat2& m) {
  return build_pair(m * j1 * m.inverse(), j2);
}

}  // namespace

TEST_CASE("sbs_tau reduces to the bimodal value for constant unit drive") {
  std::mt19937_64 rng(91);
  for (auto tag : {CaseTag::RC, CaseTag::CC, CaseTag::NN, CaseTag::RR}) {
    const SwitchedPair p = oracles::random_pair_for_case(rng, tag);
    BilinearInput bi;
    bi.pair = p;
    bi.u_lo = bi.u_hi = 1.0;
    const double eta = 0.8;
    CHECK(sbs_tau(bi, eta) == dwell_flee(p, eta).tau);
  }
}

TEST_CASE("sbs_tau composes the drive bounds") {
  const SwitchedPair cc = pair_from(Mat2{-1.0, 1.0, -1.0, -1.0}, Mat2{0.5, 2.0, -2.0, 0.5},
                                    Mat2::identity());
  BilinearInput bi;
  bi.pair = cc;
  bi.u_lo = 1.0;
  bi.u_hi = 2.0;
  const double eta = 1.5;
  CHECK(sbs_tau(bi, eta) == doctest::Approx(0.5 * 2.0 * eta).epsilon(1e-12));
}

TEST_CASE("flow_bilinear") {
  const SwitchedPair p = build_pair(Mat2::diag(-1.0, -2.0), Mat2::diag(0.5, 1.0));
  Signal sig;
  sig.durations.emplace_back(1, 2.0);
  sig.durations.emplace_back(2, 0.3);
  sig.durations.emplace_back(1, 2.0);
  const Vec2 x0{1.0, -1.0};
  {
    BilinearInput bi;
    bi.pair = p;  // u == 1 with no pieces
    const Trajectory a = flow_bilinear(bi, sig, x0, 4);
    const Trajectory b = flow(p, sig, x0, 4);
    REQUIRE(a.states.size() == b.states.size());
    for (size_t k = 0; k < a.states.size(); ++k)
      CHECK((a.states[k] - b.states[k]).norm() < 1e-12);
  }
  {
    // u == 2 over a single stable interval equals time dilation by 2.
    BilinearInput bi;
    bi.pair = p;
    bi.u_pieces = {{2.0, 100.0}};
    Signal single;
    single.durations.emplace_back(1, 1.5);
    const Trajectory a = flow_bilinear(bi, single, x0, 2);
    Signal doubled;
    doubled.durations.emplace_back(1, 3.0);
    const Trajectory b = flow(p, doubled, x0, 2);
    CHECK((a.states.back() - b.states.back()).norm() < 1e-12);
  }
  {
    // Certified signal with u inside [0.5, 1.5]: envelope stays bounded.
    std::mt19937_64 rng(93);
    const SwitchedPair rc = oracles::random_pair(rng, oracles::Kind::RealDiag, oracles::Kind::Complex);
    BilinearInput bi;
    bi.pair = rc;
    bi.u_lo = 0.5;
    bi.u_hi = 1.5;
    std::uniform_real_distribution<double> upiece(0.0, 1.0);
    for (int k = 0; k < 200; ++k)
      bi.u_pieces.push_back({upiece(rng) < 0.5 ? 0.5 : 1.5, 0.5 + upiece(rng)});
    const double eta = 0.8;
    const double tau = sbs_tau(bi, eta);
    const Signal sig = make_signal(tau + 0.05, eta - 0.05, SignalPolicy::Corner, 20);
    const Trajectory traj = flow_bilinear(bi, sig, Vec2{1.0, 1.0});
    CHECK(traj.states.back().norm() < 10.0 * traj.states.front().norm());
    CHECK(traj.states.back().norm() < traj.states.front().norm());
  }
}

TEST_CASE("star with one leaf reproduces the bimodal complex-center formulas") {
  std::mt19937_64 rng(95);
  for (auto kind : {oracles::Kind::Complex, oracles::Kind::Defective, oracles::Kind::RealDiag}) {
    const Mat2 a1 = oracles::random_matrix(rng, oracles::Kind::Complex, true);
    const Mat2 a2 = oracles::random_matrix(rng, kind, false);
    const StarSystem star = build_star(a1, {a2});
    const SwitchedPair p = build_pair(a1, a2);
    const double eta = 1.2;
    const StarResult r = star_tau(star, eta);
    double expect = 0.0;
    switch (p.tag) {
      case CaseTag::CC: expect = tau_cc(p, eta).tau12; break;
      case CaseTag::CN: expect = tau_cn(p, eta).tau12; break;
      case CaseTag::CR: expect = tau_cr(p, eta).tau12; break;
      default: REQUIRE(false);
    }
    CHECK(r.tau == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("star with one leaf matches the defective-center bimodal family") {
  std::mt19937_64 rng(97);
  for (auto kind : {oracles::Kind::Complex, oracles::Kind::Defective, oracles::Kind::RealDiag}) {
    const Mat2 a1 = oracles::random_matrix(rng, oracles::Kind::Defective, true);
    const Mat2 a2 = oracles::random_matrix(rng, kind, false);
    const StarSystem star = build_star(a1, {a2});
    const SwitchedPair p = build_pair(a1, a2);
    const double eta = 0.9;
    const StarResult r = star_tau(star, eta);
    double expect = 0.0;
    switch (p.tag) {
      case CaseTag::NC: expect = tau_nc(p, eta).tau12; break;
      case CaseTag::NN: expect = tau_nn(p, eta).tau12; break;
      case CaseTag::NR: expect = tau_nr(p, eta, 1e-6).tau12; break;
      default: REQUIRE(false);
    }
    CHECK(r.tau == doctest::Approx(expect).epsilon(1e-6));
  }
}

TEST_CASE("scalar real center with identity transition and one complex leaf") {
  // tau = (alpha2/p1) eta attained at lambda = 1.
  const Mat2 a1 = Mat2::diag(-0.4, -0.4);
  const Mat2 a2{0.3, 1.0, -1.0, 0.3};
  const StarSystem star = build_star(a1, {a2});
  const double eta = 2.0;
  const StarResult r = star_tau(star, eta);
  CHECK(r.tau == doctest::Approx(0.3 * eta / 0.4).epsilon(1e-7));
  CHECK(r.param == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("three-leaf minimax matches a dense parameter sweep") {
  std::mt19937_64 rng(99);
  const Mat2 a1 = oracles::random_matrix(rng, oracles::Kind::RealDiag, true);
  const std::vector<Mat2> leaves = {
      oracles::random_matrix(rng, oracles::Kind::Complex, false),
      oracles::random_matrix(rng, oracles::Kind::Defective, false),
      oracles::random_matrix(rng, oracles::Kind::RealDiag, false),
  };
  const StarSystem star = build_star(a1, leaves);
  const double eta = 1.0;
  const StarResult r = star_tau(star, eta);

  // 1e5-point dense sweep over log lambda.
  const JordanDecomp d1 = real_jordan(a1);
  const double p1 = -d1.diag_first();
  double dense = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 100000; ++i) {
    const double lambda = std::pow(10.0, -4.0 + 8.0 * i / 99999.0);
    double worst = 0.0;
    for (const StarLeaf& leaf : star.leaves) {
      const Mat2& m = leaf.M;
      double tau_j = 0.0;
      const double l2 = lambda * lambda;
      switch (leaf.d.cls) {
        case JordanClass::ComplexPair: {
          const double arg = 0.5 * ((m.a * m.a + m.c * m.c) * l2 + (m.b * m.b + m.d * m.d) / l2);
          tau_j = (leaf.d.alpha() * eta + std::acosh(std::max(1.0, arg))) / p1;
          break;
        }
        case JordanClass::Defective: {
          const double arg = 0.5 * (m.c * m.c * l2 + m.d * m.d / l2);
          tau_j = (leaf.d.lambda() * eta + std::asinh(arg * eta)) / p1;
          break;
        }
        case JordanClass::RealDiag: {
          const double pj = leaf.d.diag_first(), qj = leaf.d.diag_second();
          const double q = m.b * m.d / l2 + m.a * m.c * l2;
          tau_j = (0.5 * (pj + qj) * eta +
                   std::asinh(std::sqrt(1.0 + q * q) * std::sinh(0.5 * (qj - pj) * eta))) /
                  p1;
          break;
        }
      }
      worst = std::max(worst, tau_j);
    }
    dense = std::min(dense, worst);
  }
  CHECK(r.tau == doctest::Approx(dense).epsilon(1e-4));
  CHECK(r.tau <= dense + 1e-4);

  // Each leaf certificate holds at the returned parameter.
  for (size_t j = 0; j < star.leaves.size(); ++j) {
    const SwitchedPair sub = build_pair(a1, star.leaves[j].A);
    const VerifyReport rep = verify_rect(sub, r.tau + 1e-6, eta - 1e-6);
    CHECK(rep.pass);
  }
}

TEST_CASE("star_tau is nondecreasing in eta") {
  std::mt19937_64 rng(101);
  const Mat2 a1 = oracles::random_matrix(rng, oracles::Kind::Defective, true);
  const std::vector<Mat2> leaves = {
      oracles::random_matrix(rng, oracles::Kind::RealDiag, false),
      oracles::random_matrix(rng, oracles::Kind::Complex, false),
  };
  const StarSystem star = build_star(a1, leaves);
  double prev = 0.0;
  for (double eta = 0.2; eta <= 3.0; eta += 0.2) {
    const double v = star_tau(star, eta).tau;
    CHECK(v >= prev - 1e-8);
    prev = v;
  }
}

TEST_CASE("star rejects bad inputs") {
  CHECK_THROWS_AS((void)build_star(Mat2::diag(1.0, 2.0), {Mat2::diag(1.0, 2.0)}), Error);
  CHECK_THROWS_AS((void)build_star(Mat2::diag(-1.0, -2.0), {Mat2::diag(-1.0, -2.0)}), Error);
  CHECK_THROWS_AS((void)build_star(Mat2::diag(-1.0, -2.0), {}), Error);
}
