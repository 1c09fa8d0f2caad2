#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dwellflee/jordan.hpp"
#include "dwellflee/mat2.hpp"
#include "oracles.hpp"

using namespace dwellflee;

TEST_CASE("spectral norm closed form") {
  CHECK(spectral_norm(Mat2::identity()) == doctest::Approx(1.0));
  CHECK(spectral_norm(Mat2::diag(3.0, -4.0)) == doctest::Approx(4.0));
  const Mat2 shear{1.0, 1.0, 0.0, 1.0};
  CHECK(spectral_norm(shear) == doctest::Approx(theta(1.0)).epsilon(1e-12));

  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 50; ++i) {
    const Mat2 m{u(rng), u(rng), u(rng), u(rng)};
    CHECK(spectral_norm(m) ==
          doctest::Approx(oracles::power_iteration_norm(m)).epsilon(1e-9));
  }
}

TEST_CASE("fleming criterion matches the norm") {
  CHECK(fleming_lt1(0.5 * Mat2::identity()));
  CHECK_FALSE(fleming_lt1(Mat2::identity()));  // norm exactly 1

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  int checked = 0;
  for (int i = 0; i < 200 && checked < 50; ++i) {
    const Mat2 k{u(rng), u(rng), u(rng), u(rng)};
    const double n = spectral_norm(k);
    if (std::fabs(n - 1.0) < 1e-12) continue;
    ++checked;
    CHECK(fleming_lt1(k) == (n < 1.0));
  }
  CHECK(checked == 50);
}

TEST_CASE("theta") {
  CHECK(theta(0.0) == doctest::Approx(1.0));
  CHECK(theta(1.0) == doctest::Approx(spectral_norm(Mat2{1, 1, 0, 1})).epsilon(1e-12));
  CHECK(theta(10.0) == doctest::Approx(spectral_norm(Mat2{1, 10, 0, 1})).epsilon(1e-12));
  double prev = theta(0.0);
  for (double t = 0.5; t <= 100.0; t += 0.5) {
    const double v = theta(t);
    CHECK(v >= 1.0);
    CHECK(v > prev);
    CHECK(v == doctest::Approx(spectral_norm(Mat2{1, t, 0, 1})).epsilon(1e-10));
    prev = v;
  }
  CHECK(std::fabs(log_theta(3.7) - std::log(theta(3.7))) < 1e-12);
  CHECK_THROWS_AS((void)theta(-0.1), Error);
}

TEST_CASE("classify_eigen") {
  const double tol = 1e-9;
  CHECK(classify_eigen(Mat2::diag(-1.0, -2.0), tol) == EigenKind::RealDistinct);
  CHECK(classify_eigen(Mat2{-0.1, 1.0, 0.0, -0.1}, tol) == EigenKind::Defective);
  CHECK(classify_eigen(Mat2{0.0, 1.0, -2.0, 1.0}, tol) == EigenKind::ComplexPair);
  CHECK(classify_eigen(Mat2::diag(0.3, 0.3), tol) == EigenKind::RealRepeatedDiagonalizable);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS((void)classify_eigen(Mat2{inf, 0, 0, 1}, tol), Error);
}

TEST_CASE("real_jordan examples") {
  {
    const JordanDecomp d = real_jordan(Mat2::diag(-1.0, -2.0));
    CHECK(d.cls == JordanClass::RealDiag);
    CHECK(d.J.a == doctest::Approx(-1.0));
    CHECK(d.J.d == doctest::Approx(-2.0));
    CHECK(spectral_norm(d.P - Mat2::identity()) < 1e-12);
  }
  {
    const JordanDecomp d = real_jordan(Mat2{-0.1, 0.0, 0.4, -0.2});
    CHECK(d.J.a == doctest::Approx(-0.1));
    CHECK(d.J.d == doctest::Approx(-0.2));
  }
  {
    const JordanDecomp d = real_jordan(Mat2{-2.8, 9.0, -1.0, 3.2});
    CHECK(d.cls == JordanClass::Defective);
    CHECK(d.J.a == doctest::Approx(0.2));
    CHECK(d.J.b == doctest::Approx(1.0));
    CHECK(d.J.c == doctest::Approx(0.0));
    // basis parallel to the printed one: first column along (3, 1)
    CHECK(d.P.c / d.P.a == doctest::Approx(1.0 / 3.0));
  }
}

TEST_CASE("real_jordan round trip per class") {
  std::mt19937_64 rng(11);
  for (auto kind : {oracles::Kind::RealDiag, oracles::Kind::Complex, oracles::Kind::Defective}) {
    for (int i = 0; i < 200; ++i) {
      const Mat2 a = oracles::random_matrix(rng, kind, i % 2 == 0);
      const JordanDecomp d = real_jordan(a);
      const Mat2 resid = d.P * d.J * d.P.inverse() - a;
      CHECK(spectral_norm(resid) <= 1e-9 * std::max(1.0, spectral_norm(a)));
      if (d.cls == JordanClass::ComplexPair) CHECK(d.beta() > 0.0);
    }
  }
}

TEST_CASE("stability_class") {
  CHECK(stability_class(real_jordan(Mat2{-0.1, 0.0, 0.4, -0.2})) == StabilityClass::Hurwitz);
  CHECK(stability_class(real_jordan(Mat2{0.0, 1.0, 0.0, 0.0})) ==
        StabilityClass::UnstableAdmissible);  // defective, n2 = 0 allowed
  CHECK(stability_class(real_jordan(Mat2::diag(-1.0, 0.0))) == StabilityClass::Rejected);
}

TEST_CASE("transition") {
  CHECK(spectral_norm(transition(Mat2::identity(), Mat2::identity()) - Mat2::identity()) < 1e-15);
  {
    // Printed bases of the doubly-defective worked example.
    const Mat2 p1 = Mat2::identity();
    const Mat2 p2{3.0, 8.0, 1.0, 3.0};
    const Mat2 m = transition(p1, p2);
    CHECK(m.a == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(m.b == doctest::Approx(-8.0).epsilon(1e-12));
    CHECK(m.c == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(m.d == doctest::Approx(3.0).epsilon(1e-12));
  }
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const Mat2 m = transition(oracles::random_basis(rng), oracles::random_basis(rng));
    CHECK(std::fabs(std::fabs(m.det()) - 1.0) <= 1e-12);
  }
  CHECK_THROWS_AS((void)transition(Mat2{1, 1, 1, 1}, Mat2::identity()), Error);
}

TEST_CASE("expm closed forms") {
  std::mt19937_64 rng(5);
  for (auto kind : {oracles::Kind::RealDiag, oracles::Kind::Complex, oracles::Kind::Defective}) {
    const Mat2 a = oracles::random_matrix(rng, kind, true);
    const JordanDecomp d = real_jordan(a);
    CHECK(spectral_norm(expm(d, 0.0) - Mat2::identity()) < 1e-15);
  }
  {
    // Defective block against a truncated series.
    const JordanDecomp d = real_jordan(Mat2{-0.3, 1.0, 0.0, -0.3});
    const Mat2 series = oracles::taylor_expm(d.J, 0.7);
    CHECK(spectral_norm(expm(d, 0.7) - series) < 1e-12);
  }
  {
    // Half-turn rotation: e^{J pi/beta} = -e^{alpha pi/beta} I.
    const JordanDecomp d = real_jordan(Mat2{0.0, 1.0, -2.0, 1.0});
    const double alpha = d.alpha(), beta = d.beta();
    const Mat2 e = expm(d, 3.14159265358979323846 / beta);
    const double g = -std::exp(alpha * 3.14159265358979323846 / beta);
    CHECK(spectral_norm(e - g * Mat2::identity()) < 1e-9);
  }
}

TEST_CASE("expm semigroup property") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (auto kind : {oracles::Kind::RealDiag, oracles::Kind::Complex, oracles::Kind::Defective}) {
    const Mat2 a = oracles::random_matrix(rng, kind, true);
    const JordanDecomp d = real_jordan(a);
    for (int i = 0; i < 40; ++i) {
      const double t = u(rng), s = u(rng);
      const Mat2 lhs = expm(d, t + s);
      const Mat2 rhs = expm(d, t) * expm(d, s);
      CHECK(spectral_norm(lhs - rhs) <= 1e-10 * std::max(1.0, rhs.max_abs()));
    }
  }
}
