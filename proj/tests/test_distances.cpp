#include <doctest.h>

#include <numbers>
#include <random>

#include "exbasis/distances.hpp"
#include "exbasis/rng.hpp"
#include "test_support.hpp"

using namespace exbasis;
using test::cvec2;
using test::cvec3;

namespace {

// derived from the closed form A + |C| for the default section parameters,
// cross-checked against a dense phase grid
constexpr double kDiscAtBStar = 1.0690449676496976;  // 1/sqrt(0.875)
// min of R over the unit sphere: (1 - b1 b2) / (2 - b1 - b2) = 0.8125
constexpr double kMaxDiscOverSection = 1.1094003924504583;  // 1/sqrt(0.8125)

CVec b_star() {
  double s = 1.0 / std::sqrt(2.0);
  return cvec2(s, Complex(0, s));
}

}  // namespace

TEST_CASE("disc distance") {
  SUBCASE("ball center in every direction") {
    auto ball = DiagonalQuadric::ball(2);
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 10; ++trial) {
      CVec a = random_complex_unit(rng, 2);
      CHECK(disc_distance(*ball, CVec::Zero(2), a) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("section along the first coordinate") {
    auto section = test::example_section();
    CHECK(disc_distance(*section, CVec::Zero(2), cvec2(1, 0)) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("section along b*") {
    auto section = test::example_section();
    double closed = disc_distance(*section, CVec::Zero(2), b_star());
    CHECK(closed == doctest::Approx(kDiscAtBStar).epsilon(1e-12));
    double grid = disc_distance_grid(*section, CVec::Zero(2), b_star(), 4096);
    CHECK(std::abs(closed / grid - 1.0) < 1e-8);
  }
  SUBCASE("zero direction and outside points are rejected") {
    auto ball = DiagonalQuadric::ball(2);
    CHECK_THROWS_AS(disc_distance(*ball, CVec::Zero(2), CVec::Zero(2)), std::invalid_argument);
    CHECK_THROWS_AS(disc_distance(*ball, cvec2(2, 0), cvec2(1, 0)), std::invalid_argument);
  }
}

TEST_CASE("disc distance bounds the phase rays") {
  std::mt19937_64 rng(3);
  auto domain = test::mild_random_quadric(2, rng);
  CVec q = cvec2(Complex(0.2, 0.1), Complex(-0.1, 0.15));
  std::uniform_real_distribution<double> uniform(0.0, 2.0 * std::numbers::pi);
  for (int trial = 0; trial < 4; ++trial) {
    CVec a = random_complex_unit(rng, 2);
    double d = disc_distance(*domain, q, a);
    for (int i = 0; i < 128; ++i) {
      double alpha = uniform(rng);
      CHECK(d <= domain->ray_distance(q, std::polar(1.0, alpha) * a) + 1e-12);
    }
    // phase invariance
    double theta = uniform(rng);
    CHECK(std::abs(disc_distance(*domain, q, std::polar(1.0, theta) * a) - d) < 1e-10);
  }
}

TEST_CASE("closed-form disc distance matches the phase-grid oracle") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 2 + trial % 2;
    RVec px(n), py(n);
    for (int j = 0; j < n; ++j) {
      px[j] = 0.05 * std::exp(std::log(400.0) * uniform(rng));
      py[j] = 0.05 * std::exp(std::log(400.0) * uniform(rng));
    }
    Placement placement;
    placement.rotation = random_unitary(n, rng);
    DiagonalQuadric quadric(px, py, 1.0, placement);
    CVec a = random_complex_unit(rng, n);
    double closed = disc_distance(quadric, CVec::Zero(n), a);
    double grid = disc_distance_grid(quadric, CVec::Zero(n), a, 4096);
    CHECK(std::abs(closed / grid - 1.0) < 1e-8);
  }
}

TEST_CASE("euclidean distance") {
  SUBCASE("ball center") {
    auto ball = DiagonalQuadric::ball(3);
    auto result = euclidean_distance(*ball, CVec::Zero(3));
    CHECK(result.value == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("example domain: nearest point is the north pole") {
    auto domain = test::example_domain();
    auto result = euclidean_distance(*domain, cvec3(0, 0, 0.1));
    CHECK(std::abs(result.value - 0.9) < 1e-10);
    CHECK(std::abs(std::abs(result.direction[2]) - 1.0) < 1e-8);
    CHECK(std::abs(result.direction[0]) < 1e-7);
    CHECK(std::abs(result.direction[1]) < 1e-7);
  }
  SUBCASE("C^1 quadric prefers the real axis") {
    RVec px(1), py(1);
    px << 1.0;
    py << 0.25;
    DiagonalQuadric quadric(px, py, 1.0);
    auto result = euclidean_distance(quadric, CVec::Zero(1));
    CHECK(result.value == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(result.direction[0].imag()) < 1e-7);
  }
  SUBCASE("equals the minimum of the disc distance over directions") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 3; ++trial) {
      auto domain = test::mild_random_quadric(2, rng, 0.4, 2.5);
      CVec q = 0.25 * random_complex_unit(rng, 2);
      auto euclid = euclidean_distance(*domain, q);

      SphereOptProblem problem;
      problem.domain = domain.get();
      problem.base = q;
      problem.frame = Frame::standard(2);
      problem.sense = OptSense::Minimize;
      problem.options.starts = 64;
      problem.options.seed = 1000 + trial;
      auto objective = [&](const CVec& a) { return disc_distance(*domain, q, a); };
      SphereResult disc_min = optimize_over_sphere(problem, objective);
      CHECK(std::abs(disc_min.value - euclid.value) < 1e-8);
    }
  }
}

TEST_CASE("optimize_over_sphere") {
  SUBCASE("constant objective resolves to the first axis with value 1") {
    auto ball = DiagonalQuadric::ball(3);
    SphereOptProblem problem;
    problem.domain = ball.get();
    problem.base = CVec::Zero(3);
    problem.frame = Frame::standard(3);
    problem.sense = OptSense::Maximize;
    problem.options.starts = 8;
    auto objective = [&](const CVec& a) { return disc_distance(*ball, CVec::Zero(3), a); };
    SphereResult result = optimize_over_sphere(problem, objective);
    CHECK(result.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(result.winner_start == 0);
    CHECK((result.direction - cvec3(1, 0, 0)).norm() < 1e-12);
  }

  SUBCASE("maximizing the section disc distance beats the b* bound") {
    auto section = test::example_section();
    SphereOptProblem problem;
    problem.domain = section.get();
    problem.base = CVec::Zero(2);
    problem.frame = Frame::standard(2);
    problem.sense = OptSense::Maximize;
    problem.options.seed = 42;
    auto objective = [&](const CVec& a) { return disc_distance(*section, CVec::Zero(2), a); };
    SphereResult result = optimize_over_sphere(problem, objective);
    CHECK(result.value >= kDiscAtBStar - 1e-6);
    CHECK(result.value == doctest::Approx(kMaxDiscOverSection).epsilon(1e-7));

    // maximizer dominance over random probes
    std::mt19937_64 rng(11);
    for (int probe = 0; probe < 1000; ++probe) {
      CVec a = random_complex_unit(rng, 2);
      CHECK(result.value >= objective(a) - 1e-8);
    }
  }

  SUBCASE("minimizing over the whole sphere recovers the euclidean distance") {
    auto section = test::example_section();
    SphereOptProblem problem;
    problem.domain = section.get();
    problem.base = CVec::Zero(2);
    problem.frame = Frame::standard(2);
    problem.sense = OptSense::Minimize;
    problem.options.seed = 43;
    auto objective = [&](const CVec& a) { return disc_distance(*section, CVec::Zero(2), a); };
    SphereResult result = optimize_over_sphere(problem, objective);
    // max of rho over the unit sphere is 1, attained at real vectors
    CHECK(result.value == doctest::Approx(1.0).epsilon(1e-9));
  }

  SUBCASE("empty frame is rejected") {
    SphereOptProblem problem;
    problem.frame = Frame();
    CHECK_THROWS_AS(optimize_over_sphere(problem, [](const CVec&) { return 0.0; }),
                    std::invalid_argument);
  }

  SUBCASE("deterministic for a fixed seed") {
    auto section = test::example_section();
    auto run = [&]() {
      SphereOptProblem problem;
      problem.domain = section.get();
      problem.base = CVec::Zero(2);
      problem.frame = Frame::standard(2);
      problem.sense = OptSense::Maximize;
      problem.options.seed = 99;
      problem.options.starts = 12;
      auto objective = [&](const CVec& a) { return disc_distance(*section, CVec::Zero(2), a); };
      return optimize_over_sphere(problem, objective);
    };
    SphereResult r1 = run(), r2 = run();
    CHECK(r1.value == r2.value);
    CHECK((r1.direction - r2.direction).norm() == 0.0);
  }
}

TEST_CASE("ray warm hints do not change results") {
  std::mt19937_64 rng(13);
  RVec w(2);
  w << 0.5, 2.0;
  GeneralizedEllipsoid ellipsoid(w, {2, 1});
  for (int trial = 0; trial < 20; ++trial) {
    CVec q = 0.3 * random_complex_unit(rng, 2);
    CVec v = random_complex_unit(rng, 2);
    double plain = ellipsoid.ray_distance(q, v);
    CHECK(std::abs(ellipsoid.ray_distance(q, v, 0.5 * plain) - plain) < 1e-12);
    CHECK(std::abs(ellipsoid.ray_distance(q, v, 3.0 * plain) - plain) < 1e-12);
  }
}
