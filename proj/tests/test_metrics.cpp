#include <doctest.h>

#include <random>

#include "exbasis/metrics.hpp"
#include "exbasis/rng.hpp"
#include "test_support.hpp"

using namespace exbasis;
using test::cvec2;
using test::cvec3;

namespace {

BasisOptions fast_opts(std::uint64_t seed = 1) {
  BasisOptions opts;
  opts.seed = seed;
  opts.step_starts = 12;
  return opts;
}

}  // namespace

TEST_CASE("E metric") {
  SUBCASE("ball at center with a basis direction") {
    auto ball = DiagonalQuadric::ball(2);
    ExtremalBasis minimal = minimal_basis(ball, CVec::Zero(2), fast_opts());
    CHECK(E_metric(minimal, minimal.vectors[0]) == doctest::Approx(1.0).epsilon(1e-10));
    // homogeneity: X = 2 e_k
    CHECK(E_metric(minimal, CVec(2.0 * minimal.vectors[1])) ==
          doctest::Approx(2.0 / minimal.radii[1]).epsilon(1e-10));
  }
  SUBCASE("hermitian ellipsoid example") {
    RVec w(2);
    w << 0.25, 1.0;
    auto ellipsoid = std::make_shared<GeneralizedEllipsoid>(w, std::vector<int>{1, 1});
    ExtremalBasis minimal = minimal_basis(ellipsoid, CVec::Zero(2), fast_opts(3));
    CHECK(E_metric(minimal, cvec2(1, 1)) == doctest::Approx(1.5).epsilon(1e-7));
  }
  SUBCASE("wrong kind and zero X are refused") {
    auto ball = DiagonalQuadric::ball(2);
    ExtremalBasis maximal = maximal_basis(ball, CVec::Zero(2), fast_opts());
    CHECK_THROWS_AS(E_metric(maximal, cvec2(1, 0)), std::invalid_argument);
    ExtremalBasis minimal = minimal_basis(ball, CVec::Zero(2), fast_opts());
    CHECK_THROWS_AS(E_metric(minimal, CVec::Zero(2)), std::invalid_argument);
  }
}

TEST_CASE("A metric") {
  auto domain = test::example_domain();
  CVec q = cvec3(0, 0, 0.1);
  ExtremalBasis maximal = maximal_basis(domain, q, fast_opts(5));
  ExtremalBasis reordered = reorder_maximal(maximal);

  SUBCASE("basis vectors give reciprocal radii") {
    for (int k = 0; k < 3; ++k) {
      CHECK(A_metric(reordered, reordered.vectors[k]) ==
            doctest::Approx(1.0 / reordered.radii[k]).epsilon(1e-10));
    }
  }
  SUBCASE("unreordered maximal bases are refused") {
    CHECK_THROWS_AS(A_metric(maximal, cvec3(1, 0, 0)), std::invalid_argument);
  }
  SUBCASE("ball at center: A equals E") {
    auto ball = DiagonalQuadric::ball(2);
    ExtremalBasis min_b = minimal_basis(ball, CVec::Zero(2), fast_opts());
    ExtremalBasis max_b = reorder_maximal(maximal_basis(ball, CVec::Zero(2), fast_opts()));
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
      CVec X = random_complex_unit(rng, 2);
      CHECK(A_metric(max_b, X) == doctest::Approx(E_metric(min_b, X)).epsilon(1e-10));
    }
  }
  SUBCASE("mixed bases must be sorted") {
    ExtremalBasis mixed = mixed_basis(domain, q, 0, fast_opts(11));
    // construction order of a k=0 mixed basis is nonincreasing, so raw input throws
    CHECK_THROWS_AS(A_metric(mixed, cvec3(1, 0, 0)), std::invalid_argument);
    ExtremalBasis sorted = sort_by_radius(mixed);
    CHECK(A_metric(sorted, cvec3(1, 0, 0)) > 0.0);
  }
}

TEST_CASE("metric properties") {
  std::mt19937_64 rng(13);
  auto domain = test::mild_random_quadric(3, rng);
  CVec q = 0.2 * random_complex_unit(rng, 3);
  ExtremalBasis minimal = minimal_basis(domain, q, fast_opts(17));
  ExtremalBasis reordered = reorder_maximal(maximal_basis(domain, q, fast_opts(17)));

  for (int trial = 0; trial < 20; ++trial) {
    CVec X = random_complex_unit(rng, 3);
    CVec Y = random_complex_unit(rng, 3);
    Complex c(0.3, -1.2);

    // homogeneity
    CHECK(std::abs(E_metric(minimal, CVec(c * X)) - std::abs(c) * E_metric(minimal, X)) < 1e-12);
    CHECK(std::abs(A_metric(reordered, CVec(c * X)) - std::abs(c) * A_metric(reordered, X)) <
          1e-12);

    // triangle inequality in X
    CHECK(E_metric(minimal, CVec(X + Y)) <=
          E_metric(minimal, X) + E_metric(minimal, Y) + 1e-12);

    // norm equivalence from unitarity
    double e_val = E_metric(minimal, X);
    CHECK(e_val >= X.norm() / minimal.radii[2] - 1e-12);
    CHECK(e_val <= std::sqrt(3.0) * X.norm() / minimal.radii[0] + 1e-12);
  }
}

TEST_CASE("kernel proxies") {
  SUBCASE("ball at center") {
    auto ball = DiagonalQuadric::ball(2);
    ExtremalBasis min_b = minimal_basis(ball, CVec::Zero(2), fast_opts());
    ExtremalBasis max_b = maximal_basis(ball, CVec::Zero(2), fast_opts());
    KernelProxies proxies = kernel_proxies(min_b, max_b);
    CHECK(proxies.inv_s_product_sq == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(proxies.inv_m_product_sq == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("dilation scales by lambda^{-2n}") {
    std::mt19937_64 rng(19);
    auto domain = test::mild_random_quadric(2, rng);
    const auto* quadric = dynamic_cast<const DiagonalQuadric*>(domain.get());
    double lambda = 1.4;
    auto scaled = std::make_shared<DiagonalQuadric>(quadric->coeffs_x(), quadric->coeffs_y(),
                                                    lambda * lambda * quadric->level(),
                                                    quadric->placement());
    CVec q = 0.2 * random_complex_unit(rng, 2);
    KernelProxies base = kernel_proxies(minimal_basis(domain, q, fast_opts(23)),
                                        maximal_basis(domain, q, fast_opts(23)));
    KernelProxies grown = kernel_proxies(minimal_basis(scaled, CVec(lambda * q), fast_opts(23)),
                                         maximal_basis(scaled, CVec(lambda * q), fast_opts(23)));
    double factor = std::pow(lambda, -4.0);  // n = 2
    CHECK(grown.inv_s_product_sq == doctest::Approx(factor * base.inv_s_product_sq).epsilon(1e-7));
    CHECK(grown.inv_m_product_sq == doctest::Approx(factor * base.inv_m_product_sq).epsilon(1e-7));
  }
  SUBCASE("mismatched base points are refused") {
    auto ball = DiagonalQuadric::ball(2);
    ExtremalBasis at_zero = minimal_basis(ball, CVec::Zero(2), fast_opts());
    ExtremalBasis off = maximal_basis(ball, cvec2(0.3, 0), fast_opts());
    CHECK_THROWS_AS(kernel_proxies(at_zero, off), std::invalid_argument);
  }
}

TEST_CASE("inv_disc_direction") {
  auto section = test::example_section();
  SUBCASE("ball center unit X") {
    auto ball = DiagonalQuadric::ball(2);
    CHECK(inv_disc_direction(*ball, CVec::Zero(2), cvec2(1, 0)) ==
          doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("b* reciprocal") {
    double s = 1.0 / std::sqrt(2.0);
    CVec b_star = cvec2(s, Complex(0, s));
    CHECK(inv_disc_direction(*section, CVec::Zero(2), b_star) ==
          doctest::Approx(0.9354143466934853).epsilon(1e-10));
  }
  SUBCASE("homogeneity and disc consistency") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 10; ++trial) {
      CVec X = random_complex_unit(rng, 2);
      double base = inv_disc_direction(*section, CVec::Zero(2), X);
      CHECK(inv_disc_direction(*section, CVec::Zero(2), CVec(3.0 * X)) ==
            doctest::Approx(3.0 * base).epsilon(1e-12));
      double d = disc_distance(*section, CVec::Zero(2), X);
      CHECK(std::abs(base * d - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("basis matrix audit") {
  SUBCASE("identical bases") {
    auto ball = DiagonalQuadric::ball(3);
    CVec q = cvec3(0.2, 0, 0);
    ExtremalBasis min_b = minimal_basis(ball, q, fast_opts(31));
    ExtremalBasis max_b = reorder_maximal(maximal_basis(ball, q, fast_opts(31)));
    BasisMatrixAudit audit = basis_matrix_audit(max_b, min_b);
    CHECK(audit.max_b_ratio <= 1.0 + 1e-9);
    CHECK(audit.max_c_ratio <= 1.0 + 1e-9);
    CHECK(audit.permutation_bound == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(audit.permutation_ok);
  }
  SUBCASE("random quadric stays within the empirical bounds") {
    std::mt19937_64 rng(37);
    auto domain = test::mild_random_quadric(3, rng, 0.1, 10.0);
    CVec q = 0.15 * random_complex_unit(rng, 3);
    ExtremalBasis min_b = minimal_basis(domain, q, fast_opts(41));
    ExtremalBasis max_b = reorder_maximal(maximal_basis(domain, q, fast_opts(41)));
    BasisMatrixAudit audit = basis_matrix_audit(max_b, min_b);
    CHECK(audit.max_b_ratio <= 10.0);
    CHECK(audit.permutation_ok);
    CHECK(audit.permutation_bound >= 1.0 / 6.0 - 1e-15);
  }
  SUBCASE("requires a reordered maximal basis") {
    auto ball = DiagonalQuadric::ball(2);
    ExtremalBasis min_b = minimal_basis(ball, CVec::Zero(2), fast_opts());
    ExtremalBasis max_b = maximal_basis(ball, CVec::Zero(2), fast_opts());
    CHECK_THROWS_AS(basis_matrix_audit(max_b, min_b), std::invalid_argument);
  }
}
