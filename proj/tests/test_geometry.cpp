#include <doctest.h>

#include <random>

#include "exbasis/geometry.hpp"
#include "exbasis/harness.hpp"
#include "exbasis/rng.hpp"
#include "test_support.hpp"

using namespace exbasis;
using test::cvec2;

TEST_CASE("hermitian inner product") {
  CHECK(hermitian_inner(cvec2(1, 0), cvec2(1, 0)) == Complex(1, 0));
  CHECK(hermitian_inner(cvec2(Complex(0, 1), 0), cvec2(1, 0)) == Complex(0, 1));

  double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CVec b_star = cvec2(inv_sqrt2, Complex(0, inv_sqrt2));
  CHECK(std::abs(hermitian_inner(b_star, b_star) - Complex(1, 0)) < 1e-15);

  CHECK_THROWS_AS(hermitian_inner(cvec2(1, 0), CVec::Ones(3)), std::invalid_argument);

  // conjugate symmetry on random vectors
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    CVec u = random_complex_unit(rng, 4), v = random_complex_unit(rng, 4);
    CHECK(std::abs(hermitian_inner(u, v) - std::conj(hermitian_inner(v, u))) < 1e-14);
  }
}

TEST_CASE("gram_schmidt") {
  SUBCASE("orthogonalizes and keeps the first direction") {
    Frame f = gram_schmidt({cvec2(2, 0), cvec2(1, 1)});
    CHECK((f[0] - cvec2(1, 0)).norm() < 1e-14);
    CHECK((f[1] - cvec2(0, 1)).norm() < 1e-14);
  }
  SUBCASE("single vector normalizes") {
    Frame f = gram_schmidt({cvec2(1, 0)});
    CHECK((f[0] - cvec2(1, 0)).norm() == 0.0);
  }
  SUBCASE("rank deficiency names the offending index") {
    CHECK_THROWS_WITH_AS(gram_schmidt({cvec2(1, 0), cvec2(2, 0)}),
                         doctest::Contains("index 1"), std::invalid_argument);
  }
  SUBCASE("gram matrix of random frames is the identity") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 30; ++trial) {
      int n = 2 + trial % 5;
      std::vector<CVec> input;
      for (int j = 0; j < n; ++j) {
        CVec v(n);
        for (int i = 0; i < n; ++i) v[i] = Complex(normal(rng), normal(rng));
        input.push_back(v);
      }
      Frame f = gram_schmidt(input);
      CHECK(f.gram_deviation() <= 1e-10);
    }
  }
}

TEST_CASE("orthocomplement") {
  SUBCASE("coordinate complement") {
    CVec e3 = test::cvec3(0, 0, 1);
    Frame complement = orthocomplement(Frame({e3}), 3);
    REQUIRE(complement.size() == 2);
    CHECK((complement[0] - test::cvec3(1, 0, 0)).norm() < 1e-14);
    CHECK((complement[1] - test::cvec3(0, 1, 0)).norm() < 1e-14);
  }
  SUBCASE("full frame gives the empty complement") {
    Frame full = Frame::standard(2);
    CHECK(orthocomplement(full, 2).size() == 0);
  }
  SUBCASE("complement is unique up to phase in C^2") {
    double s = 1.0 / std::sqrt(2.0);
    Frame complement = orthocomplement(Frame({cvec2(s, s)}), 2);
    REQUIRE(complement.size() == 1);
    CHECK(std::abs(std::abs(hermitian_inner(complement[0], cvec2(-s, s))) - 1.0) < 1e-12);
  }
  SUBCASE("union with the input is a full orthonormal basis") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
      int n = 3 + trial % 3;
      int k = 1 + trial % (n - 1);
      std::vector<CVec> input;
      for (int j = 0; j < k; ++j) input.push_back(random_complex_unit(rng, n));
      Frame f = gram_schmidt(input);
      Frame u = frame_union(f, orthocomplement(f, n));
      CHECK(u.size() == n);
      CHECK(u.gram_deviation() <= 1e-10);
    }
  }
}

TEST_CASE("change_of_basis") {
  Frame id = Frame::standard(3);
  SUBCASE("identical bases give the identity") {
    UnitaryMatrix b = change_of_basis(id, id);
    CHECK((b.entries - CMat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("reversed basis gives a permutation matrix") {
    Frame reversed({id[2], id[1], id[0]});
    UnitaryMatrix b = change_of_basis(id, reversed);
    CHECK(std::abs(b.entries(0, 2)) == 1.0);
    CHECK(std::abs(b.entries(1, 1)) == 1.0);
    CHECK(std::abs(b.entries(2, 0)) == 1.0);
    CHECK(std::abs(b.entries(0, 0)) == 0.0);
  }
  SUBCASE("random pairs: unitary with |det| = 1, inverse pairing") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
      int n = 2 + trial % 4;
      Frame a(gram_schmidt([&] {
        std::vector<CVec> vs;
        for (int j = 0; j < n; ++j) vs.push_back(random_complex_unit(rng, n));
        return vs;
      }()));
      Frame e(gram_schmidt([&] {
        std::vector<CVec> vs;
        for (int j = 0; j < n; ++j) vs.push_back(random_complex_unit(rng, n));
        return vs;
      }()));
      UnitaryMatrix b_ae = change_of_basis(a, e);
      CHECK(std::abs(std::abs(b_ae.entries.determinant()) - 1.0) < 1e-9);
      UnitaryMatrix b_ea = change_of_basis(e, a);
      CMat prod = b_ae.entries * b_ea.entries;
      CHECK((prod - CMat::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("permutation product lower bound for unitaries") {
  std::mt19937_64 rng(13);
  for (int n = 2; n <= 5; ++n) {
    double factorial = 1.0;
    for (int i = 2; i <= n; ++i) factorial *= i;
    for (int trial = 0; trial < 25; ++trial) {
      CMat u = random_unitary(n, rng);
      CHECK(permutation_product_bound(u) >= 1.0 / factorial - 1e-15);
    }
  }
}

TEST_CASE("frame validation rejects non-orthonormal input") {
  CHECK_THROWS_AS(Frame({cvec2(1, 0), cvec2(1, 0)}), std::invalid_argument);
  CHECK_THROWS_AS(Frame({cvec2(2, 0)}), std::invalid_argument);
}

TEST_CASE("unitary matrix validation") {
  CMat skewed = CMat::Identity(2, 2);
  skewed(0, 0) = 1.5;
  CHECK_THROWS_AS(UnitaryMatrix{skewed}, std::invalid_argument);
}
