#include "doctest.h"

#include "support.hpp"
#include "wiretap/matcalc.hpp"

using namespace wiretap;
using testing_support::Rng;

TEST_CASE("vech stacks the lower triangle column by column") {
  Matrix s(3, 3);
  s << 1, 2, 3,
       2, 4, 5,
       3, 5, 6;
  Vector expected(6);
  expected << 1, 2, 3, 4, 5, 6;
  CHECK(vech(s) == expected);
  CHECK(unvech(expected) == s);
  CHECK(vech_index(2, 1, 3) == 4);
  CHECK(vech_index(0, 0, 3) == 0);
  CHECK(vech_size(4) == 10);
}

TEST_CASE("unvech rejects lengths that are not triangular numbers") {
  CHECK_THROWS_AS(unvech(Vector::Zero(4)), std::invalid_argument);
}

TEST_CASE("symmetrize averages with the transpose and needs a square input") {
  Matrix a(2, 2);
  a << 1, 2, 4, 3;
  Matrix s = symmetrize(a);
  CHECK(s(0, 1) == doctest::Approx(3.0));
  CHECK(s(1, 0) == doctest::Approx(3.0));
  CHECK_THROWS_AS(symmetrize(Matrix::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("SymMat is symmetric and finite") {
  Matrix a(2, 2);
  a << 1, 0, 2, 1;
  CHECK(SymMat(a).matrix().isApprox(SymMat(a).matrix().transpose()));
  a(0, 0) = std::nan("");
  CHECK_THROWS(SymMat(a));
  CHECK(SymMat::identity(3).matrix() == Matrix::Identity(3, 3));
}

TEST_CASE("duplication matrix maps vech to vec for random symmetric matrices") {
  Rng rng(11);
  for (Index m = 1; m <= 5; ++m) {
    const DuplicationMatrix d(m);
    CHECK(d.matrix().rows() == m * m);
    CHECK(d.matrix().cols() == vech_size(m));
    for (int k = 0; k < 5; ++k) {
      const Matrix a = rng.gaussian(m, m);
      const Matrix s = a + a.transpose();
      CHECK((d.matrix() * vech(s) - vec(s)).norm() < 1e-12);
    }
  }
}

TEST_CASE("reduced duplication matrix fills both off-diagonal blocks") {
  Rng rng(12);
  const Index n1 = 2, n2 = 3, n = n1 + n2;
  const ReducedDuplicationMatrix d(n1, n2);
  CHECK(d.matrix().rows() == n * n);
  CHECK(d.matrix().cols() == n1 * n2);
  const Matrix k21 = rng.gaussian(n2, n1);
  Matrix expected = Matrix::Zero(n, n);
  expected.bottomLeftCorner(n2, n1) = k21;
  expected.topRightCorner(n1, n2) = k21.transpose();
  CHECK((d.matrix() * vec(k21) - vec(expected)).norm() < 1e-14);
}

TEST_CASE("kron satisfies vec(A X B) = (B' kron A) vec(X)") {
  Rng rng(13);
  const Matrix a = rng.gaussian(3, 2);
  const Matrix x = rng.gaussian(2, 4);
  const Matrix b = rng.gaussian(4, 2);
  CHECK((kron(b.transpose(), a) * vec(x) - vec(a * x * b)).norm() < 1e-12);
}

TEST_CASE("vec and unvec are inverse") {
  Rng rng(14);
  const Matrix a = rng.gaussian(3, 5);
  CHECK(unvec(vec(a), 3, 5) == a);
  CHECK(vec(a)(1) == a(1, 0));
}
