#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "parablock/errors.hpp"
#include "parablock/fock.hpp"

using namespace parablock;

TEST_CASE("annihilation operator entries") {
  SUBCASE("dim 2") {
    const Operator a = annihilation(2);
    CHECK(a(0, 1) == Complex{1.0});
    CHECK(a(0, 0) == Complex{});
    CHECK(a(1, 0) == Complex{});
    CHECK(a(1, 1) == Complex{});
  }
  SUBCASE("dim 3") {
    const Operator a = annihilation(3);
    CHECK(a(0, 1) == Complex{1.0});
    CHECK(a(1, 2).real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(a.matrix().cwiseAbs().sum() == doctest::Approx(1.0 + std::sqrt(2.0)));
  }
  SUBCASE("number operator diagonal") {
    const Operator a = annihilation(4);
    const Operator n = a.dagger() * a;
    for (int k = 0; k < 4; ++k) CHECK(std::abs(n(k, k) - Complex{static_cast<double>(k)}) < 1e-14);
    CHECK((n.matrix() - number(4).matrix()).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("invalid dimension") {
    CHECK_THROWS_AS(annihilation(1), InvalidArgument);
    CHECK_THROWS_AS(FockSpace({3, 1}), InvalidArgument);
  }
}

TEST_CASE("canonical commutator holds below the truncation edge") {
  for (int d = 2; d <= 8; ++d) {
    const Operator a = annihilation(d);
    const Matrix c = commutator(a, a.dagger()).matrix();
    for (int i = 0; i < d - 1; ++i)
      for (int j = 0; j < d - 1; ++j) CHECK(std::abs(c(i, j) - Complex{i == j ? 1.0 : 0.0}) < 1e-14);
    // The truncation shows up only in the last diagonal entry: 1 - d.
    CHECK(c(d - 1, d - 1).real() == doctest::Approx(1.0 - d));
  }
}

TEST_CASE("basis ordering is slow-first lexicographic") {
  const FockSpace s({2, 3});
  CHECK(s.total_dim() == 6);
  const int occ[] = {1, 2};
  CHECK(s.index(occ) == 5);
  CHECK(s.occupations(4) == std::vector<int>{1, 1});
  for (int i = 0; i < s.total_dim(); ++i) CHECK(s.index(s.occupations(i)) == i);
}

TEST_CASE("embed") {
  SUBCASE("identity stays identity") {
    const FockSpace s({3, 2, 2});
    for (int m = 0; m < 3; ++m) {
      const Operator id = Operator::identity(FockSpace::single(s.mode_dim(m)));
      CHECK((embed(id, m, s).matrix() - Matrix::Identity(12, 12)).cwiseAbs().maxCoeff() == 0.0);
    }
  }
  SUBCASE("dims (2,2), mode 0") {
    const FockSpace s({2, 2});
    const Matrix m = embed(annihilation(2), 0, s).matrix();
    CHECK(m(0, 2) == Complex{1.0});
    CHECK(m(1, 3) == Complex{1.0});
    CHECK(m.cwiseAbs().sum() == 2.0);
  }
  SUBCASE("matches an independent Kronecker product") {
    const FockSpace s({3, 4});
    const Matrix a = annihilation(3).matrix();
    const Matrix b = annihilation(4).matrix();
    CHECK((embed(annihilation(3), 0, s).matrix() - oracle::kron(a, Matrix::Identity(4, 4)))
              .cwiseAbs().maxCoeff() == 0.0);
    CHECK((embed(annihilation(4), 1, s).matrix() - oracle::kron(Matrix::Identity(3, 3), b))
              .cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("distinct modes commute") {
    const FockSpace s({4, 3});
    const Operator a = embed(annihilation(4), 0, s);
    const Operator b = embed(annihilation(3), 1, s);
    CHECK(commutator(a, b).matrix().norm() == 0.0);
    CHECK(commutator(a, b.dagger()).matrix().norm() == 0.0);
  }
  SUBCASE("errors") {
    const FockSpace s({3, 3});
    CHECK_THROWS_AS(embed(annihilation(3), 2, s), InvalidArgument);
    CHECK_THROWS_AS(embed(annihilation(4), 0, s), InvalidArgument);
  }
}

TEST_CASE("embedding is a homomorphism; dagger is an involution") {
  std::mt19937 rng(7);
  const FockSpace s({3, 4, 2});
  for (int trial = 0; trial < 10; ++trial) {
    const int mode = trial % 3;
    const int d = s.mode_dim(mode);
    const FockSpace one = FockSpace::single(d);
    const Operator x(one, oracle::random_matrix(d, rng));
    const Operator y(one, oracle::random_matrix(d, rng));
    const Matrix lhs = embed(x * y, mode, s).matrix();
    const Matrix rhs = (embed(x, mode, s) * embed(y, mode, s)).matrix();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((x.dagger().dagger().matrix() - x.matrix()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("expectation values") {
  const FockSpace s = FockSpace::single(5);
  const Operator a = annihilation(5);
  const Operator ad = a.dagger();
  const int one[] = {1};
  const int two[] = {2};
  CHECK(expectation(DensityMatrix::fock_state(s, one), ad * a).real() == doctest::Approx(1.0));
  CHECK(std::abs(expectation(DensityMatrix::vacuum(s), ad * a)) == 0.0);
  CHECK(std::abs(expectation(DensityMatrix::vacuum(s), ad * ad * a * a)) == 0.0);
  CHECK(expectation(DensityMatrix::fock_state(s, two), ad * ad * a * a).real() ==
        doctest::Approx(2.0));

  const DensityMatrix other = DensityMatrix::vacuum(FockSpace::single(4));
  CHECK_THROWS_AS(expectation(other, a), InvalidArgument);
}

TEST_CASE("density matrix validation") {
  const FockSpace s({2, 2});
  DensityMatrix::vacuum(s).validate(1e-10, 1e-9, -1e-8);
  Matrix bad = Matrix::Identity(4, 4);
  CHECK_THROWS_AS(DensityMatrix(s, bad).validate(1e-10, 1e-9, -1e-8), InvalidArgument);
  Matrix nonherm = Matrix::Zero(4, 4);
  nonherm(0, 0) = 1.0;
  nonherm(0, 1) = 0.5;
  CHECK_THROWS_AS(DensityMatrix(s, nonherm).validate(1e-10, 1e-9, -1e-8), InvalidArgument);
  Matrix negative = Matrix::Zero(4, 4);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix(s, negative).validate(1e-10, 1e-9, -1e-8), InvalidArgument);
}
