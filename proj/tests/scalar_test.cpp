#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "alloysim/field.hpp"
#include "alloysim/matrix.hpp"
#include "test_util.hpp"

using namespace alloysim;

namespace {

Matrix<PrimeField> random_matrix(const PrimeField& f, std::size_t r, std::size_t c, Rng& rng) {
  Matrix<PrimeField> m(f, r, c);
  m.fill_random_uniform(rng);
  return m;
}

Matrix<PrimeField> random_full_rank(const PrimeField& f, std::size_t n, Rng& rng) {
  for (;;) {
    auto m = random_matrix(f, n, n, rng);
    if (rank(m) == n) return m;
  }
}

}  // namespace

TEST_CASE("prime field construction checks primality") {
  CHECK_NOTHROW(PrimeField(2));
  CHECK_NOTHROW(PrimeField(13));
  CHECK_NOTHROW(PrimeField(101));
  CHECK_THROWS_AS(PrimeField(1), std::invalid_argument);
  CHECK_THROWS_AS(PrimeField(4), std::invalid_argument);
  CHECK_THROWS_AS(PrimeField(91), std::invalid_argument);  // 7*13
  CHECK_THROWS_AS(PrimeField(0), std::invalid_argument);
}

TEST_CASE("field axioms hold exhaustively for small q") {
  for (const std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
    const PrimeField f(q);
    for (std::uint64_t a = 0; a < q; ++a) {
      CHECK(f.add(a, f.neg(a)) == 0);
      if (a != 0) CHECK(f.mul(a, f.inv(a)) == 1);
      for (std::uint64_t b = 0; b < q; ++b) {
        CHECK(f.add(a, b) == f.add(b, a));
        CHECK(f.mul(a, b) == f.mul(b, a));
        CHECK(f.add(a, b) < q);
        CHECK(f.mul(a, b) < q);
        for (std::uint64_t c = 0; c < q; ++c) {
          CHECK(f.add(f.add(a, b), c) == f.add(a, f.add(b, c)));
          CHECK(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
          CHECK(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
        }
      }
    }
  }
}

TEST_CASE("barrett reduction agrees with plain modulo") {
  Rng rng(404);
  for (const std::uint64_t q : {2ULL, 3ULL, 101ULL, 65521ULL, 2147483647ULL}) {
    const PrimeField f(q);
    for (int i = 0; i < 2000; ++i) {
      const std::uint64_t a = rng.uniform_below(q);
      const std::uint64_t b = rng.uniform_below(q);
      CHECK(f.mul(a, b) ==
            static_cast<std::uint64_t>((unsigned __int128)a * b % q));
    }
  }
}

TEST_CASE("multiply matches a reference implementation") {
  const PrimeField f(13);
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    const auto a = random_matrix(f, 5, 4, rng);
    const auto b = random_matrix(f, 4, 6, rng);
    const auto c = multiply(a, b);
    testutil::U64Matrix ra(5, std::vector<std::uint64_t>(4)), rb(4, std::vector<std::uint64_t>(6));
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 4; ++j) ra[i][j] = a.at(i, j);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 6; ++j) rb[i][j] = b.at(i, j);
    const auto rc = testutil::naive_multiply_mod(ra, rb, 13);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 6; ++j) CHECK(c.at(i, j) == rc[i][j]);
  }
}

TEST_CASE("solve: identity system returns the right-hand side") {
  const PrimeField f(7);
  const auto g = Matrix<PrimeField>::identity(f, 4);
  Rng rng(11);
  Matrix<PrimeField> rhs(f, 4, 3);
  rhs.fill_random_uniform(rng);
  const auto x = solve(g, rhs);
  REQUIRE(x.has_value());
  CHECK(*x == rhs);
}

TEST_CASE("solve: rank-deficient system reports singular") {
  const PrimeField f(2);
  Matrix<PrimeField> g(f, 2, 2);
  g.at(0, 0) = g.at(0, 1) = g.at(1, 0) = g.at(1, 1) = 1;
  Matrix<PrimeField> rhs(f, 2, 1);
  rhs.at(0, 0) = 1;
  CHECK_FALSE(solve(g, rhs).has_value());
}

TEST_CASE("solve round trip: RHS built from a known solution") {
  const PrimeField f(7);
  Rng rng(23);
  for (int t = 0; t < 30; ++t) {
    const auto g = random_full_rank(f, 4, rng);
    const auto x_known = random_matrix(f, 4, 3, rng);
    const auto rhs = multiply(g, x_known);
    const auto x = solve(g, rhs);
    REQUIRE(x.has_value());
    CHECK(*x == x_known);
  }
}

TEST_CASE("solve rejects shape and mode mismatches") {
  const PrimeField f(7);
  Matrix<PrimeField> g(f, 3, 2), rhs(f, 3, 1);
  CHECK_THROWS_AS(solve(g, rhs), std::invalid_argument);
  Matrix<PrimeField> g2(f, 2, 2), rhs2(f, 3, 1);
  CHECK_THROWS_AS(solve(g2, rhs2), std::invalid_argument);
  Matrix<PrimeField> rhs3(PrimeField(11), 2, 1);
  CHECK_THROWS_AS(solve(g2, rhs3), std::invalid_argument);
}

TEST_CASE("rank basics") {
  const PrimeField f2(2);
  CHECK(rank(Matrix<PrimeField>(f2, 3, 3)) == 0);
  CHECK(rank(Matrix<PrimeField>::identity(f2, 5)) == 5);
}

TEST_CASE("rank equals rank of the transpose") {
  Rng rng(31);
  const PrimeField f(7);
  for (int t = 0; t < 40; ++t) {
    const std::size_t r = 2 + rng.uniform_below(5);
    const std::size_t c = 2 + rng.uniform_below(5);
    auto m = random_matrix(f, r, c, rng);
    // plant some dependent rows
    if (r >= 2 && rng.bernoulli(0.5))
      for (std::size_t j = 0; j < c; ++j) m.at(r - 1, j) = m.at(0, j);
    CHECK(rank(m) == rank(transpose(m)));
  }
}

TEST_CASE("real solve meets the residual bound") {
  const RealField f;
  Rng rng(47);
  for (int t = 0; t < 20; ++t) {
    Matrix<RealField> g(f, 6, 6), rhs(f, 6, 2);
    g.fill_random_uniform(rng);
    rhs.fill_random_uniform(rng);
    const auto x = solve(g, rhs);
    REQUIRE(x.has_value());
    const auto residual = sub(multiply(g, *x), rhs);
    CHECK(frobenius_norm(residual) <= 1e-9 * frobenius_norm(rhs));
  }
}

TEST_CASE("real rank applies the relative pivot tolerance") {
  const RealField f;
  Matrix<RealField> m(f, 2, 2);
  m.at(0, 0) = 1.0;
  m.at(0, 1) = 0.0;
  m.at(1, 0) = 1.0;
  m.at(1, 1) = 1e-13;  // below 1e-10 of the leading pivot
  CHECK(rank(m) == 1);
  m.at(1, 1) = 1e-6;
  CHECK(rank(m) == 2);
}

TEST_CASE("rank tracker matches batch rank on arrival streams") {
  const PrimeField f(5);
  Rng rng(53);
  for (int t = 0; t < 30; ++t) {
    const std::size_t cols = 4;
    const std::size_t rows = 6;
    auto m = random_matrix(f, rows, cols, rng);
    RankTracker<PrimeField> tracker(f, cols);
    for (std::size_t i = 0; i < rows; ++i) {
      tracker.add(m.row(i));
      Matrix<PrimeField> prefix(f, i + 1, cols);
      for (std::size_t r = 0; r <= i; ++r)
        for (std::size_t c = 0; c < cols; ++c) prefix.at(r, c) = m.at(r, c);
      CHECK(tracker.rank() == rank(prefix));
    }
  }
}
