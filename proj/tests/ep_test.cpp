#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "alloysim/ep.hpp"

using namespace alloysim;

namespace {

template <class F>
std::vector<std::pair<std::size_t, Matrix<F>>> compute_results(const EpCode<F>& code,
                                                               const BlockGrid<F>& ag,
                                                               const BlockGrid<F>& bg,
                                                               const std::vector<std::size_t>& ks) {
  std::vector<std::pair<std::size_t, Matrix<F>>> out;
  for (const std::size_t k : ks) {
    auto [at, bt] = ep_encode(code, ag, bg, k);
    out.emplace_back(k, multiply(at, bt));
  }
  return out;
}

}  // namespace

TEST_CASE("threshold formula p*m*n + p - 1") {
  CHECK(ep_threshold(4, 4, 2) == 33);
  CHECK(ep_threshold(2, 2, 1) == 4);
  CHECK(ep_threshold(1, 1, 1) == 1);
  CHECK(ep_threshold(6, 2, 1) == 12);
  CHECK(ep_threshold(4, 3, 1) == 12);
}

TEST_CASE("construction needs q greater than the worker count") {
  CHECK_THROWS_AS(make_ep_code(PrimeField(7), 2, 2, 1, 7), std::invalid_argument);
  CHECK_NOTHROW(make_ep_code(PrimeField(7), 2, 2, 1, 6));
}

TEST_CASE("the 1x1x1 code is a passthrough with threshold one") {
  const PrimeField f(101);
  Rng rng(41);
  Matrix<PrimeField> a(f, 3, 4), b(f, 4, 2);
  a.fill_random_uniform(rng);
  b.fill_random_uniform(rng);
  const auto code = make_ep_code(f, 1, 1, 1, 3);
  CHECK(code.threshold() == 1);
  const auto ag = split_grid(a, 1, 1);
  const auto bg = split_grid(b, 1, 1);
  const auto [at, bt] = ep_encode(code, ag, bg, 0);
  CHECK(at == a);
  CHECK(bt == b);
  const auto res = ep_decode(code, compute_results(code, ag, bg, {1}));
  REQUIRE(res.product.has_value());
  CHECK(*res.product == multiply(a, b));
}

TEST_CASE("round trip at (2,2,2) with 36 workers") {
  const PrimeField f(101);
  Rng rng(42);
  for (int t = 0; t < 10; ++t) {
    Matrix<PrimeField> a(f, 4, 4), b(f, 4, 4);
    a.fill_random_uniform(rng);
    b.fill_random_uniform(rng);
    const auto code = make_ep_code(f, 2, 2, 2, 36);
    const auto ag = split_grid(a, 2, 2);
    const auto bg = split_grid(b, 2, 2);
    // the last `threshold` workers are as good as any
    std::vector<std::size_t> ks;
    for (std::size_t k = 36 - code.threshold(); k < 36; ++k) ks.push_back(k);
    const auto res = ep_decode(code, compute_results(code, ag, bg, ks));
    REQUIRE(res.product.has_value());
    CHECK(*res.product == multiply(a, b));
  }
}

TEST_CASE("one result short of the threshold reports NeedMoreRows") {
  const PrimeField f(101);
  Rng rng(43);
  Matrix<PrimeField> a(f, 4, 2), b(f, 2, 4);
  a.fill_random_uniform(rng);
  b.fill_random_uniform(rng);
  const auto code = make_ep_code(f, 2, 2, 1, 6);
  const auto ag = split_grid(a, 2, 1);
  const auto bg = split_grid(b, 1, 2);
  const auto res = ep_decode(code, compute_results(code, ag, bg, {0, 1, 2}));
  CHECK_FALSE(res.product.has_value());
}

TEST_CASE("MDS: every threshold-sized subset decodes exactly") {
  const PrimeField f(101);
  Rng rng(44);

  // (2,2,1): threshold 4 of 6 workers, all 15 subsets
  {
    Matrix<PrimeField> a(f, 4, 2), b(f, 2, 4);
    a.fill_random_uniform(rng);
    b.fill_random_uniform(rng);
    const auto code = make_ep_code(f, 2, 2, 1, 6);
    const auto ag = split_grid(a, 2, 1);
    const auto bg = split_grid(b, 1, 2);
    const auto direct = multiply(a, b);
    std::size_t subsets = 0;
    for (std::size_t mask = 0; mask < 64; ++mask) {
      if (__builtin_popcountll(mask) != 4) continue;
      std::vector<std::size_t> ks;
      for (std::size_t k = 0; k < 6; ++k)
        if (mask & (1ULL << k)) ks.push_back(k);
      const auto res = ep_decode(code, compute_results(code, ag, bg, ks));
      REQUIRE(res.product.has_value());
      CHECK(*res.product == direct);
      ++subsets;
    }
    CHECK(subsets == 15);
  }

  // (2,1,2): threshold 5 of 7 workers, all 21 subsets
  {
    Matrix<PrimeField> a(f, 4, 4), b(f, 4, 2);
    a.fill_random_uniform(rng);
    b.fill_random_uniform(rng);
    const auto code = make_ep_code(f, 2, 1, 2, 7);
    const auto ag = split_grid(a, 2, 2);
    const auto bg = split_grid(b, 2, 1);
    const auto direct = multiply(a, b);
    for (std::size_t mask = 0; mask < 128; ++mask) {
      if (__builtin_popcountll(mask) != 5) continue;
      std::vector<std::size_t> ks;
      for (std::size_t k = 0; k < 7; ++k)
        if (mask & (1ULL << k)) ks.push_back(k);
      const auto res = ep_decode(code, compute_results(code, ag, bg, ks));
      REQUIRE(res.product.has_value());
      CHECK(*res.product == direct);
    }
  }
}

TEST_CASE("encode validates grids and worker indices") {
  const PrimeField f(101);
  const auto code = make_ep_code(f, 2, 2, 1, 6);
  BlockGrid<PrimeField> ag, bg;
  ag.grid_rows = 1;  // wrong: needs 2x1
  ag.grid_cols = 1;
  ag.blocks.emplace_back(f, 4, 2);
  bg.grid_rows = 1;
  bg.grid_cols = 2;
  bg.blocks.emplace_back(f, 2, 2);
  bg.blocks.emplace_back(f, 2, 2);
  CHECK_THROWS_AS(ep_encode(code, ag, bg, 0), std::invalid_argument);
}

TEST_CASE("real-mode decode error grows with the interpolation degree") {
  const RealField f;
  Rng rng(45);

  const auto run_shape = [&](std::size_t x, std::size_t y, std::size_t z, std::size_t pr,
                             std::size_t pin, std::size_t pc) {
    Matrix<RealField> a(f, x * pr, z * pin), b(f, z * pin, y * pc);
    a.fill_random_uniform(rng);
    b.fill_random_uniform(rng);
    const auto code = make_ep_code(f, x, y, z, ep_threshold(x, y, z));
    const auto ag = split_grid(a, x, z);
    const auto bg = split_grid(b, z, y);
    std::vector<std::size_t> ks;
    for (std::size_t k = 0; k < code.threshold(); ++k) ks.push_back(k);
    const auto res = ep_decode(code, compute_results(code, ag, bg, ks));
    REQUIRE(res.product.has_value());
    return std::pair<double, double>{relative_error(*res.product, multiply(a, b)),
                                     res.condition_estimate};
  };

  const auto [err4, cond4] = run_shape(2, 2, 1, 4, 4, 4);    // threshold 4
  const auto [err33, cond33] = run_shape(4, 4, 2, 4, 4, 4);  // threshold 33
  CHECK(err4 < 1e-8);
  CHECK(err33 > err4);
  CHECK(cond33 > cond4);
}
