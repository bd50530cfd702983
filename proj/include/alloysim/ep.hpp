#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "alloysim/matrix.hpp"
#include "alloysim/partition.hpp"

namespace alloysim {

/// Deterministic recovery threshold of the Entangled Polynomial code for
/// an (m, n, p) = (x, y, z) partition: p·m·n + p - 1.
inline std::size_t ep_threshold(std::size_t m, std::size_t n, std::size_t p) {
  return p * m * n + p - 1;
}

/// Entangled Polynomial baseline. Worker k evaluates the coded polynomials
/// at its point α_k; any threshold() distinct-point results interpolate
/// the product polynomial (MDS). Points are 1..n in both modes; the
/// integer-node Vandermonde conditioning in real mode is exactly what the
/// stability comparison measures.
template <class F>
struct EpCode {
  std::size_t x = 1, y = 1, z = 1;
  std::vector<typename F::Elem> points;

  std::size_t threshold() const { return ep_threshold(x, y, z); }
  std::size_t workers() const { return points.size(); }
};

template <class F>
EpCode<F> make_ep_code(const F& field, std::size_t x, std::size_t y, std::size_t z,
                       std::size_t workers) {
  if (x < 1 || y < 1 || z < 1 || workers < 1) throw std::invalid_argument("make_ep_code: sizes");
  if constexpr (F::exact) {
    if (field.modulus() <= workers)
      throw std::invalid_argument("make_ep_code: need q > worker count for distinct points");
  }
  EpCode<F> code;
  code.x = x;
  code.y = y;
  code.z = z;
  code.points.reserve(workers);
  for (std::size_t k = 1; k <= workers; ++k)
    code.points.push_back(field.from_int(static_cast<long long>(k)));
  return code;
}

namespace detail {
// Exponent schedule: A_(i,j) carries α^(j + i·z), B_(j,l) carries
// α^(z-1-j + l·z·x); the product coefficient at z-1 + i·z + l·z·x is then
// Σ_j A_(i,j)B_(j,l), and the top degree is threshold-1.
inline std::size_t ep_a_exponent(std::size_t i, std::size_t j, std::size_t z) { return j + i * z; }
inline std::size_t ep_b_exponent(std::size_t j, std::size_t l, std::size_t x, std::size_t z) {
  return z - 1 - j + l * z * x;
}
inline std::size_t ep_c_exponent(std::size_t i, std::size_t l, std::size_t x, std::size_t z) {
  return z - 1 + i * z + l * z * x;
}
}  // namespace detail

template <class F>
std::pair<Matrix<F>, Matrix<F>> ep_encode(const EpCode<F>& code, const BlockGrid<F>& a,
                                          const BlockGrid<F>& b, std::size_t k) {
  if (a.grid_rows != code.x || a.grid_cols != code.z || b.grid_rows != code.z ||
      b.grid_cols != code.y)
    throw std::invalid_argument("ep_encode: grid does not match partition");
  if (k >= code.workers()) throw std::out_of_range("ep_encode: worker index");
  const F& f = a.blocks.front().field();
  const auto alpha = code.points[k];

  std::vector<typename F::Elem> powers(code.threshold());
  powers[0] = f.one();
  for (std::size_t e = 1; e < powers.size(); ++e) powers[e] = f.mul(powers[e - 1], alpha);

  Matrix<F> at(f, a.block_rows(), a.block_cols());
  for (std::size_t i = 0; i < code.x; ++i)
    for (std::size_t j = 0; j < code.z; ++j)
      add_scaled(at, powers[detail::ep_a_exponent(i, j, code.z)], a.block(i, j));

  Matrix<F> bt(f, b.block_rows(), b.block_cols());
  for (std::size_t j = 0; j < code.z; ++j)
    for (std::size_t l = 0; l < code.y; ++l)
      add_scaled(bt, powers[detail::ep_b_exponent(j, l, code.x, code.z)], b.block(j, l));

  return {std::move(at), std::move(bt)};
}

template <class F>
struct EpDecodeResult {
  std::optional<Matrix<F>> product;  // nullopt = NeedMoreRows
  double condition_estimate = 1.0;   // max/min pivot magnitude of the Vandermonde solve
};

/// Interpolates the degree-(threshold-1) product polynomial from the first
/// threshold returned results and extracts the product blocks.
template <class F>
EpDecodeResult<F> ep_decode(const EpCode<F>& code,
                            const std::vector<std::pair<std::size_t, Matrix<F>>>& returned) {
  EpDecodeResult<F> out;
  const std::size_t t = code.threshold();
  if (returned.size() < t) return out;
  const F& f = returned.front().second.field();
  const std::size_t pr = returned.front().second.rows();
  const std::size_t pc = returned.front().second.cols();

  Matrix<F> vand(f, t, t);
  std::vector<Matrix<F>> results;
  results.reserve(t);
  for (std::size_t r = 0; r < t; ++r) {
    const auto [k, res] = returned[r];
    const auto alpha = code.points[k];
    auto p = f.one();
    for (std::size_t e = 0; e < t; ++e) {
      vand.at(r, e) = p;
      p = f.mul(p, alpha);
    }
    results.push_back(res);
  }

  SolveStats stats;
  const auto coeffs = solve(vand, flatten_products(results), &stats);
  out.condition_estimate = stats.pivot_ratio();
  if (!coeffs) return out;  // repeated points would be a construction bug

  std::vector<Matrix<F>> blocks;
  blocks.reserve(code.x * code.y);
  for (std::size_t i = 0; i < code.x; ++i)
    for (std::size_t l = 0; l < code.y; ++l) {
      const std::size_t e = detail::ep_c_exponent(i, l, code.x, code.z);
      Matrix<F> blk(f, pr, pc);
      for (std::size_t r = 0; r < pr; ++r)
        for (std::size_t c = 0; c < pc; ++c) blk.at(r, c) = coeffs->at(e, r * pc + c);
      blocks.push_back(std::move(blk));
    }
  out.product = assemble_products(blocks, code.x, code.y);
  return out;
}

}  // namespace alloysim
