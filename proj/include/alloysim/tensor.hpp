#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "alloysim/partition.hpp"

namespace alloysim {

/// Integer-weighted combination of named blocks, e.g. A1 + A4 as
/// {(0,+1),(3,+1)} over flat block indices.
struct LinearComb {
  std::vector<std::pair<std::size_t, int>> weights;
};

/// One rank-one term: input maps for each argument, and the ±1 output map
/// scattering the term's product into output blocks.
struct DecompTerm {
  LinearComb ea, eb;
  LinearComb d;
};

/// Rank-r decomposition of block matrix multiplication on an
/// a_rows×a_cols by a_cols×b_cols grid: A·B = Σ_t D_t(E_a^t(A) · E_b^t(B)).
struct TensorDecomposition {
  std::size_t a_rows = 0, a_cols = 0;
  std::size_t b_rows = 0, b_cols = 0;
  std::vector<DecompTerm> terms;

  std::size_t rank() const { return terms.size(); }
  std::size_t c_rows() const { return a_rows; }
  std::size_t c_cols() const { return b_cols; }
};

/// Strassen's rank-7 decomposition of 2×2 block multiplication.
TensorDecomposition strassen();

/// The uncoded rank-x·y·z decomposition: one term per block product
/// A_(i,k)·B_(k,j), summed into output block (i,j).
TensorDecomposition trivial_decomposition(std::size_t x, std::size_t y, std::size_t z);

/// JSON round trip for decomposition files:
/// {"rank": r, "shapes": {"a": [rows, cols], "b": [rows, cols]},
///  "terms": [{"E": [{"idx": w, ...}, {...}], "D": {"idx": w, ...}}, ...]}
TensorDecomposition decomposition_from_json(const std::string& text);
std::string decomposition_to_json(const TensorDecomposition& d);
TensorDecomposition load_decomposition(const std::string& path);

/// Σ w_i · block_i over a grid.
template <class F>
Matrix<F> apply_comb(const LinearComb& comb, const BlockGrid<F>& grid) {
  if (grid.blocks.empty()) throw std::invalid_argument("apply_comb: empty grid");
  const F& f = grid.blocks.front().field();
  Matrix<F> acc(f, grid.block_rows(), grid.block_cols());
  for (const auto& [idx, w] : comb.weights) {
    if (idx >= grid.blocks.size()) throw std::out_of_range("apply_comb: block index");
    add_scaled(acc, f.from_int(w), grid.blocks[idx]);
  }
  return acc;
}

/// Evaluates Σ_t D_t(E_a^t(A)·E_b^t(B)) on explicit matrices.
template <class F>
Matrix<F> evaluate_decomposition(const TensorDecomposition& d, const Matrix<F>& a,
                                 const Matrix<F>& b) {
  const auto ag = split_grid(a, d.a_rows, d.a_cols);
  const auto bg = split_grid(b, d.b_rows, d.b_cols);
  const F& f = a.field();
  const std::size_t cr = ag.block_rows();
  const std::size_t cc = bg.block_cols();
  BlockGrid<F> out;
  out.grid_rows = d.c_rows();
  out.grid_cols = d.c_cols();
  out.blocks.assign(out.grid_rows * out.grid_cols, Matrix<F>(f, cr, cc));
  for (const auto& term : d.terms) {
    const Matrix<F> ta = apply_comb(term.ea, ag);
    const Matrix<F> tb = apply_comb(term.eb, bg);
    const Matrix<F> prod = multiply(ta, tb);
    for (const auto& [idx, w] : term.d.weights) {
      if (idx >= out.blocks.size()) throw std::out_of_range("evaluate: output block index");
      add_scaled(out.blocks[idx], f.from_int(w), prod);
    }
  }
  return assemble(out);
}

struct VerifyResult {
  bool pass = false;
  double max_deviation = 0.0;  // finite: 0 or 1; real: max relative error
};

/// Checks the defining identity on random inputs with the given block
/// shape. Exact match in finite mode; relative error <= 1e-10 in real mode.
template <class F>
VerifyResult verify(const TensorDecomposition& d, const F& field, std::size_t trials,
                    std::size_t block_rows, std::size_t block_inner, std::size_t block_cols,
                    Rng& rng) {
  VerifyResult res;
  res.pass = true;
  for (std::size_t t = 0; t < trials; ++t) {
    Matrix<F> a(field, d.a_rows * block_rows, d.a_cols * block_inner);
    Matrix<F> b(field, d.b_rows * block_inner, d.b_cols * block_cols);
    a.fill_random_uniform(rng);
    b.fill_random_uniform(rng);
    const Matrix<F> via_terms = evaluate_decomposition(d, a, b);
    const Matrix<F> direct = multiply(a, b);
    if constexpr (F::exact) {
      if (!(via_terms == direct)) {
        res.pass = false;
        res.max_deviation = 1.0;
      }
    } else {
      const double err = relative_error(via_terms, direct);
      if (err > res.max_deviation) res.max_deviation = err;
      if (err > 1e-10) res.pass = false;
    }
  }
  return res;
}

}  // namespace alloysim
