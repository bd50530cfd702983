#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "alloysim/matrix.hpp"

namespace alloysim {

/// Block layout for a distributed product: A is x·P × z·S, B is z·S × y·Q,
/// so C = A·B is x·P × y·Q. Only exact divisions are accepted; padding is
/// out of scope.
struct BlockPartition {
  std::size_t x = 1, y = 1, z = 1;
  std::size_t P = 1, S = 1, Q = 1;

  std::size_t a_rows() const { return x * P; }
  std::size_t a_cols() const { return z * S; }
  std::size_t b_rows() const { return z * S; }
  std::size_t b_cols() const { return y * Q; }
};

enum class Side { A, B };

/// Equally-shaped blocks in row-major grid order.
template <class F>
struct BlockGrid {
  std::size_t grid_rows = 0, grid_cols = 0;
  std::vector<Matrix<F>> blocks;

  const Matrix<F>& block(std::size_t i, std::size_t j) const { return blocks[i * grid_cols + j]; }
  std::size_t block_rows() const { return blocks.empty() ? 0 : blocks.front().rows(); }
  std::size_t block_cols() const { return blocks.empty() ? 0 : blocks.front().cols(); }
};

/// Cuts M into a grid_rows × grid_cols grid of equal blocks.
template <class F>
BlockGrid<F> split_grid(const Matrix<F>& m, std::size_t grid_rows, std::size_t grid_cols) {
  if (grid_rows == 0 || grid_cols == 0) throw std::invalid_argument("split_grid: empty grid");
  if (m.rows() % grid_rows != 0 || m.cols() % grid_cols != 0)
    throw std::invalid_argument("split_grid: grid does not divide matrix shape");
  const std::size_t br = m.rows() / grid_rows;
  const std::size_t bc = m.cols() / grid_cols;
  BlockGrid<F> g;
  g.grid_rows = grid_rows;
  g.grid_cols = grid_cols;
  g.blocks.reserve(grid_rows * grid_cols);
  for (std::size_t i = 0; i < grid_rows; ++i)
    for (std::size_t j = 0; j < grid_cols; ++j) {
      Matrix<F> b(m.field(), br, bc);
      for (std::size_t r = 0; r < br; ++r)
        for (std::size_t c = 0; c < bc; ++c) b.at(r, c) = m.at(i * br + r, j * bc + c);
      g.blocks.push_back(std::move(b));
    }
  return g;
}

/// Splits per the partition: A-side gives the x × z grid of P × S blocks,
/// B-side the z × y grid of S × Q blocks. Shape mismatches are rejected.
template <class F>
BlockGrid<F> split(const Matrix<F>& m, Side side, const BlockPartition& p) {
  if (side == Side::A) {
    if (m.rows() != p.a_rows() || m.cols() != p.a_cols())
      throw std::invalid_argument("split: A shape does not match partition");
    return split_grid(m, p.x, p.z);
  }
  if (m.rows() != p.b_rows() || m.cols() != p.b_cols())
    throw std::invalid_argument("split: B shape does not match partition");
  return split_grid(m, p.z, p.y);
}

template <class F>
Matrix<F> assemble(const BlockGrid<F>& g) {
  if (g.blocks.empty()) throw std::invalid_argument("assemble: empty grid");
  const std::size_t br = g.block_rows();
  const std::size_t bc = g.block_cols();
  Matrix<F> m(g.blocks.front().field(), g.grid_rows * br, g.grid_cols * bc);
  for (std::size_t i = 0; i < g.grid_rows; ++i)
    for (std::size_t j = 0; j < g.grid_cols; ++j) {
      const auto& b = g.block(i, j);
      if (b.rows() != br || b.cols() != bc) throw std::invalid_argument("assemble: ragged blocks");
      for (std::size_t r = 0; r < br; ++r)
        for (std::size_t c = 0; c < bc; ++c) m.at(i * br + r, j * bc + c) = b.at(r, c);
    }
  return m;
}

/// Full row bands A_i (P × zS each): the granularity the global code
/// combines, so a decoded A_i·B_j is directly the (i,j) block of A·B.
template <class F>
std::vector<Matrix<F>> row_bands(const Matrix<F>& m, std::size_t x) {
  auto g = split_grid(m, x, 1);
  return std::move(g.blocks);
}

template <class F>
std::vector<Matrix<F>> col_bands(const Matrix<F>& m, std::size_t y) {
  auto g = split_grid(m, 1, y);
  return std::move(g.blocks);
}

/// Stacks x·y product blocks as rows of vectorized entries, (i,j)
/// lexicographic, matching the column order of the codebook's G_C.
template <class F>
Matrix<F> flatten_products(const std::vector<Matrix<F>>& blocks) {
  if (blocks.empty()) throw std::invalid_argument("flatten_products: no blocks");
  const std::size_t pr = blocks.front().rows();
  const std::size_t pc = blocks.front().cols();
  Matrix<F> m(blocks.front().field(), blocks.size(), pr * pc);
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const auto& b = blocks[k];
    if (b.rows() != pr || b.cols() != pc)
      throw std::invalid_argument("flatten_products: ragged blocks");
    for (std::size_t r = 0; r < pr; ++r)
      for (std::size_t c = 0; c < pc; ++c) m.at(k, r * pc + c) = b.at(r, c);
  }
  return m;
}

template <class F>
std::vector<Matrix<F>> unflatten_products(const Matrix<F>& m, std::size_t block_rows,
                                          std::size_t block_cols) {
  if (m.cols() != block_rows * block_cols)
    throw std::invalid_argument("unflatten_products: width does not match block shape");
  std::vector<Matrix<F>> blocks;
  blocks.reserve(m.rows());
  for (std::size_t k = 0; k < m.rows(); ++k) {
    Matrix<F> b(m.field(), block_rows, block_cols);
    for (std::size_t r = 0; r < block_rows; ++r)
      for (std::size_t c = 0; c < block_cols; ++c) b.at(r, c) = m.at(k, r * block_cols + c);
    blocks.push_back(std::move(b));
  }
  return blocks;
}

/// Rebuilds C from its x·y product blocks in (i,j) lexicographic order.
template <class F>
Matrix<F> assemble_products(const std::vector<Matrix<F>>& blocks, std::size_t x, std::size_t y) {
  if (blocks.size() != x * y) throw std::invalid_argument("assemble_products: block count");
  BlockGrid<F> g;
  g.grid_rows = x;
  g.grid_cols = y;
  g.blocks = blocks;
  return assemble(g);
}

}  // namespace alloysim
