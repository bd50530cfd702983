#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "alloysim/matrix.hpp"
#include "alloysim/partition.hpp"
#include "alloysim/rng.hpp"

namespace alloysim {

/// Coefficient law whose l-fold products are uniform on F_q: mass
/// 1 - ((q-1)/q)^(1/l) at zero and (q(q-1)^(l-1))^(-1/l) on each nonzero
/// value. l = 2 is the matrix-multiplication case.
struct PadicDistribution {
  std::uint64_t q;
  unsigned l;

  PadicDistribution(std::uint64_t q_, unsigned l_) : q(q_), l(l_) {
    if (q < 2 || l < 1) throw std::invalid_argument("PadicDistribution: need q >= 2, l >= 1");
  }

  double p_zero() const {
    return 1.0 - std::pow((static_cast<double>(q) - 1.0) / static_cast<double>(q), 1.0 / l);
  }
  double p_nonzero() const {
    return std::pow(static_cast<double>(q) * std::pow(static_cast<double>(q) - 1.0, l - 1.0),
                    -1.0 / l);
  }

  /// The zero/nonzero split uses a real threshold; the masses are
  /// irrational so exact integer sampling is impossible, and the double
  /// rounding bias (< 1e-15) sits far below every test tolerance.
  std::uint64_t sample(Rng& rng) const {
    if (rng.next_unit() < p_zero()) return 0;
    return 1 + rng.uniform_below(q - 1);
  }
};

/// Generator triple of a random code: G_A (n×x), G_B (n×y) and their star
/// product G_C (n×xy) with (g_C)^k_(i,j) = (g_A)^k_i (g_B)^k_j, column
/// order (i,j) lexicographic.
template <class F>
struct CodeBook {
  Matrix<F> ga, gb, gc;

  std::size_t workers() const { return ga.rows(); }
  std::size_t x() const { return ga.cols(); }
  std::size_t y() const { return gb.cols(); }

  std::vector<typename F::Elem> gc_row(std::size_t k) const {
    std::vector<typename F::Elem> row(x() * y());
    for (std::size_t i = 0; i < x(); ++i)
      for (std::size_t j = 0; j < y(); ++j)
        row[i * y() + j] = ga.field().mul(ga.at(k, i), gb.at(k, j));
    return row;
  }
};

/// Worker k's raw generator coefficients: x draws for its G_A row followed
/// by y draws for its G_B row, all from the substream (key, k). Single
/// source of truth for the stream layout — the codebook builder and the
/// rank-only channel simulations must sample identically.
template <class F>
void padic_row_coefficients(const F& field, std::uint64_t key, std::size_t k, std::size_t x,
                            std::size_t y, std::vector<typename F::Elem>& ga_row,
                            std::vector<typename F::Elem>& gb_row) {
  ga_row.resize(x);
  gb_row.resize(y);
  Rng row = Rng::substream(key, k);
  if constexpr (F::exact) {
    const PadicDistribution dist(field.modulus(), 2);
    for (std::size_t i = 0; i < x; ++i) ga_row[i] = dist.sample(row);
    for (std::size_t j = 0; j < y; ++j) gb_row[j] = dist.sample(row);
  } else {
    for (std::size_t i = 0; i < x; ++i) ga_row[i] = row.normal();
    for (std::size_t j = 0; j < y; ++j) gb_row[j] = row.normal();
  }
}

/// Builds an n-worker codebook. Worker k's coefficients come from the
/// substream (key, k) — x draws for G_A then y draws for G_B — so
/// extending n leaves the first rows bit-identical, which is what makes
/// paired-n threshold searches exactly monotone. Finite mode samples the
/// p-adic 2-product law; Real mode samples standard normals.
template <class F>
CodeBook<F> make_padic_codebook(const F& field, std::size_t n, std::size_t x, std::size_t y,
                                std::uint64_t key) {
  Matrix<F> ga(field, n, x), gb(field, n, y), gc(field, n, x * y);
  std::vector<typename F::Elem> ga_row, gb_row;
  for (std::size_t k = 0; k < n; ++k) {
    padic_row_coefficients(field, key, k, x, y, ga_row, gb_row);
    for (std::size_t i = 0; i < x; ++i) ga.at(k, i) = ga_row[i];
    for (std::size_t j = 0; j < y; ++j) gb.at(k, j) = gb_row[j];
    for (std::size_t i = 0; i < x; ++i)
      for (std::size_t j = 0; j < y; ++j)
        gc.at(k, i * y + j) = field.mul(ga.at(k, i), gb.at(k, j));
  }
  return CodeBook<F>{std::move(ga), std::move(gb), std::move(gc)};
}

template <class F>
CodeBook<F> make_padic_codebook(const F& field, std::size_t n, std::size_t x, std::size_t y,
                                Rng& rng) {
  return make_padic_codebook(field, n, x, y, Rng::mix(rng.next_u64(), 0));
}

/// Worker k's coded inputs: Ã_k = Σ_i (g_A)^k_i A_i, B̃_k = Σ_j (g_B)^k_j B_j.
template <class F>
std::pair<Matrix<F>, Matrix<F>> encode_worker(const CodeBook<F>& cb,
                                              const std::vector<Matrix<F>>& a_blocks,
                                              const std::vector<Matrix<F>>& b_blocks,
                                              std::size_t k) {
  if (a_blocks.size() != cb.x() || b_blocks.size() != cb.y())
    throw std::invalid_argument("encode_worker: block count does not match codebook");
  if (k >= cb.workers()) throw std::out_of_range("encode_worker: worker index");
  Matrix<F> at(a_blocks.front().field(), a_blocks.front().rows(), a_blocks.front().cols());
  Matrix<F> bt(b_blocks.front().field(), b_blocks.front().rows(), b_blocks.front().cols());
  for (std::size_t i = 0; i < cb.x(); ++i) add_scaled(at, cb.ga.at(k, i), a_blocks[i]);
  for (std::size_t j = 0; j < cb.y(); ++j) add_scaled(bt, cb.gb.at(k, j), b_blocks[j]);
  return {std::move(at), std::move(bt)};
}

/// Streaming decoder: feed worker results as they arrive; `ready()` flips
/// once the received G_C rows span all x·y products. Rows that do not grow
/// the rank are dropped, mirroring a master that cuts off workers
/// returning useless data.
template <class F>
class PadicDecoder {
 public:
  PadicDecoder(const CodeBook<F>& cb) : cb_(cb), tracker_(cb.ga.field(), cb.x() * cb.y()) {}

  /// Returns true iff this arrival was useful (grew the rank).
  bool add(std::size_t worker, Matrix<F> result) {
    if (worker >= cb_.workers()) throw std::out_of_range("PadicDecoder: worker index");
    if (ready()) return false;
    const auto row = cb_.gc_row(worker);
    if (!tracker_.add(row)) return false;
    pivot_rows_.push_back(worker);
    results_.push_back(std::move(result));
    return true;
  }

  bool ready() const { return tracker_.rank() == cb_.x() * cb_.y(); }
  std::size_t rank() const { return tracker_.rank(); }

  /// Solves for all x·y product blocks A_i·B_j. Requires ready().
  std::vector<Matrix<F>> product_blocks() const {
    if (!ready()) throw std::logic_error("PadicDecoder: not enough independent rows");
    const F& f = cb_.ga.field();
    const std::size_t m = cb_.x() * cb_.y();
    Matrix<F> g(f, m, m);
    for (std::size_t r = 0; r < m; ++r) {
      const auto row = cb_.gc_row(pivot_rows_[r]);
      for (std::size_t c = 0; c < m; ++c) g.at(r, c) = row[c];
    }
    const Matrix<F> rhs = flatten_products(results_);
    auto x = solve(g, rhs);
    if (!x) throw std::logic_error("PadicDecoder: selected rows unexpectedly singular");
    return unflatten_products(*x, results_.front().rows(), results_.front().cols());
  }

  /// Assembled product C; blocks are full-band products, so this is A·B.
  Matrix<F> assemble_product() const {
    return assemble_products(product_blocks(), cb_.x(), cb_.y());
  }

 private:
  const CodeBook<F>& cb_;
  RankTracker<F> tracker_;
  std::vector<std::size_t> pivot_rows_;
  std::vector<Matrix<F>> results_;
};

/// One-shot decode from a set of returned results. nullopt = NeedMoreRows.
template <class F>
std::optional<Matrix<F>> decode(const CodeBook<F>& cb,
                                const std::vector<std::pair<std::size_t, Matrix<F>>>& returned) {
  PadicDecoder<F> dec(cb);
  for (const auto& [k, res] : returned) dec.add(k, res);
  if (!dec.ready()) return std::nullopt;
  return dec.assemble_product();
}

/// Lemma-style closed form ∏_{i=1..k} (1 - q^{-i}): the probability that a
/// k×k matrix with uniform i.i.d. entries over F_q is invertible.
double success_probability(std::uint64_t q, unsigned k);

struct UniformityReport {
  double tv_distance = 0.0;
  std::vector<double> frequencies;
};

/// Empirical distribution of l-fold products of p-adic coefficients vs the
/// uniform distribution on F_q.
UniformityReport product_uniformity(std::uint64_t q, unsigned l, std::size_t samples, Rng& rng);

}  // namespace alloysim
