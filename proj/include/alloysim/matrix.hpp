#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "alloysim/field.hpp"

namespace alloysim {

/// Dense row-major matrix over a scalar field F (PrimeField or RealField).
/// Values are immutable by convention once an operation returns them; the
/// mutating accessors exist for construction code.
template <class F>
class Matrix {
 public:
  using Elem = typename F::Elem;

  Matrix(F field, std::size_t rows, std::size_t cols)
      : field_(field), rows_(rows), cols_(cols), data_(rows * cols, field.zero()) {}

  static Matrix identity(F field, std::size_t n) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = field.one();
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const F& field() const { return field_; }

  Elem& at(std::size_t r, std::size_t c) {
    assert(r < rows_ && c < cols_);
    return data_[r * cols_ + c];
  }
  const Elem& at(std::size_t r, std::size_t c) const {
    assert(r < rows_ && c < cols_);
    return data_[r * cols_ + c];
  }

  std::span<const Elem> row(std::size_t r) const {
    return std::span<const Elem>(data_.data() + r * cols_, cols_);
  }
  std::span<Elem> row(std::size_t r) {
    return std::span<Elem>(data_.data() + r * cols_, cols_);
  }

  const std::vector<Elem>& data() const { return data_; }

  bool operator==(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (std::size_t i = 0; i < data_.size(); ++i)
      if (!field_.equal(data_[i], o.data_[i])) return false;
    return true;
  }

  void fill_random_uniform(Rng& rng) {
    if constexpr (F::exact) {
      for (auto& v : data_) v = field_.sample_uniform(rng);
    } else {
      for (auto& v : data_) v = rng.normal();
    }
  }

 private:
  F field_;
  std::size_t rows_, cols_;
  std::vector<Elem> data_;
};

template <class F>
Matrix<F> add(const Matrix<F>& a, const Matrix<F>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("add: shape mismatch");
  Matrix<F> r(a.field(), a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r.at(i, j) = a.field().add(a.at(i, j), b.at(i, j));
  return r;
}

template <class F>
Matrix<F> sub(const Matrix<F>& a, const Matrix<F>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("sub: shape mismatch");
  Matrix<F> r(a.field(), a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r.at(i, j) = a.field().sub(a.at(i, j), b.at(i, j));
  return r;
}

template <class F>
Matrix<F> scale(const Matrix<F>& a, typename F::Elem s) {
  Matrix<F> r(a.field(), a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r.at(i, j) = a.field().mul(s, a.at(i, j));
  return r;
}

/// acc += s * m, in place. The workhorse of every encoder.
template <class F>
void add_scaled(Matrix<F>& acc, typename F::Elem s, const Matrix<F>& m) {
  if (acc.rows() != m.rows() || acc.cols() != m.cols())
    throw std::invalid_argument("add_scaled: shape mismatch");
  const F& f = acc.field();
  if (f.is_zero(s)) return;
  for (std::size_t i = 0; i < acc.rows(); ++i)
    for (std::size_t j = 0; j < acc.cols(); ++j)
      acc.at(i, j) = f.add(acc.at(i, j), f.mul(s, m.at(i, j)));
}

template <class F>
Matrix<F> multiply(const Matrix<F>& a, const Matrix<F>& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("multiply: inner dimension mismatch");
  const F& f = a.field();
  Matrix<F> r(f, a.rows(), b.cols());
  // i-k-j order keeps the inner loop contiguous in b and r.
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const auto aik = a.at(i, k);
      if (f.is_zero(aik)) continue;
      auto bk = b.row(k);
      auto ri = r.row(i);
      for (std::size_t j = 0; j < b.cols(); ++j) ri[j] = f.add(ri[j], f.mul(aik, bk[j]));
    }
  }
  return r;
}

template <class F>
Matrix<F> transpose(const Matrix<F>& a) {
  Matrix<F> r(a.field(), a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r.at(j, i) = a.at(i, j);
  return r;
}

inline double frobenius_norm(const Matrix<RealField>& m) {
  double s = 0;
  for (double v : m.data()) s += v * v;
  return std::sqrt(s);
}

/// ||a - b||_F / ||b||_F; b is the reference value.
inline double relative_error(const Matrix<RealField>& a, const Matrix<RealField>& b) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double d = a.at(i, j) - b.at(i, j);
      num += d * d;
      den += b.at(i, j) * b.at(i, j);
    }
  return den == 0 ? std::sqrt(num) : std::sqrt(num / den);
}

namespace detail {

// Elimination pivot policy. Finite fields take the first nonzero entry;
// reals take the largest entry and treat anything below pivot_rel_tol of
// the largest pivot seen so far as zero.
template <class F>
struct PivotPolicy {
  double scale = 0.0;

  std::size_t best_row(const Matrix<F>& m, std::size_t col, std::size_t from, bool& usable) {
    const F& f = m.field();
    std::size_t best = from;
    double best_mag = -1.0;
    for (std::size_t i = from; i < m.rows(); ++i) {
      const double mag = f.magnitude(m.at(i, col));
      if (mag > best_mag) {
        best_mag = mag;
        best = i;
        if constexpr (F::exact) {
          if (mag > 0) break;  // first nonzero suffices
        }
      }
    }
    if constexpr (F::exact) {
      usable = best_mag > 0;
    } else {
      if (best_mag > scale) scale = best_mag;
      usable = scale > 0 && best_mag > RealField::pivot_rel_tol * scale;
    }
    return best;
  }
};

}  // namespace detail

/// Row rank by Gaussian elimination, consuming its argument.
template <class F>
std::size_t rank(Matrix<F> m) {
  const F& f = m.field();
  detail::PivotPolicy<F> policy;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    bool usable = false;
    const std::size_t p = policy.best_row(m, c, r, usable);
    if (!usable) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(p, j), m.at(r, j));
    const auto pivinv = f.inv(m.at(r, c));
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      const auto factor = f.mul(m.at(i, c), pivinv);
      if (f.is_zero(factor)) continue;
      auto src = m.row(r);
      auto dst = m.row(i);
      for (std::size_t j = c; j < m.cols(); ++j) dst[j] = f.sub(dst[j], f.mul(factor, src[j]));
    }
    ++r;
  }
  return r;
}

struct SolveStats {
  double min_pivot = 0.0;
  double max_pivot = 0.0;
  double pivot_ratio() const { return min_pivot > 0.0 ? max_pivot / min_pivot : 0.0; }
};

/// Solves G·X = RHS for square G. Returns nullopt when G is singular
/// (finite: rank < n; real: a pivot falls below the relative tolerance),
/// which decoders treat as "collect more rows".
template <class F>
std::optional<Matrix<F>> solve(const Matrix<F>& g, const Matrix<F>& rhs,
                               SolveStats* stats = nullptr) {
  if (g.rows() != g.cols()) throw std::invalid_argument("solve: G must be square");
  if (g.rows() != rhs.rows()) throw std::invalid_argument("solve: RHS row count mismatch");
  if constexpr (F::exact) {
    if (!(g.field() == rhs.field())) throw std::invalid_argument("solve: mode mismatch");
  }
  const F& f = g.field();
  const std::size_t n = g.rows();
  const std::size_t w = rhs.cols();

  // augmented [G | RHS]
  Matrix<F> a(f, n, n + w);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a.at(i, j) = g.at(i, j);
    for (std::size_t j = 0; j < w; ++j) a.at(i, n + j) = rhs.at(i, j);
  }

  detail::PivotPolicy<F> policy;
  for (std::size_t c = 0; c < n; ++c) {
    bool usable = false;
    const std::size_t p = policy.best_row(a, c, c, usable);
    if (!usable) return std::nullopt;
    if (p != c)
      for (std::size_t j = 0; j < n + w; ++j) std::swap(a.at(p, j), a.at(c, j));
    if (stats) {
      const double mag = f.magnitude(a.at(c, c));
      if (stats->max_pivot == 0.0 || mag > stats->max_pivot) stats->max_pivot = mag;
      if (stats->min_pivot == 0.0 || mag < stats->min_pivot) stats->min_pivot = mag;
    }
    const auto pivinv = f.inv(a.at(c, c));
    for (std::size_t j = c; j < n + w; ++j) a.at(c, j) = f.mul(pivinv, a.at(c, j));
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c) continue;
      const auto factor = a.at(i, c);
      if (f.is_zero(factor)) continue;
      auto src = a.row(c);
      auto dst = a.row(i);
      for (std::size_t j = c; j < n + w; ++j) dst[j] = f.sub(dst[j], f.mul(factor, src[j]));
    }
  }

  Matrix<F> x(f, n, w);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < w; ++j) x.at(i, j) = a.at(i, n + j);
  return x;
}

/// Incremental rank of a growing row set: feed rows in arrival order, read
/// off when the span reaches the target dimension. Keeps an echelon basis,
/// O(rank·cols) per added row.
template <class F>
class RankTracker {
 public:
  using Elem = typename F::Elem;

  RankTracker(F field, std::size_t cols) : field_(field), cols_(cols) {}

  /// Returns true iff the row increased the rank.
  bool add(std::span<const Elem> row) {
    if constexpr (F::exact)
      return add_exact(row);
    else
      return add_real(row);
  }

  std::size_t rank() const { return basis_.size(); }

 private:
  // Finite fields use delayed reduction: eliminations accumulate
  // v[j] += (q - factor) * base[j] without reducing, and one Barrett pass
  // reduces the row at the end. Entries stay below 2^64 as long as the
  // elimination count stays under `budget`; small moduli never hit it.
  bool add_exact(std::span<const Elem> row) {
    const F& f = field_;
    const std::uint64_t q = f.modulus();
    const std::uint64_t step = (q - 1) * (q - 1);
    const std::uint64_t budget = (~0ULL - (q - 1)) / step;
    std::vector<Elem> v(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) v[j] = f.reduce(row[j]);
    std::uint64_t pending = 0;
    for (std::size_t b = 0; b < basis_.size(); ++b) {
      const std::uint64_t factor = f.reduce(v[pivots_[b]]);
      if (factor == 0) continue;
      if (++pending > budget) {
        for (auto& e : v) e = f.reduce(e);
        pending = 1;
      }
      const std::uint64_t neg = q - factor;
      const Elem* base = basis_[b].data();
      for (std::size_t j = 0; j < cols_; ++j) v[j] += neg * base[j];
    }
    std::size_t piv = cols_;
    for (std::size_t j = 0; j < cols_; ++j) {
      v[j] = f.reduce(v[j]);
      if (piv == cols_ && v[j] != 0) piv = j;
    }
    if (piv == cols_) return false;
    const auto pivinv = f.inv(v[piv]);
    for (auto& e : v) e = f.mul(pivinv, e);
    basis_.push_back(std::move(v));
    pivots_.push_back(piv);
    return true;
  }

  bool add_real(std::span<const Elem> row) {
    const F& f = field_;
    std::vector<Elem> v(row.begin(), row.end());
    double norm0 = 0.0;
    for (const auto& e : v) norm0 = std::max(norm0, f.magnitude(e));
    if (norm0 == 0.0) return false;
    for (std::size_t b = 0; b < basis_.size(); ++b) {
      const auto factor = v[pivots_[b]];
      if (f.is_zero(factor)) continue;
      const auto& base = basis_[b];
      for (std::size_t j = 0; j < cols_; ++j) v[j] = f.sub(v[j], f.mul(factor, base[j]));
    }
    std::size_t piv = cols_;
    double best = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) {
      const double mag = f.magnitude(v[j]);
      if (mag > best) {
        best = mag;
        piv = j;
      }
    }
    if (piv == cols_ || best <= RealField::pivot_rel_tol * norm0) return false;
    const auto pivinv = f.inv(v[piv]);
    for (auto& e : v) e = f.mul(pivinv, e);
    basis_.push_back(std::move(v));
    pivots_.push_back(piv);
    return true;
  }

  F field_;
  std::size_t cols_;
  std::vector<std::vector<Elem>> basis_;
  std::vector<std::size_t> pivots_;
};

}  // namespace alloysim
