// Test-side oracles, deliberately independent of the library's solvers:
// a plain reference multiply, a plain elimination rank over F_q, and small
// statistics helpers.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace testutil {

using U64Matrix = std::vector<std::vector<std::uint64_t>>;

inline U64Matrix naive_multiply_mod(const U64Matrix& a, const U64Matrix& b, std::uint64_t q) {
  const std::size_t n = a.size(), m = b[0].size(), inner = b.size();
  U64Matrix c(n, std::vector<std::uint64_t>(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      unsigned __int128 acc = 0;
      for (std::size_t k = 0; k < inner; ++k) acc += static_cast<unsigned __int128>(a[i][k]) * b[k][j];
      c[i][j] = static_cast<std::uint64_t>(acc % q);
    }
  return c;
}

inline std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t q) {
  unsigned __int128 r = 1, base = a % q;
  while (e) {
    if (e & 1) r = r * base % q;
    base = base * base % q;
    e >>= 1;
  }
  return static_cast<std::uint64_t>(r);
}

inline std::size_t rank_mod(U64Matrix m, std::uint64_t q) {
  if (m.empty()) return 0;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t i = r; i < rows; ++i)
      if (m[i][c] % q != 0) {
        piv = i;
        break;
      }
    if (piv == rows) continue;
    std::swap(m[piv], m[r]);
    const std::uint64_t inv = pow_mod(m[r][c], q - 2, q);
    for (auto& v : m[r]) v = static_cast<std::uint64_t>((unsigned __int128)v * inv % q);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] % q == 0) continue;
      const std::uint64_t f = m[i][c] % q;
      for (std::size_t j = 0; j < cols; ++j)
        m[i][j] = static_cast<std::uint64_t>((m[i][j] + (unsigned __int128)(q - f) * m[r][j]) % q);
    }
    ++r;
  }
  return r;
}

inline double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

inline double binomial_se(double p, std::size_t n) { return std::sqrt(p * (1 - p) / n); }

/// Exact invertibility probability of a 4-row star-product codebook over
/// F_2 (x = y = 2), by enumerating the ten possible values of vec(a ⊗ b)
/// under the p-adic 2-product law.
inline double exact_q2_star_invertibility() {
  const double u = 1.0 - std::sqrt(0.5);  // P(coefficient = 0)
  const double v = 1.0 - u;
  struct RowVal {
    std::array<std::uint64_t, 4> row;
    double p;
  };
  std::vector<RowVal> rows;
  for (std::uint64_t a1 = 0; a1 < 2; ++a1)
    for (std::uint64_t a2 = 0; a2 < 2; ++a2)
      for (std::uint64_t b1 = 0; b1 < 2; ++b1)
        for (std::uint64_t b2 = 0; b2 < 2; ++b2) {
          const double p = (a1 ? v : u) * (a2 ? v : u) * (b1 ? v : u) * (b2 ? v : u);
          const std::array<std::uint64_t, 4> r{a1 & b1, a1 & b2, a2 & b1, a2 & b2};
          bool merged = false;
          for (auto& rv : rows)
            if (rv.row == r) {
              rv.p += p;
              merged = true;
              break;
            }
          if (!merged) rows.push_back(RowVal{r, p});
        }
  double total = 0.0;
  for (std::size_t i0 = 0; i0 < rows.size(); ++i0)
    for (std::size_t i1 = 0; i1 < rows.size(); ++i1)
      for (std::size_t i2 = 0; i2 < rows.size(); ++i2)
        for (std::size_t i3 = 0; i3 < rows.size(); ++i3) {
          U64Matrix m{{rows[i0].row.begin(), rows[i0].row.end()},
                      {rows[i1].row.begin(), rows[i1].row.end()},
                      {rows[i2].row.begin(), rows[i2].row.end()},
                      {rows[i3].row.begin(), rows[i3].row.end()}};
          if (rank_mod(m, 2) == 4)
            total += rows[i0].p * rows[i1].p * rows[i2].p * rows[i3].p;
        }
  return total;
}

}  // namespace testutil
