#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "alloysim/channel.hpp"
#include "alloysim/ep.hpp"
#include "alloysim/padic.hpp"
#include "alloysim/tensor.hpp"

namespace alloysim {

/// A locally random alloy code: the outer tensor decomposition splits the
/// job into r independent terms, each term's worker group runs its own
/// inner random code on an (inner_x, inner_y) split of the term's E-images.
template <class F>
struct AlloyPlan {
  TensorDecomposition decomp;
  std::size_t inner_x = 1, inner_y = 1;
  std::vector<std::size_t> group_sizes;
  std::vector<CodeBook<F>> codebooks;

  std::size_t groups() const { return group_sizes.size(); }
  std::size_t total_workers() const {
    std::size_t n = 0;
    for (auto s : group_sizes) n += s;
    return n;
  }
  /// Rows needed if every received row were useful: r·x'·y'.
  std::size_t min_rows() const { return decomp.rank() * inner_x * inner_y; }
};

/// Splits n workers into r groups of ⌊n/r⌋, remainder to the first groups,
/// and draws one inner codebook per group (group t keyed mix(key, t)).
template <class F>
AlloyPlan<F> make_alloy_plan(const F& field, TensorDecomposition decomp, std::size_t n,
                             std::size_t inner_x, std::size_t inner_y, std::uint64_t key) {
  const std::size_t r = decomp.rank();
  if (r == 0) throw std::invalid_argument("make_alloy_plan: decomposition has no terms");
  if (n < r) throw std::invalid_argument("make_alloy_plan: need at least one worker per group");
  if (inner_x < 1 || inner_y < 1) throw std::invalid_argument("make_alloy_plan: inner partition");
  AlloyPlan<F> plan;
  plan.decomp = std::move(decomp);
  plan.inner_x = inner_x;
  plan.inner_y = inner_y;
  plan.group_sizes.assign(r, n / r);
  for (std::size_t t = 0; t < n % r; ++t) ++plan.group_sizes[t];
  plan.codebooks.reserve(r);
  for (std::size_t t = 0; t < r; ++t)
    plan.codebooks.push_back(
        make_padic_codebook(field, plan.group_sizes[t], inner_x, inner_y, Rng::mix(key, t)));
  return plan;
}

template <class F>
AlloyPlan<F> make_alloy_plan(const F& field, TensorDecomposition decomp, std::size_t n,
                             std::size_t inner_x, std::size_t inner_y, Rng& rng) {
  return make_alloy_plan(field, std::move(decomp), n, inner_x, inner_y, rng.next_u64());
}

template <class F>
struct WorkerTask {
  std::size_t group = 0, k = 0;
  Matrix<F> a, b;
};

namespace detail {

/// Term t's E-images split for the inner code: the A-image into inner_x row
/// bands, the B-image into inner_y column bands.
template <class F>
std::pair<std::vector<Matrix<F>>, std::vector<Matrix<F>>> term_image_blocks(
    const AlloyPlan<F>& plan, const BlockGrid<F>& a_grid, const BlockGrid<F>& b_grid,
    std::size_t t) {
  const auto& term = plan.decomp.terms[t];
  const Matrix<F> a_img = apply_comb(term.ea, a_grid);
  const Matrix<F> b_img = apply_comb(term.eb, b_grid);
  if (a_img.rows() % plan.inner_x != 0 || b_img.cols() % plan.inner_y != 0)
    throw std::invalid_argument("alloy: inner partition does not divide the term images");
  return {row_bands(a_img, plan.inner_x), col_bands(b_img, plan.inner_y)};
}

}  // namespace detail

/// Coded inputs for every worker (t, k): the inner combination of the term
/// images, so each worker performs one small multiplication.
template <class F>
std::vector<WorkerTask<F>> encode_tasks(const AlloyPlan<F>& plan, const Matrix<F>& a,
                                        const Matrix<F>& b) {
  const auto a_grid = split_grid(a, plan.decomp.a_rows, plan.decomp.a_cols);
  const auto b_grid = split_grid(b, plan.decomp.b_rows, plan.decomp.b_cols);
  std::vector<WorkerTask<F>> tasks;
  tasks.reserve(plan.total_workers());
  for (std::size_t t = 0; t < plan.groups(); ++t) {
    const auto [a_blocks, b_blocks] = detail::term_image_blocks(plan, a_grid, b_grid, t);
    for (std::size_t k = 0; k < plan.group_sizes[t]; ++k) {
      auto [at, bt] = encode_worker(plan.codebooks[t], a_blocks, b_blocks, k);
      tasks.push_back(WorkerTask<F>{t, k, std::move(at), std::move(bt)});
    }
  }
  return tasks;
}

template <class F>
struct AlloyRun {
  std::optional<Matrix<F>> product;        // nullopt on Failure
  std::vector<std::size_t> failed_groups;  // groups that never reached full rank
  std::vector<std::size_t> workers_used;   // arrivals consumed per group
  double sim_time = 0.0;                   // completion time of the last needed arrival
  std::size_t arrivals_total = 0;          // arrivals consumed across groups
};

/// Runs the protocol against explicit per-group channel outcomes: arrivals
/// are merged by completion time; each group decodes independently the
/// moment its received rows reach rank x'·y'; the term products are then
/// recombined through the D maps.
template <class F>
AlloyRun<F> run_alloy_with(const AlloyPlan<F>& plan, const Matrix<F>& a, const Matrix<F>& b,
                           const std::vector<RoundOutcome>& per_group) {
  if (per_group.size() != plan.groups())
    throw std::invalid_argument("run_alloy_with: one RoundOutcome per group required");
  const F& f = a.field();
  const auto a_grid = split_grid(a, plan.decomp.a_rows, plan.decomp.a_cols);
  const auto b_grid = split_grid(b, plan.decomp.b_rows, plan.decomp.b_cols);

  struct Arrival {
    double time;
    std::size_t group, k;
  };
  std::vector<Arrival> arrivals;
  for (std::size_t t = 0; t < plan.groups(); ++t)
    for (std::size_t k : per_group[t].arrival_order)
      arrivals.push_back(Arrival{per_group[t].times[k], t, k});
  std::sort(arrivals.begin(), arrivals.end(), [](const Arrival& l, const Arrival& r) {
    if (l.time != r.time) return l.time < r.time;
    if (l.group != r.group) return l.group < r.group;
    return l.k < r.k;
  });

  std::vector<PadicDecoder<F>> decoders;
  decoders.reserve(plan.groups());
  for (std::size_t t = 0; t < plan.groups(); ++t) decoders.emplace_back(plan.codebooks[t]);

  // Per-group encoded blocks, built lazily on first arrival from the group.
  std::vector<std::optional<std::pair<std::vector<Matrix<F>>, std::vector<Matrix<F>>>>> images(
      plan.groups());

  AlloyRun<F> run;
  run.workers_used.assign(plan.groups(), 0);
  std::size_t groups_ready = 0;
  for (const auto& arr : arrivals) {
    auto& dec = decoders[arr.group];
    if (dec.ready()) continue;
    if (!images[arr.group])
      images[arr.group] = detail::term_image_blocks(plan, a_grid, b_grid, arr.group);
    auto [at, bt] =
        encode_worker(plan.codebooks[arr.group], images[arr.group]->first,
                      images[arr.group]->second, arr.k);
    dec.add(arr.k, multiply(at, bt));
    ++run.workers_used[arr.group];
    ++run.arrivals_total;
    if (dec.ready()) {
      run.sim_time = arr.time;
      if (++groups_ready == plan.groups()) break;
    }
  }

  for (std::size_t t = 0; t < plan.groups(); ++t)
    if (!decoders[t].ready()) run.failed_groups.push_back(t);
  if (!run.failed_groups.empty()) return run;

  // Recombine: C super-block <- Σ_t d_t · (term t's product).
  BlockGrid<F> out;
  out.grid_rows = plan.decomp.c_rows();
  out.grid_cols = plan.decomp.c_cols();
  const std::size_t cr = a_grid.block_rows();
  const std::size_t cc = b_grid.block_cols();
  out.blocks.assign(out.grid_rows * out.grid_cols, Matrix<F>(f, cr, cc));
  for (std::size_t t = 0; t < plan.groups(); ++t) {
    const Matrix<F> term_prod =
        assemble_products(decoders[t].product_blocks(), plan.inner_x, plan.inner_y);
    for (const auto& [idx, w] : plan.decomp.terms[t].d.weights)
      add_scaled(out.blocks[idx], f.from_int(w), term_prod);
  }
  run.product = assemble(out);
  return run;
}

/// Simulates the channel (group t's workers keyed mix(key, t)) and runs the
/// protocol.
template <class F>
AlloyRun<F> run_alloy_keyed(const AlloyPlan<F>& plan, const Matrix<F>& a, const Matrix<F>& b,
                            const ChannelConfig& channel, std::uint64_t key) {
  std::vector<RoundOutcome> outcomes;
  outcomes.reserve(plan.groups());
  for (std::size_t t = 0; t < plan.groups(); ++t)
    outcomes.push_back(simulate_round_keyed(plan.group_sizes[t], channel, Rng::mix(key, t)));
  return run_alloy_with(plan, a, b, outcomes);
}

template <class F>
AlloyRun<F> run_alloy(const AlloyPlan<F>& plan, const Matrix<F>& a, const Matrix<F>& b,
                      const ChannelConfig& channel, Rng& rng) {
  return run_alloy_keyed(plan, a, b, channel, rng.next_u64());
}

/// Worker-count checkpoint for a (x, y, z) shape: the alloy's typical
/// worker budget r·(x/2)·(y/2) under the Strassen decomposition next to
/// EP's deterministic threshold z·x·y+z-1. (4,4,2) gives (28, 33).
inline std::pair<std::size_t, std::size_t> ep_comparison_point(std::size_t x, std::size_t y,
                                                               std::size_t z) {
  std::size_t alloy_rows;
  if (x % 2 == 0 && y % 2 == 0 && z % 2 == 0)
    alloy_rows = strassen().rank() * (x / 2) * (y / 2);
  else
    alloy_rows = x * y * z;  // trivial decomposition, inner (1,1)
  return {alloy_rows, ep_threshold(x, y, z)};
}

}  // namespace alloysim
