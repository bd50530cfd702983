#include "alloysim/channel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "alloysim/alloy.hpp"
#include "alloysim/ep.hpp"
#include "alloysim/padic.hpp"
#include "alloysim/parallel.hpp"

namespace alloysim {

RoundOutcome simulate_round_keyed(std::size_t n, const ChannelConfig& cfg, std::uint64_t key) {
  if (cfg.p_f < 0.0 || cfg.p_f > 1.0) throw std::invalid_argument("channel: p_f out of [0,1]");
  if (cfg.latency_rate <= 0.0 || cfg.latency_shift < 0.0)
    throw std::invalid_argument("channel: bad latency model");
  RoundOutcome out;
  out.erased.resize(n);
  out.times.assign(n, std::numeric_limits<double>::infinity());
  for (std::size_t w = 0; w < n; ++w) {
    Rng rng = Rng::substream(key, w);
    out.erased[w] = rng.bernoulli(cfg.p_f);
    if (!out.erased[w]) {
      out.times[w] = cfg.latency_shift + rng.exponential(cfg.latency_rate);
      out.arrival_order.push_back(w);
    }
  }
  std::sort(out.arrival_order.begin(), out.arrival_order.end(),
            [&](std::size_t a, std::size_t b) {
              if (out.times[a] != out.times[b]) return out.times[a] < out.times[b];
              return a < b;
            });
  return out;
}

RoundOutcome simulate_round(std::size_t n, const ChannelConfig& cfg, Rng& rng) {
  return simulate_round_keyed(n, cfg, Rng::mix(rng.next_u64(), 0));
}

double rate(std::size_t x, std::size_t y, std::size_t n) {
  if (n == 0) throw std::invalid_argument("rate: n must be positive");
  return static_cast<double>(x * y) / static_cast<double>(n);
}

double capacity(double p_f) {
  if (p_f < 0.0 || p_f > 1.0) throw std::invalid_argument("capacity: p_f out of [0,1]");
  return 1.0 - p_f;
}

namespace {

// Uniform view of every scheme for the rank-level simulation: EP is
// deterministic (any `threshold` survivors decode); the random schemes are
// a list of groups, each needing its received G_C rows to reach rank
// inner_x·inner_y. The global code is the one-group case.
struct Resolved {
  bool is_ep = false;
  std::size_t ep_threshold_rows = 0;
  std::size_t groups = 1;
  std::size_t inner_x = 1, inner_y = 1;
};

Resolved resolve(const SchemeSpec& scheme, const BlockPartition& shape) {
  Resolved r;
  switch (scheme.kind) {
    case SchemeKind::Ep:
      r.is_ep = true;
      r.ep_threshold_rows = ep_threshold(shape.x, shape.y, shape.z);
      return r;
    case SchemeKind::GlobalPadic:
      r.groups = 1;
      r.inner_x = scheme.inner_x ? scheme.inner_x : shape.x;
      r.inner_y = scheme.inner_y ? scheme.inner_y : shape.y;
      return r;
    case SchemeKind::AlloyStrassen:
      if (shape.x % 2 || shape.y % 2 || shape.z % 2)
        throw std::invalid_argument("alloy-strassen: needs even x, y, z");
      r.groups = 7;
      r.inner_x = scheme.inner_x ? scheme.inner_x : shape.x / 2;
      r.inner_y = scheme.inner_y ? scheme.inner_y : shape.y / 2;
      return r;
    case SchemeKind::AlloyTrivial:
      r.groups = shape.x * shape.y * shape.z;
      r.inner_x = scheme.inner_x ? scheme.inner_x : 1;
      r.inner_y = scheme.inner_y ? scheme.inner_y : 1;
      return r;
    case SchemeKind::AlloyCustom:
      if (!scheme.custom) throw std::invalid_argument("alloy-custom: decomposition required");
      r.groups = scheme.custom->rank();
      r.inner_x = scheme.inner_x ? scheme.inner_x : 1;
      r.inner_y = scheme.inner_y ? scheme.inner_y : 1;
      return r;
  }
  throw std::logic_error("resolve: unknown scheme");
}

std::vector<std::size_t> split_workers(std::size_t n, std::size_t groups) {
  std::vector<std::size_t> sizes(groups, n / groups);
  for (std::size_t t = 0; t < n % groups; ++t) ++sizes[t];
  return sizes;
}

constexpr std::uint64_t kCodebookSalt = 0x636f6465626f6f6bULL;  // "codebook"
constexpr std::uint64_t kChannelSalt = 0x6368616e6e656c00ULL;   // "channel"

// Success of one simulated round at n workers. Rows are generated lazily
// from per-(group, worker) substreams, so the first n workers of a larger
// round are bit-identical: per-trial success is monotone in n.
template <class F>
bool trial_success(const F& field, const Resolved& rs, std::size_t n, const ChannelConfig& cfg,
                   std::uint64_t trial_key) {
  const std::uint64_t cb_key = Rng::mix(trial_key, kCodebookSalt);
  const std::uint64_t ch_key = Rng::mix(trial_key, kChannelSalt);
  if (rs.is_ep) {
    const auto round = simulate_round_keyed(n, cfg, Rng::mix(ch_key, 0));
    return round.arrival_order.size() >= rs.ep_threshold_rows;
  }
  const auto sizes = split_workers(n, rs.groups);
  const std::size_t need = rs.inner_x * rs.inner_y;
  std::vector<typename F::Elem> ga_row, gb_row, gc_row(need);
  for (std::size_t t = 0; t < rs.groups; ++t) {
    if (sizes[t] < need) return false;
    const auto round = simulate_round_keyed(sizes[t], cfg, Rng::mix(ch_key, t));
    if (round.arrival_order.size() < need) return false;
    RankTracker<F> tracker(field, need);
    const std::uint64_t group_key = Rng::mix(cb_key, t);
    for (std::size_t k : round.arrival_order) {
      padic_row_coefficients(field, group_key, k, rs.inner_x, rs.inner_y, ga_row, gb_row);
      for (std::size_t i = 0; i < rs.inner_x; ++i)
        for (std::size_t j = 0; j < rs.inner_y; ++j)
          gc_row[i * rs.inner_y + j] = field.mul(ga_row[i], gb_row[j]);
      tracker.add(gc_row);
      if (tracker.rank() == need) break;
    }
    if (tracker.rank() < need) return false;
  }
  return true;
}

template <class F>
double failure_rate(const F& field, const Resolved& rs, std::size_t n, const ChannelConfig& cfg,
                    std::size_t trials, std::uint64_t seed, unsigned threads) {
  std::atomic<std::size_t> failures{0};
  parallel_for(trials, threads, [&](std::size_t t) {
    if (!trial_success(field, rs, n, cfg, Rng::mix(seed, t))) failures.fetch_add(1);
  });
  return static_cast<double>(failures.load()) / static_cast<double>(trials);
}

template <class F>
ThresholdEstimate estimate_threshold_impl(const F& field, const SchemeSpec& scheme,
                                          const BlockPartition& shape, const ChannelConfig& cfg,
                                          double eps, std::size_t trials, std::uint64_t seed,
                                          unsigned threads) {
  if (eps <= 0.0 || eps >= 1.0) throw std::invalid_argument("estimate_threshold: eps in (0,1)");
  if (trials < 1) throw std::invalid_argument("estimate_threshold: trials");
  const Resolved rs = resolve(scheme, shape);
  const std::size_t min_rows = rs.is_ep ? rs.ep_threshold_rows : rs.groups * rs.inner_x * rs.inner_y;
  const std::size_t cap = 64 * min_rows;

  std::map<std::size_t, double> cache;
  const auto failure = [&](std::size_t n) {
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    const double f = failure_rate(field, rs, n, cfg, trials, seed, threads);
    cache.emplace(n, f);
    return f;
  };

  ThresholdEstimate est;
  est.trials = trials;

  std::size_t lo = min_rows;  // invariant: failure(lo) > eps (after the first branch)
  if (failure(min_rows) <= eps) {
    est.found = true;
    est.threshold = min_rows;
    est.failure_at = failure(min_rows);
    est.failure_below = 1.0;  // below the minimum rows decoding is impossible
  } else {
    std::size_t hi = min_rows;
    bool found = false;
    while (hi < cap) {
      hi = std::min(cap, hi * 2);
      if (failure(hi) <= eps) {
        found = true;
        break;
      }
      lo = hi;
    }
    if (!found) return est;  // cap exceeded: NotFound
    while (hi - lo > 1) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (failure(mid) <= eps)
        hi = mid;
      else
        lo = mid;
    }
    est.found = true;
    est.threshold = hi;
    est.failure_at = failure(hi);
    est.failure_below = failure(hi - 1);
  }
  const double p = est.failure_at;
  est.ci95 = 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  return est;
}

template <class F>
CompletionTrial simulate_completion_impl(const F& field, const SchemeSpec& scheme,
                                         const BlockPartition& shape, std::size_t n,
                                         const ChannelConfig& cfg, std::uint64_t trial_key) {
  const Resolved rs = resolve(scheme, shape);
  const std::uint64_t cb_key = Rng::mix(trial_key, kCodebookSalt);
  const std::uint64_t ch_key = Rng::mix(trial_key, kChannelSalt);
  CompletionTrial out;

  if (rs.is_ep) {
    const auto round = simulate_round_keyed(n, cfg, Rng::mix(ch_key, 0));
    if (round.arrival_order.size() < rs.ep_threshold_rows) return out;
    out.success = true;
    out.workers_used = rs.ep_threshold_rows;
    out.sim_time = round.times[round.arrival_order[rs.ep_threshold_rows - 1]];
    return out;
  }

  const auto sizes = split_workers(n, rs.groups);
  const std::size_t need = rs.inner_x * rs.inner_y;
  struct Arrival {
    double time;
    std::size_t group, k;
  };
  std::vector<Arrival> arrivals;
  for (std::size_t t = 0; t < rs.groups; ++t) {
    const auto round = simulate_round_keyed(sizes[t], cfg, Rng::mix(ch_key, t));
    for (std::size_t k : round.arrival_order) arrivals.push_back(Arrival{round.times[k], t, k});
  }
  std::sort(arrivals.begin(), arrivals.end(), [](const Arrival& l, const Arrival& r) {
    if (l.time != r.time) return l.time < r.time;
    if (l.group != r.group) return l.group < r.group;
    return l.k < r.k;
  });

  std::vector<RankTracker<F>> trackers;
  trackers.reserve(rs.groups);
  for (std::size_t t = 0; t < rs.groups; ++t) trackers.emplace_back(field, need);
  std::vector<typename F::Elem> ga_row, gb_row, gc_row(need);
  std::size_t ready = 0;
  for (const auto& arr : arrivals) {
    auto& tracker = trackers[arr.group];
    if (tracker.rank() == need) continue;
    padic_row_coefficients(field, Rng::mix(cb_key, arr.group), arr.k, rs.inner_x, rs.inner_y,
                           ga_row, gb_row);
    for (std::size_t i = 0; i < rs.inner_x; ++i)
      for (std::size_t j = 0; j < rs.inner_y; ++j)
        gc_row[i * rs.inner_y + j] = field.mul(ga_row[i], gb_row[j]);
    tracker.add(gc_row);
    ++out.workers_used;
    if (tracker.rank() == need && ++ready == rs.groups) {
      out.success = true;
      out.sim_time = arr.time;
      return out;
    }
  }
  return out;
}

}  // namespace

std::size_t scheme_min_rows(const SchemeSpec& scheme, const BlockPartition& shape) {
  const Resolved rs = resolve(scheme, shape);
  return rs.is_ep ? rs.ep_threshold_rows : rs.groups * rs.inner_x * rs.inner_y;
}

ThresholdEstimate estimate_threshold(const ScalarMode& mode, const SchemeSpec& scheme,
                                     const BlockPartition& shape, const ChannelConfig& channel,
                                     double eps, std::size_t trials, std::uint64_t seed,
                                     unsigned threads) {
  return std::visit(
      [&](const auto& field) {
        return estimate_threshold_impl(field, scheme, shape, channel, eps, trials, seed, threads);
      },
      mode);
}

CompletionTrial simulate_completion(const ScalarMode& mode, const SchemeSpec& scheme,
                                    const BlockPartition& shape, std::size_t n,
                                    const ChannelConfig& channel, std::uint64_t trial_key) {
  return std::visit(
      [&](const auto& field) {
        return simulate_completion_impl(field, scheme, shape, n, channel, trial_key);
      },
      mode);
}

std::vector<SweepRow> achievability_sweep(const ScalarMode& mode, double p_f, double rate_fraction,
                                          const std::vector<std::size_t>& sizes,
                                          std::size_t trials, std::uint64_t seed,
                                          unsigned threads) {
  if (rate_fraction <= 0.0) throw std::invalid_argument("achievability_sweep: rate_fraction");
  if (p_f < 0.0 || p_f >= 1.0) throw std::invalid_argument("achievability_sweep: p_f in [0,1)");
  ChannelConfig cfg;
  cfg.p_f = p_f;
  std::vector<SweepRow> rows;
  rows.reserve(sizes.size());
  for (const std::size_t size : sizes) {
    const auto side = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(size))));
    if (side * side != size)
      throw std::invalid_argument("achievability_sweep: sizes must be perfect squares");
    const double target_rate = rate_fraction * capacity(p_f);
    const auto n = static_cast<std::size_t>(std::ceil(static_cast<double>(size) / target_rate));
    BlockPartition shape;
    shape.x = side;
    shape.y = side;
    SchemeSpec scheme;
    scheme.kind = SchemeKind::GlobalPadic;
    const double failure = std::visit(
        [&](const auto& field) {
          return failure_rate(field, resolve(scheme, shape), n, cfg, trials, seed, threads);
        },
        mode);
    rows.push_back(SweepRow{size, n, failure});
  }
  return rows;
}

}  // namespace alloysim
