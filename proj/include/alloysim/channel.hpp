#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "alloysim/field.hpp"
#include "alloysim/partition.hpp"
#include "alloysim/rng.hpp"
#include "alloysim/tensor.hpp"

namespace alloysim {

/// I.i.d. erasure channel: each worker independently faults with
/// probability p_f; survivors complete after a shifted-exponential latency,
/// which fixes the arrival order. Faults are erasures only — an erased
/// worker never returns.
struct ChannelConfig {
  double p_f = 0.0;
  double latency_shift = 1.0;
  double latency_rate = 1.0;
};

struct RoundOutcome {
  std::vector<bool> erased;                 // per worker
  std::vector<double> times;                // completion time; +inf for erased
  std::vector<std::size_t> arrival_order;   // non-erased workers by time
};

/// Worker w draws from substream(key, w): one uniform for the fault, then
/// one exponential for latency. Extending n keeps earlier workers'
/// outcomes bit-identical.
RoundOutcome simulate_round_keyed(std::size_t n, const ChannelConfig& cfg, std::uint64_t key);

RoundOutcome simulate_round(std::size_t n, const ChannelConfig& cfg, Rng& rng);

/// Computational rate x·y/n and channel capacity 1-p_f in the normalized
/// units where one unit is log(|Y|-1).
double rate(std::size_t x, std::size_t y, std::size_t n);
double capacity(double p_f);

enum class SchemeKind { GlobalPadic, AlloyStrassen, AlloyTrivial, AlloyCustom, Ep };

struct SchemeSpec {
  SchemeKind kind = SchemeKind::GlobalPadic;
  std::size_t inner_x = 0, inner_y = 0;  // 0 = scheme default
  std::optional<TensorDecomposition> custom;
};

/// Fewest worker results that can possibly decode: x·y for the global
/// code, r·x'·y' for an alloy, z·x·y+z-1 for EP.
std::size_t scheme_min_rows(const SchemeSpec& scheme, const BlockPartition& shape);

struct ThresholdEstimate {
  bool found = false;
  std::size_t threshold = 0;
  double failure_at = 1.0;     // empirical failure at `threshold`
  double failure_below = 1.0;  // empirical failure at `threshold`-1 (1.0 if below min rows)
  double ci95 = 0.0;           // half-width of the 95% CI on failure_at
  std::size_t trials = 0;
};

/// Typical recovery threshold: smallest n whose failure probability is
/// <= eps, estimated with `trials` fresh codebook+channel rounds per
/// candidate n. Per-(group,worker) substreams make each trial's success
/// monotone in n, so the bisection is exact. Search caps at 64x the
/// scheme's minimum rows; a cap miss reports found = false.
ThresholdEstimate estimate_threshold(const ScalarMode& mode, const SchemeSpec& scheme,
                                     const BlockPartition& shape, const ChannelConfig& channel,
                                     double eps, std::size_t trials, std::uint64_t seed,
                                     unsigned threads = 0);

/// One simulated round at fixed n: arrivals are consumed in time order
/// until the scheme can decode. Code/channel layer only; no payload data.
struct CompletionTrial {
  bool success = false;
  std::size_t workers_used = 0;  // arrivals consumed (including unhelpful rows)
  double sim_time = 0.0;         // completion time of the decoding arrival
};

CompletionTrial simulate_completion(const ScalarMode& mode, const SchemeSpec& scheme,
                                    const BlockPartition& shape, std::size_t n,
                                    const ChannelConfig& channel, std::uint64_t trial_key);

struct SweepRow {
  std::size_t size = 0;  // x·y
  std::size_t n = 0;
  double failure = 0.0;
};

/// Lemma-2 style achievability probe: for each x·y, run the global code
/// with n = ceil(xy / (rate_fraction·(1-p_f))) workers and measure the
/// probability that the surviving rows do not reach rank x·y. Sizes must
/// be perfect squares (x = y = sqrt(size)). Paired seeds across sizes.
std::vector<SweepRow> achievability_sweep(const ScalarMode& mode, double p_f,
                                          double rate_fraction,
                                          const std::vector<std::size_t>& sizes,
                                          std::size_t trials, std::uint64_t seed,
                                          unsigned threads = 0);

}  // namespace alloysim
