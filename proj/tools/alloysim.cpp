// Command-line front end: desk-scale experiments for the coded
// distributed matrix multiplication simulator. Subcommands:
//   threshold  - Monte Carlo estimate of the typical recovery threshold
//   compare    - per-trial completion simulation across schemes
//   stability  - real-arithmetic decode error comparison (CSV of log10 err)
//   sweep      - achievability probe at a fraction of channel capacity
//   verify     - internal invariant suite (exit 1 on any failure)
// Exit codes: 0 ok, 1 invariant failure, 2 invalid configuration.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "alloysim/alloy.hpp"
#include "alloysim/channel.hpp"
#include "alloysim/csv.hpp"
#include "alloysim/ep.hpp"
#include "alloysim/matrix.hpp"
#include "alloysim/padic.hpp"
#include "alloysim/parallel.hpp"
#include "alloysim/partition.hpp"
#include "alloysim/tensor.hpp"

namespace {

using namespace alloysim;

struct Config {
  std::string scheme = "global-padic";
  std::string schemes = "alloy-strassen,ep";  // compare
  std::size_t x = 2, y = 2, z = 1;
  std::size_t P = 4, S = 4, Q = 4;
  std::uint64_t q = 101;  // 0 selects real arithmetic
  double pf = 0.0;
  double eps = 0.05;
  std::size_t trials = 1000;
  std::uint64_t seed = 12345;
  long long workers = -1;  // -1 = auto: typical threshold + delta
  std::size_t delta = 7;
  std::size_t inner_x = 0, inner_y = 0;  // 0 = scheme default
  std::string decomp_path;
  double rate_fraction = 0.9;
  std::string sizes = "16,64,256";
  double latency_shift = 1.0;
  double latency_rate = 1.0;
  unsigned threads = 0;
  std::string out;  // empty = stdout
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) parts.push_back(item);
  return parts;
}

ScalarMode mode_of(const Config& cfg) {
  if (cfg.q == 0) return real_mode();
  return finite_mode(cfg.q);
}

BlockPartition shape_of(const Config& cfg) {
  BlockPartition p;
  p.x = cfg.x;
  p.y = cfg.y;
  p.z = cfg.z;
  p.P = cfg.P;
  p.S = cfg.S;
  p.Q = cfg.Q;
  if (p.x < 1 || p.y < 1 || p.z < 1 || p.P < 1 || p.S < 1 || p.Q < 1)
    throw std::invalid_argument("shape parameters must be positive");
  return p;
}

ChannelConfig channel_of(const Config& cfg) {
  ChannelConfig ch;
  ch.p_f = cfg.pf;
  ch.latency_shift = cfg.latency_shift;
  ch.latency_rate = cfg.latency_rate;
  if (ch.p_f < 0.0 || ch.p_f > 1.0) throw std::invalid_argument("--pf must be in [0,1]");
  return ch;
}

SchemeSpec scheme_of(const Config& cfg, const std::string& name) {
  SchemeSpec s;
  s.inner_x = cfg.inner_x;
  s.inner_y = cfg.inner_y;
  if (name == "global-padic") {
    s.kind = SchemeKind::GlobalPadic;
  } else if (name == "alloy-strassen") {
    s.kind = SchemeKind::AlloyStrassen;
  } else if (name == "alloy-trivial") {
    s.kind = SchemeKind::AlloyTrivial;
  } else if (name == "alloy-custom") {
    s.kind = SchemeKind::AlloyCustom;
    if (cfg.decomp_path.empty())
      throw std::invalid_argument("alloy-custom requires --decomp <file.json>");
    s.custom = load_decomposition(cfg.decomp_path);
  } else if (name == "ep") {
    s.kind = SchemeKind::Ep;
  } else {
    throw std::invalid_argument("unknown scheme: " + name);
  }
  return s;
}

nlohmann::json config_json(const Config& cfg, const std::string& command) {
  nlohmann::json j;
  j["command"] = command;
  j["scheme"] = cfg.scheme;
  j["schemes"] = cfg.schemes;
  j["x"] = cfg.x;
  j["y"] = cfg.y;
  j["z"] = cfg.z;
  j["P"] = cfg.P;
  j["S"] = cfg.S;
  j["Q"] = cfg.Q;
  j["q"] = cfg.q;
  j["pf"] = cfg.pf;
  j["eps"] = cfg.eps;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["workers"] = cfg.workers;
  j["delta"] = cfg.delta;
  j["inner_x"] = cfg.inner_x;
  j["inner_y"] = cfg.inner_y;
  j["decomp"] = cfg.decomp_path;
  j["rate_fraction"] = cfg.rate_fraction;
  j["sizes"] = cfg.sizes;
  j["latency_shift"] = cfg.latency_shift;
  j["latency_rate"] = cfg.latency_rate;
  return j;
}

void load_config_file(Config& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("bad config JSON: ") + e.what());
  }
  const auto get = [&](const char* key, auto& slot) {
    if (j.contains(key)) slot = j.at(key).get<std::decay_t<decltype(slot)>>();
  };
  get("scheme", cfg.scheme);
  get("schemes", cfg.schemes);
  get("x", cfg.x);
  get("y", cfg.y);
  get("z", cfg.z);
  get("P", cfg.P);
  get("S", cfg.S);
  get("Q", cfg.Q);
  get("q", cfg.q);
  get("pf", cfg.pf);
  get("eps", cfg.eps);
  get("trials", cfg.trials);
  get("seed", cfg.seed);
  get("workers", cfg.workers);
  get("delta", cfg.delta);
  get("inner_x", cfg.inner_x);
  get("inner_y", cfg.inner_y);
  get("decomp", cfg.decomp_path);
  get("rate_fraction", cfg.rate_fraction);
  get("sizes", cfg.sizes);
  get("latency_shift", cfg.latency_shift);
  get("latency_rate", cfg.latency_rate);
  get("threads", cfg.threads);
  get("out", cfg.out);
}

void emit(const Config& cfg, const CsvWriter& csv) {
  if (cfg.out.empty())
    std::cout << csv.text();
  else
    csv.write_file(cfg.out);
}

double median(std::vector<double> v) {
  if (v.empty()) return -1.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// ---------------------------------------------------------------- threshold

int cmd_threshold(const Config& cfg) {
  const auto mode = mode_of(cfg);
  const auto shape = shape_of(cfg);
  const auto scheme = scheme_of(cfg, cfg.scheme);
  const auto est = estimate_threshold(mode, scheme, shape, channel_of(cfg), cfg.eps, cfg.trials,
                                      cfg.seed, cfg.threads);
  CsvWriter csv;
  csv.comment("alloysim threshold");
  csv.comment("config: " + config_json(cfg, "threshold").dump());
  csv.field("scheme").field("x").field("y").field("z").field("q").field("p_f").field("epsilon").field("trials").field("threshold").field("ci95").field("seed");
  csv.end_row();
  csv.field(cfg.scheme).field(cfg.x).field(cfg.y).field(cfg.z).field(cfg.q).field(cfg.pf).field(cfg.eps).field(cfg.trials);
  csv.field(est.found ? static_cast<long long>(est.threshold) : -1LL);
  csv.field(est.ci95).field(cfg.seed);
  csv.end_row();
  emit(cfg, csv);
  return 0;
}

// ------------------------------------------------------------------ compare

int cmd_compare(const Config& cfg) {
  const auto names = split_list(cfg.schemes);
  if (names.size() < 2) throw std::invalid_argument("compare needs at least two schemes");
  const auto mode = mode_of(cfg);
  const auto shape = shape_of(cfg);
  const auto ch = channel_of(cfg);

  CsvWriter csv;
  csv.comment("alloysim compare");
  csv.comment("config: " + config_json(cfg, "compare").dump());
  csv.field("scheme").field("n").field("trial").field("success").field("workers_used").field("sim_time");
  csv.end_row();

  for (const auto& name : names) {
    const auto scheme = scheme_of(cfg, name);
    std::size_t n;
    if (cfg.workers >= 0) {
      n = static_cast<std::size_t>(cfg.workers);
    } else {
      const auto est = estimate_threshold(mode, scheme, shape, ch, cfg.eps, cfg.trials, cfg.seed,
                                          cfg.threads);
      if (!est.found)
        throw std::invalid_argument("compare: threshold search failed for " + name +
                                    "; pass --workers explicitly");
      n = est.threshold + cfg.delta;
    }
    std::vector<CompletionTrial> results(cfg.trials);
    parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
      results[t] = simulate_completion(mode, scheme, shape, n, ch, Rng::mix(cfg.seed, t));
    });
    std::vector<double> times, used;
    std::size_t successes = 0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const auto& r = results[t];
      csv.field(name).field(n).field(static_cast<long long>(t)).field(r.success);
      csv.field(r.workers_used).field(r.success ? r.sim_time : -1.0);
      csv.end_row();
      if (r.success) {
        ++successes;
        times.push_back(r.sim_time);
        used.push_back(static_cast<double>(r.workers_used));
      }
    }
    // summary row: trial = -1, success = success rate, medians over successes
    csv.field(name).field(n).field(-1LL);
    csv.field(static_cast<double>(successes) / static_cast<double>(cfg.trials));
    csv.field(median(used)).field(median(times));
    csv.end_row();
  }
  emit(cfg, csv);
  return 0;
}

// ---------------------------------------------------------------- stability

double stability_trial(const std::string& scheme, const BlockPartition& p,
                       std::uint64_t trial_key) {
  const RealField f;
  // z = 1: A is xP × S, B is S × yQ; both schemes decode the same payload.
  Matrix<RealField> a(f, p.x * p.P, p.S);
  Matrix<RealField> b(f, p.S, p.y * p.Q);
  Rng data = Rng::substream(trial_key, 1);
  a.fill_random_uniform(data);
  b.fill_random_uniform(data);
  const Matrix<RealField> reference = multiply(a, b);

  std::optional<Matrix<RealField>> decoded;
  if (scheme == "ep") {
    const std::size_t t = ep_threshold(p.x, p.y, 1);
    const auto code = make_ep_code(f, p.x, p.y, 1, t);
    const auto ag = split_grid(a, p.x, 1);
    const auto bg = split_grid(b, 1, p.y);
    std::vector<std::pair<std::size_t, Matrix<RealField>>> returned;
    for (std::size_t k = 0; k < t; ++k) {
      auto [at, bt] = ep_encode(code, ag, bg, k);
      returned.emplace_back(k, multiply(at, bt));
    }
    decoded = ep_decode(code, returned).product;
  } else {  // global-padic random real code, decode from exactly x·y rows
    const std::size_t t = p.x * p.y;
    const auto cb = make_padic_codebook(f, t, p.x, p.y, Rng::mix(trial_key, 2));
    const auto a_bands = row_bands(a, p.x);
    const auto b_bands = col_bands(b, p.y);
    PadicDecoder<RealField> dec(cb);
    for (std::size_t k = 0; k < t; ++k) {
      auto [at, bt] = encode_worker(cb, a_bands, b_bands, k);
      dec.add(k, multiply(at, bt));
    }
    if (dec.ready()) decoded = dec.assemble_product();
  }
  if (!decoded) return 999.0;  // singular draw: report as unusable
  const double err = relative_error(*decoded, reference);
  return err <= 0.0 ? -324.0 : std::log10(err);
}

int cmd_stability(Config cfg, bool p_given, bool s_given, bool q_given) {
  if (cfg.q != 0)
    throw std::invalid_argument("stability runs in real arithmetic; pass --q 0");
  if (cfg.z != 1) throw std::invalid_argument("stability covers 2-D codes; use --z 1");
  // Desk-scale defaults: blocks of 100 give 600x200 at (6,2), 400x300 at (4,3).
  if (!p_given) cfg.P = 100;
  if (!s_given) cfg.S = 100;
  if (!q_given) cfg.Q = 100;
  const auto shape = shape_of(cfg);

  CsvWriter csv;
  csv.comment("alloysim stability");
  csv.comment("config: " + config_json(cfg, "stability").dump());
  csv.field("scheme").field("x").field("y").field("trial").field("log10_rel_err");
  csv.end_row();
  for (const std::string scheme : {"global-padic", "ep"}) {
    std::vector<double> errs(cfg.trials);
    parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
      errs[t] = stability_trial(scheme, shape, Rng::mix(cfg.seed, t));
    });
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      csv.field(scheme).field(cfg.x).field(cfg.y).field(static_cast<long long>(t)).field(errs[t]);
      csv.end_row();
    }
  }
  emit(cfg, csv);
  return 0;
}

// -------------------------------------------------------------------- sweep

int cmd_sweep(const Config& cfg) {
  std::vector<std::size_t> sizes;
  for (const auto& s : split_list(cfg.sizes)) sizes.push_back(std::stoul(s));
  if (sizes.empty()) throw std::invalid_argument("sweep: no sizes given");
  const auto rows = achievability_sweep(mode_of(cfg), cfg.pf, cfg.rate_fraction, sizes,
                                        cfg.trials, cfg.seed, cfg.threads);
  CsvWriter csv;
  csv.comment("alloysim sweep");
  csv.comment("config: " + config_json(cfg, "sweep").dump());
  csv.field("size").field("n").field("failure");
  csv.end_row();
  for (const auto& r : rows) {
    csv.field(r.size).field(r.n).field(r.failure);
    csv.end_row();
  }
  emit(cfg, csv);
  return 0;
}

// ------------------------------------------------------------------- verify

struct Check {
  std::string name;
  bool pass;
  std::string detail;
};

// Exact invertibility probability of the 4-row star-product codebook over
// F_2 by enumerating the ten possible row values of vec(a ⊗ b).
double enumerate_q2_codebook_invertibility() {
  const PrimeField f(2);
  const PadicDistribution dist(2, 2);
  const double u = dist.p_zero();
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
  std::vector<std::size_t> pick(4, 0);
  for (pick[0] = 0; pick[0] < rows.size(); ++pick[0])
    for (pick[1] = 0; pick[1] < rows.size(); ++pick[1])
      for (pick[2] = 0; pick[2] < rows.size(); ++pick[2])
        for (pick[3] = 0; pick[3] < rows.size(); ++pick[3]) {
          Matrix<PrimeField> m(f, 4, 4);
          double p = 1.0;
          for (std::size_t i = 0; i < 4; ++i) {
            p *= rows[pick[i]].p;
            for (std::size_t j = 0; j < 4; ++j) m.at(i, j) = rows[pick[i]].row[j];
          }
          if (rank(m) == 4) total += p;
        }
  return total;
}

int cmd_verify(const Config& cfg) {
  std::vector<Check> checks;
  char buf[256];

  // Closed form vs uniform-matrix sampling (the form's own oracle).
  for (const std::uint64_t q : {2ULL, 7ULL}) {
    const PrimeField f(q);
    const std::size_t trials = 100000;
    std::size_t ok = 0;
    Rng rng = Rng::substream(cfg.seed, 10, q);
    for (std::size_t t = 0; t < trials; ++t) {
      Matrix<PrimeField> m(f, 4, 4);
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) m.at(i, j) = f.sample_uniform(rng);
      if (rank(std::move(m)) == 4) ++ok;
    }
    const double observed = static_cast<double>(ok) / trials;
    const double expected = success_probability(q, 4);
    const double se = std::sqrt(expected * (1 - expected) / trials);
    std::snprintf(buf, sizeof buf, "observed %.4f expected %.4f (3se %.4f)", observed, expected,
                  3 * se);
    checks.push_back({"uniform-matrix invertibility q=" + std::to_string(q),
                      std::abs(observed - expected) <= 3 * se, buf});
  }

  // Star-product codebooks are NOT uniform-matrix distributed: compare the
  // sampled invertibility against the exact enumeration over F_2.
  {
    const PrimeField f(2);
    const double expected = enumerate_q2_codebook_invertibility();
    const std::size_t trials = 100000;
    std::size_t ok = 0;
    Rng rng = Rng::substream(cfg.seed, 11);
    for (std::size_t t = 0; t < trials; ++t) {
      const auto cb = make_padic_codebook(f, 4, 2, 2, rng.next_u64());
      if (rank(cb.gc) == 4) ++ok;
    }
    const double observed = static_cast<double>(ok) / trials;
    const double se = std::sqrt(expected * (1 - expected) / trials);
    std::snprintf(buf, sizeof buf,
                  "observed %.4f enumerated %.4f (3se %.4f); uniform-iid formula would give %.4f",
                  observed, expected, 3 * se, success_probability(2, 4));
    checks.push_back(
        {"star-product codebook invertibility q=2", std::abs(observed - expected) <= 3 * se, buf});
  }

  // l-fold products of p-adic coefficients are uniform on F_q.
  for (const std::uint64_t q : {2ULL, 5ULL, 11ULL}) {
    for (const unsigned l : {2u, 3u}) {
      Rng rng = Rng::substream(cfg.seed, 12, q * 10 + l);
      const auto rep = product_uniformity(q, l, 1000000, rng);
      std::snprintf(buf, sizeof buf, "TV %.5f (limit 0.01)", rep.tv_distance);
      checks.push_back({"product uniformity q=" + std::to_string(q) + " l=" + std::to_string(l),
                        rep.tv_distance <= 0.01, buf});
    }
  }

  // Star-product constraint on sampled codebooks.
  {
    const PrimeField f(101);
    Rng rng = Rng::substream(cfg.seed, 13);
    bool ok = true;
    for (int c = 0; c < 100 && ok; ++c) {
      const auto cb = make_padic_codebook(f, 8, 3, 2, rng.next_u64());
      for (std::size_t k = 0; k < cb.workers() && ok; ++k)
        for (std::size_t i = 0; i < cb.x() && ok; ++i)
          for (std::size_t j = 0; j < cb.y() && ok; ++j)
            ok = cb.gc.at(k, i * cb.y() + j) == f.mul(cb.ga.at(k, i), cb.gb.at(k, j));
    }
    checks.push_back({"star-product constraint", ok, ok ? "holds on 100 codebooks" : "violated"});
  }

  // Strassen identity, both arithmetic modes.
  {
    Rng rng = Rng::substream(cfg.seed, 14);
    const auto fin = verify(strassen(), PrimeField(101), 50, 8, 8, 8, rng);
    checks.push_back({"strassen identity over F_101", fin.pass, fin.pass ? "50/50 exact" : "mismatch"});
    const auto re = verify(strassen(), RealField{}, 50, 8, 8, 8, rng);
    std::snprintf(buf, sizeof buf, "max rel err %.2e (limit 1e-10)", re.max_deviation);
    checks.push_back({"strassen identity real mode", re.pass, buf});
  }

  // Mutation sentinel: a sign flip in T5 must be caught.
  {
    auto bad = strassen();
    bad.terms[4].eb.weights[0].second = -bad.terms[4].eb.weights[0].second;
    Rng rng = Rng::substream(cfg.seed, 15);
    const auto res = verify(bad, PrimeField(101), 20, 4, 4, 4, rng);
    checks.push_back({"mutation sentinel (T5 sign flip)", !res.pass,
                      !res.pass ? "corrupted term detected" : "corruption NOT detected"});
  }

  // End-to-end decode oracles against direct multiplication over F_101.
  {
    const PrimeField f(101);
    Rng rng = Rng::substream(cfg.seed, 16);
    bool global_ok = true, alloy_ok = true, ep_ok = true;
    std::size_t successes = 0;
    for (int t = 0; t < 20; ++t) {
      Matrix<PrimeField> a(f, 8, 4), b(f, 4, 8);
      a.fill_random_uniform(rng);
      b.fill_random_uniform(rng);
      const auto direct = multiply(a, b);

      const auto cb = make_padic_codebook(f, 8, 2, 2, rng.next_u64());
      const auto a_bands = row_bands(a, 2);
      const auto b_bands = col_bands(b, 2);
      std::vector<std::pair<std::size_t, Matrix<PrimeField>>> returned;
      for (std::size_t k = 0; k < cb.workers(); ++k) {
        auto [at, bt] = encode_worker(cb, a_bands, b_bands, k);
        returned.emplace_back(k, multiply(at, bt));
      }
      if (const auto got = decode(cb, returned)) {
        ++successes;
        global_ok = global_ok && (*got == direct);
      }

      const auto plan = make_alloy_plan(f, strassen(), 14, 1, 1, rng.next_u64());
      ChannelConfig ch;  // p_f = 0
      const auto run = run_alloy_keyed(plan, a, b, ch, rng.next_u64());
      if (run.product) {
        ++successes;
        alloy_ok = alloy_ok && (*run.product == direct);
      }

      const auto code = make_ep_code(f, 2, 2, 2, ep_threshold(2, 2, 2));
      BlockPartition part;
      part.x = part.y = part.z = 2;
      part.P = 4;
      part.S = 2;
      part.Q = 4;
      const auto ag = split(a, Side::A, part);
      const auto bg = split(b, Side::B, part);
      std::vector<std::pair<std::size_t, Matrix<PrimeField>>> ep_returned;
      for (std::size_t k = 0; k < code.workers(); ++k) {
        auto [at, bt] = ep_encode(code, ag, bg, k);
        ep_returned.emplace_back(k, multiply(at, bt));
      }
      if (const auto got = ep_decode(code, ep_returned).product) {
        ++successes;
        ep_ok = ep_ok && (*got == direct);
      }
    }
    std::snprintf(buf, sizeof buf, "%zu decodes, all exact", successes);
    checks.push_back({"decode oracle (global/alloy/ep)",
                      global_ok && alloy_ok && ep_ok && successes > 40, buf});
  }

  bool all = true;
  for (const auto& c : checks) {
    all = all && c.pass;
    std::printf("[%s] %-45s %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
  }
  std::printf("%s\n", all ? "verify: all checks passed" : "verify: FAILURES present");
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  Config cfg;

  // --config is applied before flag parsing so flags override the file.
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    try {
      if (arg == "--config" && i + 1 < argc)
        load_config_file(cfg, argv[i + 1]);
      else if (arg.rfind("--config=", 0) == 0)
        load_config_file(cfg, arg.substr(9));
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }

  CLI::App app{"coded distributed matrix multiplication simulator"};
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (flags override it)");
  app.add_option("--scheme", cfg.scheme, "global-padic | alloy-strassen | alloy-trivial | alloy-custom | ep");
  app.add_option("--schemes", cfg.schemes, "comma list for compare");
  app.add_option("--x", cfg.x);
  app.add_option("--y", cfg.y);
  app.add_option("--z", cfg.z);
  auto* optP = app.add_option("--P", cfg.P, "block rows");
  auto* optS = app.add_option("--S", cfg.S, "block inner size");
  auto* optQ = app.add_option("--Q", cfg.Q, "block cols");
  app.add_option("--q", cfg.q, "prime field modulus; 0 = real arithmetic");
  app.add_option("--pf", cfg.pf, "per-worker fault probability");
  app.add_option("--eps", cfg.eps, "target failure probability");
  app.add_option("--trials", cfg.trials);
  app.add_option("--seed", cfg.seed);
  app.add_option("--workers", cfg.workers, "worker count; -1 = typical threshold + delta");
  app.add_option("--delta", cfg.delta);
  app.add_option("--inner-x", cfg.inner_x, "alloy inner partition rows (0 = default)");
  app.add_option("--inner-y", cfg.inner_y, "alloy inner partition cols (0 = default)");
  app.add_option("--decomp", cfg.decomp_path, "decomposition JSON for alloy-custom");
  app.add_option("--rate-fraction", cfg.rate_fraction, "sweep rate as a fraction of capacity");
  app.add_option("--sizes", cfg.sizes, "sweep sizes (x*y), comma list of perfect squares");
  app.add_option("--latency-shift", cfg.latency_shift);
  app.add_option("--latency-rate", cfg.latency_rate);
  app.add_option("--threads", cfg.threads, "0 = hardware concurrency");
  app.add_option("--out", cfg.out, "output CSV path (default stdout)");

  auto* threshold = app.add_subcommand("threshold", "estimate the typical recovery threshold");
  auto* compare = app.add_subcommand("compare", "per-trial completion comparison");
  auto* stability = app.add_subcommand("stability", "real-mode decode error comparison");
  auto* sweep = app.add_subcommand("sweep", "achievability sweep");
  auto* verify_cmd = app.add_subcommand("verify", "run the invariant suite");
  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (threshold->parsed()) return cmd_threshold(cfg);
    if (compare->parsed()) return cmd_compare(cfg);
    if (stability->parsed())
      return cmd_stability(cfg, optP->count() > 0, optS->count() > 0, optQ->count() > 0);
    if (sweep->parsed()) return cmd_sweep(cfg);
    if (verify_cmd->parsed()) return cmd_verify(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
