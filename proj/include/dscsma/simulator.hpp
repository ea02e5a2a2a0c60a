#pragma once
// Slot-level protocol simulators. Three engines share one measurement
// contract:
//
//   * simulate_pairs    — N independent TCPairs, each a pair of counters;
//                         the direct stochastic twin of the Markov model.
//   * simulate_stations — stations with one counter per partner and a
//                         one-RTS-per-station serialization rule, plus an
//                         optional partner-refusal probability. This is the
//                         protocol as deployed on an arbitrary partner map.
//   * simulate_baseline — conventional single-counter CSMA/CA stations,
//                         the comparison curve.
//
// Time advances in epochs. An epoch with no counter at zero is an idle slot
// (tau symbols); one counter (one RTS) at zero is a successful exchange
// (t_success symbols; a refused handshake costs the abort sequence instead);
// two or more are a single channel collision event (t_collision symbols).
// Carrier sense makes every station observe the same epoch boundary, so
// counters not involved in the epoch's outcome decrement once per epoch.
//
// Counting contract: every counter that fires contributes one attempt, so an
// epoch with k >= 2 zero counters books k collided attempts but one
// collision event; collision_prob_hat is collided / attempts, the
// per-attempt collision probability the analytic fixed point predicts.
// A successful double-station exchange delivers BOTH stations' data frames
// superimposed in the same symbols, so it carries 2 * payload symbols
// (the baseline's plain success carries one payload).
//
// The warm-up prefix (5% of the horizon, capped at 1e5 epochs) is simulated
// but not measured. Runs are deterministic functions of (parameters, seed):
// every TCPair (station, in baseline mode) draws from its own RNG stream
// derived as stream_seed(seed, index), so pairs stay decorrelated and the
// schedule of draws is fixed by the model, never by thread timing.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "dscsma/core.hpp"
#include "dscsma/rng.hpp"
#include "dscsma/util.hpp"

namespace dscsma {

struct SimStats {
  long long epochs = 0;         // measured epochs (horizon minus warm-up)
  long long slots_elapsed = 0;  // idle epochs
  long long successes = 0;      // successful exchanges
  long long collisions = 0;     // channel collision events
  long long refusals = 0;       // aborted handshakes (station mode only)
  long long attempts = 0;       // RTS transmissions
  long long collided_attempts = 0;
  long long one_zero_pair_epochs = 0;  // pair-epochs with exactly one zero
  double busy_time_success = 0.0;    // successes * t_success
  double busy_time_collision = 0.0;  // collisions * t_collision
  double busy_time_refusal = 0.0;    // refusals * abort duration
  double total_time = 0.0;  // slots_elapsed * tau + the three busy terms
  double collision_prob_hat = 0.0;  // collided_attempts / attempts
  double throughput_hat = 0.0;      // delivered payload symbols / total_time
  double attempt_rate_hat = 0.0;    // see each engine's definition

  friend bool operator==(const SimStats&, const SimStats&) = default;
};

namespace detail {

inline long long warmup_epochs(long long horizon) {
  return std::min<long long>(horizon / 20, 100000);
}

inline void check_horizon(long long horizon) {
  require(horizon >= 10000, errc::invalid_params,
          "horizon must be at least 1e4 epochs");
}

// Shared epoch bookkeeping; `payload_per_success` is 2*payload for the
// double-station engines and payload for the baseline.
inline void finalize_stats(SimStats& st, const FrameTimings& t,
                           double refusal_time, double payload_per_success,
                           double rate_denom) {
  st.busy_time_success = static_cast<double>(st.successes) * t.t_success();
  st.busy_time_collision =
      static_cast<double>(st.collisions) * t.t_collision();
  st.busy_time_refusal = static_cast<double>(st.refusals) * refusal_time;
  st.total_time = static_cast<double>(st.slots_elapsed) * t.slot +
                  st.busy_time_success + st.busy_time_collision +
                  st.busy_time_refusal;
  st.collision_prob_hat =
      st.attempts > 0
          ? static_cast<double>(st.collided_attempts) / st.attempts
          : 0.0;
  st.throughput_hat =
      st.total_time > 0.0
          ? static_cast<double>(st.successes) * payload_per_success /
                st.total_time
          : 0.0;
  st.attempt_rate_hat =
      rate_denom > 0.0 ? st.one_zero_pair_epochs / rate_denom : 0.0;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Pairs mode: N independent TCPairs (the chain model with the collision
// probability endogenous). attempt_rate_hat is the fraction of pair-epochs
// with exactly one counter at zero, the quantity the analytic eta predicts.
// ---------------------------------------------------------------------------

inline SimStats simulate_pairs(const ProtocolParams& pp,
                               const FrameTimings& t, std::uint64_t seed,
                               long long horizon) {
  validate(pp);
  t.validate();
  detail::check_horizon(horizon);
  const int n = pp.n_pairs, stages = pp.stages, nc = 2 * n;
  std::vector<Xoshiro256StarStar> rng;
  rng.reserve(n);
  for (int k = 0; k < n; ++k)
    rng.emplace_back(stream_seed(seed, static_cast<std::uint64_t>(k)));
  std::vector<int> val(nc), stage(nc, 0);
  for (int c = 0; c < nc; ++c)
    val[c] = static_cast<int>(rng[c / 2].uniform_pow2(pp.w0));

  const long long warm = detail::warmup_epochs(horizon);
  SimStats st;
  st.epochs = horizon - warm;
  for (long long e = 0; e < horizon; ++e) {
    const bool measured = e >= warm;
    int zc = 0, onez = 0, zidx = -1;
    for (int k = 0; k < n; ++k) {
      const int z = (val[2 * k] == 0) + (val[2 * k + 1] == 0);
      zc += z;
      if (z == 1) ++onez;
    }
    if (zc == 0) {
      for (int c = 0; c < nc; ++c) --val[c];
      if (measured) ++st.slots_elapsed;
    } else if (zc == 1) {
      for (int c = 0; c < nc; ++c)
        if (val[c] == 0) zidx = c;
      const int k = zidx / 2;
      for (int c = 0; c < nc; ++c) {
        if (c == 2 * k || c == 2 * k + 1) {
          stage[c] = 0;  // successful exchange resets the whole pair
          val[c] = static_cast<int>(rng[k].uniform_pow2(pp.w0));
        } else {
          --val[c];
        }
      }
      if (measured) ++st.successes;
    } else {
      for (int c = 0; c < nc; ++c) {
        if (val[c] == 0) {
          stage[c] = std::min(stage[c] + 1, stages - 1);
          val[c] =
              static_cast<int>(rng[c / 2].uniform_pow2(pp.window(stage[c])));
        } else {
          --val[c];
        }
      }
      if (measured) ++st.collisions;
    }
    if (measured) {
      st.attempts += zc;
      if (zc >= 2) st.collided_attempts += zc;
      st.one_zero_pair_epochs += onez;
    }
  }
  detail::finalize_stats(st, t, 0.0, 2.0 * t.payload,
                         static_cast<double>(n) * st.epochs);
  return st;
}

// ---------------------------------------------------------------------------
// Station mode: one counter per partner, one RTS per station per epoch
// (the lowest-index zero counter is served; other zero counters hold).
// A lone RTS either completes (t_success) or, with probability refuse_prob,
// is refused by the partner and aborts after rts/pta/sak. On a refusal the
// initiating counter escalates like a collision while the refusing
// partner's counter resets to a fresh stage-0 draw; the two engaged
// stations' remaining counters freeze for the epoch. attempt_rate_hat is
// RTS transmissions per station-epoch.
// ---------------------------------------------------------------------------

inline SimStats simulate_stations(const PartnerMap& map,
                                  const ProtocolParams& pp,
                                  const FrameTimings& t, std::uint64_t seed,
                                  long long horizon,
                                  double refuse_prob = 0.0) {
  validate(pp);
  t.validate();
  detail::check_horizon(horizon);
  require(refuse_prob >= 0.0 && refuse_prob <= 1.0, errc::invalid_probability,
          "refuse_prob must lie in [0, 1]");
  require(pp.n_pairs == map.n_pairs(), errc::invalid_params,
          "params n_pairs must match the partner map");
  const int ns = map.n_stations(), stages = pp.stages;

  // flatten (station, counter) -> index, and resolve each counter's partner
  std::vector<int> off(ns + 1, 0);
  for (int s = 1; s <= ns; ++s) off[s] = off[s - 1] + map.degree(s);
  const int nc = off[ns];
  std::vector<int> peer(nc), owner(nc);
  for (int s = 1; s <= ns; ++s)
    for (int k = 1; k <= map.degree(s); ++k) {
      const auto [mine, theirs] = map.partner_of(s, map.partner_at(s, k));
      peer[off[s - 1] + k - 1] =
          off[theirs.station - 1] + theirs.counter - 1;
      owner[off[s - 1] + k - 1] = s;
      (void)mine;
    }

  // both counters of a TCPair share that pair's RNG stream, numbered by the
  // pair's position in the map's ordered pair list
  std::vector<int> edge_of(nc, -1);
  std::vector<Xoshiro256StarStar> rng;
  {
    const auto& pairs = map.pairs();
    rng.reserve(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const auto [a, b] = pairs[k];
      const auto [ca, cb] = map.partner_of(a, b);
      edge_of[off[ca.station - 1] + ca.counter - 1] = static_cast<int>(k);
      edge_of[off[cb.station - 1] + cb.counter - 1] = static_cast<int>(k);
      rng.emplace_back(stream_seed(seed, k));
    }
  }
  std::vector<int> val(nc), stage(nc, 0);
  for (int c = 0; c < nc; ++c)
    val[c] = static_cast<int>(rng[edge_of[c]].uniform_pow2(pp.w0));

  const double refusal_time =
      t.rts + t.sifs + t.pta + t.sifs + t.sak + t.difs;
  const long long warm = detail::warmup_epochs(horizon);
  SimStats st;
  st.epochs = horizon - warm;
  std::vector<int> rts;  // flat counter index transmitting, per station
  rts.reserve(ns);
  for (long long e = 0; e < horizon; ++e) {
    const bool measured = e >= warm;
    rts.clear();
    for (int s = 1; s <= ns; ++s)
      for (int c = off[s - 1]; c < off[s]; ++c)
        if (val[c] == 0) {
          rts.push_back(c);  // lowest counter slot wins; the rest hold
          break;
        }
    if (rts.empty()) {
      for (int c = 0; c < nc; ++c)
        if (val[c] > 0) --val[c];
      if (measured) ++st.slots_elapsed;
    } else if (rts.size() >= 2) {
      for (std::size_t r = 0; r < rts.size(); ++r) {
        const int c = rts[r];
        stage[c] = std::min(stage[c] + 1, stages - 1);
        val[c] = -1;  // mark; redraw below in flat order
      }
      for (int c = 0; c < nc; ++c) {
        if (val[c] < 0)
          val[c] = static_cast<int>(
              rng[edge_of[c]].uniform_pow2(pp.window(stage[c])));
        else if (val[c] > 0)
          --val[c];
      }
      if (measured) {
        ++st.collisions;
        st.collided_attempts += static_cast<long long>(rts.size());
      }
    } else {
      const int c = rts.front();
      const int d = peer[c];
      auto& erng = rng[edge_of[c]];  // c and d belong to the same TCPair
      const bool refused =
          refuse_prob > 0.0 && erng.next_double() < refuse_prob;
      const int sa = owner[c], sb = owner[d];
      if (refused) {
        stage[c] = std::min(stage[c] + 1, stages - 1);
        val[c] = static_cast<int>(erng.uniform_pow2(pp.window(stage[c])));
        stage[d] = 0;
        val[d] = static_cast<int>(erng.uniform_pow2(pp.w0));
        if (measured) ++st.refusals;
      } else {
        // ascending flat order keeps the RNG stream aligned with pairs mode
        const int lo = std::min(c, d), hi = std::max(c, d);
        stage[lo] = stage[hi] = 0;
        val[lo] = static_cast<int>(erng.uniform_pow2(pp.w0));
        val[hi] = static_cast<int>(erng.uniform_pow2(pp.w0));
        if (measured) ++st.successes;
      }
      for (int x = 0; x < nc; ++x) {
        if (x == c || x == d) continue;
        if (owner[x] == sa || owner[x] == sb) continue;  // engaged: freeze
        if (val[x] > 0) --val[x];
      }
    }
    if (measured) st.attempts += static_cast<long long>(rts.size());
  }
  detail::finalize_stats(st, t, refusal_time, 2.0 * t.payload, 0.0);
  st.attempt_rate_hat =
      st.epochs > 0 ? static_cast<double>(st.attempts) /
                          (static_cast<double>(ns) * st.epochs)
                    : 0.0;
  return st;
}

// ---------------------------------------------------------------------------
// Conventional baseline: one counter per station, standard binary
// exponential backoff, plain RTS/CTS-style exchange (no partner handshake).
// attempt_rate_hat is attempts per station-epoch.
// ---------------------------------------------------------------------------

inline SimStats simulate_baseline(int n_stations, int w0, int stages,
                                  const FrameTimings& t, std::uint64_t seed,
                                  long long horizon) {
  validate(ProtocolParams{.n_pairs = 1, .w0 = w0, .stages = stages});
  require(n_stations >= 1, errc::invalid_params, "n_stations must be >= 1");
  t.validate();
  detail::check_horizon(horizon);
  const ProtocolParams pp{.n_pairs = 1, .w0 = w0, .stages = stages};
  std::vector<Xoshiro256StarStar> rng;
  rng.reserve(n_stations);
  for (int c = 0; c < n_stations; ++c)
    rng.emplace_back(stream_seed(seed, static_cast<std::uint64_t>(c)));
  std::vector<int> val(n_stations), stage(n_stations, 0);
  for (int c = 0; c < n_stations; ++c)
    val[c] = static_cast<int>(rng[c].uniform_pow2(w0));

  const long long warm = detail::warmup_epochs(horizon);
  SimStats st;
  st.epochs = horizon - warm;
  for (long long e = 0; e < horizon; ++e) {
    const bool measured = e >= warm;
    int zc = 0;
    for (int c = 0; c < n_stations; ++c) zc += (val[c] == 0);
    if (zc == 0) {
      for (int c = 0; c < n_stations; ++c) --val[c];
      if (measured) ++st.slots_elapsed;
    } else if (zc == 1) {
      for (int c = 0; c < n_stations; ++c) {
        if (val[c] == 0) {
          stage[c] = 0;
          val[c] = static_cast<int>(rng[c].uniform_pow2(w0));
        } else {
          --val[c];
        }
      }
      if (measured) ++st.successes;
    } else {
      for (int c = 0; c < n_stations; ++c) {
        if (val[c] == 0) {
          stage[c] = std::min(stage[c] + 1, stages - 1);
          val[c] = static_cast<int>(rng[c].uniform_pow2(pp.window(stage[c])));
        } else {
          --val[c];
        }
      }
      if (measured) ++st.collisions;
    }
    if (measured) {
      st.attempts += zc;
      if (zc >= 2) st.collided_attempts += zc;
    }
  }
  // baseline success/collision occupancy uses the handshake-free timings
  st.busy_time_success =
      static_cast<double>(st.successes) * t.t_success_baseline();
  st.busy_time_collision =
      static_cast<double>(st.collisions) * t.t_collision_baseline();
  st.total_time = static_cast<double>(st.slots_elapsed) * t.slot +
                  st.busy_time_success + st.busy_time_collision;
  st.collision_prob_hat =
      st.attempts > 0
          ? static_cast<double>(st.collided_attempts) / st.attempts
          : 0.0;
  st.throughput_hat =
      st.total_time > 0.0
          ? static_cast<double>(st.successes) * t.payload / st.total_time
          : 0.0;
  st.attempt_rate_hat =
      st.epochs > 0 ? static_cast<double>(st.attempts) /
                          (static_cast<double>(n_stations) * st.epochs)
                    : 0.0;
  return st;
}

// ---------------------------------------------------------------------------
// Replication: run the same experiment n_reps times with seeds
// base_seed, base_seed + 1, ... and aggregate the headline statistics.
// The aggregate mean is the plain mean of the per-rep means; the 95%
// confidence half-widths use the normal approximation of the rep means
// (1.96 * s / sqrt(R), sample standard deviation). Reps run in parallel on
// up to worker_threads() threads (DSCSMA_THREADS caps the pool); results
// are byte-identical regardless of thread count.
// ---------------------------------------------------------------------------

struct ReplicateResult {
  std::vector<SimStats> reps;
  double collision_prob = 0.0;
  double ci_collision_prob = 0.0;
  double throughput = 0.0;
  double ci_throughput = 0.0;
  double attempt_rate = 0.0;
  double ci_attempt_rate = 0.0;
};

namespace detail {

template <typename Getter>
void mean_ci(const std::vector<SimStats>& reps, Getter get, double& mean,
             double& ci) {
  const double r = static_cast<double>(reps.size());
  double sum = 0.0;
  for (const auto& s : reps) sum += get(s);
  mean = sum / r;
  double ss = 0.0;
  for (const auto& s : reps) {
    const double d = get(s) - mean;
    ss += d * d;
  }
  ci = 1.96 * std::sqrt(ss / (r - 1.0)) / std::sqrt(r);
}

}  // namespace detail

template <typename Fn>
ReplicateResult replicate(Fn&& fn, int n_reps, std::uint64_t base_seed) {
  require(n_reps >= 2, errc::invalid_params,
          "confidence intervals need at least 2 reps");
  ReplicateResult out;
  out.reps.resize(n_reps);
  const int workers = std::min(util::worker_threads(), n_reps);
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto work = [&] {
    for (int r; (r = next.fetch_add(1)) < n_reps;) {
      try {
        out.reps[r] = fn(base_seed + static_cast<std::uint64_t>(r));
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  detail::mean_ci(
      out.reps, [](const SimStats& s) { return s.collision_prob_hat; },
      out.collision_prob, out.ci_collision_prob);
  detail::mean_ci(
      out.reps, [](const SimStats& s) { return s.throughput_hat; },
      out.throughput, out.ci_throughput);
  detail::mean_ci(
      out.reps, [](const SimStats& s) { return s.attempt_rate_hat; },
      out.attempt_rate, out.ci_attempt_rate);
  return out;
}

}  // namespace dscsma
