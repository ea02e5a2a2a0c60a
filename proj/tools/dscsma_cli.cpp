// Experiment runner for the dscsma library.
//
// Subcommands:
//   analytic          fixed-point collision probability, attempt rate, and
//                     throughput over the (n, w0) grid
//   simulate          slot-level Monte-Carlo with replications and 95% CIs
//   compare           analytic vs simulated vs baseline, one row per point
//   optimize-w0       best power-of-two initial window per pair count
//   optimize-n        best pair count per initial window
//   optimize-map      degree-balancing greedy partner-map reduction
//   reproduce-table5  optimizer choices checked against the reference table
//
// Configuration is layered, later layers winning: built-in defaults, then
// the --config file, then the --timings file, then command-line flags. Every
// run echoes the fully resolved configuration to <out>/resolved_config.txt.
// All artifacts are buffered in memory and written only after the whole
// computation succeeded, so a failed run leaves no partial files. Numbers
// are rendered with a fixed "%.10g" format and rows are emitted in grid
// order regardless of scheduling, so identical configuration and seed
// reproduce byte-identical files. The DSCSMA_THREADS environment variable
// caps the worker pool.
//
// Exit codes: 0 on success, 2 for configuration errors (no files written),
// 1 for any other failure.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dscsma/analytic.hpp"
#include "dscsma/config.hpp"
#include "dscsma/core.hpp"
#include "dscsma/optimizer.hpp"
#include "dscsma/simulator.hpp"
#include "dscsma/util.hpp"

namespace {

using dscsma::Config;
using dscsma::errc;
using dscsma::FrameTimings;
using dscsma::PartnerMap;
using dscsma::ProtocolParams;
using dscsma::require;
namespace util = dscsma::util;

// ---------------------------------------------------------------------------
// Flag plumbing: flags the user actually passed become the top config layer.
// ---------------------------------------------------------------------------

struct Flags {
  std::string config, timings, map_file, out, w0, n, mode;
  long long m = 0, reps = 0, horizon = 0, target_n = 0, cap = 0;
  std::uint64_t seed = 0;
  double refuse_prob = 0.0;
  bool first_only = false;
};

bool passed(const CLI::App* s, const std::string& name) {
  const CLI::Option* o = s->get_option_no_throw(name);
  return o != nullptr && o->count() > 0;
}

Config flag_layer(const CLI::App* s, const Flags& f) {
  Config c;
  if (passed(s, "--w0")) c.set("w0", f.w0);
  if (passed(s, "--n")) c.set("n", f.n);
  if (passed(s, "--m")) c.set("m", std::to_string(f.m));
  if (passed(s, "--seed")) c.set("seed", std::to_string(f.seed));
  if (passed(s, "--reps")) c.set("reps", std::to_string(f.reps));
  if (passed(s, "--horizon")) c.set("horizon", std::to_string(f.horizon));
  if (passed(s, "--mode")) c.set("mode", f.mode);
  if (passed(s, "--refuse-prob"))
    c.set("refuse_prob", util::fmt_g(f.refuse_prob));
  if (passed(s, "--out")) c.set("out", f.out);
  if (passed(s, "--target-n")) c.set("target_n", std::to_string(f.target_n));
  if (passed(s, "--cap")) c.set("cap", std::to_string(f.cap));
  if (passed(s, "--first-only")) c.set("first_only", "1");
  return c;
}

// defaults < --config file < --timings file < flags; --map contributes only
// its matrix block.
Config resolve_layers(const CLI::App* s, const Flags& f) {
  Config cfg;
  if (passed(s, "--config")) cfg.overlay(dscsma::parse_config_file(f.config));
  if (passed(s, "--timings"))
    cfg.overlay(dscsma::parse_config_file(f.timings));
  if (passed(s, "--map")) {
    const Config m = dscsma::parse_config_file(f.map_file);
    require(m.matrix.has_value(), errc::config_error,
            "map file has no matrix block: " + f.map_file);
    Config matrix_only;
    matrix_only.matrix = m.matrix;
    cfg.overlay(matrix_only);
  }
  cfg.overlay(flag_layer(s, f));
  return cfg;
}

// ---------------------------------------------------------------------------
// Resolved run description
// ---------------------------------------------------------------------------

std::vector<int> parse_int_list(const std::string& key,
                                const std::string& csv) {
  std::vector<int> out;
  std::istringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    const std::string t = util::trim(item);
    if (t.empty()) continue;
    out.push_back(static_cast<int>(Config::parse_int(key, t)));
  }
  require(!out.empty(), errc::config_error, "grid '" + key + "' is empty");
  return out;
}

struct RunPlan {
  std::vector<int> w0s, ns;
  bool n_explicit = false;  // set via file or flag (not the default)
  int m = 4;
  std::uint64_t seed = 1;
  int reps = 10;
  long long horizon = 1'000'000;
  std::string mode = "pairs";
  double refuse_prob = 0.0;
  std::string out = "out";
  FrameTimings t;
  std::optional<PartnerMap> map;
  int target_n = -1;        // optimize-map: counters to keep
  std::size_t cap = 10000;  // optimize-map: frontier cap
  bool first_only = false;
};

RunPlan extract(const Config& cfg) {
  RunPlan s;
  s.w0s = parse_int_list("w0", cfg.get_str("w0", "32,64,128,256,512"));
  s.n_explicit = cfg.has("n");
  s.ns = parse_int_list("n", cfg.get_str("n", "30"));
  s.m = static_cast<int>(cfg.get_int("m", 4));
  s.seed = cfg.get_u64("seed", 1);
  s.reps = static_cast<int>(cfg.get_int("reps", 10));
  s.horizon = cfg.get_int("horizon", 1'000'000);
  s.mode = cfg.get_str("mode", "pairs");
  s.refuse_prob = cfg.get_double("refuse_prob", 0.0);
  s.out = cfg.get_str("out", "out");
  FrameTimings& t = s.t;
  t.rts = cfg.get_double("rts", t.rts);
  t.pta = cfg.get_double("pta", t.pta);
  t.sak = cfg.get_double("sak", t.sak);
  t.dftrigger = cfg.get_double("dftrigger", t.dftrigger);
  t.ack = cfg.get_double("ack", t.ack);
  t.sifs = cfg.get_double("sifs", t.sifs);
  t.difs = cfg.get_double("difs", t.difs);
  t.phy_header = cfg.get_double("phy_header", t.phy_header);
  t.mac_header = cfg.get_double("mac_header", t.mac_header);
  t.payload = cfg.get_double("payload", t.payload);
  t.slot = cfg.get_double("slot", t.slot);
  if (cfg.matrix) {
    try {
      s.map.emplace(*cfg.matrix);
    } catch (const dscsma::error& e) {
      dscsma::fail(errc::config_error,
                   std::string("bad partner matrix: ") + e.what());
    }
  }
  if (cfg.has("target_n"))
    s.target_n = static_cast<int>(cfg.get_int("target_n", -1));
  s.cap = static_cast<std::size_t>(cfg.get_int("cap", 10000));
  s.first_only = cfg.get_int("first_only", 0) != 0;

  require(s.m >= 2 && s.m <= 24, errc::config_error,
          "m must lie in [2, 24]");
  for (const int w : s.w0s) {
    require(dscsma::is_pow2(w) && w >= 2, errc::config_error,
            "w0 grid values must be powers of two >= 2, got " +
                std::to_string(w));
    require((static_cast<long long>(w) << (s.m - 1)) <= (1 << 24),
            errc::config_error,
            "w0 * 2^(m-1) must stay within 2^24, got w0 = " +
                std::to_string(w));
  }
  for (const int n : s.ns)
    require(n >= 1, errc::config_error,
            "n grid values must be >= 1, got " + std::to_string(n));
  try {
    s.t.validate();
  } catch (const dscsma::error& e) {
    dscsma::fail(errc::config_error, std::string("bad timings: ") + e.what());
  }
  return s;
}

// Additional checks for the subcommands that run the simulator; also pins
// the pair grid to the partner map in stations mode.
void check_simulation_plan(RunPlan& s, bool has_mode) {
  require(s.reps >= 2, errc::config_error, "reps must be >= 2");
  require(s.horizon >= 10000, errc::config_error,
          "horizon must be >= 10000 epochs");
  if (!has_mode) return;
  require(s.mode == "pairs" || s.mode == "stations", errc::config_error,
          "mode must be 'pairs' or 'stations', got '" + s.mode + "'");
  require(s.refuse_prob >= 0.0 && s.refuse_prob <= 1.0, errc::config_error,
          "refuse-prob must lie in [0, 1]");
  if (s.mode == "pairs") {
    require(s.refuse_prob == 0.0, errc::config_error,
            "refuse-prob applies to stations mode only");
    require(!s.map.has_value(), errc::config_error,
            "a partner matrix needs --mode stations");
  } else if (s.map) {
    if (!s.n_explicit) {
      s.ns = {s.map->n_pairs()};
    } else {
      for (const int n : s.ns)
        require(n == s.map->n_pairs(), errc::config_error,
                "with --map, every n must equal the map's pair count (" +
                    std::to_string(s.map->n_pairs()) + ")");
    }
  }
}

// ---------------------------------------------------------------------------
// Output helpers
// ---------------------------------------------------------------------------

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

std::string matrix_block(const PartnerMap& m) {
  std::ostringstream o;
  o << "matrix =\n";
  for (const auto& row : m.matrix()) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) o << ' ';
      o << row[i];
    }
    o << '\n';
  }
  return o.str();
}

struct EchoSections {
  bool w0 = false, n = false, sim = false, map_search = false,
       timings = false, matrix = false;
};

// The sidecar uses the same grammar as input config files, with a fixed key
// order so identical runs produce identical bytes.
std::string echo_config(const std::string& sub, const RunPlan& s,
                        const EchoSections& e) {
  std::ostringstream o;
  o << "# resolved configuration (defaults < config file < timings file < "
       "flags)\n";
  o << "subcommand = " << sub << '\n';
  o << "m = " << s.m << '\n';
  if (e.n) o << "n = " << join_ints(s.ns) << '\n';
  o << "out = " << s.out << '\n';
  if (e.w0) o << "w0 = " << join_ints(s.w0s) << '\n';
  if (e.sim) {
    o << "horizon = " << s.horizon << '\n';
    o << "mode = " << s.mode << '\n';
    o << "refuse_prob = " << util::fmt_g(s.refuse_prob) << '\n';
    o << "reps = " << s.reps << '\n';
    o << "seed = " << s.seed << '\n';
  }
  if (e.map_search) {
    o << "cap = " << s.cap << '\n';
    o << "first_only = " << (s.first_only ? 1 : 0) << '\n';
    o << "target_n = " << s.target_n << '\n';
  }
  if (e.timings) {
    o << "# frame timings (symbol units)\n";
    o << "ack = " << util::fmt_g(s.t.ack) << '\n';
    o << "difs = " << util::fmt_g(s.t.difs) << '\n';
    o << "dftrigger = " << util::fmt_g(s.t.dftrigger) << '\n';
    o << "mac_header = " << util::fmt_g(s.t.mac_header) << '\n';
    o << "payload = " << util::fmt_g(s.t.payload) << '\n';
    o << "phy_header = " << util::fmt_g(s.t.phy_header) << '\n';
    o << "pta = " << util::fmt_g(s.t.pta) << '\n';
    o << "rts = " << util::fmt_g(s.t.rts) << '\n';
    o << "sak = " << util::fmt_g(s.t.sak) << '\n';
    o << "sifs = " << util::fmt_g(s.t.sifs) << '\n';
    o << "slot = " << util::fmt_g(s.t.slot) << '\n';
  }
  if (e.matrix && s.map) {
    o << "# partner matrix\n";
    o << matrix_block(*s.map);
  }
  return o.str();
}

struct Artifacts {
  std::vector<std::pair<std::string, std::string>> files;  // name -> content
  std::string note;  // printed to stdout after the files are written
};

void write_all(const RunPlan& s, const std::string& sidecar, Artifacts a) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(s.out, ec);
  require(!ec, errc::io_error,
          "cannot create output directory '" + s.out + "': " + ec.message());
  a.files.emplace_back("resolved_config.txt", sidecar);
  for (const auto& [name, content] : a.files) {
    const fs::path p = fs::path(s.out) / name;
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    require(f.good(), errc::io_error, "cannot write " + p.string());
    f << content;
    f.flush();
    require(f.good(), errc::io_error, "short write to " + p.string());
    std::cout << "wrote " << p.string() << '\n';
  }
  if (!a.note.empty()) std::cout << a.note;
}

// Index-dispatched worker pool; fn(i) runs exactly once per index and writes
// only to its own slot, so results are identical for any pool width.
template <typename Fn>
void parallel_indexed(std::size_t count, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(
      static_cast<std::size_t>(util::worker_threads()), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        fn(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

// ---------------------------------------------------------------------------
// Subcommand runners
// ---------------------------------------------------------------------------

// analytic.csv: w0,n,m,p,eta,c_ds,c_baseline — fixed point per grid point,
// with the conventional single-station baseline at n stations for scale.
Artifacts run_analytic(const RunPlan& s) {
  std::vector<std::string> rows(s.ns.size() * s.w0s.size());
  parallel_indexed(rows.size(), [&](std::size_t i) {
    const int n = s.ns[i / s.w0s.size()];
    const int w0 = s.w0s[i % s.w0s.size()];
    const ProtocolParams pp{.n_pairs = n, .w0 = w0, .stages = s.m};
    const dscsma::CouplingSolution fp = dscsma::solve_coupling_newton(pp);
    const double c = dscsma::ds_throughput(fp.eta, n, s.t);
    const double base = dscsma::baseline_csma_throughput(n, w0, s.m, s.t);
    std::ostringstream r;
    r << w0 << ',' << n << ',' << s.m << ',' << util::fmt_g(fp.p) << ','
      << util::fmt_g(fp.eta) << ',' << util::fmt_g(c) << ','
      << util::fmt_g(base) << '\n';
    rows[i] = r.str();
  });
  std::string csv = "w0,n,m,p,eta,c_ds,c_baseline\n";
  for (const auto& r : rows) csv += r;
  Artifacts a;
  a.files.emplace_back("analytic.csv", std::move(csv));
  return a;
}

// simulate.csv: mode,N,W0,M,seed,p_hat,C_hat,ci_p,ci_C,slots — one row per
// replication (seed column = that replication's seed, CI columns empty)
// followed by one aggregate row per grid point (seed column = base seed, CI
// columns filled, slots = total across replications).
Artifacts run_simulate(const RunPlan& s) {
  std::ostringstream csv;
  csv << "mode,N,W0,M,seed,p_hat,C_hat,ci_p,ci_C,slots\n";
  for (const int n : s.ns) {
    for (const int w0 : s.w0s) {
      const ProtocolParams pp{.n_pairs = n, .w0 = w0, .stages = s.m};
      dscsma::ReplicateResult rr;
      if (s.mode == "pairs") {
        rr = dscsma::replicate(
            [&](std::uint64_t seed) {
              return dscsma::simulate_pairs(pp, s.t, seed, s.horizon);
            },
            s.reps, s.seed);
      } else {
        const PartnerMap map =
            s.map ? *s.map : PartnerMap::disjoint_pairs(n);
        rr = dscsma::replicate(
            [&](std::uint64_t seed) {
              return dscsma::simulate_stations(map, pp, s.t, seed, s.horizon,
                                               s.refuse_prob);
            },
            s.reps, s.seed);
      }
      long long total_slots = 0;
      for (int r = 0; r < s.reps; ++r) {
        const dscsma::SimStats& st = rr.reps[static_cast<std::size_t>(r)];
        total_slots += st.slots_elapsed;
        csv << s.mode << ',' << n << ',' << w0 << ',' << s.m << ','
            << s.seed + static_cast<std::uint64_t>(r) << ','
            << util::fmt_g(st.collision_prob_hat) << ','
            << util::fmt_g(st.throughput_hat) << ",,," << st.slots_elapsed
            << '\n';
      }
      csv << s.mode << ',' << n << ',' << w0 << ',' << s.m << ',' << s.seed
          << ',' << util::fmt_g(rr.collision_prob) << ','
          << util::fmt_g(rr.throughput) << ','
          << util::fmt_g(rr.ci_collision_prob) << ','
          << util::fmt_g(rr.ci_throughput) << ',' << total_slots << '\n';
    }
  }
  Artifacts a;
  a.files.emplace_back("simulate.csv", csv.str());
  return a;
}

// compare.csv: w0,n,m,p_analytic,p_sim,ci_p,c_ds_analytic,c_ds_sim,ci_c,
// c_baseline — fixed point, pairs-mode simulation, and analytic baseline
// side by side, one row per grid point.
Artifacts run_compare(const RunPlan& s) {
  std::ostringstream csv;
  csv << "w0,n,m,p_analytic,p_sim,ci_p,c_ds_analytic,c_ds_sim,ci_c,"
         "c_baseline\n";
  for (const int n : s.ns) {
    for (const int w0 : s.w0s) {
      const ProtocolParams pp{.n_pairs = n, .w0 = w0, .stages = s.m};
      const dscsma::CouplingSolution fp = dscsma::solve_coupling_newton(pp);
      const double c_an = dscsma::ds_throughput(fp.eta, n, s.t);
      const double base = dscsma::baseline_csma_throughput(n, w0, s.m, s.t);
      const dscsma::ReplicateResult rr = dscsma::replicate(
          [&](std::uint64_t seed) {
            return dscsma::simulate_pairs(pp, s.t, seed, s.horizon);
          },
          s.reps, s.seed);
      csv << w0 << ',' << n << ',' << s.m << ',' << util::fmt_g(fp.p) << ','
          << util::fmt_g(rr.collision_prob) << ','
          << util::fmt_g(rr.ci_collision_prob) << ',' << util::fmt_g(c_an)
          << ',' << util::fmt_g(rr.throughput) << ','
          << util::fmt_g(rr.ci_throughput) << ',' << util::fmt_g(base)
          << '\n';
    }
  }
  Artifacts a;
  a.files.emplace_back("compare.csv", csv.str());
  return a;
}

// optimize_w0.csv: n,relaxed,fallback,candidate,c_cost_model,c_fixed_point,
// chosen,chosen_fixed_point — one row per candidate window; `chosen` repeats
// the cost-model argmax, `chosen_fixed_point` the exact model's.
Artifacts run_optimize_w0(const RunPlan& s) {
  std::vector<dscsma::WindowChoice> ch(s.ns.size());
  parallel_indexed(s.ns.size(), [&](std::size_t i) {
    ch[i] = dscsma::optimal_w0(s.ns[i], s.t, s.m);
  });
  std::ostringstream csv, note;
  csv << "n,relaxed,fallback,candidate,c_cost_model,c_fixed_point,chosen,"
         "chosen_fixed_point\n";
  for (std::size_t i = 0; i < s.ns.size(); ++i) {
    const dscsma::WindowChoice& w = ch[i];
    for (std::size_t j = 0; j < w.candidates.size(); ++j) {
      csv << s.ns[i] << ',' << util::fmt_g(w.relaxed) << ','
          << (w.used_fallback ? 1 : 0) << ',' << w.candidates[j] << ','
          << util::fmt_g(w.c_values[j]) << ','
          << util::fmt_g(w.c_fixed_point[j]) << ',' << w.chosen << ','
          << w.chosen_fixed_point << '\n';
    }
    if (w.chosen != w.chosen_fixed_point)
      note << "note: n=" << s.ns[i] << ": the cost model selects w0="
           << w.chosen << " but the exact fixed-point model scores w0="
           << w.chosen_fixed_point << " higher\n";
  }
  Artifacts a;
  a.files.emplace_back("optimize_w0.csv", csv.str());
  a.note = note.str();
  return a;
}

// optimize_n.csv: w0,relaxed,relaxed_radical_form,candidate,c_value,chosen —
// one row per candidate pair count; `chosen` is the full-model local argmax.
Artifacts run_optimize_n(const RunPlan& s) {
  std::vector<dscsma::PairCountChoice> ch(s.w0s.size());
  parallel_indexed(s.w0s.size(), [&](std::size_t i) {
    ch[i] = dscsma::optimal_n(s.w0s[i], s.t, s.m);
  });
  std::ostringstream csv;
  csv << "w0,relaxed,relaxed_radical_form,candidate,c_value,chosen\n";
  for (std::size_t i = 0; i < s.w0s.size(); ++i) {
    const dscsma::PairCountChoice& c = ch[i];
    for (std::size_t j = 0; j < c.candidates.size(); ++j) {
      csv << s.w0s[i] << ',' << util::fmt_g(c.relaxed) << ','
          << util::fmt_g(c.relaxed_radical_form) << ',' << c.candidates[j]
          << ',' << util::fmt_g(c.c_values[j]) << ',' << c.chosen << '\n';
    }
  }
  Artifacts a;
  a.files.emplace_back("optimize_n.csv", csv.str());
  return a;
}

// map_choice.txt: the canonical (lexicographically first) minimizer in the
// same matrix-block grammar the tool accepts; map_summary.json: q, degree
// variance, removals, and frontier bookkeeping.
Artifacts run_optimize_map(const RunPlan& s) {
  require(s.map.has_value(), errc::config_error,
          "optimize-map needs a partner matrix (--map <file> or a config "
          "matrix block)");
  require(s.target_n >= 0, errc::config_error,
          "optimize-map needs --target-n (counters to keep; two per TCPair)");
  require(s.target_n % 2 == 0, errc::config_error,
          "target-n counts ordered matrix entries and must be even");
  require(s.target_n <= 2 * s.map->n_pairs(), errc::config_error,
          "target-n exceeds the counters available in the matrix (" +
              std::to_string(2 * s.map->n_pairs()) + ")");
  require(s.cap >= 1, errc::config_error, "cap must be >= 1");

  const dscsma::MapSearchState st =
      dscsma::greedy_partner_map(*s.map, s.target_n, s.cap, s.first_only);
  const PartnerMap& pick = st.current_set.front();
  const int n_st = pick.n_stations();
  const double mean_deg = static_cast<double>(s.target_n) / n_st;
  const double variance =
      static_cast<double>(st.q_value) / n_st - mean_deg * mean_deg;

  nlohmann::json j;
  j["first_only"] = s.first_only;
  j["frontier_cap"] = s.cap;
  j["frontier_size"] = st.current_set.size();
  j["n_stations"] = n_st;
  j["q"] = st.q_value;
  j["removed_pairs"] = st.removed_pairs;
  j["target_counters"] = s.target_n;
  j["truncated"] = st.truncated;
  j["variance"] = variance;

  std::ostringstream mp;
  mp << "# degree-balanced partner map: q = " << st.q_value << ", "
     << st.current_set.size() << " tied minimizer(s)\n"
     << matrix_block(pick);

  Artifacts a;
  a.files.emplace_back("map_choice.txt", mp.str());
  a.files.emplace_back("map_summary.json", j.dump(2) + "\n");
  std::ostringstream note;
  note << "q = " << st.q_value << " (degree variance "
       << util::fmt_g(variance) << ") across " << st.current_set.size()
       << " tied map(s) after " << st.removed_pairs << " removal(s)\n";
  if (st.truncated)
    note << "warning: frontier cap " << s.cap
         << " reached; the tied-minimizer set was truncated "
            "deterministically\n";
  a.note = note.str();
  return a;
}

// table5_report.txt (also printed): both optimizer rows of the reference
// table, each cell marked MATCH / MISMATCH with the relaxed and chosen
// values. The window row is the hard expectation; the pair-count row is a
// soft check with a known, documented divergence.
Artifacts run_table5(const RunPlan& s) {
  const std::vector<std::pair<int, int>> wrow = {
      {20, 128}, {50, 256}, {100, 512}, {200, 1024}, {500, 4096}};
  const std::vector<std::pair<int, int>> nrow = {
      {32, 4}, {64, 9}, {128, 17}, {256, 35}, {1024, 138}};
  std::vector<dscsma::WindowChoice> wc(wrow.size());
  std::vector<dscsma::PairCountChoice> nc(nrow.size());
  parallel_indexed(wrow.size() + nrow.size(), [&](std::size_t i) {
    if (i < wrow.size())
      wc[i] = dscsma::optimal_w0(wrow[i].first, s.t, s.m);
    else
      nc[i - wrow.size()] =
          dscsma::optimal_n(nrow[i - wrow.size()].first, s.t, s.m);
  });

  std::ostringstream r;
  const double gamma = std::sqrt(s.t.t_collision() / s.t.slot);
  r << "reference-table check (gamma = " << util::fmt_g(gamma)
    << ", m = " << s.m << ")\n\n";
  r << "initial-window row (best w0 per pair count)\n";
  int wmatch = 0;
  for (std::size_t i = 0; i < wrow.size(); ++i) {
    const auto& [n, want] = wrow[i];
    const dscsma::WindowChoice& w = wc[i];
    const bool ok = w.chosen == want;
    wmatch += ok;
    r << "  n=" << n << "  relaxed=" << util::fmt_g(w.relaxed)
      << "  candidates={" << w.candidates.front() << ","
      << w.candidates.back() << "}  chosen=" << w.chosen
      << "  table=" << want << "  " << (ok ? "MATCH" : "MISMATCH");
    if (w.chosen_fixed_point != w.chosen)
      r << "  [exact fixed-point model prefers " << w.chosen_fixed_point
        << "]";
    r << '\n';
  }
  r << "\npair-count row (best n per initial window)\n";
  int nmatch = 0;
  for (std::size_t i = 0; i < nrow.size(); ++i) {
    const auto& [w0, want] = nrow[i];
    const dscsma::PairCountChoice& c = nc[i];
    const bool ok = c.chosen == want;
    nmatch += ok;
    r << "  w0=" << w0 << "  relaxed=" << util::fmt_g(c.relaxed)
      << "  chosen=" << c.chosen << "  table=" << want << "  "
      << (ok ? "MATCH" : "MISMATCH") << '\n';
  }
  r << "\nwindow row: " << wmatch << "/" << wrow.size()
    << " MATCH (hard expectation)\n";
  r << "pair-count row: " << nmatch << "/" << nrow.size()
    << " MATCH (soft check: the quadratic cost model and the full-model "
       "argmax are reported, not asserted; its relaxed root at w0=1024 is "
       "~161 against the table's 138)\n";

  Artifacts a;
  a.files.emplace_back("table5_report.txt", r.str());
  a.note = r.str();
  return a;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "dscsma experiment runner: analytic sweeps, slot-level simulation, "
      "parameter optimizers, and side-by-side comparisons, all emitting "
      "deterministic CSV"};
  app.require_subcommand(1);
  Flags f;

  CLI::App* an = app.add_subcommand(
      "analytic",
      "fixed-point collision probability, attempt rate, and throughput over "
      "the (n, w0) grid");
  CLI::App* sim = app.add_subcommand(
      "simulate",
      "slot-level Monte-Carlo with replications and 95% confidence "
      "intervals");
  CLI::App* cmp = app.add_subcommand(
      "compare",
      "analytic vs simulated vs baseline throughput, one row per grid "
      "point");
  CLI::App* ow = app.add_subcommand(
      "optimize-w0", "best power-of-two initial window per pair count");
  CLI::App* on =
      app.add_subcommand("optimize-n", "best pair count per initial window");
  CLI::App* om = app.add_subcommand(
      "optimize-map", "degree-balancing greedy partner-map reduction");
  CLI::App* t5 = app.add_subcommand(
      "reproduce-table5",
      "optimizer choices checked against the reference table rows");

  for (CLI::App* s : {an, sim, cmp, ow, on, om, t5}) {
    s->add_option("--config", f.config,
                  "config file (key = value lines, optional matrix block)");
    s->add_option("--out", f.out, "output directory (default: out)");
  }
  for (CLI::App* s : {an, sim, cmp, ow, on, t5}) {
    s->add_option("--timings", f.timings,
                  "frame-timings file (same grammar)");
    s->add_option("--m", f.m, "backoff stages");
  }
  for (CLI::App* s : {an, sim, cmp, on})
    s->add_option("--w0", f.w0,
                  "comma-separated initial windows (powers of two)");
  for (CLI::App* s : {an, sim, cmp, ow})
    s->add_option("--n", f.n, "comma-separated TCPair counts");
  for (CLI::App* s : {sim, cmp}) {
    s->add_option("--seed", f.seed, "base RNG seed");
    s->add_option("--reps", f.reps, "replications per grid point (>= 2)");
    s->add_option("--horizon", f.horizon,
                  "backoff epochs per replication (>= 1e4)");
  }
  sim->add_option("--mode", f.mode, "pairs | stations");
  sim->add_option("--refuse-prob", f.refuse_prob,
                  "handshake refusal probability (stations mode)");
  for (CLI::App* s : {sim, om})
    s->add_option("--map", f.map_file,
                  "partner-matrix file (matrix block, same grammar)");
  om->add_option("--target-n", f.target_n,
                 "counters to keep (two per TCPair, even)");
  om->add_option("--cap", f.cap, "frontier cap for tied minimizers");
  om->add_flag("--first-only", f.first_only,
               "follow a single greedy path (lexicographically smallest "
               "tied edge)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  try {
    const Config cfg = resolve_layers(sub, f);
    RunPlan plan = extract(cfg);
    EchoSections e;
    Artifacts a;
    if (name == "analytic") {
      e = {.w0 = true, .n = true, .timings = true};
      a = run_analytic(plan);
    } else if (name == "simulate") {
      check_simulation_plan(plan, /*has_mode=*/true);
      e = {.w0 = true, .n = true, .sim = true, .timings = true,
           .matrix = true};
      a = run_simulate(plan);
    } else if (name == "compare") {
      plan.mode = "pairs";  // the analytic model is pairs-mode
      check_simulation_plan(plan, /*has_mode=*/false);
      e = {.w0 = true, .n = true, .sim = true, .timings = true};
      a = run_compare(plan);
    } else if (name == "optimize-w0") {
      e = {.n = true, .timings = true};
      a = run_optimize_w0(plan);
    } else if (name == "optimize-n") {
      e = {.w0 = true, .timings = true};
      a = run_optimize_n(plan);
    } else if (name == "optimize-map") {
      e = {.map_search = true, .matrix = true};
      a = run_optimize_map(plan);
    } else {  // reproduce-table5
      e = {.timings = true};
      a = run_table5(plan);
    }
    const std::string sidecar = echo_config(name, plan, e);
    write_all(plan, sidecar, std::move(a));
    return 0;
  } catch (const dscsma::error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == errc::config_error ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
