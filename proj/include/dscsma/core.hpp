#pragma once
// Core types for the double-station CSMA/CA model: error codes, backoff
// parameters, frame timings, and the station partner map.
//
// Everything here is immutable after construction. The heavier engines
// (analytic solver, exact-chain oracle, simulator) take const references to
// these types and may be driven from several worker threads at once.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dscsma {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

enum class errc {
  invalid_params,
  invalid_probability,
  asymmetric_matrix,
  nonzero_diagonal,
  non_binary_entry,
  not_partners,
  singular_system,
  no_convergence,
  no_sign_change,
  degenerate_eta,
  non_positive_discriminant,
  no_positive_root,
  infeasible_target,
  empty_frontier,
  too_large,
  config_error,
  io_error,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::invalid_params: return "invalid_params";
    case errc::invalid_probability: return "invalid_probability";
    case errc::asymmetric_matrix: return "asymmetric_matrix";
    case errc::nonzero_diagonal: return "nonzero_diagonal";
    case errc::non_binary_entry: return "non_binary_entry";
    case errc::not_partners: return "not_partners";
    case errc::singular_system: return "singular_system";
    case errc::no_convergence: return "no_convergence";
    case errc::no_sign_change: return "no_sign_change";
    case errc::degenerate_eta: return "degenerate_eta";
    case errc::non_positive_discriminant: return "non_positive_discriminant";
    case errc::no_positive_root: return "no_positive_root";
    case errc::infeasible_target: return "infeasible_target";
    case errc::empty_frontier: return "empty_frontier";
    case errc::too_large: return "too_large";
    case errc::config_error: return "config_error";
    case errc::io_error: return "io_error";
  }
  return "unknown";
}

// Single exception type for the whole library. code() carries the
// machine-readable reason; what() is "<code name>: <detail>".
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) {
  throw error(code, what);
}

inline void require(bool ok, errc code, const std::string& what) {
  if (!ok) fail(code, what);
}

// ---------------------------------------------------------------------------
// Backoff / population parameters
// ---------------------------------------------------------------------------

inline bool is_pow2(int v) { return v >= 1 && (v & (v - 1)) == 0; }

// Binary-exponential backoff ladder shared by every engine. Stage s uses the
// contention window W_s = w0 * 2^min(s, stages-1): the window doubles after
// every collision until it saturates at w_max = w0 * 2^(stages-1).
struct ProtocolParams {
  int n_pairs = 1;  // N: TCPairs contending on the channel
  int w0 = 16;      // base contention window (power of two, >= 2)
  int stages = 6;   // M: backoff stages; >= 2 for the protocol proper
                    // (== 1 is allowed only by the exact-chain tools)

  int window(int stage) const { return w0 << std::min(stage, stages - 1); }
  int w_max() const { return window(stages - 1); }
};

// Throws errc::invalid_params on out-of-range values. The single-stage
// ladder (stages == 1: no doubling at all) is accepted only when
// allow_single_stage is set; it exists so the exact chain can be checked
// against hand calculations, and is rejected everywhere else.
inline void validate(const ProtocolParams& p, bool allow_single_stage = false) {
  require(p.n_pairs >= 1, errc::invalid_params, "n_pairs must be >= 1");
  require(p.w0 >= 2 && is_pow2(p.w0), errc::invalid_params,
          "w0 must be a power of two >= 2");
  const int min_stages = allow_single_stage ? 1 : 2;
  require(p.stages >= min_stages, errc::invalid_params,
          allow_single_stage ? "stages must be >= 1" : "stages must be >= 2");
  require(p.stages <= 24, errc::invalid_params, "stages must be <= 24");
  require((static_cast<long long>(p.w0) << (p.stages - 1)) <= (1 << 24),
          errc::invalid_params, "w_max = w0 * 2^(stages-1) must be <= 2^24");
}

// ---------------------------------------------------------------------------
// Frame timings
// ---------------------------------------------------------------------------

// Frame and inter-frame durations in symbol times. The defaults are the
// reference operating point used throughout the tests and docs.
struct FrameTimings {
  double rts = 160;
  double pta = 72;        // partner-transmission announcement
  double sak = 36;        // sync acknowledgement
  double dftrigger = 36;  // data-frame trigger
  double ack = 112;
  double sifs = 28;
  double difs = 128;
  double phy_header = 128;
  double mac_header = 272;
  double payload = 8184;  // L_p: payload symbols per station data frame
  double slot = 50;       // tau: idle backoff slot

  // Channel occupancy of one successful double-station exchange:
  // RTS SIFS PTA SIFS SAK SIFS DFTrigger SIFS (superimposed data) SIFS ACK
  // DIFS. The data frame carries one PHY + MAC header and both stations'
  // payloads superimposed in the same symbols.
  double t_success() const {
    return rts + sifs + pta + sifs + sak + sifs + dftrigger + sifs +
           phy_header + mac_header + payload + sifs + ack + difs;
  }

  // Colliding RTSs are abandoned after a DIFS.
  double t_collision() const { return rts + difs; }

  // Conventional single-station RTS exchange used as the comparison
  // baseline: same headers, IFSs and payload, no partner handshake.
  double t_success_baseline() const {
    return rts + sifs + phy_header + mac_header + payload + sifs + ack + difs;
  }
  double t_collision_baseline() const { return rts + difs; }

  void validate() const {
    const double fields[] = {rts,  pta,  sak,        dftrigger,  ack,     sifs,
                             difs, phy_header, mac_header, payload, slot};
    for (double f : fields)
      require(f >= 0.0, errc::invalid_params, "timings must be non-negative");
    require(slot > 0.0, errc::invalid_params, "slot time must be positive");
  }
};

// ---------------------------------------------------------------------------
// Partner map
// ---------------------------------------------------------------------------

// Which stations keep a shared time counter. phi[a-1][b-1] == 1 means
// stations a and b (ids are 1-based at every interface) maintain a TCPair;
// the matrix must be 0/1, symmetric, with a zero diagonal. Each station
// numbers its counters 1..degree in ascending order of partner id.
class PartnerMap {
 public:
  struct CounterRef {
    int station = 0;  // 1-based station id
    int counter = 0;  // 1-based counter slot on that station
    friend bool operator==(const CounterRef&, const CounterRef&) = default;
  };

  explicit PartnerMap(std::vector<std::vector<int>> phi) : phi_(std::move(phi)) {
    const std::size_t s = phi_.size();
    for (const auto& row : phi_)
      require(row.size() == s, errc::asymmetric_matrix, "matrix is not square");
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < s; ++j)
        require(phi_[i][j] == 0 || phi_[i][j] == 1, errc::non_binary_entry,
                "matrix entries must be 0 or 1");
    for (std::size_t i = 0; i < s; ++i)
      require(phi_[i][i] == 0, errc::nonzero_diagonal,
              "matrix diagonal must be zero");
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = i + 1; j < s; ++j)
        require(phi_[i][j] == phi_[j][i], errc::asymmetric_matrix,
                "matrix must be symmetric");
    adj_.resize(s);
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < s; ++j)
        if (phi_[i][j]) adj_[i].push_back(static_cast<int>(j) + 1);
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = i + 1; j < s; ++j)
        if (phi_[i][j])
          edges_.emplace_back(static_cast<int>(i) + 1, static_cast<int>(j) + 1);
  }

  // n disjoint TCPairs on 2n stations: 1-2, 3-4, ...
  static PartnerMap disjoint_pairs(int n_pairs) {
    require(n_pairs >= 1, errc::invalid_params, "n_pairs must be >= 1");
    std::vector<std::vector<int>> phi(2 * n_pairs,
                                      std::vector<int>(2 * n_pairs, 0));
    for (int k = 0; k < n_pairs; ++k) {
      phi[2 * k][2 * k + 1] = 1;
      phi[2 * k + 1][2 * k] = 1;
    }
    return PartnerMap(std::move(phi));
  }

  int n_stations() const { return static_cast<int>(phi_.size()); }
  int n_pairs() const { return static_cast<int>(edges_.size()); }

  int degree(int station) const {
    check(station);
    return static_cast<int>(adj_[station - 1].size());
  }

  bool partners(int a, int b) const {
    check(a);
    check(b);
    return phi_[a - 1][b - 1] == 1;
  }

  // All TCPairs as (a, b) with a < b, in lexicographic order.
  const std::vector<std::pair<int, int>>& pairs() const { return edges_; }

  // Partner ids of one station, ascending (counter slot k serves the k-th).
  const std::vector<int>& partners_of(int station) const {
    check(station);
    return adj_[station - 1];
  }

  int partner_at(int station, int counter) const {
    check(station);
    require(counter >= 1 && counter <= degree(station), errc::invalid_params,
            "counter slot out of range");
    return adj_[station - 1][counter - 1];
  }

  // The two counter slots backing the TCPair of stations a and b. Station
  // a's slot is the rank of b among a's partners, and vice versa; swapping
  // the arguments swaps the result.
  std::pair<CounterRef, CounterRef> partner_of(int a, int b) const {
    check(a);
    check(b);
    require(partners(a, b), errc::not_partners,
            "stations " + std::to_string(a) + " and " + std::to_string(b) +
                " do not share a TCPair");
    return {CounterRef{a, counter_index(a, b)},
            CounterRef{b, counter_index(b, a)}};
  }

  const std::vector<std::vector<int>>& matrix() const { return phi_; }

 private:
  int counter_index(int a, int b) const {
    const auto& v = adj_[a - 1];
    return static_cast<int>(std::upper_bound(v.begin(), v.end(), b) -
                            v.begin());
  }
  void check(int station) const {
    require(station >= 1 && station <= n_stations(), errc::invalid_params,
            "station id out of range");
  }

  std::vector<std::vector<int>> phi_;
  std::vector<std::vector<int>> adj_;  // ascending partner ids per station
  std::vector<std::pair<int, int>> edges_;
};

}  // namespace dscsma
