#pragma once
// Exact finite-state oracle for one TCPair's backoff process.
//
// A state (m, n, i, j) holds the two stations' backoff stages and counters:
// m, n in [0, stages), i in [0, W_m), j in [0, W_n). One backoff epoch moves
// the pair as follows, with p the (externally fixed) probability that an
// attempt collides with some other pair:
//
//   * i > 0 and j > 0:  both counters decrement (probability 1).
//   * exactly one counter is zero (say i == 0, j >= 1): that station
//     attempts.
//       - success (1-p): the handshake completes; both stages reset to 0 and
//         both counters are redrawn uniformly on [0, W0)^2.
//       - collision (p): the attempting station advances its stage
//         (m -> min(m+1, stages-1)) and redraws its counter on the new
//         window; the partner's counter still decrements (j -> j-1).
//   * i == 0 and j == 0: the two RTSs of the pair collide with each other
//     deterministically; both stages advance and both counters are redrawn
//     on their new windows.
//
// The oracle enumerates every transition explicitly and solves pi = pi * P
// as a sparse linear system; it is deliberately brute-force so the analytic
// engine can be validated against it state by state. Intended for
// desk-scale parameters (state count (sum of windows)^2).

#include <Eigen/Sparse>

#include <algorithm>
#include <ostream>
#include <string>
#include <vector>

#include "dscsma/core.hpp"
#include "dscsma/util.hpp"

namespace dscsma {

class ChainOracle {
 public:
  struct State {
    int m = 0, n = 0, i = 0, j = 0;
    friend bool operator==(const State&, const State&) = default;
  };

  // stages == 1 (no doubling at all) is accepted: useful for hand checks.
  ChainOracle(int w0, int stages, double p) : w0_(w0), stages_(stages), p_(p) {
    validate(ProtocolParams{.n_pairs = 1, .w0 = w0, .stages = stages},
             /*allow_single_stage=*/true);
    require(p >= 0.0 && p < 1.0, errc::invalid_probability,
            "collision probability must lie in [0, 1)");
    win_.resize(stages_);
    off_.assign(stages_ + 1, 0);
    for (int s = 0; s < stages_; ++s) {
      win_[s] = w0_ << s;
      off_[s + 1] = off_[s] + win_[s];
    }
    c_ = off_[stages_];
    const long long ns = static_cast<long long>(c_) * c_;
    require(ns <= kMaxStates, errc::too_large,
            "chain has " + std::to_string(ns) + " states; the oracle caps at " +
                std::to_string(kMaxStates));
    n_states_ = static_cast<int>(ns);
  }

  int w0() const { return w0_; }
  int stages() const { return stages_; }
  double p() const { return p_; }
  int n_states() const { return n_states_; }
  int window(int stage) const { return win_[stage]; }

  int index_of(const State& s) const {
    return (off_[s.m] + s.i) * c_ + (off_[s.n] + s.j);
  }

  State state_at(int idx) const {
    const int row = idx / c_, col = idx % c_;
    State s;
    s.m = stage_of(row);
    s.i = row - off_[s.m];
    s.n = stage_of(col);
    s.j = col - off_[s.n];
    return s;
  }

  // Calls f(target_index, probability) for every outgoing transition of s.
  // Probabilities over targets sum to 1 (distinct targets never repeat).
  template <typename F>
  void for_each_transition(const State& s, F&& f) const {
    const double q = 1.0 - p_;
    if (s.i > 0 && s.j > 0) {
      f(index_of({s.m, s.n, s.i - 1, s.j - 1}), 1.0);
      return;
    }
    if (s.i == 0 && s.j > 0) {
      const double ps = q / static_cast<double>(w0_ * w0_);
      for (int i2 = 0; i2 < w0_; ++i2)
        for (int j2 = 0; j2 < w0_; ++j2) f(index_of({0, 0, i2, j2}), ps);
      if (p_ > 0.0) {
        const int mu = std::min(s.m + 1, stages_ - 1);
        const double pc = p_ / win_[mu];
        for (int i2 = 0; i2 < win_[mu]; ++i2)
          f(index_of({mu, s.n, i2, s.j - 1}), pc);
      }
      return;
    }
    if (s.i > 0 && s.j == 0) {
      const double ps = q / static_cast<double>(w0_ * w0_);
      for (int i2 = 0; i2 < w0_; ++i2)
        for (int j2 = 0; j2 < w0_; ++j2) f(index_of({0, 0, i2, j2}), ps);
      if (p_ > 0.0) {
        const int nu = std::min(s.n + 1, stages_ - 1);
        const double pc = p_ / win_[nu];
        for (int j2 = 0; j2 < win_[nu]; ++j2)
          f(index_of({s.m, nu, s.i - 1, j2}), pc);
      }
      return;
    }
    // i == j == 0: the pair's own RTSs collide with each other.
    const int mu = std::min(s.m + 1, stages_ - 1);
    const int nu = std::min(s.n + 1, stages_ - 1);
    const double pb = 1.0 / (static_cast<double>(win_[mu]) * win_[nu]);
    for (int i2 = 0; i2 < win_[mu]; ++i2)
      for (int j2 = 0; j2 < win_[nu]; ++j2) f(index_of({mu, nu, i2, j2}), pb);
  }

  // Stationary distribution, indexed by index_of(). Computed on first use.
  const std::vector<double>& stationary() const {
    if (!solved_) solve();
    return pi_;
  }

  double pi(int m, int n, int i, int j) const {
    return stationary()[index_of({m, n, i, j})];
  }

  // Probability that the pair makes a proper (single-RTS) attempt in an
  // epoch: exactly one counter at zero. The both-zero corner is the pair's
  // internal collision and is not an attempt on the shared channel.
  double eta() const {
    const auto& v = stationary();
    double e = 0.0;
    for (int m = 0; m < stages_; ++m)
      for (int n = 0; n < stages_; ++n) {
        for (int i = 1; i < win_[m]; ++i) e += v[index_of({m, n, i, 0})];
        for (int j = 1; j < win_[n]; ++j) e += v[index_of({m, n, 0, j})];
      }
    return e;
  }

  double eps(int m, int n) const { return pi(m, n, 0, 0); }

  // Boundary slices of a stage block: row[j] = pi(m,n,0,j) (length W_n),
  // col[i] = pi(m,n,i,0) (length W_m). Entry 0 of both is eps(m,n).
  std::vector<double> boundary_row(int m, int n) const {
    std::vector<double> v(win_[n]);
    for (int j = 0; j < win_[n]; ++j) v[j] = pi(m, n, 0, j);
    return v;
  }
  std::vector<double> boundary_col(int m, int n) const {
    std::vector<double> v(win_[m]);
    for (int i = 0; i < win_[m]; ++i) v[i] = pi(m, n, i, 0);
    return v;
  }

  double block_mass(int m, int n) const {
    double s = 0.0;
    for (int i = 0; i < win_[m]; ++i)
      for (int j = 0; j < win_[n]; ++j) s += pi(m, n, i, j);
    return s;
  }

  // max_s |1 - sum_t P(s -> t)|: the transition table is a distribution.
  double max_row_sum_error() const {
    double worst = 0.0;
    for (int s = 0; s < n_states_; ++s) {
      double sum = 0.0;
      for_each_transition(state_at(s), [&](int, double w) { sum += w; });
      worst = std::max(worst, std::abs(1.0 - sum));
    }
    return worst;
  }

  // max_t |pi(t) - sum_s pi(s) P(s -> t)|: global balance of the solution.
  double max_balance_residual() const {
    const auto& v = stationary();
    std::vector<double> in(n_states_, 0.0);
    for (int s = 0; s < n_states_; ++s)
      for_each_transition(state_at(s),
                          [&](int t, double w) { in[t] += v[s] * w; });
    double worst = 0.0;
    for (int t = 0; t < n_states_; ++t)
      worst = std::max(worst, std::abs(in[t] - v[t]));
    return worst;
  }

  // One row per state, index order: m,n,i,j,prob.
  void write_csv(std::ostream& os) const {
    const auto& v = stationary();
    os << "m,n,i,j,prob\n";
    for (int s = 0; s < n_states_; ++s) {
      const State st = state_at(s);
      os << st.m << ',' << st.n << ',' << st.i << ',' << st.j << ','
         << util::fmt_g(v[s]) << '\n';
    }
  }

 private:
  static constexpr long long kMaxStates = 200000;

  int stage_of(int flat) const {
    int s = 0;
    while (flat >= off_[s + 1]) ++s;
    return s;
  }

  void solve() const {
    const int n = n_states_, last = n - 1;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(n) * 2);
    for (int s = 0; s < n; ++s) {
      for_each_transition(state_at(s), [&](int t, double w) {
        if (t != last) trips.emplace_back(t, s, w);
      });
      if (s != last) trips.emplace_back(s, s, -1.0);
    }
    // Replace the last balance equation (redundant: columns of P^T - I sum
    // to 0) with the normalization sum(pi) = 1.
    for (int s = 0; s < n; ++s) trips.emplace_back(last, s, 1.0);

    Eigen::SparseMatrix<double> a(n, n);
    a.setFromTriplets(trips.begin(), trips.end());
    a.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(a);
    lu.factorize(a);
    require(lu.info() == Eigen::Success, errc::singular_system,
            "stationary system did not factorize");
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b[last] = 1.0;
    const Eigen::VectorXd x = lu.solve(b);
    require(lu.info() == Eigen::Success, errc::singular_system,
            "stationary solve failed");
    require(x.minCoeff() > -1e-9, errc::singular_system,
            "stationary solve produced negative mass");
    double sum = 0.0;
    pi_.assign(n, 0.0);
    for (int s = 0; s < n; ++s) {
      pi_[s] = std::max(x[s], 0.0);
      sum += pi_[s];
    }
    for (double& v : pi_) v /= sum;
    solved_ = true;
  }

  int w0_, stages_;
  double p_;
  std::vector<int> win_, off_;
  int c_ = 0, n_states_ = 0;
  mutable std::vector<double> pi_;
  mutable bool solved_ = false;
};

}  // namespace dscsma
