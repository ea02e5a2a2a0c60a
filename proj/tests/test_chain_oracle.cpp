#include "dscsma/chain_oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "dscsma/rng.hpp"

namespace {

using dscsma::ChainOracle;
using dscsma::errc;
using dscsma::error;

// --------------------------------------------------------------------------
// Construction / guards

TEST(ChainOracle, RejectsBadInputs) {
  EXPECT_THROW(ChainOracle(2, 2, 1.0), error);
  EXPECT_THROW(ChainOracle(2, 2, -0.1), error);
  EXPECT_THROW(ChainOracle(3, 2, 0.5), error);  // w0 not a power of two
  try {
    ChainOracle(512, 3, 0.5);  // (512+1024+2048)^2 = 12.8M states
    FAIL() << "expected too_large";
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::too_large);
  }
}

TEST(ChainOracle, IndexingRoundTrips) {
  const ChainOracle o(2, 3, 0.3);
  EXPECT_EQ(o.n_states(), 14 * 14);  // windows 2,4,8
  for (int s = 0; s < o.n_states(); ++s) {
    const auto st = o.state_at(s);
    EXPECT_EQ(o.index_of(st), s);
    EXPECT_LT(st.i, o.window(st.m));
    EXPECT_LT(st.j, o.window(st.n));
  }
}

// --------------------------------------------------------------------------
// Transition table

TEST(ChainOracle, RowsAreStochastic) {
  for (const auto& [w0, m, p] :
       std::vector<std::tuple<int, int, double>>{{2, 3, 0.37},
                                                 {4, 2, 0.5},
                                                 {8, 3, 0.2},
                                                 {2, 1, 0.9},
                                                 {4, 4, 0.0}}) {
    const ChainOracle o(w0, m, p);
    EXPECT_LE(o.max_row_sum_error(), 1e-12) << w0 << " " << m << " " << p;
  }
}

// Every outgoing edge of state (0,0,0,1) at w0=2, stages=2, p=0.5:
// a success (prob 1/2) lands uniformly on the 2x2 base block, a collision
// (prob 1/2) advances the attempting station to stage 1 (window 4) while the
// partner's counter decrements to 0.
TEST(ChainOracle, TransitionRowFromBoundaryState) {
  const ChainOracle o(2, 2, 0.5);
  std::map<int, double> row;
  o.for_each_transition({0, 0, 0, 1},
                        [&](int t, double w) { row[t] += w; });
  std::map<int, double> want;
  for (int i2 = 0; i2 < 2; ++i2)
    for (int j2 = 0; j2 < 2; ++j2)
      want[o.index_of({0, 0, i2, j2})] += 0.5 / 4;
  for (int i2 = 0; i2 < 4; ++i2)
    want[o.index_of({1, 0, i2, 0})] += 0.5 / 4;
  ASSERT_EQ(row.size(), want.size());
  for (const auto& [t, w] : want) {
    ASSERT_TRUE(row.count(t));
    EXPECT_DOUBLE_EQ(row[t], w);
  }
}

// --------------------------------------------------------------------------
// Stationary distribution: exact hand-solved single-stage chains
//
// stages=1, w0=2 has four states (i,j) in {0,1}^2. Solving the balance
// equations by hand:
//   p = 0:   pi(0,0) = 2/5,  pi(0,1) = pi(1,0) = pi(1,1) = 1/5,  eta = 2/5
//   p = 1/2: pi(0,0) = 8/19, pi(0,1) = pi(1,0) = 4/19, pi(1,1) = 3/19,
//            eta = 8/19

TEST(ChainOracle, SingleStageHandSolvedAtPZero) {
  const ChainOracle o(2, 1, 0.0);
  EXPECT_NEAR(o.pi(0, 0, 0, 0), 0.4, 1e-14);
  EXPECT_NEAR(o.pi(0, 0, 0, 1), 0.2, 1e-14);
  EXPECT_NEAR(o.pi(0, 0, 1, 0), 0.2, 1e-14);
  EXPECT_NEAR(o.pi(0, 0, 1, 1), 0.2, 1e-14);
  EXPECT_NEAR(o.eta(), 0.4, 1e-14);
}

TEST(ChainOracle, SingleStageHandSolvedAtPHalf) {
  const ChainOracle o(2, 1, 0.5);
  EXPECT_NEAR(o.pi(0, 0, 0, 0), 8.0 / 19, 1e-14);
  EXPECT_NEAR(o.pi(0, 0, 0, 1), 4.0 / 19, 1e-14);
  EXPECT_NEAR(o.pi(0, 0, 1, 0), 4.0 / 19, 1e-14);
  EXPECT_NEAR(o.pi(0, 0, 1, 1), 3.0 / 19, 1e-14);
  EXPECT_NEAR(o.eta(), 8.0 / 19, 1e-14);
}

TEST(ChainOracle, StationaryIsADistributionWithTinyResidual) {
  for (const auto& [w0, m, p] :
       std::vector<std::tuple<int, int, double>>{{2, 3, 0.37},
                                                 {4, 3, 0.15},
                                                 {8, 2, 0.6},
                                                 {4, 4, 0.45}}) {
    const ChainOracle o(w0, m, p);
    const auto& pi = o.stationary();
    double sum = 0.0, mass = 0.0;
    for (double v : pi) {
      ASSERT_GE(v, 0.0);
      sum += v;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) mass += o.block_mass(a, b);
    EXPECT_NEAR(mass, 1.0, 1e-12);
    EXPECT_LE(o.max_balance_residual(), 1e-12) << w0 << " " << m << " " << p;
    EXPECT_GT(o.eta(), 0.0);
    EXPECT_LT(o.eta(), 1.0);
  }
}

// With p = 0 an attempt never collides with another pair, so mixed-stage
// blocks (m != n) can only be entered through such collisions and must carry
// zero stationary mass; the pair still climbs the diagonal through its own
// both-zero corner.
TEST(ChainOracle, PZeroLeavesOffDiagonalBlocksEmpty) {
  const ChainOracle o(2, 3, 0.0);
  for (int m = 0; m < 3; ++m)
    for (int n = 0; n < 3; ++n) {
      if (m == n) {
        EXPECT_GT(o.block_mass(m, n), 0.0) << m << "," << n;
      } else {
        EXPECT_NEAR(o.block_mass(m, n), 0.0, 1e-14) << m << "," << n;
      }
    }
  EXPECT_GT(o.eps(1, 1), 0.0);  // corner of the climbed block is visited
}

// --------------------------------------------------------------------------
// Independent Monte Carlo cross-check: a random walk written directly from
// the transition rules (not via for_each_transition) must reproduce the
// solved distribution.

TEST(ChainOracle, MonteCarloWalkMatchesStationary) {
  const int w0 = 2, stages = 3;
  const double p = 0.3;
  const ChainOracle o(w0, stages, p);
  const auto& pi = o.stationary();

  dscsma::Xoshiro256StarStar rng(20260815);
  auto win = [&](int s) { return w0 << s; };
  int m = 0, n = 0, i = 0, j = 0;
  std::vector<long long> counts(o.n_states(), 0);
  const long long burn = 100000, steps = 2000000;
  for (long long t = 0; t < burn + steps; ++t) {
    if (t >= burn) ++counts[o.index_of({m, n, i, j})];
    if (i > 0 && j > 0) {
      --i;
      --j;
    } else if (i == 0 && j == 0) {
      m = std::min(m + 1, stages - 1);
      n = std::min(n + 1, stages - 1);
      i = static_cast<int>(rng.uniform_pow2(win(m)));
      j = static_cast<int>(rng.uniform_pow2(win(n)));
    } else if (i == 0) {
      if (rng.next_double() < p) {
        m = std::min(m + 1, stages - 1);
        i = static_cast<int>(rng.uniform_pow2(win(m)));
        --j;
      } else {
        m = n = 0;
        i = static_cast<int>(rng.uniform_pow2(w0));
        j = static_cast<int>(rng.uniform_pow2(w0));
      }
    } else {
      if (rng.next_double() < p) {
        n = std::min(n + 1, stages - 1);
        j = static_cast<int>(rng.uniform_pow2(win(n)));
        --i;
      } else {
        m = n = 0;
        i = static_cast<int>(rng.uniform_pow2(w0));
        j = static_cast<int>(rng.uniform_pow2(w0));
      }
    }
  }
  double worst = 0.0;
  for (int s = 0; s < o.n_states(); ++s) {
    const double freq = static_cast<double>(counts[s]) / steps;
    worst = std::max(worst, std::abs(freq - pi[s]));
  }
  EXPECT_LE(worst, 0.0025);
}

// --------------------------------------------------------------------------
// CSV dump

TEST(ChainOracle, CsvDump) {
  const ChainOracle o(2, 1, 0.0);
  std::ostringstream os;
  o.write_csv(os);
  EXPECT_EQ(os.str(),
            "m,n,i,j,prob\n"
            "0,0,0,0,0.4\n"
            "0,0,0,1,0.2\n"
            "0,0,1,0,0.2\n"
            "0,0,1,1,0.2\n");
}

}  // namespace
