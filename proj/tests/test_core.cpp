#include "dscsma/core.hpp"

#include <gtest/gtest.h>

namespace {

using dscsma::errc;
using dscsma::error;
using dscsma::FrameTimings;
using dscsma::PartnerMap;
using dscsma::ProtocolParams;

// Convenience: run `fn`, expect a dscsma::error with the given code.
template <typename Fn>
void expect_error(errc code, Fn&& fn) {
  try {
    fn();
    FAIL() << "expected error " << dscsma::errc_name(code);
  } catch (const error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

// --------------------------------------------------------------------------
// ProtocolParams

TEST(ProtocolParams, WindowLadderDoublesAndSaturates) {
  const ProtocolParams p{.n_pairs = 3, .w0 = 2, .stages = 3};
  EXPECT_EQ(p.window(0), 2);
  EXPECT_EQ(p.window(1), 4);
  EXPECT_EQ(p.window(2), 8);
  EXPECT_EQ(p.window(5), 8);  // saturates at the top stage
  EXPECT_EQ(p.w_max(), 8);
}

TEST(ProtocolParams, ValidateAcceptsReferencePoint) {
  dscsma::validate(ProtocolParams{.n_pairs = 10, .w0 = 16, .stages = 6});
}

TEST(ProtocolParams, ValidateRejectsBadValues) {
  expect_error(errc::invalid_params, [] {
    dscsma::validate(ProtocolParams{.n_pairs = 0, .w0 = 16, .stages = 6});
  });
  expect_error(errc::invalid_params, [] {  // not a power of two
    dscsma::validate(ProtocolParams{.n_pairs = 1, .w0 = 3, .stages = 6});
  });
  expect_error(errc::invalid_params, [] {  // too small
    dscsma::validate(ProtocolParams{.n_pairs = 1, .w0 = 1, .stages = 6});
  });
  expect_error(errc::invalid_params, [] {
    dscsma::validate(ProtocolParams{.n_pairs = 1, .w0 = 16, .stages = 0});
  });
}

TEST(ProtocolParams, SingleStageOnlyForOracleUse) {
  const ProtocolParams p{.n_pairs = 1, .w0 = 2, .stages = 1};
  expect_error(errc::invalid_params, [&] { dscsma::validate(p); });
  dscsma::validate(p, /*allow_single_stage=*/true);  // chain-oracle mode
}

// --------------------------------------------------------------------------
// FrameTimings

TEST(FrameTimings, DefaultChannelTimes) {
  const FrameTimings t;
  EXPECT_DOUBLE_EQ(t.t_success(), 9268.0);
  EXPECT_DOUBLE_EQ(t.t_collision(), 288.0);
  EXPECT_DOUBLE_EQ(t.t_success_baseline(), 9040.0);
  EXPECT_DOUBLE_EQ(t.t_collision_baseline(), 288.0);
  EXPECT_DOUBLE_EQ(t.slot, 50.0);
  t.validate();
}

TEST(FrameTimings, CollisionTimeIsRtsPlusDifs) {
  FrameTimings t;
  t.rts = 1;
  t.pta = t.sak = t.dftrigger = t.ack = 0;
  t.sifs = 0;
  t.difs = 1;
  t.phy_header = t.mac_header = t.payload = 0;
  EXPECT_DOUBLE_EQ(t.t_collision(), 2.0);
}

TEST(FrameTimings, AckShiftMovesSuccessTimeExactly) {
  FrameTimings t;
  const double base = t.t_success();
  t.ack += 10;
  EXPECT_DOUBLE_EQ(t.t_success(), base + 10.0);
  EXPECT_DOUBLE_EQ(t.t_collision(), 288.0);  // unchanged
}

TEST(FrameTimings, ChannelTimesMonotoneInEveryField) {
  const FrameTimings base;
  auto bump = [](FrameTimings t, int field) {
    double* fields[] = {&t.rts,  &t.pta,        &t.sak,        &t.dftrigger,
                        &t.ack,  &t.sifs,       &t.difs,       &t.phy_header,
                        &t.mac_header, &t.payload};
    *fields[field] += 7.0;
    return t;
  };
  for (int f = 0; f < 10; ++f) {
    const FrameTimings t = bump(base, f);
    EXPECT_GE(t.t_success(), base.t_success()) << "field " << f;
    EXPECT_GE(t.t_collision(), base.t_collision()) << "field " << f;
    EXPECT_GE(t.t_success_baseline(), base.t_success_baseline())
        << "field " << f;
  }
}

TEST(FrameTimings, ValidateRejectsNegativeAndZeroSlot) {
  FrameTimings t;
  t.sifs = -1;
  expect_error(errc::invalid_params, [&] { t.validate(); });
  FrameTimings u;
  u.slot = 0;
  expect_error(errc::invalid_params, [&] { u.validate(); });
}

// --------------------------------------------------------------------------
// PartnerMap

// Five stations, eight TCPairs: 1-2, 1-4, 1-5, 2-3, 2-4, 2-5, 3-4, 3-5.
// Sixteen counters in all, with per-station counts (3, 4, 3, 3, 3).
PartnerMap example_map() {
  return PartnerMap({{0, 1, 0, 1, 1},
                     {1, 0, 1, 1, 1},
                     {0, 1, 0, 1, 1},
                     {1, 1, 1, 0, 0},
                     {1, 1, 1, 0, 0}});
}

TEST(PartnerMap, ValidationErrors) {
  expect_error(errc::asymmetric_matrix, [] {  // not square
    PartnerMap({{0, 1}, {1, 0}, {0, 0}});
  });
  expect_error(errc::asymmetric_matrix, [] {
    PartnerMap({{0, 1}, {0, 0}});
  });
  expect_error(errc::nonzero_diagonal, [] {
    PartnerMap({{1, 1}, {1, 0}});
  });
  expect_error(errc::non_binary_entry, [] {
    PartnerMap({{0, 2}, {2, 0}});
  });
}

TEST(PartnerMap, DegreesPairsAndAdjacency) {
  const PartnerMap m = example_map();
  EXPECT_EQ(m.n_stations(), 5);
  EXPECT_EQ(m.n_pairs(), 8);
  EXPECT_EQ(m.degree(1), 3);
  EXPECT_EQ(m.degree(2), 4);
  EXPECT_EQ(m.degree(3), 3);
  EXPECT_EQ(m.degree(4), 3);
  EXPECT_EQ(m.degree(5), 3);
  const std::vector<std::pair<int, int>> want = {
      {1, 2}, {1, 4}, {1, 5}, {2, 3}, {2, 4}, {2, 5}, {3, 4}, {3, 5}};
  EXPECT_EQ(m.pairs(), want);
  EXPECT_EQ(m.partners_of(2), (std::vector<int>{1, 3, 4, 5}));
  EXPECT_EQ(m.partner_at(3, 2), 4);
}

TEST(PartnerMap, PartnerOfCounterSlots) {
  const PartnerMap m = example_map();
  const auto [a, b] = m.partner_of(1, 2);
  EXPECT_EQ(a, (PartnerMap::CounterRef{1, 1}));
  EXPECT_EQ(b, (PartnerMap::CounterRef{2, 1}));
  const auto [c, d] = m.partner_of(3, 4);
  EXPECT_EQ(c, (PartnerMap::CounterRef{3, 2}));
  EXPECT_EQ(d, (PartnerMap::CounterRef{4, 3}));
}

TEST(PartnerMap, PartnerOfIsAnInvolution) {
  const PartnerMap m = example_map();
  for (const auto& [a, b] : m.pairs()) {
    const auto fwd = m.partner_of(a, b);
    const auto rev = m.partner_of(b, a);
    EXPECT_EQ(fwd.first, rev.second);
    EXPECT_EQ(fwd.second, rev.first);
    // and the slot really maps back to the partner station
    EXPECT_EQ(m.partner_at(fwd.first.station, fwd.first.counter), b);
    EXPECT_EQ(m.partner_at(fwd.second.station, fwd.second.counter), a);
  }
}

TEST(PartnerMap, NotPartnersAndRangeErrors) {
  const PartnerMap m = example_map();
  expect_error(errc::not_partners, [&] { m.partner_of(1, 3); });
  expect_error(errc::not_partners, [&] { m.partner_of(4, 5); });
  expect_error(errc::not_partners, [&] { m.partner_of(2, 2); });
  expect_error(errc::invalid_params, [&] { m.partner_of(0, 1); });
  expect_error(errc::invalid_params, [&] { m.partner_of(1, 6); });
}

TEST(PartnerMap, DisjointPairsHelper) {
  const PartnerMap m = PartnerMap::disjoint_pairs(3);
  EXPECT_EQ(m.n_stations(), 6);
  EXPECT_EQ(m.n_pairs(), 3);
  const std::vector<std::pair<int, int>> want = {{1, 2}, {3, 4}, {5, 6}};
  EXPECT_EQ(m.pairs(), want);
  for (int s = 1; s <= 6; ++s) EXPECT_EQ(m.degree(s), 1);
}

}  // namespace
