#include "dscsma/config.hpp"

#include <gtest/gtest.h>

#include <string>

namespace {

using dscsma::Config;
using dscsma::errc;
using dscsma::error;
using dscsma::parse_config_string;

template <typename Fn>
void expect_config_error(Fn&& fn) {
  try {
    fn();
    FAIL() << "expected config_error";
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::config_error) << e.what();
  }
}

TEST(Config, ParsesKeysCommentsAndTypes) {
  const Config c = parse_config_string(
      "# reference point\n"
      "w0 = 32\n"
      "n = 10          # pairs\n"
      "slot = 50.0\n"
      "mode = pairs\n"
      "seed = 18446744073709551615\n"
      "\n"
      "refuse_prob = 0.25\n");
  EXPECT_EQ(c.get_int("w0", -1), 32);
  EXPECT_EQ(c.get_int("n", -1), 10);
  EXPECT_DOUBLE_EQ(c.get_double("slot", 0), 50.0);
  EXPECT_EQ(c.get_str("mode", ""), "pairs");
  EXPECT_EQ(c.get_u64("seed", 0), 18446744073709551615ull);
  EXPECT_DOUBLE_EQ(c.get_double("refuse_prob", 0), 0.25);
  EXPECT_FALSE(c.matrix.has_value());
  // defaults for missing keys
  EXPECT_EQ(c.get_int("m", 6), 6);
  EXPECT_EQ(c.get_str("out", "results"), "results");
}

TEST(Config, LastAssignmentWins) {
  const Config c = parse_config_string("w0 = 16\nw0 = 64\n");
  EXPECT_EQ(c.get_int("w0", 0), 64);
}

TEST(Config, MatrixBlock) {
  const Config c = parse_config_string(
      "n = 5\n"
      "matrix =\n"
      "0 1 0 1\n"
      "1 0 1 1\n"
      "0 1 0 1\n"
      "1 1 1 0\n"
      "\n"
      "w0 = 8\n");
  ASSERT_TRUE(c.matrix.has_value());
  ASSERT_EQ(c.matrix->size(), 4u);
  EXPECT_EQ((*c.matrix)[1], (std::vector<int>{1, 0, 1, 1}));
  EXPECT_EQ(c.get_int("w0", 0), 8);  // keys resume after the blank line
}

TEST(Config, MatrixBlockMayEndAtEof) {
  const Config c = parse_config_string("matrix =\n0 1\n1 0");
  ASSERT_TRUE(c.matrix.has_value());
  EXPECT_EQ(c.matrix->size(), 2u);
}

TEST(Config, Overlay) {
  Config base = parse_config_string("w0 = 16\nm = 6\n");
  const Config file = parse_config_string("w0 = 32\nmatrix =\n0 1\n1 0\n");
  const Config flags = parse_config_string("w0 = 64\nn = 4\n");
  base.overlay(file);
  base.overlay(flags);
  EXPECT_EQ(base.get_int("w0", 0), 64);
  EXPECT_EQ(base.get_int("m", 0), 6);
  EXPECT_EQ(base.get_int("n", 0), 4);
  ASSERT_TRUE(base.matrix.has_value());
}

TEST(Config, MalformedInputs) {
  expect_config_error([] { parse_config_string("just some words\n"); });
  expect_config_error([] { parse_config_string("= 5\n"); });
  expect_config_error([] { parse_config_string("w0 =\n"); });
  expect_config_error([] { parse_config_string("matrix = 3\n"); });
  expect_config_error([] { parse_config_string("matrix =\n0 x\n"); });
  expect_config_error([] { dscsma::parse_config_file("/no/such/file.cfg"); });
  const Config c = parse_config_string("w0 = banana\nslot = 5x\n");
  expect_config_error([&] { c.get_int("w0", 0); });
  expect_config_error([&] { c.get_double("slot", 0); });
}

}  // namespace
