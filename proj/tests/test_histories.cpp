#include <gtest/gtest.h>

#include "stratexp/errors.hpp"
#include "stratexp/history.hpp"

using namespace stratexp;

TEST(History, ExtendEmptyWithRisky) {
  const PublicHistory h = PublicHistory().extend(Action::kRisky);
  EXPECT_EQ(h.render(), "R");
  const auto& c = h.counters();
  EXPECT_EQ(c.n_e(), 1);
  EXPECT_EQ(c.n_e_i[0], 1);
  EXPECT_EQ(c.u[0], 1);
  EXPECT_EQ(h.active_player(), 1);
}

TEST(History, SafeDisclosesOwnRun) {
  // player 1 experiments, player 2 waits, player 1 waits: his run is disclosed
  const PublicHistory h = PublicHistory::parse("RSS");
  EXPECT_EQ(h.counters().d[0], 1);
  EXPECT_EQ(h.counters().u[0], 0);
  const PublicHistory h2 = PublicHistory::parse("RS").extend(Action::kRisky);
  EXPECT_EQ(h2.counters().n_e_i[0], 2);
  EXPECT_EQ(h2.counters().u[0], 2);
}

TEST(History, CountersOnCanonicalPaths) {
  const int ns = 5;
  for (int r = 0; r <= ns; ++r) {
    std::string s;
    for (int k = 0; k < r; ++k) s += "RS";
    for (int k = 0; k < ns - r; ++k) s += "RR";
    const auto& c = PublicHistory::parse(s).counters();
    EXPECT_EQ(c.n_e_i[0], ns);
    EXPECT_EQ(c.n_e_i[1], ns - r);
  }
}

TEST(History, IncrementalCountersMatchScratch) {
  PublicHistory h;
  const std::string path = "RRSRSSRRRSRSSSRR";
  for (char ch : path) {
    h = h.extend(ch == 'R' ? Action::kRisky : Action::kSafe);
    const auto acts = h.actions();
    EXPECT_TRUE(h.counters() == count_from_scratch(acts)) << h.render();
  }
}

TEST(History, ParseGrammar) {
  EXPECT_EQ(PublicHistory::parse("(RR)^2·S").render(), "RRRRS");
  EXPECT_EQ(PublicHistory::parse("RS·RR·S").render(), "RSRRS");
  EXPECT_TRUE(PublicHistory::parse("").empty());
  EXPECT_EQ(render_actions(parse_actions("(RS)^3")), "RSRSRS");
}

TEST(History, ParseErrorsCarryOffset) {
  try {
    PublicHistory::parse("RRX");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 2u);
  }
  EXPECT_THROW(PublicHistory::parse("(RR"), ParseError);
}
