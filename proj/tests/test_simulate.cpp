#include <gtest/gtest.h>

#include <cmath>

#include "stratexp/cutoffs.hpp"
#include "stratexp/errors.hpp"
#include "stratexp/evaluator.hpp"
#include "stratexp/simulate.hpp"
#include "stratexp/strategies.hpp"

using namespace stratexp;

namespace {

const ModelParams kDefault(0.2, 0.9, 1, 10, 0.6);

SimConfig cfg(std::int64_t runs, std::uint64_t seed) {
  SimConfig c;
  c.runs = runs;
  c.seed = seed;
  return c;
}

}  // namespace

TEST(Simulate, SameSeedSameResult) {
  const SimResult a = run_sim(kDefault, make_sigma_n(kDefault, 1), cfg(2000, 7));
  const SimResult b = run_sim(kDefault, make_sigma_n(kDefault, 1), cfg(2000, 7));
  EXPECT_EQ(a.gamma[0].mean, b.gamma[0].mean);
  EXPECT_EQ(a.ne_given_bad, b.ne_given_bad);
  EXPECT_EQ(a.to_json(), b.to_json());
}

TEST(Simulate, SigmaZeroInBadStateStopsAtSchedule) {
  SimConfig c = cfg(500, 3);
  c.force_good = false;
  const SimResult r = run_sim(kDefault, make_sigma0(kDefault), c);
  ASSERT_EQ(r.ne_given_bad.size(), 1u);
  EXPECT_EQ(r.ne_given_bad.begin()->first, 2 * compute_cutoffs(kDefault, 0).N_star);
  EXPECT_EQ(r.settled_safe, 500);
}

TEST(Simulate, GoodStateWithFastArrivalsStaysRisky) {
  const ModelParams pr(0.999, 0.9, 1, 3, 0.6);
  SimConfig c = cfg(500, 4);
  c.force_good = true;
  const SimResult r = run_sim(pr, make_sigma0(pr), c);
  EXPECT_GT(r.settled_risky, 490);
}

TEST(Simulate, AgreesWithExactEvaluation) {
  for (const auto& prof : {make_sigma0(kDefault), make_sigma_n(kDefault, 2)}) {
    const SimResult s = run_sim(kDefault, prof, cfg(40000, 11));
    const PayoffReport e = eval_profile(kDefault, prof);
    for (int i = 0; i < 2; ++i) {
      EXPECT_LT(std::abs(s.gamma[i].mean - e.gamma[i]), 4 * s.gamma[i].stderr_ + 1e-12)
          << prof->name() << " player " << i;
    }
  }
}

TEST(Simulate, RejectsNonPositiveRuns) {
  EXPECT_THROW(run_sim(kDefault, make_sigma0(kDefault), cfg(0, 1)), InvalidParams);
}

TEST(Simulate, DefaultHorizonDiscountsAway) {
  const int h = default_horizon(0.9);
  EXPECT_LT(std::pow(0.9, h / 2.0), 1e-12 * 1.0001);
}
