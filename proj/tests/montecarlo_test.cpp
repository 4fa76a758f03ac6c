#include <gtest/gtest.h>

#include <cmath>

#include "riglab/montecarlo.hpp"

namespace riglab {
namespace {

ExperimentConfig er_config(NodeId n, double q, PropertyKind prop, std::int64_t trials, std::uint64_t seed = 1) {
  ExperimentConfig c;
  c.model = ModelSpec{{ErParams{n, q}}};
  c.property = prop;
  c.trials = trials;
  c.seed = seed;
  return c;
}

TEST(Wilson, ZeroSuccesses) {
  // Closed form at p = 0: hi = z^2 / (n + z^2).
  const Interval w = wilson_interval(0, 100);
  EXPECT_EQ(w.lo, 0.0);
  EXPECT_NEAR(w.hi, 0.03699480747600191, 1e-15);
}

TEST(Wilson, AllSuccesses) {
  const Interval w = wilson_interval(100, 100);
  EXPECT_EQ(w.hi, 1.0);
  EXPECT_NEAR(w.lo, 1.0 - 0.03699480747600191, 1e-15);
}

TEST(Wilson, SymmetricAtHalf) {
  const Interval w = wilson_interval(50, 100);
  EXPECT_NEAR(0.5 - w.lo, w.hi - 0.5, 1e-15);
  EXPECT_LT(w.lo, 0.5);
  EXPECT_GT(w.hi, 0.5);
}

TEST(Wilson, ContainsEstimateAndRejectsBadCounts) {
  for (int s = 0; s <= 37; ++s) {
    const Interval w = wilson_interval(s, 37);
    EXPECT_LE(w.lo, s / 37.0);
    EXPECT_GE(w.hi, s / 37.0);
  }
  EXPECT_THROW(wilson_interval(3, 0), ParameterError);
  EXPECT_THROW(wilson_interval(5, 4), ParameterError);
  EXPECT_THROW(wilson_interval(-1, 4), ParameterError);
}

TEST(Experiment, CompleteTriangleAlwaysConnected) {
  const auto res = run_experiment(er_config(3, 1.0, PropertyKind::k_connected(1), 100));
  EXPECT_EQ(res.summary.successes, 100);
  EXPECT_EQ(res.summary.empirical, 1.0);
}

TEST(Experiment, EmptyGraphNeverConnected) {
  const auto res = run_experiment(er_config(3, 0.0, PropertyKind::k_connected(1), 100));
  EXPECT_EQ(res.summary.successes, 0);
  EXPECT_EQ(res.summary.empirical, 0.0);
}

TEST(Experiment, SummaryMatchesRecords) {
  const auto res = run_experiment(er_config(60, 0.07, PropertyKind::k_connected(2), 200, 5));
  ASSERT_EQ(res.records.size(), 200U);
  std::int64_t wins = 0, mindeg = 0;
  for (std::size_t i = 0; i < res.records.size(); ++i) {
    const auto& r = res.records[i];
    EXPECT_EQ(r.index, static_cast<std::int64_t>(i));
    EXPECT_EQ(r.seed, (RngStream{5, i}.derived_seed()));
    wins += r.outcome;
    mindeg += r.min_degree >= 2;
  }
  EXPECT_EQ(res.summary.successes, wins);
  EXPECT_EQ(res.summary.min_degree_successes, mindeg);
  EXPECT_GE(res.summary.min_degree_successes, res.summary.successes);
  EXPECT_GT(wins, 0);
  EXPECT_LT(wins, 200);
  EXPECT_DOUBLE_EQ(res.summary.empirical, wins / 200.0);
  EXPECT_EQ(res.summary.audit_violations, 0);
}

TEST(Experiment, IdenticalAcrossWorkerCounts) {
  ExperimentConfig c;
  c.model = SolveRequest{ModelFamily::uniform(1), FamilyParams{400, 0, 3000, 0, 0, 0}, 0.0};
  c.property = PropertyKind::hamilton();
  c.trials = 60;
  c.seed = 99;
  c.workers = 1;
  const auto a = run_experiment(c);
  for (int w : {2, 3, 8}) {
    c.workers = w;
    const auto b = run_experiment(c);
    EXPECT_EQ(records_csv(a.records), records_csv(b.records)) << w;
    EXPECT_EQ(a.summary.successes, b.summary.successes);
    EXPECT_EQ(a.summary.connected_successes, b.summary.connected_successes);
  }
}

TEST(Experiment, SeedAndOffsetChangeTheDraws) {
  auto c = er_config(200, 0.02, PropertyKind::k_connected(1), 20, 1);
  const auto base = records_csv(run_experiment(c).records);
  c.seed = 2;
  EXPECT_NE(base, records_csv(run_experiment(c).records));
  c.seed = 1;
  c.stream_offset = 1;
  EXPECT_NE(base, records_csv(run_experiment(c).records));
}

TEST(Experiment, SolvedModelCarriesImpliedDeviation) {
  ExperimentConfig c;
  c.model = SolveRequest{ModelFamily::uniform(1), FamilyParams{2000, 0, 10000, 0, 0, 0}, 0.0};
  c.property = PropertyKind::matching();
  c.trials = 4;
  const auto res = run_experiment(c);
  ASSERT_TRUE(res.summary.solve);
  EXPECT_EQ(res.summary.solve->best().value, 6.0);
  ASSERT_TRUE(res.summary.implied_deviation());
  EXPECT_NEAR(*res.summary.implied_deviation(), -0.40090245954208203, 1e-9);
  EXPECT_NEAR(*res.summary.prediction(), std::exp(-std::exp(0.40090245954208203)), 1e-9);
  EXPECT_FALSE(res.summary.side_conditions_pass());
}

TEST(Experiment, BudgetErrorAborts) {
  auto c = er_config(40, 0.3, PropertyKind::hamilton(), 5);
  c.budget.max_exact_nodes = 10;
  c.budget.search_steps = 1;
  EXPECT_THROW(run_experiment(c), BudgetExceeded);
}

TEST(Experiment, RejectsBadConfig) {
  EXPECT_THROW(run_experiment(er_config(10, 0.5, PropertyKind::k_connected(1), 0)), ParameterError);
  EXPECT_THROW(run_experiment(er_config(10, 1.5, PropertyKind::k_connected(1), 5)), ParameterError);
  EXPECT_THROW(run_experiment(er_config(10, 0.5, PropertyKind::k_connected(0), 5)), ParameterError);
}

TEST(Audit, FlagsBrokenImplications) {
  TrialRecord r;
  r.outcome = true;
  r.min_degree = 1;
  r.connected = true;
  EXPECT_EQ(audit_trial(r, PropertyKind::k_connected(2), 10).size(), 1U);
  EXPECT_TRUE(audit_trial(r, PropertyKind::k_connected(1), 10).empty());

  r.min_degree = 2;
  r.two_connected = false;
  r.near_perfect_matching = true;
  EXPECT_EQ(audit_trial(r, PropertyKind::hamilton(), 10).size(), 1U);
  r.two_connected = true;
  r.near_perfect_matching = false;
  EXPECT_EQ(audit_trial(r, PropertyKind::hamilton(), 10).size(), 1U);

  r.connected = false;
  r.min_degree = 1;
  EXPECT_FALSE(audit_trial(r, PropertyKind::k_robust(1), 10).empty());
  r.connected = true;
  EXPECT_FALSE(audit_trial(r, PropertyKind::k_robust(2), 10).empty());

  r.outcome = false;
  EXPECT_TRUE(audit_trial(r, PropertyKind::k_robust(2), 10).empty());
}

TEST(Audit, CleanOnSampledGraphs) {
  for (auto prop : {PropertyKind::k_connected(2), PropertyKind::hamilton(), PropertyKind::k_robust(2),
                    PropertyKind::matching()}) {
    const auto res = run_experiment(er_config(12, 0.45, prop, 150, 3));
    EXPECT_EQ(res.summary.audit_violations, 0) << describe(prop);
    EXPECT_GT(res.summary.successes, 0) << describe(prop);
  }
}

TEST(Csv, Layout) {
  auto c = er_config(3, 1.0, PropertyKind::k_connected(1), 2, 4);
  const auto res = run_experiment(c);
  const std::string expect = "trial,seed,outcome,edges,min_degree,millis\n0," +
                             std::to_string(RngStream{4, 0}.derived_seed()) + ",1,3,2,\n1," +
                             std::to_string(RngStream{4, 1}.derived_seed()) + ",1,3,2,\n";
  EXPECT_EQ(records_csv(res.records), expect);

  c.record_timing = true;
  std::istringstream timed(records_csv(run_experiment(c).records));
  std::string line;
  std::getline(timed, line);
  while (std::getline(timed, line)) EXPECT_NE(line.back(), ',') << line;
}

TEST(Sweep, DeviationPointsIncrease) {
  ExperimentConfig c;
  c.model = SolveRequest{ModelFamily::er(), FamilyParams{2000, 0, 0, 0, 0, 0}, 0.0};
  c.property = PropertyKind::k_connected(1);
  c.trials = 300;
  c.seed = 8;
  const auto pts = sweep(c, SweepAxis::Deviation, {-2.0, 0.0, 2.0});
  ASSERT_EQ(pts.size(), 3U);
  for (const auto& p : pts) ASSERT_TRUE(p.summary);
  EXPECT_LT(pts[0].summary->empirical, pts[1].summary->empirical);
  EXPECT_LT(pts[1].summary->empirical, pts[2].summary->empirical);
}

TEST(Sweep, PointsUseDistinctStreams) {
  const auto c = er_config(100, 0.05, PropertyKind::k_connected(1), 30, 2);
  const auto a = detail::sweep_point_config(c, SweepAxis::N, 100, 0);
  const auto b = detail::sweep_point_config(c, SweepAxis::N, 100, 1);
  EXPECT_NE(records_csv(run_experiment(a).records), records_csv(run_experiment(b).records));
}

TEST(Sweep, ErrorsAreRecordedAndSweepContinues) {
  ExperimentConfig c;
  c.model = SolveRequest{ModelFamily::er(), FamilyParams{50, 0, 0, 0, 0, 0}, 0.0};
  c.property = PropertyKind::k_connected(1);
  c.trials = 20;
  // q would exceed 1 at deviation 1000.
  const auto pts = sweep(c, SweepAxis::Deviation, {0.0, 1000.0, 1.0});
  ASSERT_EQ(pts.size(), 3U);
  EXPECT_TRUE(pts[0].summary);
  EXPECT_FALSE(pts[1].summary);
  ASSERT_TRUE(pts[1].error);
  EXPECT_TRUE(pts[2].summary);

  // A deviation axis needs a solved model.
  const auto bad = sweep(er_config(10, 0.5, PropertyKind::k_connected(1), 5), SweepAxis::Deviation, {0.0});
  EXPECT_TRUE(bad[0].error);
}

TEST(Sweep, KAndNAxes) {
  const auto c = er_config(30, 0.3, PropertyKind::k_connected(1), 40, 6);
  const auto ks = sweep(c, SweepAxis::K, {1, 2, 3});
  for (std::size_t i = 0; i < ks.size(); ++i) {
    ASSERT_TRUE(ks[i].summary);
    EXPECT_EQ(ks[i].summary->property.k, static_cast<int>(i) + 1);
  }
  const auto ns = sweep(c, SweepAxis::N, {10, 2.5});
  ASSERT_TRUE(ns[0].summary);
  EXPECT_EQ(ns[0].summary->n, 10);
  EXPECT_TRUE(ns[1].error);

  const auto matching = er_config(30, 0.3, PropertyKind::matching(), 5);
  EXPECT_TRUE(sweep(matching, SweepAxis::K, {2})[0].error);
}

TEST(Sweep, CsvTable) {
  ExperimentConfig c;
  c.model = SolveRequest{ModelFamily::er(), FamilyParams{50, 0, 0, 0, 0, 0}, 0.0};
  c.property = PropertyKind::k_connected(1);
  c.trials = 10;
  const auto pts = sweep(c, SweepAxis::Deviation, {0.0, 1000.0});
  std::ostringstream os;
  write_sweep_csv(os, SweepAxis::Deviation, pts);
  const std::string text = os.str();
  EXPECT_EQ(text.rfind("deviation,n,trials,successes,empirical,", 0), 0U);
  EXPECT_NE(text.find("\n1000,,,,,,,,,,,\""), std::string::npos);
}

}  // namespace
}  // namespace riglab
