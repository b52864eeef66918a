#include "clockaug/ftbb.hpp"
#include "clockaug/numerics.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace clockaug;

namespace {

FtbbParams ftbb(Money alpha, std::optional<Money> beta = std::nullopt)
{
  FtbbParams p;
  p.alpha = std::move(alpha);
  p.beta  = std::move(beta);
  return p;
}

Instance pair_vs_single()
{
  Instance inst;
  inst.sys        = SetSystem(3, {BidderSet{0, 1}, BidderSet{2}});
  inst.values     = {Money(10), Money(10), Money(1)};
  inst.v_min      = 1;
  inst.prediction = 0;
  return inst;
}

Trace bare_trace(std::size_t n)
{
  Trace t;
  t.header.mechanism = "ftbb";
  t.header.n         = n;
  t.header.v_min     = 1;
  t.header.mode      = "event";
  return t;
}

bool mentions(const BoundReport &r, const std::string &rule)
{
  for (const BoundViolation &v : r.violations)
  {
    if (v.rule == rule)
    {
      return true;
    }
  }
  return false;
}

}  // namespace

TEST(FtbbBeta, ThresholdAndFloor)
{
  Money t = threshold_beta(2, 4);
  EXPECT_GE(t, Money(75, 2));
  EXPECT_LE(t, Money(75, 2) + Money(1, 1000000));

  for (std::size_t n : {1u, 3u, 10u, 100u})
  {
    for (Money alpha : {Money(3, 2), Money(2), Money(3), Money(8)})
    {
      Money b = default_beta(alpha, n);
      EXPECT_GE(b, 6 * oracle::harmonic(n));
      EXPECT_GE(b, threshold_beta(alpha, n));
      Money scaled = b * 1000000;
      scaled.canonicalize();
      EXPECT_EQ(scaled.get_den(), 1);
    }
  }
  EXPECT_THROW(resolve_beta(ftbb(2, Money(1)), 10), DomainError);
  EXPECT_THROW(ftbb(1).validate(), DomainError);
}

TEST(Ftbb, UnpredictedBidderLeavesInPhaseU)
{
  Instance       inst = pair_vs_single();
  FtbbParams     params = ftbb(2, Money(77, 3));
  TruthfulOracle bidders(inst.values);
  auto           out = run_ftbb(inst, params, bidders);
  EXPECT_EQ(out.served, (BidderSet{0, 1}));
  EXPECT_EQ(out.via, "ftbb.line8");
  EXPECT_EQ(oracle::welfare(inst, out.served), 20);
  EXPECT_EQ(exit_order(out.trace), std::vector<Bidder>{2});
  EXPECT_TRUE(ftbb_bound_check(out.trace, params, inst).ok());
}

TEST(Ftbb, SolePredictedSetIsServedAtTheFloor)
{
  Instance inst;
  inst.sys        = SetSystem(2, {BidderSet{0, 1}});
  inst.values     = {Money(3), Money(5)};
  inst.prediction = 0;
  TruthfulOracle bidders(inst.values);
  auto           out = run_ftbb(inst, ftbb(2), bidders);
  EXPECT_EQ(out.served, (BidderSet{0, 1}));
  EXPECT_EQ(out.prices, (std::vector<Money>{Money(1), Money(1)}));
}

TEST(Ftbb, MissingPredictionFails)
{
  Instance inst   = pair_vs_single();
  inst.prediction = std::nullopt;
  TruthfulOracle bidders(inst.values);
  EXPECT_THROW(run_ftbb(inst, ftbb(2), bidders), NoPrediction);
}

// β = 77/3 on the unpredicted set {2,3,4}: each phase loses 20 <= (β/2)·2, the
// running total reaches 60 > β·2.
TEST(FtbbBoundCheck, FlagsHandBuiltCumulativeLoss)
{
  Instance inst;
  inst.sys        = SetSystem(5, {BidderSet{0, 1}, BidderSet{2, 3, 4}});
  inst.values     = {Money(10), Money(10), Money(20), Money(20), Money(20)};
  inst.prediction = 0;

  Trace t = bare_trace(5);
  for (Bidder b : {2u, 3u, 4u})
  {
    t.events.emplace_back(event::Phase{"ftbb.U", b - 1, Money(2)});
    t.events.emplace_back(event::Exit{b, Money(1), Money(20)});
  }
  t.events.emplace_back(event::Outcome{BidderSet{0, 1}, "ftbb.line8"});

  BoundReport report = ftbb_bound_check(t, ftbb(2, Money(77, 3)), inst);
  EXPECT_TRUE(mentions(report, "cumulative-unpredicted-loss"));
  EXPECT_FALSE(mentions(report, "phase-u-loss"));
  EXPECT_EQ(report.violations.front().iteration, 3u);
}

TEST(FtbbBoundCheck, FlagsUncoveredPredictedLoss)
{
  Instance inst = pair_vs_single();
  Trace    t    = bare_trace(3);
  t.events.emplace_back(event::Phase{"ftbb.U", 1, Money(2)});
  t.events.emplace_back(event::Phase{"ftbb.P", 1, Money(4)});
  t.events.emplace_back(event::Exit{0, Money(1), Money(10)});
  t.events.emplace_back(event::Phase{"ftbb.checkpoint", 1, Money(1)});
  t.events.emplace_back(event::Outcome{BidderSet{1}, "x"});
  EXPECT_TRUE(mentions(ftbb_bound_check(t, ftbb(2, Money(77, 3)), inst), "predicted-ledger"));
}

TEST(ChainBound, Examples)
{
  EXPECT_EQ(chain_bound_check(3, 2, 1), 2);
  EXPECT_EQ(chain_bound_check(2, 2, 1), 3);
  EXPECT_THROW(chain_bound_check(1, 2, 1), InvalidInput);
}

// 1/(k-1) <= (1/k)·chain(k), with the right side equal to 1/(k-1) + 1/(k(α-1)(k-1)).
TEST(ChainBound, StepDominatesHarmonicIncrement)
{
  EXPECT_EQ(chain_bound_check(5, Money(3, 2), 1) / 5, Money(7, 20));
  for (Money alpha : {Money(3, 2), Money(2), Money(3)})
  {
    for (unsigned long k = 2; k <= 50; ++k)
    {
      Money rhs = chain_bound_check(k, alpha, 1) / Money(k);
      Money closed = Money(1, k - 1) + 1 / (Money(k) * (alpha - 1) * Money(k - 1));
      EXPECT_EQ(rhs, closed) << k;
      EXPECT_GE(rhs, Money(1, k - 1));
    }
  }
}

TEST(ChainBound, CumulativeMatchesDirectProducts)
{
  EXPECT_EQ(cumulative_chain_bound(3, 2, 1), 3);
  for (unsigned long n : {1ul, 2ul, 7ul, 20ul})
  {
    Money alpha(5, 2);
    Money a   = alpha - 1;
    Money sum = 1;
    for (unsigned long i = 2; i <= n; ++i)
    {
      Money prod = 1;
      for (unsigned long j = i; j <= n; ++j)
      {
        prod *= (a * Money(j) + 1) / (a * Money(j - 1));
      }
      sum += prod;
    }
    EXPECT_EQ(cumulative_chain_bound(n, alpha, 4), Money(4) / Money(n) * sum) << n;
  }
}

TEST(Ftbb, GuaranteesOverAllPredictions)
{
  SuiteSpec spec;
  spec.count = 250;
  spec.seed  = 21;
  auto suite = gen_suite(spec);
  for (Money alpha : {Money(3, 2), Money(2), Money(3)})
  {
    for (const SuiteEntry &e : suite)
    {
      Money      opt    = oracle::brute_force_opt(e.inst);
      FtbbParams params = ftbb(alpha);
      Money      beta   = resolve_beta(params, e.inst.n());
      for (std::size_t p = 0; p < e.inst.sys.size(); ++p)
      {
        Instance       inst = with_prediction(e.inst, p);
        TruthfulOracle bidders(inst.values);
        auto           out = run_ftbb(inst, params, bidders);
        Money          w   = oracle::welfare(inst, out.served);
        EXPECT_LE(oracle::welfare(inst, inst.sys[p]), alpha * w) << e.id << " " << p;
        EXPECT_LE(opt, 2 * beta * w) << e.id << " " << p;

        SetSystem disjoint = make_disjoint(inst.sys, inst.sys[p]);
        bool      inside   = false;
        for (const BidderSet &f : disjoint.maximal_sets())
        {
          inside = inside || out.served.subset_of(f);
        }
        EXPECT_TRUE(inside);

        BoundReport r = ftbb_bound_check(out.trace, params, inst);
        EXPECT_TRUE(r.ok()) << e.id << " " << p << " " << (r.ok() ? "" : r.violations[0].rule);
      }
    }
  }
}

TEST(Ftbb, GridModeLedgersHold)
{
  SuiteSpec spec;
  spec.count       = 80;
  spec.seed        = 4;
  spec.max_n       = 7;
  spec.mixed_scale = false;
  for (const SuiteEntry &e : gen_suite(spec))
  {
    for (std::size_t p = 0; p < e.inst.sys.size(); ++p)
    {
      Instance       inst = with_prediction(e.inst, p);
      TruthfulOracle bidders(inst.values);
      auto out = run_ftbb(inst, ftbb(2), bidders, EngineConfig{AdvanceMode::grid, std::nullopt});
      EXPECT_LE(oracle::welfare(inst, inst.sys[p]), 2 * oracle::welfare(inst, out.served)) << e.id;
      EXPECT_TRUE(ftbb_bound_check(out.trace, ftbb(2), inst).ok()) << e.id << " " << p;
    }
  }
}
