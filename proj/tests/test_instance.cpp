#include "clockaug/instance.hpp"
#include "clockaug/numerics.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace clockaug;

namespace {

Instance two_sets_10_10_vs_1(std::optional<std::size_t> prediction)
{
  Instance inst;
  inst.sys        = SetSystem(3, {BidderSet{0, 1}, BidderSet{2}});
  inst.values     = {Money(10), Money(10), Money(1)};
  inst.v_min      = 1;
  inst.prediction = prediction;
  return inst;
}

}  // namespace

TEST(PredictionError, Examples)
{
  EXPECT_EQ(prediction_error(two_sets_10_10_vs_1(1)), 20);
  EXPECT_EQ(prediction_error(two_sets_10_10_vs_1(0)), 1);

  Instance six_five;
  six_five.sys        = SetSystem(3, {BidderSet{0}, BidderSet{1, 2}});
  six_five.values     = {Money(6), Money(2), Money(3)};
  six_five.prediction = 1;
  EXPECT_EQ(prediction_error(six_five), Money(6, 5));

  EXPECT_THROW(prediction_error(two_sets_10_10_vs_1(std::nullopt)), NoPrediction);
}

TEST(Instance, ValidateRejectsBrokenInvariants)
{
  Instance inst = two_sets_10_10_vs_1(0);
  EXPECT_NO_THROW(inst.validate());

  Instance below = inst;
  below.values[2] = Money(1, 2);
  EXPECT_THROW(below.validate(), InvalidInput);

  Instance bad_pred = inst;
  bad_pred.prediction = 2;
  EXPECT_THROW(bad_pred.validate(), InvalidPrediction);

  Instance zero_floor = inst;
  zero_floor.v_min = 0;
  EXPECT_THROW(zero_floor.validate(), InvalidInput);

  Instance short_values = inst;
  short_values.values.pop_back();
  EXPECT_THROW(short_values.validate(), InvalidInput);
}

TEST(Instance, ResolvePredictionExtendsToContainingSet)
{
  SetSystem sys(4, {BidderSet{0, 1}, BidderSet{1, 2}, BidderSet{3}});
  EXPECT_EQ(resolve_prediction(sys, BidderSet{2}), 1u);
  EXPECT_EQ(resolve_prediction(sys, BidderSet{1}), 0u);
  EXPECT_THROW(resolve_prediction(sys, BidderSet{0, 2}), InvalidPrediction);
}

TEST(GenRandom, DeterministicAndValid)
{
  ValueDist dist;
  Instance  a = gen_random(1, 6, 2, dist);
  Instance  b = gen_random(1, 6, 2, dist);
  EXPECT_EQ(a, b);
  EXPECT_EQ(instance_to_string(a), instance_to_string(b));
  EXPECT_EQ(a.sys.size(), 2u);
  EXPECT_NO_THROW(a.validate());
  EXPECT_NE(instance_to_string(gen_random(2, 6, 2, dist)), instance_to_string(a));
}

TEST(GenRandom, ValuesOnGridWithinRange)
{
  ValueDist dist;
  dist.v_min = 1;
  dist.v_max = 5;
  dist.grid  = 4;
  for (std::uint64_t seed = 1; seed <= 50; ++seed)
  {
    Instance inst = gen_random(seed, 8, 3, dist);
    ASSERT_EQ(inst.sys.size(), 3u);
    for (const Money &v : inst.values)
    {
      EXPECT_GE(v, 1);
      EXPECT_LE(v, 5);
      Money scaled = v * 4;
      scaled.canonicalize();
      EXPECT_EQ(scaled.get_den(), 1);
    }
  }
}

TEST(GenRandom, ImpossibleRequestsFail)
{
  EXPECT_THROW(gen_random(1, 0, 1), GenerationError);
  EXPECT_THROW(gen_random(1, 3, 0), GenerationError);
  // Three bidders carry at most three pairwise incomparable sets of size one or
  // two; twenty is out of reach.
  EXPECT_THROW(gen_random(1, 3, 20), GenerationError);
}

// Making the family disjoint from the prediction loses at most half the optimum.
TEST(GenRandom, DisjointTransformKeepsHalfTheOptimum)
{
  for (std::uint64_t seed = 1; seed <= 80; ++seed)
  {
    Instance inst = gen_random(seed, 4 + seed % 9, 1 + seed % 5);
    Money    opt  = oracle::brute_force_opt(inst);
    for (std::size_t p = 0; p < inst.sys.size(); ++p)
    {
      Instance t  = inst;
      t.sys       = make_disjoint(inst.sys, inst.sys[p]);
      Money    ot = oracle::brute_force_opt(t);
      EXPECT_GE(2 * ot, opt) << seed << " " << p;
      EXPECT_LE(ot, opt);
    }
  }
}

TEST(GenRandom, EtaAtLeastOneForMaximalPredictions)
{
  for (std::uint64_t seed = 1; seed <= 40; ++seed)
  {
    Instance inst = gen_random(seed, 7, 4);
    for (std::size_t p = 0; p < inst.sys.size(); ++p)
    {
      Money eta = prediction_error(with_prediction(inst, p));
      EXPECT_GE(eta, 1);
      EXPECT_EQ(eta, oracle::brute_force_opt(inst) / oracle::welfare(inst, inst.sys[p]));
    }
  }
}

TEST(GenTwoDisjoint, Shapes)
{
  Instance a = gen_two_disjoint(1, 1, {Money(99, 100)}, {Money(1)});
  EXPECT_EQ(a.sys, SetSystem(2, {BidderSet{0}, BidderSet{1}}));
  EXPECT_EQ(a.v_min, Money(99, 100));

  Instance b = gen_two_disjoint(3, 2, {Money(1), Money(1, 2), Money(1, 3)}, {Money(1), Money(1)});
  EXPECT_EQ(oracle::welfare(b, b.sys[0]), Money(11, 6));
  EXPECT_EQ(b.sys[1], (BidderSet{3, 4}));

  EXPECT_THROW(gen_two_disjoint(2, 1, {Money(1)}, {Money(1)}), InvalidInput);
}

TEST(InstanceFile, RoundTripIsIdentity)
{
  for (std::uint64_t seed = 1; seed <= 30; ++seed)
  {
    ValueDist dist;
    dist.kind    = ValueDist::Kind::log_uniform;
    dist.decades = 4;
    Instance inst = with_prediction(gen_random(seed, 9, 4, dist), seed % 4);
    std::string text = instance_to_string(inst);
    Instance    back = instance_from_string(text);
    EXPECT_EQ(back, inst);
    EXPECT_EQ(instance_to_string(back), text);
  }
  Instance none = two_sets_10_10_vs_1(std::nullopt);
  EXPECT_EQ(instance_from_string(instance_to_string(none)), none);
}

TEST(InstanceFile, RejectsMalformedText)
{
  EXPECT_THROW(instance_from_string(""), InvalidInput);
  EXPECT_THROW(instance_from_string("garbage\n"), InvalidInput);
  std::string text = instance_to_string(two_sets_10_10_vs_1(0));
  std::string broken = text.substr(0, text.size() / 2);
  EXPECT_THROW(instance_from_string(broken), InvalidInput);
}

TEST(Suite, DeterministicAndSized)
{
  SuiteSpec spec;
  spec.count = 40;
  auto a = gen_suite(spec);
  auto b = gen_suite(spec);
  ASSERT_EQ(a.size(), 40u);
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    EXPECT_EQ(a[i].id, b[i].id);
    EXPECT_EQ(a[i].inst, b[i].inst);
    EXPECT_LE(a[i].inst.n(), spec.max_n);
    EXPECT_GE(a[i].inst.n(), spec.min_n);
    EXPECT_LE(a[i].inst.sys.size(), spec.max_sets);
  }
}
