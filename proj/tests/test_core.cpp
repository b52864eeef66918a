#include "clockaug/set_system.hpp"

#include <gtest/gtest.h>

using namespace clockaug;

namespace {

SetSystem sys_of(std::size_t n, std::vector<BidderSet> sets) { return SetSystem(n, std::move(sets)); }

std::vector<Money> money(std::initializer_list<long> xs)
{
  std::vector<Money> out;
  for (long x : xs)
  {
    out.emplace_back(x);
  }
  return out;
}

}  // namespace

TEST(Money, CanonicalText)
{
  EXPECT_EQ(to_string(Money(6, 4)), "3/2");
  EXPECT_EQ(to_string(Money(8, 4)), "2");
  EXPECT_EQ(to_string(Money(-1, 3)), "-1/3");
}

TEST(Money, ParsesFractionsAndDecimals)
{
  EXPECT_EQ(parse_money("3/2"), Money(3, 2));
  EXPECT_EQ(parse_money("0.25"), Money(1, 4));
  EXPECT_EQ(parse_money("1e-3"), Money(1, 1000));
  EXPECT_EQ(parse_money("7"), Money(7));
  EXPECT_THROW(parse_money("abc"), InvalidInput);
  EXPECT_THROW(parse_money("1/0"), InvalidInput);
}

TEST(Money, RoundUpLandsOnGridAtOrAbove)
{
  EXPECT_EQ(round_up(Money(1, 3), 1000), Money(167, 500));
  EXPECT_EQ(round_up(Money(1, 4), 1000), Money(1, 4));
  EXPECT_EQ(round_up(Money(-1, 3), 10), Money(-3, 10));
}

TEST(Money, DoubleConversionIsExact)
{
  EXPECT_EQ(money_from_double(0.5), Money(1, 2));
  EXPECT_EQ(money_from_double(0.1).get_d(), 0.1);
}

TEST(BidderSet, AlgebraAndText)
{
  BidderSet a{0, 2, 70};
  BidderSet b{2, 3};
  EXPECT_EQ((a & b), BidderSet{2});
  EXPECT_EQ((a | b), (BidderSet{0, 2, 3, 70}));
  EXPECT_EQ((a - b), (BidderSet{0, 70}));
  EXPECT_EQ(a.size(), 3u);
  EXPECT_EQ(a.bound(), 71u);
  EXPECT_EQ(a.str(), "0,2,70");
  EXPECT_EQ(BidderSet::parse("0,2,70"), a);
  EXPECT_EQ(BidderSet{}.str(), "-");
  EXPECT_EQ(BidderSet::parse("-"), BidderSet{});
}

TEST(BidderSet, EqualityIgnoresTrailingCapacity)
{
  BidderSet a{1, 100};
  a.erase(100);
  EXPECT_EQ(a, BidderSet{1});
  EXPECT_TRUE(BidderSet{}.subset_of(a));
  EXPECT_FALSE(a.intersects(BidderSet{2, 3}));
}

TEST(SetSystem, RejectsBrokenFamilies)
{
  EXPECT_THROW(sys_of(3, {BidderSet{0, 1}, BidderSet{1}}), InvalidInput);
  EXPECT_THROW(sys_of(3, {BidderSet{}}), InvalidInput);
  EXPECT_THROW(sys_of(2, {BidderSet{0, 2}}), InvalidInput);
  EXPECT_THROW(sys_of(2, {BidderSet{0}, BidderSet{0}}), InvalidInput);
}

TEST(SetSystem, ReduceToAntichainKeepsFirstMaximal)
{
  auto out = reduce_to_antichain({BidderSet{1}, BidderSet{0, 1}, BidderSet{2}, BidderSet{0, 1}});
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0], (BidderSet{0, 1}));
  EXPECT_EQ(out[1], BidderSet{2});
}

TEST(SetSystem, Feasibility)
{
  SetSystem sys = sys_of(3, {BidderSet{0, 1}, BidderSet{2}});
  EXPECT_TRUE(is_feasible(sys, BidderSet{0}));
  EXPECT_FALSE(is_feasible(sys, BidderSet{0, 2}));
  EXPECT_TRUE(is_feasible(sys, BidderSet{}));
  EXPECT_THROW(is_feasible(sys, BidderSet{3}), InvalidInput);
}

TEST(SetSystem, MaxRevenueSet)
{
  auto a = max_revenue_set(sys_of(3, {BidderSet{0, 1}, BidderSet{2}}), BidderSet::range(3), money({1, 1, 1}));
  EXPECT_EQ(a.set, (BidderSet{0, 1}));
  EXPECT_EQ(a.value, 2);

  auto b = max_revenue_set(sys_of(2, {BidderSet{0}, BidderSet{1}}), BidderSet::range(2), money({5, 5}));
  EXPECT_EQ(b.set, BidderSet{0});
  EXPECT_EQ(b.index, 0u);

  // {0,1} ∩ {1,2} = {1} earns 1; {1,2} earns 4.
  auto c = max_revenue_set(sys_of(3, {BidderSet{0, 1}, BidderSet{1, 2}}), BidderSet{1, 2}, money({9, 1, 3}));
  EXPECT_EQ(c.set, (BidderSet{1, 2}));
  EXPECT_EQ(c.value, 4);

  auto d = max_revenue_set(sys_of(2, {BidderSet{0}, BidderSet{1}}), BidderSet{}, money({5, 5}));
  EXPECT_TRUE(d.set.empty());
  EXPECT_EQ(d.value, 0);
}

TEST(SetSystem, OptOracle)
{
  auto a = opt_oracle(sys_of(3, {BidderSet{0, 1}, BidderSet{2}}), money({5, 1, 4}));
  EXPECT_EQ(a.set, (BidderSet{0, 1}));
  EXPECT_EQ(a.value, 6);
  auto b = opt_oracle(sys_of(2, {BidderSet{0, 1}}), money({2, 3}));
  EXPECT_EQ(b.value, 5);
  auto c = opt_oracle(sys_of(3, {BidderSet{0}, BidderSet{1}, BidderSet{2}}), money({1, 7, 7}));
  EXPECT_EQ(c.set, BidderSet{1});
  EXPECT_EQ(c.value, 7);
}

TEST(SetSystem, MakeDisjoint)
{
  SetSystem a = make_disjoint(sys_of(3, {BidderSet{0, 1}, BidderSet{1, 2}}), BidderSet{0, 1});
  EXPECT_EQ(a, sys_of(3, {BidderSet{0, 1}, BidderSet{2}}));

  SetSystem b0 = sys_of(4, {BidderSet{0, 1}, BidderSet{2, 3}});
  EXPECT_EQ(make_disjoint(b0, BidderSet{0, 1}), b0);

  // {1,4} loses 1 and {2,3} loses 2; {1,3} would collapse into {3} and be dropped.
  SetSystem c = make_disjoint(sys_of(5, {BidderSet{0, 1, 2}, BidderSet{1, 4}, BidderSet{2, 3}, BidderSet{1, 3}}),
                              BidderSet{0, 1, 2});
  EXPECT_EQ(c, sys_of(5, {BidderSet{0, 1, 2}, BidderSet{4}, BidderSet{3}}));

  EXPECT_THROW(make_disjoint(b0, BidderSet{0}), InvalidPrediction);
}

TEST(SetSystem, ContainingMaximalSet)
{
  SetSystem sys = sys_of(4, {BidderSet{0, 1}, BidderSet{1, 2}, BidderSet{3}});
  EXPECT_EQ(containing_maximal_set(sys, BidderSet{1}), 0u);
  EXPECT_EQ(containing_maximal_set(sys, BidderSet{2}), 1u);
  EXPECT_FALSE(containing_maximal_set(sys, BidderSet{0, 3}).has_value());
}
