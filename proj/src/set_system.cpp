#include "clockaug/set_system.hpp"

namespace clockaug {

SetSystem::SetSystem(std::size_t n, std::vector<BidderSet> maximal_sets)
  : n_(n)
  , sets_(std::move(maximal_sets))
{
  if (n_ == 0)
  {
    throw InvalidInput("set system needs at least one bidder");
  }
  for (std::size_t i = 0; i < sets_.size(); ++i)
  {
    if (sets_[i].empty())
    {
      throw InvalidInput("maximal set " + std::to_string(i) + " is empty");
    }
    if (sets_[i].bound() > n_)
    {
      throw InvalidInput("maximal set " + std::to_string(i) + " names a bidder >= n");
    }
    for (std::size_t j = 0; j < sets_.size(); ++j)
    {
      if (i != j && sets_[i].subset_of(sets_[j]))
      {
        throw InvalidInput("maximal set " + std::to_string(i) + " is contained in set " + std::to_string(j));
      }
    }
  }
}

std::optional<std::size_t> SetSystem::index_of(const BidderSet &s) const
{
  for (std::size_t i = 0; i < sets_.size(); ++i)
  {
    if (sets_[i] == s)
    {
      return i;
    }
  }
  return std::nullopt;
}

std::vector<BidderSet> reduce_to_antichain(std::vector<BidderSet> sets)
{
  std::vector<BidderSet> out;
  for (std::size_t i = 0; i < sets.size(); ++i)
  {
    if (sets[i].empty())
    {
      continue;
    }
    bool dominated = false;
    for (std::size_t j = 0; j < sets.size() && !dominated; ++j)
    {
      if (i == j || !sets[i].subset_of(sets[j]))
      {
        continue;
      }
      // Equal sets: the first occurrence survives.
      dominated = sets[i] != sets[j] || j < i;
    }
    if (!dominated)
    {
      out.push_back(sets[i]);
    }
  }
  return out;
}

bool is_feasible(const SetSystem &sys, const BidderSet &s)
{
  if (s.bound() > sys.n())
  {
    throw InvalidInput("bidder index out of range");
  }
  if (s.empty())
  {
    return true;
  }
  return containing_maximal_set(sys, s).has_value();
}

Money sum_over(const BidderSet &s, const std::vector<Money> &values)
{
  Money total = 0;
  s.for_each([&](Bidder b) { total += values.at(b); });
  return total;
}

SetValue max_revenue_set(const SetSystem &sys, const BidderSet &active, const std::vector<Money> &prices)
{
  SetValue best{BidderSet{}, Money(0), std::nullopt};
  for (std::size_t i = 0; i < sys.size(); ++i)
  {
    BidderSet w   = sys[i] & active;
    Money     rev = sum_over(w, prices);
    if (!best.index || rev > best.value)
    {
      best = SetValue{std::move(w), rev, i};
    }
  }
  return best;
}

SetValue opt_oracle(const SetSystem &sys, const std::vector<Money> &values)
{
  SetValue best{BidderSet{}, Money(0), std::nullopt};
  for (std::size_t i = 0; i < sys.size(); ++i)
  {
    Money welfare = sum_over(sys[i], values);
    if (!best.index || welfare > best.value)
    {
      best = SetValue{sys[i], welfare, i};
    }
  }
  return best;
}

SetSystem make_disjoint(const SetSystem &sys, const BidderSet &pred)
{
  if (!sys.index_of(pred))
  {
    throw InvalidPrediction("prediction " + pred.str() + " is not a maximal set");
  }
  std::vector<BidderSet> sets;
  sets.reserve(sys.size());
  for (const BidderSet &f : sys.maximal_sets())
  {
    sets.push_back(f == pred ? f : f - pred);
  }
  return SetSystem(sys.n(), reduce_to_antichain(std::move(sets)));
}

std::optional<std::size_t> containing_maximal_set(const SetSystem &sys, const BidderSet &s)
{
  for (std::size_t i = 0; i < sys.size(); ++i)
  {
    if (s.subset_of(sys[i]))
    {
      return i;
    }
  }
  return std::nullopt;
}

}  // namespace clockaug
