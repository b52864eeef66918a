#pragma once

#include "clockaug/bidder_set.hpp"
#include "clockaug/money.hpp"

#include <optional>
#include <vector>

namespace clockaug {

/// Downward-closed family over bidders {0..n-1}, given by its maximal sets.
/// Invariants: every maximal set is nonempty, none contains another, all
/// members are < n. List order is the tie-breaking key everywhere.
class SetSystem
{
public:
  SetSystem() = default;
  SetSystem(std::size_t n, std::vector<BidderSet> maximal_sets);

  std::size_t                   n() const { return n_; }
  const std::vector<BidderSet> &maximal_sets() const { return sets_; }
  std::size_t                   size() const { return sets_.size(); }
  const BidderSet              &operator[](std::size_t i) const { return sets_[i]; }

  /// Index of the maximal set equal to s, if any.
  std::optional<std::size_t> index_of(const BidderSet &s) const;

  friend bool operator==(const SetSystem &a, const SetSystem &b)
  {
    return a.n_ == b.n_ && a.sets_ == b.sets_;
  }

private:
  std::size_t            n_ = 0;
  std::vector<BidderSet> sets_;
};

struct SetValue
{
  BidderSet set;
  Money     value;
  /// Position of the maximizing maximal set; absent when the system is empty.
  std::optional<std::size_t> index;
};

/// Drops duplicates and sets contained in another, keeping first occurrences in order.
std::vector<BidderSet> reduce_to_antichain(std::vector<BidderSet> sets);

bool is_feasible(const SetSystem &sys, const BidderSet &s);

/// W = F* ∩ active where F* maximizes revenue, lowest index on ties.
SetValue max_revenue_set(const SetSystem &sys, const BidderSet &active, const std::vector<Money> &prices);

/// Welfare-maximizing maximal set, lowest index on ties.
SetValue opt_oracle(const SetSystem &sys, const std::vector<Money> &values);

/// Removes pred from every other maximal set, then restores the antichain.
SetSystem make_disjoint(const SetSystem &sys, const BidderSet &pred);

/// Lowest-index maximal set containing s.
std::optional<std::size_t> containing_maximal_set(const SetSystem &sys, const BidderSet &s);

Money sum_over(const BidderSet &s, const std::vector<Money> &values);

}  // namespace clockaug
