#pragma once

#include "clockaug/money.hpp"

#include <optional>
#include <vector>

namespace clockaug {

/// How bidders answer price offers. Offers to one bidder strictly increase.
class BidderOracle
{
public:
  virtual ~BidderOracle() = default;

  /// Highest price the bidder would accept right now.
  virtual Money threshold(Bidder b) const = 0;

  /// Offer a higher price. Returns the learned value when the bidder exits.
  virtual std::optional<Money> respond(Bidder b, const Money &price) = 0;

  /// The bidder is at its threshold and is offered infinitesimally more.
  virtual Money exit_at_threshold(Bidder b) = 0;
};

/// Accepts p iff p <= v_i.
class TruthfulOracle final : public BidderOracle
{
public:
  explicit TruthfulOracle(std::vector<Money> values)
    : values_(std::move(values))
  {}

  Money threshold(Bidder b) const override { return values_.at(b); }

  std::optional<Money> respond(Bidder b, const Money &price) override
  {
    if (price > values_.at(b))
    {
      return values_[b];
    }
    return std::nullopt;
  }

  Money exit_at_threshold(Bidder b) override { return values_.at(b); }

private:
  std::vector<Money> values_;
};

}  // namespace clockaug
