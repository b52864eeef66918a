#pragma once

#include "clockaug/oracle.hpp"
#include "clockaug/set_system.hpp"
#include "clockaug/trace.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace clockaug {

enum class AdvanceMode
{
  event,  ///< exact jumps to the next event level
  grid,   ///< fixed increments of delta
};

std::string       to_string(AdvanceMode mode);
AdvanceMode       parse_mode(const std::string &text);

struct EngineConfig
{
  AdvanceMode          mode = AdvanceMode::event;
  /// Grid step; defaults to v_min / n^2.
  std::optional<Money> delta;
};

/// Inverse of the mode line a clock writes into its trace header.
EngineConfig engine_config(const std::string &header_mode);

struct ExitRecord
{
  Bidder bidder;
  Money  price;
  Money  value;
};

class Clock;

/// Stop condition for a uniform-price phase. Every leaf is monotone in the
/// water level between exits, so conjunctions and disjunctions are too.
class StopPredicate
{
public:
  /// Never fires; the phase runs until its scope is exhausted.
  static StopPredicate exhausted();
  /// max over the family of rev(F) >= target.
  static StopPredicate revenue_at_least(std::vector<BidderSet> family, Money target);
  /// max over the family of rejected_welfare(F) >= target. Changes only at exits.
  static StopPredicate rejected_at_least(std::vector<BidderSet> family, Money target);
  /// factor · rev(earning) >= rejected_welfare(lost). factor > 0.
  static StopPredicate revenue_covers_rejected(BidderSet earning, BidderSet lost, Money factor);
  /// Lowest active price in the phase scope >= level.
  static StopPredicate price_cap(Money level);

  friend StopPredicate operator||(StopPredicate a, StopPredicate b);
  friend StopPredicate operator&&(StopPredicate a, StopPredicate b);

  bool holds(const Clock &clock, const BidderSet &scope) const;

  /// Smallest level x above `water` at which the predicate holds once every
  /// bidder of `group` (all priced at `water`) is raised to x with no exits.
  std::optional<Money> firing_level(const Clock &clock, const BidderSet &scope, const BidderSet &group,
                                    const Money &water) const;

private:
  enum class Kind
  {
    never,
    revenue,
    rejected,
    covers,
    cap,
    any,
    all,
  };

  struct Node;

  explicit StopPredicate(std::shared_ptr<const Node> node)
    : node_(std::move(node))
  {}

  std::shared_ptr<const Node> node_;
};

/// Run-owned auction state: monotone prices, active set, exit log and trace.
class Clock
{
public:
  enum class StopReason
  {
    stopped,
    exhausted,
  };

  Clock(std::size_t n, Money v_min, BidderOracle &oracle, EngineConfig config, Trace &trace);

  std::size_t                    n() const { return prices_.size(); }
  const Money                   &v_min() const { return v_min_; }
  AdvanceMode                    mode() const { return mode_; }
  const Money                   &delta() const { return delta_; }
  const std::vector<Money>      &prices() const { return prices_; }
  const Money                   &price(Bidder b) const { return prices_.at(b); }
  const BidderSet               &active() const { return active_; }
  const std::vector<ExitRecord> &exit_log() const { return exit_log_; }

  Money rev(const BidderSet &s) const;
  Money rejected_welfare(const BidderSet &s) const;
  Money max_rev(const std::vector<BidderSet> &family) const;
  Money max_rejected(const std::vector<BidderSet> &family) const;

  /// Water-filling: repeatedly raise the lowest-priced active bidders of scope
  /// until `stop` holds or no bidder of scope is active.
  StopReason uniform_price(const BidderSet &scope, const StopPredicate &stop);

  /// Oracle's current acceptance limit for bidder b.
  Money threshold(Bidder b) const;

  /// Moves bidders to new prices; each entry must not lower a price.
  void move_prices(const std::vector<std::pair<Bidder, Money>> &moves);

  /// Event mode: bidder b sits at its threshold and is pushed past it.
  void exit_at_threshold(Bidder b);

  /// Grid mode: offers `price` to b. Returns false if b exited.
  bool offer(Bidder b, const Money &price);

  void phase(std::string label, std::size_t iteration, std::optional<Money> value = std::nullopt);
  void note(std::string text);
  void finish(const BidderSet &served, std::string via);

  Trace &trace() { return trace_; }

private:
  StopReason uniform_price_event(const BidderSet &scope, const StopPredicate &stop);
  StopReason uniform_price_grid(const BidderSet &scope, const StopPredicate &stop);
  void       record_exit(Bidder b, const Money &price, const Money &value);

  BidderOracle           &oracle_;
  Trace                  &trace_;
  AdvanceMode             mode_;
  Money                   v_min_;
  Money                   delta_;
  std::vector<Money>      prices_;
  BidderSet               active_;
  std::vector<ExitRecord> exit_log_;
  std::vector<std::optional<Money>> learned_;
};

bool run_to_feasible_check(const Clock &clock, const SetSystem &sys);

/// Lowest price among active members of s.
std::optional<Money> water_level(const Clock &clock, const BidderSet &s);

}  // namespace clockaug
