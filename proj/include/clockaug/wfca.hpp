#pragma once

#include "clockaug/clock.hpp"
#include "clockaug/instance.hpp"

namespace clockaug {

struct WfcaOutcome
{
  BidderSet          served;
  std::vector<Money> prices;
  /// Max-set revenue before the first round and after every round.
  std::vector<Money> revenue_history;
  /// Event-mode advances in which two or more bidders reach their thresholds
  /// together. Derived from private thresholds, so it stays out of the trace.
  std::size_t        coincident_limit_steps = 0;
};

/// Water-filling clock auction from the clock's current prices and active set.
/// Ends with a feasible active set; does not emit an outcome event.
WfcaOutcome run_wfca(Clock &clock, const SetSystem &sys);

struct StandaloneWfca
{
  WfcaOutcome outcome;
  Money       welfare;
  Trace       trace;
};

/// Runs WFCA from all-v_min prices against truthful bidders of `inst`.
StandaloneWfca run_wfca(const Instance &inst, const EngineConfig &config = {});

/// Index of the first trace event after which max over maximal sets of
/// rev(F ∩ active) is lower than before it; nullopt when it never falls.
std::optional<std::size_t> first_revenue_drop(const Trace &trace, const SetSystem &sys);

}  // namespace clockaug
