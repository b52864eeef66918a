#pragma once

#include "clockaug/bidder_set.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace clockaug {

namespace event {

/// Start of a mechanism phase. value carries the phase's revenue benchmark.
struct Phase
{
  std::string          label;
  std::size_t          iteration = 0;
  std::optional<Money> value;
};

/// Every listed bidder moved from price `from` to price `to`.
struct Raise
{
  BidderSet bidders;
  Money     from;
  Money     to;
};

struct Exit
{
  Bidder bidder = 0;
  Money  price;  ///< rejected offer (grid) or exit threshold (event)
  Money  value;  ///< learned value
};

struct Note
{
  std::string text;
};

struct Outcome
{
  BidderSet   served;
  std::string via;
};

}  // namespace event

using TraceEvent = std::variant<event::Phase, event::Raise, event::Exit, event::Note, event::Outcome>;

struct TraceHeader
{
  std::string mechanism;
  std::string params;
  std::size_t n = 0;
  Money       v_min;
  /// "event", or "grid <delta>".
  std::string mode;
};

struct Trace
{
  TraceHeader             header;
  std::vector<TraceEvent> events;

  /// The terminal outcome event. Throws if the run did not finish.
  const event::Outcome &outcome() const;
};

/// Versioned line format; write then read is the identity.
void        write_trace(std::ostream &os, const Trace &trace);
Trace       read_trace(std::istream &is);
std::string trace_to_string(const Trace &trace);
Trace       trace_from_string(const std::string &text);

/// Bidders exiting in trace order.
std::vector<Bidder> exit_order(const Trace &trace);

/// Replays raise and exit events from all-v_min prices. `fn` sees the state after every event.
struct ReplayState
{
  std::vector<Money> prices;
  BidderSet          active;
  std::vector<std::optional<Money>> learned;
};

template <typename Fn>
void replay(const Trace &trace, Fn &&fn);

}  // namespace clockaug

#include "clockaug/trace_replay.ipp"
