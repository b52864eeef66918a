#pragma once

namespace clockaug {

template <typename Fn>
void replay(const Trace &trace, Fn &&fn)
{
  ReplayState state;
  state.prices.assign(trace.header.n, trace.header.v_min);
  state.active = BidderSet::range(trace.header.n);
  state.learned.assign(trace.header.n, std::nullopt);
  for (const TraceEvent &ev : trace.events)
  {
    if (const auto *raise = std::get_if<event::Raise>(&ev))
    {
      raise->bidders.for_each([&](Bidder b) {
        if (state.prices.at(b) != raise->from || raise->to < raise->from)
        {
          throw InvariantViolation("trace raise does not match replayed prices");
        }
        state.prices[b] = raise->to;
      });
    }
    else if (const auto *exit = std::get_if<event::Exit>(&ev))
    {
      if (!state.active.contains(exit->bidder))
      {
        throw InvariantViolation("trace exit of an inactive bidder");
      }
      state.active.erase(exit->bidder);
      state.learned.at(exit->bidder) = exit->value;
    }
    fn(ev, static_cast<const ReplayState &>(state));
  }
}

}  // namespace clockaug
