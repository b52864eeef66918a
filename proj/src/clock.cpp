#include "clockaug/clock.hpp"

#include <algorithm>

namespace clockaug {

std::string to_string(AdvanceMode mode)
{
  return mode == AdvanceMode::event ? "event" : "grid";
}

AdvanceMode parse_mode(const std::string &text)
{
  if (text == "event")
  {
    return AdvanceMode::event;
  }
  if (text == "grid")
  {
    return AdvanceMode::grid;
  }
  throw InvalidInput("unknown mode '" + text + "'");
}

EngineConfig engine_config(const std::string &header_mode)
{
  std::size_t  space = header_mode.find(' ');
  EngineConfig config;
  config.mode = parse_mode(header_mode.substr(0, space));
  if (space != std::string::npos)
  {
    config.delta = parse_money(header_mode.substr(space + 1));
  }
  return config;
}

struct StopPredicate::Node
{
  Kind                       kind = Kind::never;
  std::vector<BidderSet>     family;
  Money                      target;
  BidderSet                  earning;
  BidderSet                  lost;
  std::vector<StopPredicate> children;
};

StopPredicate StopPredicate::exhausted()
{
  return StopPredicate(std::make_shared<const Node>());
}

StopPredicate StopPredicate::revenue_at_least(std::vector<BidderSet> family, Money target)
{
  auto node    = std::make_shared<Node>();
  node->kind   = Kind::revenue;
  node->family = std::move(family);
  node->target = std::move(target);
  return StopPredicate(std::move(node));
}

StopPredicate StopPredicate::rejected_at_least(std::vector<BidderSet> family, Money target)
{
  auto node    = std::make_shared<Node>();
  node->kind   = Kind::rejected;
  node->family = std::move(family);
  node->target = std::move(target);
  return StopPredicate(std::move(node));
}

StopPredicate StopPredicate::revenue_covers_rejected(BidderSet earning, BidderSet lost, Money factor)
{
  if (factor <= 0)
  {
    throw InvalidInput("coverage factor must be positive");
  }
  auto node     = std::make_shared<Node>();
  node->kind    = Kind::covers;
  node->earning = std::move(earning);
  node->lost    = std::move(lost);
  node->target  = std::move(factor);
  return StopPredicate(std::move(node));
}

StopPredicate StopPredicate::price_cap(Money level)
{
  auto node    = std::make_shared<Node>();
  node->kind   = Kind::cap;
  node->target = std::move(level);
  return StopPredicate(std::move(node));
}

StopPredicate operator||(StopPredicate a, StopPredicate b)
{
  auto node      = std::make_shared<StopPredicate::Node>();
  node->kind     = StopPredicate::Kind::any;
  node->children = {std::move(a), std::move(b)};
  return StopPredicate(std::move(node));
}

StopPredicate operator&&(StopPredicate a, StopPredicate b)
{
  auto node      = std::make_shared<StopPredicate::Node>();
  node->kind     = StopPredicate::Kind::all;
  node->children = {std::move(a), std::move(b)};
  return StopPredicate(std::move(node));
}

bool StopPredicate::holds(const Clock &clock, const BidderSet &scope) const
{
  const Node &nd = *node_;
  switch (nd.kind)
  {
    case Kind::never:
      return false;
    case Kind::revenue:
      return !nd.family.empty() && clock.max_rev(nd.family) >= nd.target;
    case Kind::rejected:
      return !nd.family.empty() && clock.max_rejected(nd.family) >= nd.target;
    case Kind::covers:
      return nd.target * clock.rev(nd.earning) >= clock.rejected_welfare(nd.lost);
    case Kind::cap:
    {
      auto level = water_level(clock, scope);
      return level && *level >= nd.target;
    }
    case Kind::any:
      return std::any_of(nd.children.begin(), nd.children.end(),
                         [&](const StopPredicate &c) { return c.holds(clock, scope); });
    case Kind::all:
      return std::all_of(nd.children.begin(), nd.children.end(),
                         [&](const StopPredicate &c) { return c.holds(clock, scope); });
  }
  return false;
}

std::optional<Money> StopPredicate::firing_level(const Clock &clock, const BidderSet &scope, const BidderSet &group,
                                                 const Money &water) const
{
  if (holds(clock, scope))
  {
    return water;
  }
  const Node &nd = *node_;

  // Level at which rev(s) reaches `need` when group ∩ s rises from water.
  auto crossing = [&](const BidderSet &s, const Money &need) -> std::optional<Money> {
    std::size_t k = (s & group).size();
    if (k == 0)
    {
      return std::nullopt;
    }
    Money x = water + (need - clock.rev(s)) / Money(static_cast<unsigned long>(k));
    x.canonicalize();
    return x;
  };
  auto lower = [](std::optional<Money> &best, const std::optional<Money> &cand) {
    if (cand && (!best || *cand < *best))
    {
      best = cand;
    }
  };

  switch (nd.kind)
  {
    case Kind::never:
    case Kind::rejected:
      return std::nullopt;
    case Kind::revenue:
    {
      std::optional<Money> best;
      for (const BidderSet &f : nd.family)
      {
        lower(best, crossing(f, nd.target));
      }
      return best;
    }
    case Kind::covers:
    {
      Money need = clock.rejected_welfare(nd.lost) / nd.target;
      return crossing(nd.earning, need);
    }
    case Kind::cap:
      return nd.target;
    case Kind::any:
    {
      std::optional<Money> best;
      for (const StopPredicate &c : nd.children)
      {
        lower(best, c.firing_level(clock, scope, group, water));
      }
      return best;
    }
    case Kind::all:
    {
      std::optional<Money> worst = water;
      for (const StopPredicate &c : nd.children)
      {
        auto lvl = c.firing_level(clock, scope, group, water);
        if (!lvl)
        {
          return std::nullopt;
        }
        if (*lvl > *worst)
        {
          worst = lvl;
        }
      }
      return worst;
    }
  }
  return std::nullopt;
}

Clock::Clock(std::size_t n, Money v_min, BidderOracle &oracle, EngineConfig config, Trace &trace)
  : oracle_(oracle)
  , trace_(trace)
  , mode_(config.mode)
  , v_min_(std::move(v_min))
  , prices_(n, v_min_)
  , active_(BidderSet::range(n))
  , learned_(n)
{
  if (n == 0 || v_min_ <= 0)
  {
    throw InvalidInput("clock needs n >= 1 and v_min > 0");
  }
  delta_ = config.delta ? *config.delta : v_min_ / Money(static_cast<unsigned long>(n * n));
  delta_.canonicalize();
  if (delta_ <= 0)
  {
    throw InvalidInput("grid step must be positive");
  }
  trace_.header.n     = n;
  trace_.header.v_min = v_min_;
  trace_.header.mode  = mode_ == AdvanceMode::grid ? "grid " + to_string(delta_) : to_string(mode_);
}

Money Clock::rev(const BidderSet &s) const
{
  return sum_over(s & active_, prices_);
}

Money Clock::rejected_welfare(const BidderSet &s) const
{
  Money total = 0;
  (s - active_).for_each([&](Bidder b) {
    if (learned_.at(b))
    {
      total += *learned_[b];
    }
  });
  return total;
}

Money Clock::max_rev(const std::vector<BidderSet> &family) const
{
  Money best = 0;
  for (const BidderSet &f : family)
  {
    Money r = rev(f);
    if (r > best)
    {
      best = r;
    }
  }
  return best;
}

Money Clock::max_rejected(const std::vector<BidderSet> &family) const
{
  Money best = 0;
  for (const BidderSet &f : family)
  {
    Money r = rejected_welfare(f);
    if (r > best)
    {
      best = r;
    }
  }
  return best;
}

Money Clock::threshold(Bidder b) const
{
  return oracle_.threshold(b);
}

void Clock::move_prices(const std::vector<std::pair<Bidder, Money>> &moves)
{
  // Group equal (from, to) pairs into one trace event, in first-seen order.
  std::vector<event::Raise> groups;
  for (const auto &[b, to] : moves)
  {
    if (!active_.contains(b))
    {
      throw InvariantViolation("price move for an exited bidder");
    }
    const Money &from = prices_.at(b);
    if (to < from)
    {
      throw InvariantViolation("clock price would decrease");
    }
    if (to == from)
    {
      continue;
    }
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const event::Raise &g) { return g.from == from && g.to == to; });
    if (it == groups.end())
    {
      groups.push_back(event::Raise{BidderSet{b}, from, to});
    }
    else
    {
      it->bidders.insert(b);
    }
  }
  for (event::Raise &g : groups)
  {
    g.bidders.for_each([&](Bidder b) { prices_[b] = g.to; });
    trace_.events.emplace_back(std::move(g));
  }
}

void Clock::record_exit(Bidder b, const Money &price, const Money &value)
{
  active_.erase(b);
  learned_[b] = value;
  exit_log_.push_back(ExitRecord{b, price, value});
  trace_.events.emplace_back(event::Exit{b, price, value});
}

void Clock::exit_at_threshold(Bidder b)
{
  if (!active_.contains(b))
  {
    throw InvariantViolation("exit of an inactive bidder");
  }
  if (oracle_.threshold(b) != prices_[b])
  {
    throw InvariantViolation("bidder pushed past a threshold it has not reached");
  }
  Money value = oracle_.exit_at_threshold(b);
  record_exit(b, prices_[b], value);
}

bool Clock::offer(Bidder b, const Money &price)
{
  if (!active_.contains(b))
  {
    throw InvariantViolation("offer to an inactive bidder");
  }
  if (price <= prices_[b])
  {
    throw InvariantViolation("offers must strictly increase");
  }
  auto value = oracle_.respond(b, price);
  if (value)
  {
    record_exit(b, price, *value);
    return false;
  }
  trace_.events.emplace_back(event::Raise{BidderSet{b}, prices_[b], price});
  prices_[b] = price;
  return true;
}

void Clock::phase(std::string label, std::size_t iteration, std::optional<Money> value)
{
  trace_.events.emplace_back(event::Phase{std::move(label), iteration, std::move(value)});
}

void Clock::note(std::string text)
{
  trace_.events.emplace_back(event::Note{std::move(text)});
}

void Clock::finish(const BidderSet &served, std::string via)
{
  trace_.events.emplace_back(event::Outcome{served, std::move(via)});
}

Clock::StopReason Clock::uniform_price(const BidderSet &scope, const StopPredicate &stop)
{
  return mode_ == AdvanceMode::event ? uniform_price_event(scope, stop) : uniform_price_grid(scope, stop);
}

Clock::StopReason Clock::uniform_price_event(const BidderSet &scope, const StopPredicate &stop)
{
  for (;;)
  {
    BidderSet live = scope & active_;
    if (live.empty())
    {
      return StopReason::exhausted;
    }
    if (stop.holds(*this, scope))
    {
      return StopReason::stopped;
    }
    Money                water = *water_level(*this, live);
    BidderSet            group;
    std::optional<Money> next;
    live.for_each([&](Bidder b) {
      if (prices_[b] == water)
      {
        group.insert(b);
      }
      else if (!next || prices_[b] < *next)
      {
        next = prices_[b];
      }
    });

    // A bidder already at its limit leaves before the level moves.
    std::optional<Bidder> leaving;
    std::optional<Money>  limit;
    group.for_each([&](Bidder b) {
      Money t = oracle_.threshold(b);
      if (!leaving && t == water)
      {
        leaving = b;
      }
      if (!limit || t < *limit)
      {
        limit = t;
      }
    });
    if (leaving)
    {
      exit_at_threshold(*leaving);
      continue;
    }

    std::optional<Money> target = limit;
    auto                 take   = [&](const std::optional<Money> &cand) {
      if (cand && (!target || *cand < *target))
      {
        target = cand;
      }
    };
    take(next);
    take(stop.firing_level(*this, scope, group, water));
    if (!target || *target <= water)
    {
      throw InvariantViolation("uniform price made no progress");
    }
    std::vector<std::pair<Bidder, Money>> moves;
    group.for_each([&](Bidder b) { moves.emplace_back(b, *target); });
    move_prices(moves);
  }
}

Clock::StopReason Clock::uniform_price_grid(const BidderSet &scope, const StopPredicate &stop)
{
  for (;;)
  {
    BidderSet live = scope & active_;
    if (live.empty())
    {
      return StopReason::exhausted;
    }
    if (stop.holds(*this, scope))
    {
      return StopReason::stopped;
    }
    Money     water = *water_level(*this, live);
    BidderSet group;
    live.for_each([&](Bidder b) {
      if (prices_[b] == water)
      {
        group.insert(b);
      }
    });
    Money raised = water + delta_;
    for (Bidder b : group.members())
    {
      offer(b, raised);
      if (stop.holds(*this, scope))
      {
        return StopReason::stopped;
      }
    }
  }
}

bool run_to_feasible_check(const Clock &clock, const SetSystem &sys)
{
  return is_feasible(sys, clock.active());
}

std::optional<Money> water_level(const Clock &clock, const BidderSet &s)
{
  std::optional<Money> level;
  (s & clock.active()).for_each([&](Bidder b) {
    if (!level || clock.price(b) < *level)
    {
      level = clock.price(b);
    }
  });
  return level;
}

}  // namespace clockaug
