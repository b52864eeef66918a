#include "clockaug/wfca.hpp"

#include <algorithm>
#include <cstdint>
#include <map>

namespace clockaug {

namespace {

// Event mode resolves revenue ties with an infinitesimal simulation: every
// price is real + c·dt with integer c. The grid process is replayed on the
// integer parts until the pattern of relative offsets repeats, which yields
// the exact limiting rates at which each bidder's price rises. Prices then
// advance at those rates until the next real-valued coincidence.

using Counts = std::vector<std::int64_t>;

struct MicroSystem
{
  std::vector<Bidder>           act;
  std::vector<int>              price_rank;
  std::vector<bool>             at_limit;
  std::vector<std::vector<int>> set_members;
  std::vector<std::vector<int>> sets_of;
  std::vector<int>              rev_rank;
  std::vector<std::vector<int>> price_classes;
  std::vector<std::vector<int>> rev_classes;
};

struct MicroResult
{
  bool             exit_round = false;
  std::vector<int> round_group;
  Counts           increments;
  std::int64_t     period = 0;
  std::vector<int> leaders;
};

std::vector<int> rank_values(const std::vector<Money> &xs, std::vector<std::vector<int>> &classes)
{
  std::vector<Money> distinct = xs;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<int> rank(xs.size());
  classes.assign(distinct.size(), {});
  for (std::size_t i = 0; i < xs.size(); ++i)
  {
    rank[i] = static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), xs[i]) - distinct.begin());
    classes[static_cast<std::size_t>(rank[i])].push_back(static_cast<int>(i));
  }
  classes.erase(std::remove_if(classes.begin(), classes.end(), [](const auto &c) { return c.size() < 2; }),
                classes.end());
  return rank;
}

MicroSystem build_micro(const Clock &clock, const SetSystem &sys)
{
  MicroSystem ms;
  ms.act = clock.active().members();
  std::vector<int> local(clock.n(), -1);
  std::vector<Money> prices;
  for (std::size_t i = 0; i < ms.act.size(); ++i)
  {
    Bidder b  = ms.act[i];
    local[b]  = static_cast<int>(i);
    prices.push_back(clock.price(b));
    ms.at_limit.push_back(clock.threshold(b) == clock.price(b));
  }
  ms.price_rank = rank_values(prices, ms.price_classes);

  ms.sets_of.assign(ms.act.size(), {});
  std::vector<Money> revenues;
  for (std::size_t j = 0; j < sys.size(); ++j)
  {
    std::vector<int> members;
    Money            r = 0;
    (sys[j] & clock.active()).for_each([&](Bidder b) {
      int li = local[b];
      members.push_back(li);
      ms.sets_of[static_cast<std::size_t>(li)].push_back(static_cast<int>(j));
      r += clock.price(b);
    });
    ms.set_members.push_back(std::move(members));
    revenues.push_back(r);
  }
  ms.rev_rank = rank_values(revenues, ms.rev_classes);
  return ms;
}

void append_class_key(Counts &key, const std::vector<std::vector<int>> &classes, const Counts &x, std::int64_t bound,
                      std::vector<int> &scratch)
{
  for (const auto &cls : classes)
  {
    scratch = cls;
    std::sort(scratch.begin(), scratch.end(), [&](int a, int b) {
      return x[static_cast<std::size_t>(a)] != x[static_cast<std::size_t>(b)]
                 ? x[static_cast<std::size_t>(a)] < x[static_cast<std::size_t>(b)]
                 : a < b;
    });
    std::int64_t offset = 0;
    for (std::size_t k = 0; k < scratch.size(); ++k)
    {
      if (k > 0)
      {
        std::int64_t gap = x[static_cast<std::size_t>(scratch[k])] - x[static_cast<std::size_t>(scratch[k - 1])];
        offset += std::min(gap, bound);
      }
      key.push_back(scratch[k]);
      key.push_back(offset);
    }
    key.push_back(-1);
  }
}

// Gaps that were clamped in the repeated key must not shrink over the period.
bool clamped_gaps_diverge(const std::vector<std::vector<int>> &classes, const Counts &before, const Counts &after,
                          std::int64_t bound)
{
  for (const auto &cls : classes)
  {
    std::vector<int> order = cls;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return before[static_cast<std::size_t>(a)] != before[static_cast<std::size_t>(b)]
                 ? before[static_cast<std::size_t>(a)] < before[static_cast<std::size_t>(b)]
                 : a < b;
    });
    for (std::size_t k = 1; k < order.size(); ++k)
    {
      auto lo = static_cast<std::size_t>(order[k - 1]);
      auto hi = static_cast<std::size_t>(order[k]);
      if (before[hi] - before[lo] > bound && after[hi] - before[hi] < after[lo] - before[lo])
      {
        return false;
      }
    }
  }
  return true;
}

MicroResult simulate_micro(const MicroSystem &ms)
{
  const std::size_t  nb    = ms.act.size();
  const std::size_t  ns    = ms.set_members.size();
  const std::int64_t bound = 4 * static_cast<std::int64_t>(nb) + 16;
  constexpr std::int64_t kMaxSteps = 2'000'000;

  Counts c(nb, 0);
  Counts rc(ns, 0);
  std::vector<Counts> c_hist;
  std::vector<Counts> rc_hist;
  std::vector<int>    winners;
  std::map<Counts, std::int64_t> seen;
  std::vector<int>    scratch;
  std::vector<char>   in_w(nb, 0);

  auto make_key = [&]() {
    Counts key;
    append_class_key(key, ms.price_classes, c, bound, scratch);
    key.push_back(-2);
    append_class_key(key, ms.rev_classes, rc, bound, scratch);
    return key;
  };

  seen.emplace(make_key(), 0);
  c_hist.push_back(c);
  rc_hist.push_back(rc);

  for (std::int64_t t = 0; t < kMaxSteps; ++t)
  {
    int w = -1;
    for (std::size_t j = 0; j < ns; ++j)
    {
      if (w < 0 || ms.rev_rank[j] > ms.rev_rank[static_cast<std::size_t>(w)] ||
          (ms.rev_rank[j] == ms.rev_rank[static_cast<std::size_t>(w)] && rc[j] > rc[static_cast<std::size_t>(w)]))
      {
        w = static_cast<int>(j);
      }
    }
    std::fill(in_w.begin(), in_w.end(), 0);
    if (w >= 0)
    {
      for (int li : ms.set_members[static_cast<std::size_t>(w)])
      {
        in_w[static_cast<std::size_t>(li)] = 1;
      }
    }
    std::vector<int> group;
    for (std::size_t i = 0; i < nb; ++i)
    {
      if (in_w[i] != 0)
      {
        continue;
      }
      if (group.empty())
      {
        group.push_back(static_cast<int>(i));
        continue;
      }
      auto g0 = static_cast<std::size_t>(group.front());
      if (ms.price_rank[i] < ms.price_rank[g0] || (ms.price_rank[i] == ms.price_rank[g0] && c[i] < c[g0]))
      {
        group.assign(1, static_cast<int>(i));
      }
      else if (ms.price_rank[i] == ms.price_rank[g0] && c[i] == c[g0])
      {
        group.push_back(static_cast<int>(i));
      }
    }
    if (group.empty())
    {
      throw InvariantViolation("infeasible active set has no losers");
    }
    for (int li : group)
    {
      if (ms.at_limit[static_cast<std::size_t>(li)])
      {
        MicroResult out;
        out.exit_round  = true;
        out.round_group = group;
        return out;
      }
    }
    for (int li : group)
    {
      ++c[static_cast<std::size_t>(li)];
      for (int j : ms.sets_of[static_cast<std::size_t>(li)])
      {
        ++rc[static_cast<std::size_t>(j)];
      }
    }
    winners.push_back(w);

    Counts key = make_key();
    auto   it  = seen.find(key);
    if (it != seen.end())
    {
      std::int64_t t0 = it->second;
      const Counts &c0  = c_hist[static_cast<std::size_t>(t0)];
      const Counts &rc0 = rc_hist[static_cast<std::size_t>(t0)];
      if (clamped_gaps_diverge(ms.price_classes, c0, c, bound) && clamped_gaps_diverge(ms.rev_classes, rc0, rc, bound))
      {
        MicroResult out;
        out.period = t + 1 - t0;
        out.increments.resize(nb);
        for (std::size_t i = 0; i < nb; ++i)
        {
          out.increments[i] = c[i] - c0[i];
        }
        std::vector<int> leaders(winners.begin() + t0, winners.end());
        std::sort(leaders.begin(), leaders.end());
        leaders.erase(std::unique(leaders.begin(), leaders.end()), leaders.end());
        out.leaders = std::move(leaders);
        return out;
      }
      it->second = t + 1;
    }
    else
    {
      seen.emplace(std::move(key), t + 1);
    }
    c_hist.push_back(c);
    rc_hist.push_back(rc);
  }
  throw InvariantViolation("water-filling found no periodic price pattern");
}

void run_event(Clock &clock, const SetSystem &sys, WfcaOutcome &out)
{
  std::vector<Money> &history = out.revenue_history;
  while (!is_feasible(sys, clock.active()))
  {
    MicroSystem ms = build_micro(clock, sys);
    MicroResult mr = simulate_micro(ms);
    if (mr.exit_round)
    {
      for (int li : mr.round_group)
      {
        Bidder b = ms.act[static_cast<std::size_t>(li)];
        if (clock.threshold(b) == clock.price(b))
        {
          clock.exit_at_threshold(b);
        }
      }
      history.push_back(max_revenue_set(sys, clock.active(), clock.prices()).value);
      continue;
    }
    if (mr.leaders.size() > 1)
    {
      std::string text = "wfca-tie leaders=";
      for (std::size_t k = 0; k < mr.leaders.size(); ++k)
      {
        text += (k > 0 ? "," : "") + std::to_string(mr.leaders[k]);
      }
      clock.note(std::move(text));
    }

    const std::size_t  nb = ms.act.size();
    const Money        period(static_cast<long>(mr.period));
    std::vector<Money> rate(nb);
    std::vector<Money> price(nb);
    for (std::size_t i = 0; i < nb; ++i)
    {
      rate[i] = Money(static_cast<long>(mr.increments[i])) / period;
      price[i] = clock.price(ms.act[i]);
    }
    std::optional<Money> step;
    auto                 take = [&](Money cand) {
      if (!step || cand < *step)
      {
        step = std::move(cand);
      }
    };
    for (std::size_t i = 0; i < nb; ++i)
    {
      if (rate[i] > 0)
      {
        take((clock.threshold(ms.act[i]) - price[i]) / rate[i]);
      }
      for (std::size_t k = 0; k < nb; ++k)
      {
        if (price[i] < price[k] && rate[i] > rate[k])
        {
          take((price[k] - price[i]) / (rate[i] - rate[k]));
        }
      }
    }
    const std::size_t  ns = ms.set_members.size();
    std::vector<Money> rev(ns);
    std::vector<Money> rev_rate(ns);
    for (std::size_t j = 0; j < ns; ++j)
    {
      for (int li : ms.set_members[j])
      {
        rev[j] += price[static_cast<std::size_t>(li)];
        rev_rate[j] += rate[static_cast<std::size_t>(li)];
      }
    }
    for (std::size_t j = 0; j < ns; ++j)
    {
      for (std::size_t k = 0; k < ns; ++k)
      {
        if (rev[j] < rev[k] && rev_rate[j] > rev_rate[k])
        {
          take((rev[k] - rev[j]) / (rev_rate[j] - rev_rate[k]));
        }
      }
    }
    if (!step || *step <= 0)
    {
      throw InvariantViolation("water-filling advance has no positive horizon");
    }
    std::size_t limits_hit = 0;
    for (std::size_t i = 0; i < nb; ++i)
    {
      if (rate[i] > 0 && (clock.threshold(ms.act[i]) - price[i]) / rate[i] == *step)
      {
        ++limits_hit;
      }
    }
    if (limits_hit > 1)
    {
      ++out.coincident_limit_steps;
    }
    std::vector<std::pair<Bidder, Money>> moves;
    for (std::size_t i = 0; i < nb; ++i)
    {
      if (rate[i] > 0)
      {
        Money to = price[i] + *step * rate[i];
        to.canonicalize();
        moves.emplace_back(ms.act[i], std::move(to));
      }
    }
    clock.move_prices(moves);
    history.push_back(max_revenue_set(sys, clock.active(), clock.prices()).value);
  }
}

void run_grid(Clock &clock, const SetSystem &sys, std::vector<Money> &history)
{
  while (!is_feasible(sys, clock.active()))
  {
    BidderSet losers = clock.active() - max_revenue_set(sys, clock.active(), clock.prices()).set;
    Money     water  = *water_level(clock, losers);
    Money     raised = water + clock.delta();
    for (Bidder b : losers.members())
    {
      if (clock.price(b) == water)
      {
        clock.offer(b, raised);
      }
    }
    history.push_back(max_revenue_set(sys, clock.active(), clock.prices()).value);
  }
}

}  // namespace

WfcaOutcome run_wfca(Clock &clock, const SetSystem &sys)
{
  WfcaOutcome out;
  out.revenue_history.push_back(max_revenue_set(sys, clock.active(), clock.prices()).value);
  if (clock.mode() == AdvanceMode::event)
  {
    run_event(clock, sys, out);
  }
  else
  {
    run_grid(clock, sys, out.revenue_history);
  }
  out.served = clock.active();
  out.prices = clock.prices();
  return out;
}

StandaloneWfca run_wfca(const Instance &inst, const EngineConfig &config)
{
  inst.validate();
  StandaloneWfca result;
  result.trace.header.mechanism = "wfca";
  result.trace.header.params    = "-";
  TruthfulOracle oracle(inst.values);
  Clock          clock(inst.n(), inst.v_min, oracle, config, result.trace);
  clock.phase("wfca", 0);
  result.outcome = run_wfca(clock, inst.sys);
  clock.finish(result.outcome.served, "wfca");
  result.welfare = sum_over(result.outcome.served, inst.values);
  return result;
}

std::optional<std::size_t> first_revenue_drop(const Trace &trace, const SetSystem &sys)
{
  std::optional<std::size_t> drop;
  std::optional<Money>       last;
  std::size_t                index = 0;
  replay(trace, [&](const TraceEvent &, const ReplayState &st) {
    Money now = max_revenue_set(sys, st.active, st.prices).value;
    if (!drop && last && now < *last)
    {
      drop = index;
    }
    last = std::move(now);
    ++index;
  });
  return drop;
}

}  // namespace clockaug
