#include "clockaug/ftbb.hpp"

#include "clockaug/numerics.hpp"
#include "clockaug/wfca.hpp"

namespace clockaug {

namespace {

constexpr unsigned long kBetaGrid = 1000000;

std::vector<BidderSet> unpredicted_sets(const SetSystem &sys, const BidderSet &pred)
{
  std::vector<BidderSet> out;
  for (const BidderSet &f : sys.maximal_sets())
  {
    if (f != pred)
    {
      out.push_back(f);
    }
  }
  return out;
}

}  // namespace

Money threshold_beta(const Money &alpha, std::size_t n)
{
  if (alpha <= 1)
  {
    throw DomainError("alpha must exceed 1");
  }
  double raw = beta_threshold(alpha.get_d(), n);
  // Round up with headroom for the double evaluation.
  return round_up(money_from_double(raw * (1.0 + 1e-12)), kBetaGrid);
}

Money default_beta(const Money &alpha, std::size_t n)
{
  Money floor = 6 * harmonic(n);
  Money beta  = threshold_beta(alpha, n);
  return beta >= floor ? beta : round_up(floor, kBetaGrid);
}

Money resolve_beta(const FtbbParams &params, std::size_t n)
{
  params.validate();
  Money beta = params.beta ? *params.beta : default_beta(params.alpha, n);
  if (beta < 6 * harmonic(n))
  {
    throw DomainError("beta must be at least 6·H_n");
  }
  return beta;
}

MechanismOutcome run_ftbb(const Instance &inst, const FtbbParams &params, BidderOracle &oracle,
                          const EngineConfig &config)
{
  inst.validate();
  const Money     beta = resolve_beta(params, inst.n());
  const BidderSet pred = inst.predicted_set();

  MechanismOutcome out;
  out.trace.header.mechanism = "ftbb";
  out.trace.header.params    = "alpha=" + to_string(params.alpha) + " beta=" + to_string(beta);
  Clock clock(inst.n(), inst.v_min, oracle, config, out.trace);

  const SetSystem              sys      = make_disjoint(inst.sys, pred);
  const std::vector<BidderSet> rivals   = unpredicted_sets(sys, pred);
  const BidderSet              unpred   = BidderSet::range(inst.n()) - pred;
  const Money                  hn       = harmonic(inst.n());
  Money                        checkpoint = clock.rev(pred);

  auto serve = [&](const BidderSet &served, const char *via) {
    out.served  = served;
    out.prices  = clock.prices();
    out.revenue = clock.rev(served);
    out.via     = via;
    clock.finish(served, via);
    return std::move(out);
  };

  for (std::size_t t = 1;; ++t)
  {
    clock.phase("ftbb.U", t, checkpoint);
    Money unpred_target = beta * checkpoint / (4 * hn);
    unpred_target.canonicalize();
    if (clock.uniform_price(unpred, StopPredicate::revenue_at_least(rivals, unpred_target)) ==
        Clock::StopReason::exhausted)
    {
      return serve(pred & clock.active(), "ftbb.line8");
    }

    Money doubled = 2 * checkpoint;
    clock.phase("ftbb.P", t, doubled);
    StopPredicate stop = StopPredicate::revenue_at_least({pred}, doubled) &&
                         StopPredicate::revenue_covers_rejected(pred, pred, params.alpha - 1);
    if (clock.uniform_price(pred, stop) == Clock::StopReason::exhausted)
    {
      clock.phase("ftbb.wfca", t);
      run_wfca(clock, sys);
      return serve(clock.active(), "ftbb.line11");
    }
    checkpoint = clock.rev(pred);
    clock.phase("ftbb.checkpoint", t, checkpoint);
  }
}

BoundReport ftbb_bound_check(const Trace &trace, const FtbbParams &params, const Instance &inst)
{
  const Money                  beta   = resolve_beta(params, inst.n());
  const Money                  factor = params.alpha - 1;
  const BidderSet              pred   = inst.predicted_set();
  const SetSystem              sys    = make_disjoint(inst.sys, pred);
  const std::vector<BidderSet> rivals = unpredicted_sets(sys, pred);
  // A grid clock overshoots a continuous crossing by at most one step.
  const EngineConfig engine = engine_config(trace.header.mode);
  const Money        slack  = engine.mode == AdvanceMode::grid ? *engine.delta : Money(0);

  BoundReport        report;
  std::string        label;
  std::size_t        iteration = 0;
  Money              last_checkpoint;
  Money              doubled;
  Money              pred_loss = 0;
  std::vector<Money> phase_loss(rivals.size());
  std::vector<Money> total_loss(rivals.size());

  // Predicted-side state just before the current event.
  Money       prev_rev;
  std::size_t prev_k = pred.size();
  bool        first  = true;

  auto flag = [&](const char *rule, std::string detail) {
    report.violations.push_back({rule, iteration, std::move(detail)});
  };

  replay(trace, [&](const TraceEvent &ev, const ReplayState &st) {
    Money       rev_now = sum_over(pred & st.active, st.prices);
    std::size_t k_now   = (pred & st.active).size();
    if (first)
    {
      prev_rev = sum_over(pred, st.prices);
      first    = false;
    }
    bool covered_before = factor * prev_rev >= pred_loss;

    if (const auto *ph = std::get_if<event::Phase>(&ev))
    {
      label     = ph->label;
      iteration = ph->iteration;
      report.iterations = std::max(report.iterations, iteration);
      if (label == "ftbb.U")
      {
        last_checkpoint = ph->value.value_or(Money(0));
        std::fill(phase_loss.begin(), phase_loss.end(), Money(0));
      }
      else if (label == "ftbb.P")
      {
        doubled = ph->value.value_or(Money(0));
        if (factor * rev_now < pred_loss)
        {
          flag("predicted-ledger", "loss condition false entering phase P");
        }
      }
      else if (label == "ftbb.checkpoint")
      {
        if (factor * rev_now < pred_loss)
        {
          flag("predicted-ledger", "checkpoint revenue does not cover predicted loss");
        }
      }
    }
    else if (const auto *ex = std::get_if<event::Exit>(&ev))
    {
      if (label == "ftbb.U")
      {
        for (std::size_t j = 0; j < rivals.size(); ++j)
        {
          if (rivals[j].contains(ex->bidder))
          {
            phase_loss[j] += ex->value;
            total_loss[j] += ex->value;
            if (phase_loss[j] * 2 > beta * last_checkpoint)
            {
              flag("phase-u-loss", "set " + rivals[j].str() + " lost " + to_string(phase_loss[j]) +
                                    " > (β/2)·R^P_{t-1}");
            }
            if (total_loss[j] > beta * last_checkpoint)
            {
              flag("cumulative-unpredicted-loss", "set " + rivals[j].str() + " lost " + to_string(total_loss[j]) +
                                        " in total > β·R^P_{t-1}");
            }
          }
        }
      }
      if (label == "ftbb.P" && pred.contains(ex->bidder))
      {
        if (covered_before && prev_rev < doubled && (ex->price - slack) * prev_k >= doubled)
        {
          flag("predicted-ledger", "exit at " + to_string(ex->price) + " >= R~/k with k=" + std::to_string(prev_k));
        }
        pred_loss += ex->value;
      }
    }
    else if (const auto *ra = std::get_if<event::Raise>(&ev))
    {
      if (label == "ftbb.P" && covered_before && factor * rev_now >= pred_loss && rev_now < doubled &&
          (ra->to - slack) * k_now >= doubled)
      {
        flag("predicted-ledger", "price " + to_string(ra->to) + " >= R~/k with k=" + std::to_string(k_now));
      }
    }
    prev_rev = rev_now;
    prev_k   = k_now;
  });
  return report;
}

Money chain_bound_check(std::size_t k, const Money &alpha, const Money &p_k)
{
  if (k < 2)
  {
    throw InvalidInput("chain bound needs k >= 2");
  }
  if (alpha <= 1 || p_k <= 0)
  {
    throw DomainError("chain bound needs alpha > 1 and p_k > 0");
  }
  Money a   = alpha - 1;
  Money dk  = Money(static_cast<unsigned long>(k));
  Money out = (a * dk + 1) / (a * (dk - 1)) * p_k;
  out.canonicalize();
  return out;
}

Money cumulative_chain_bound(std::size_t n, const Money &alpha, const Money &seed_value)
{
  if (n == 0)
  {
    throw InvalidInput("chain needs n >= 1");
  }
  if (alpha <= 1)
  {
    throw DomainError("chain bound needs alpha > 1");
  }
  Money a   = alpha - 1;
  Money sum = 1;
  Money product = 1;
  // Suffix products Π_{j=i}^{n}, accumulated from i = n down to 2.
  for (std::size_t i = n; i >= 2; --i)
  {
    Money di = Money(static_cast<unsigned long>(i));
    product *= (a * di + 1) / (a * (di - 1));
    sum += product;
  }
  Money out = seed_value / Money(static_cast<unsigned long>(n)) * sum;
  out.canonicalize();
  return out;
}

}  // namespace clockaug
