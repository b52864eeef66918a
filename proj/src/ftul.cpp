#include "clockaug/ftul.hpp"

#include "clockaug/numerics.hpp"
#include "clockaug/wfca.hpp"

#include <map>

namespace clockaug {

namespace {

constexpr unsigned long kGrowth = 10;

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

std::string ftul_params_text(const FtulParams &params)
{
  return "epsilon=" + to_string(params.epsilon) + " eta_bar=" + to_string(params.eta_bar) +
         " gamma=" + to_string(params.gamma());
}

}  // namespace

MechanismOutcome run_ftul(const Instance &inst, const FtulParams &params, BidderOracle &oracle,
                          const EngineConfig &config)
{
  inst.validate();
  params.validate();
  const BidderSet pred = inst.predicted_set();

  MechanismOutcome out;
  out.trace.header.mechanism = "ftul";
  out.trace.header.params    = ftul_params_text(params);
  Clock clock(inst.n(), inst.v_min, oracle, config, out.trace);

  const SetSystem              sys        = make_disjoint(inst.sys, pred);
  const std::vector<BidderSet> rivals     = unpredicted_sets(sys, pred);
  const BidderSet              unpred     = BidderSet::range(inst.n()) - pred;
  const Money                  hn         = harmonic(inst.n());
  const Money                  gamma      = params.gamma();
  Money                        benchmark  = clock.rev(pred);

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
    benchmark *= kGrowth;
    const Money bar = benchmark * gamma * hn;

    // Reject a safe amount of unpredicted welfare, or price it out at the cap.
    clock.phase("ftul.A", t, benchmark);
    clock.uniform_price(unpred, StopPredicate::rejected_at_least(rivals, bar) || StopPredicate::price_cap(bar));
    if ((unpred & clock.active()).empty())
    {
      return serve(pred & clock.active(), "ftul.line8");
    }

    // Unpredicted sets cover their own lost welfare.
    clock.phase("ftul.B", t, benchmark);
    if (clock.uniform_price(unpred, StopPredicate::revenue_at_least(rivals, benchmark)) ==
        Clock::StopReason::exhausted)
    {
      return serve(pred & clock.active(), "ftul.line10");
    }

    // The predicted set covers welfare lost from unpredicted sets.
    clock.phase("ftul.C", t, benchmark);
    Money target = benchmark / params.eta_bar;
    target.canonicalize();
    if (clock.uniform_price(pred, StopPredicate::revenue_at_least({pred}, target)) == Clock::StopReason::exhausted)
    {
      clock.phase("ftul.wfca", t);
      run_wfca(clock, sys);
      return serve(clock.active(), "ftul.line13");
    }
  }
}

BoundReport ftul_bound_check(const Trace &trace, const FtulParams &params, const Instance &inst)
{
  const BidderSet              pred   = inst.predicted_set();
  const SetSystem              sys    = make_disjoint(inst.sys, pred);
  const std::vector<BidderSet> rivals = unpredicted_sets(sys, pred);
  const Money                  hn     = harmonic(inst.n());
  const Money                  gamma  = params.gamma();

  BoundReport report;
  std::string label;
  std::size_t iteration = 0;
  Money       benchmark;
  Money       predicted_loss = 0;
  std::vector<Money> phase_b_loss(rivals.size());
  std::vector<Money> total_loss(rivals.size());

  auto close_phase = [&]() {
    if (label == "ftul.A")
    {
      Money worst = 0;
      for (const Money &m : total_loss)
      {
        worst = std::max(worst, m);
      }
      if (worst >= 2 * benchmark * gamma * hn)
      {
        report.violations.push_back({"phase-a-loss", iteration,
                                     "unpredicted loss " + to_string(worst) + " >= 2·R_t·γ·H_n"});
      }
    }
    if (label == "ftul.B")
    {
      for (std::size_t j = 0; j < rivals.size(); ++j)
      {
        if (phase_b_loss[j] > benchmark * hn)
        {
          report.violations.push_back({"phase-b-loss", iteration,
                                       "set " + rivals[j].str() + " lost " + to_string(phase_b_loss[j]) +
                                           " > R_t·H_n"});
        }
      }
    }
    if (label == "ftul.C")
    {
      if (predicted_loss * 9 * params.eta_bar > benchmark * 10 * hn)
      {
        report.violations.push_back({"predicted-loss", iteration,
                                     "predicted loss " + to_string(predicted_loss) + " > R_t·10·H_n/(9·eta_bar)"});
      }
    }
  };

  replay(trace, [&](const TraceEvent &ev, const ReplayState &) {
    if (const auto *ph = std::get_if<event::Phase>(&ev))
    {
      close_phase();
      label     = ph->label;
      iteration = ph->iteration;
      if (ph->value)
      {
        benchmark = *ph->value;
      }
      report.iterations = std::max(report.iterations, iteration);
      std::fill(phase_b_loss.begin(), phase_b_loss.end(), Money(0));
      return;
    }
    if (std::holds_alternative<event::Outcome>(ev))
    {
      close_phase();
      label.clear();
      return;
    }
    const auto *ex = std::get_if<event::Exit>(&ev);
    if (ex == nullptr || label == "ftul.wfca")
    {
      return;
    }
    if (pred.contains(ex->bidder))
    {
      predicted_loss += ex->value;
    }
    for (std::size_t j = 0; j < rivals.size(); ++j)
    {
      if (rivals[j].contains(ex->bidder))
      {
        total_loss[j] += ex->value;
        if (label == "ftul.B")
        {
          phase_b_loss[j] += ex->value;
        }
      }
    }
  });
  return report;
}

Money ftul_robustness_bound(const FtulParams &params, std::size_t n)
{
  Money hn    = harmonic(n);
  Money scale = 2 * params.gamma() + 1;
  Money first = Money(100) * scale * hn / 9;
  Money second = Money(10) * scale * hn / 9 + 2 * hn;
  Money out   = 2 * (first > second ? first : second);
  out.canonicalize();
  return out;
}

Money error_tolerant_bound(const FtulParams &params, std::size_t n)
{
  Money out = (Money(2000) * params.eta_bar * (1 + params.epsilon) / (Money(9) * params.epsilon) + 1) * harmonic(n);
  out.canonicalize();
  return out;
}

}  // namespace clockaug
