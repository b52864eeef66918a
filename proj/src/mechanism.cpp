#include "clockaug/mechanism.hpp"

#include "clockaug/ftbb.hpp"
#include "clockaug/ftul.hpp"
#include "clockaug/wfca.hpp"

namespace clockaug {

Money FtulParams::gamma() const
{
  if (gamma_override)
  {
    return *gamma_override;
  }
  Money g = Money(10) * (1 + epsilon) / (Money(9) * epsilon);
  g.canonicalize();
  return g;
}

void FtulParams::validate() const
{
  if (epsilon <= 0)
  {
    throw DomainError("epsilon must be positive");
  }
  if (eta_bar < 1)
  {
    throw DomainError("eta_bar must be at least 1");
  }
  if (gamma_override && *gamma_override <= Money(10, 9))
  {
    throw DomainError("gamma must exceed 10/9");
  }
}

void FtbbParams::validate() const
{
  if (alpha <= 1)
  {
    throw DomainError("alpha must exceed 1");
  }
  if (beta && *beta <= 0)
  {
    throw DomainError("beta must be positive");
  }
}

std::string to_string(MechanismKind kind)
{
  switch (kind)
  {
    case MechanismKind::wfca:
      return "wfca";
    case MechanismKind::ftul:
      return "ftul";
    case MechanismKind::error_tolerant:
      return "error-tolerant";
    case MechanismKind::ftbb:
      return "ftbb";
  }
  return "?";
}

MechanismKind parse_mechanism(const std::string &text)
{
  for (MechanismKind k :
       {MechanismKind::wfca, MechanismKind::ftul, MechanismKind::error_tolerant, MechanismKind::ftbb})
  {
    if (to_string(k) == text)
    {
      return k;
    }
  }
  throw InvalidInput("unknown mechanism '" + text + "'");
}

std::string MechanismSpec::label() const
{
  switch (kind)
  {
    case MechanismKind::wfca:
      return "wfca";
    case MechanismKind::ftul:
    case MechanismKind::error_tolerant:
    {
      std::string out = to_string(kind) + "[epsilon=" + clockaug::to_string(ftul.epsilon) +
                        ",eta_bar=" + clockaug::to_string(ftul.eta_bar);
      if (ftul.gamma_override)
      {
        out += ",gamma=" + clockaug::to_string(*ftul.gamma_override);
      }
      return out + "]";
    }
    case MechanismKind::ftbb:
    {
      std::string out = "ftbb[alpha=" + clockaug::to_string(ftbb.alpha);
      if (ftbb.beta)
      {
        out += ",beta=" + clockaug::to_string(*ftbb.beta);
      }
      return out + "]";
    }
  }
  return "?";
}

MechanismOutcome run_mechanism(const Instance &inst, const MechanismSpec &spec, BidderOracle &oracle,
                               const EngineConfig &config)
{
  switch (spec.kind)
  {
    case MechanismKind::wfca:
    {
      inst.validate();
      MechanismOutcome out;
      out.trace.header.mechanism = "wfca";
      out.trace.header.params    = "-";
      Clock clock(inst.n(), inst.v_min, oracle, config, out.trace);
      clock.phase("wfca", 0);
      WfcaOutcome w = run_wfca(clock, inst.sys);
      out.served    = w.served;
      out.prices    = w.prices;
      out.revenue   = clock.rev(w.served);
      out.via       = "wfca";
      clock.finish(out.served, out.via);
      return out;
    }
    case MechanismKind::ftul:
    case MechanismKind::error_tolerant:
    {
      MechanismOutcome out = run_ftul(inst, spec.ftul, oracle, config);
      if (spec.kind == MechanismKind::error_tolerant)
      {
        out.trace.header.mechanism = "error-tolerant";
      }
      return out;
    }
    case MechanismKind::ftbb:
      return run_ftbb(inst, spec.ftbb, oracle, config);
  }
  throw InvalidInput("unknown mechanism");
}

MechanismOutcome run_mechanism(const Instance &inst, const MechanismSpec &spec, const EngineConfig &config)
{
  TruthfulOracle oracle(inst.values);
  return run_mechanism(inst, spec, oracle, config);
}

Money trace_welfare(const Instance &inst, const Trace &trace)
{
  return sum_over(trace.outcome().served, inst.values);
}

}  // namespace clockaug
