#include "clockaug/adversary.hpp"

#include "clockaug/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace clockaug {

ValuePool::ValuePool(std::vector<std::size_t> group_of, std::vector<std::vector<Money>> pools)
  : group_of_(std::move(group_of))
  , pools_(std::move(pools))
  , assigned_(group_of_.size())
{
  std::vector<std::size_t> members(pools_.size());
  for (std::size_t g : group_of_)
  {
    if (g >= pools_.size())
    {
      throw InvalidInput("bidder group out of range");
    }
    ++members[g];
  }
  for (std::size_t g = 0; g < pools_.size(); ++g)
  {
    if (pools_[g].size() < members[g])
    {
      throw InvalidInput("pool " + std::to_string(g) + " is smaller than its group");
    }
    std::sort(pools_[g].begin(), pools_[g].end());
    used_.emplace_back(pools_[g].size(), false);
  }
}

Money ValuePool::threshold(Bidder b) const
{
  std::size_t g = group_of_.at(b);
  for (std::size_t i = 0; i < pools_[g].size(); ++i)
  {
    if (!used_[g][i])
    {
      return pools_[g][i];
    }
  }
  throw InvariantViolation("pool exhausted for an active bidder");
}

Money ValuePool::take(Bidder b, std::size_t slot)
{
  std::size_t g = group_of_[b];
  if (assigned_[b])
  {
    throw InvariantViolation("bidder " + std::to_string(b) + " exited twice");
  }
  used_[g][slot] = true;
  assigned_[b]   = pools_[g][slot];
  return pools_[g][slot];
}

std::optional<Money> ValuePool::respond(Bidder b, const Money &price)
{
  std::size_t g = group_of_.at(b);
  for (std::size_t i = pools_[g].size(); i-- > 0;)
  {
    if (!used_[g][i] && pools_[g][i] < price)
    {
      return take(b, i);
    }
  }
  return std::nullopt;
}

Money ValuePool::exit_at_threshold(Bidder b)
{
  std::size_t g = group_of_.at(b);
  for (std::size_t i = 0; i < pools_[g].size(); ++i)
  {
    if (!used_[g][i])
    {
      return take(b, i);
    }
  }
  throw InvariantViolation("pool exhausted for an active bidder");
}

std::vector<Money> ValuePool::remaining(std::size_t group) const
{
  std::vector<Money> out;
  for (std::size_t i = 0; i < pools_.at(group).size(); ++i)
  {
    if (!used_[group][i])
    {
      out.push_back(pools_[group][i]);
    }
  }
  return out;
}

std::vector<Money> decaying_values(std::size_t k, const Money &alpha, const Money &delta)
{
  if (k == 0)
  {
    throw InvalidInput("need at least one value");
  }
  if (alpha <= 1 || delta < 0)
  {
    throw DomainError("need alpha > 1 and delta >= 0");
  }
  Money              a = alpha - 1;
  std::vector<Money> out{Money(1)};
  for (std::size_t i = 2; i <= k; ++i)
  {
    Money di = Money(static_cast<unsigned long>(i));
    Money v  = (a * (di - 1) + delta) / (a * di + 1) * out.back();
    v.canonicalize();
    out.push_back(v);
  }
  return out;
}

double decaying_tail_closed_form(std::size_t k, double alpha)
{
  if (k == 0 || !(alpha > 1))
  {
    throw DomainError("need k >= 1 and alpha > 1");
  }
  double s = alpha / (alpha - 1);
  double k_d = static_cast<double>(k);
  return std::exp(log_gamma(1 + s) + log_gamma(k_d) - log_gamma(k_d + s));
}

std::vector<Money> sparse_rival_pool(std::size_t n, const Money &epsilon)
{
  if (n < 3)
  {
    throw InvalidInput("sparse rival family needs n >= 3");
  }
  if (epsilon <= 0)
  {
    throw DomainError("epsilon must be positive");
  }
  Money              tail = harmonic(n - 1) - 1;
  std::vector<Money> out{Money(99, 100)};
  for (std::size_t i = 2; i <= n - 1; ++i)
  {
    Money v = epsilon / (Money(static_cast<unsigned long>(i)) * tail);
    v.canonicalize();
    out.push_back(v);
  }
  return out;
}

std::string to_string(FamilyKind kind)
{
  return kind == FamilyKind::sparse_rival ? "sparse-rival" : "decaying-chain";
}

FamilyKind parse_family(const std::string &text)
{
  if (text == "sparse-rival")
  {
    return FamilyKind::sparse_rival;
  }
  if (text == "decaying-chain")
  {
    return FamilyKind::decaying_chain;
  }
  throw InvalidInput("unknown family '" + text + "'");
}

namespace {

struct FamilyPools
{
  std::vector<Money> rival;
  std::vector<Money> predicted;
};

FamilyPools family_pools(const LowerBoundFamily &f)
{
  FamilyPools out;
  if (f.kind == FamilyKind::sparse_rival)
  {
    out.rival     = {Money(99, 100)};
    out.predicted = sparse_rival_pool(f.n, f.epsilon);
    return out;
  }
  if (f.k1 == 0 || f.k2 == 0)
  {
    throw InvalidInput("both sets need at least one bidder");
  }
  for (std::size_t j = 1; j <= f.k1; ++j)
  {
    out.rival.emplace_back(1, static_cast<unsigned long>(j));
    out.rival.back().canonicalize();
  }
  out.predicted = decaying_values(f.k2, f.alpha, f.delta);
  return out;
}

}  // namespace

Instance LowerBoundFamily::skeleton() const
{
  FamilyPools p   = family_pools(*this);
  Money       top1 = *std::max_element(p.rival.begin(), p.rival.end());
  Money       top2 = *std::max_element(p.predicted.begin(), p.predicted.end());
  Money       low  = std::min(*std::min_element(p.rival.begin(), p.rival.end()),
                              *std::min_element(p.predicted.begin(), p.predicted.end()));
  Instance inst = gen_two_disjoint(p.rival.size(), p.predicted.size(), std::vector<Money>(p.rival.size(), top1),
                                   std::vector<Money>(p.predicted.size(), top2), v_min ? *v_min : low);
  if (inst.v_min > low)
  {
    throw InvalidInput("v_min exceeds the smallest pool value");
  }
  inst.prediction = 1;
  return inst;
}

ValuePool LowerBoundFamily::pool() const
{
  FamilyPools              p = family_pools(*this);
  std::vector<std::size_t> group(p.rival.size(), 0);
  group.resize(p.rival.size() + p.predicted.size(), 1);
  return ValuePool(std::move(group), {p.rival, p.predicted});
}

std::string LowerBoundFamily::label() const
{
  if (kind == FamilyKind::sparse_rival)
  {
    return "sparse-rival[n=" + std::to_string(n) + ",epsilon=" + clockaug::to_string(epsilon) + "]";
  }
  return "decaying-chain[k1=" + std::to_string(k1) + ",k2=" + std::to_string(k2) +
         ",alpha=" + clockaug::to_string(alpha) + ",delta=" + clockaug::to_string(delta) + "]";
}

Instance finalize_minimal_instance(const Instance &skeleton, const std::vector<Money> &final_prices,
                                   const ValuePool &pool)
{
  if (final_prices.size() != skeleton.n())
  {
    throw InvalidInput("price vector size differs from n");
  }
  Instance out = skeleton;
  for (Bidder b = 0; b < skeleton.n(); ++b)
  {
    const auto &bound = pool.assignments().at(b);
    out.values[b]     = bound ? *bound : final_prices[b];
  }
  out.validate();
  return out;
}

std::string to_string(OutcomeCase c)
{
  switch (c)
  {
    case OutcomeCase::nothing_served:
      return "nothing-served";
    case OutcomeCase::subset_of_rival:
      return "subset-of-rival";
    case OutcomeCase::strict_subset_of_predicted:
      return "strict-subset-of-predicted";
    case OutcomeCase::all_of_predicted:
      return "all-of-predicted";
  }
  return "?";
}

HarnessReport run_lowerbound_harness(const MechanismSpec &spec, const LowerBoundFamily &family,
                                     const EngineConfig &config)
{
  const Instance skeleton = family.skeleton();
  ValuePool      pool     = family.pool();
  MechanismOutcome run    = run_mechanism(skeleton, spec, pool, config);

  HarnessReport report;
  report.family    = family.label();
  report.mechanism = spec.label();
  report.finalized = finalize_minimal_instance(skeleton, run.prices, pool);
  report.trace     = std::move(run.trace);

  const Instance  &inst = report.finalized;
  const BidderSet &pred = inst.predicted_set();
  const BidderSet &served = run.served;
  if (served.empty())
  {
    report.outcome_case = OutcomeCase::nothing_served;
  }
  else if (served.subset_of(inst.sys[0]))
  {
    report.outcome_case = OutcomeCase::subset_of_rival;
  }
  else
  {
    report.outcome_case = served == pred ? OutcomeCase::all_of_predicted : OutcomeCase::strict_subset_of_predicted;
  }

  report.welfare           = sum_over(served, inst.values);
  report.opt_welfare       = opt_oracle(inst.sys, inst.values).value;
  report.predicted_welfare = sum_over(pred, inst.values);
  if (report.welfare > 0)
  {
    Money r = report.opt_welfare / report.welfare;
    r.canonicalize();
    report.robustness_ratio = r;
    Money c = report.predicted_welfare / report.welfare;
    c.canonicalize();
    report.consistency_inf_ratio = c;
    if (report.predicted_welfare == report.opt_welfare)
    {
      report.consistency_ratio = r;
    }
  }

  if (spec.kind == MechanismKind::ftbb)
  {
    report.guarantee          = spec.ftbb.alpha;
    report.guarantee_violated = !report.consistency_inf_ratio || *report.consistency_inf_ratio > spec.ftbb.alpha;
  }
  else if (spec.kind == MechanismKind::ftul)
  {
    report.guarantee = 1 + spec.ftul.epsilon;
    if (report.predicted_welfare == report.opt_welfare)
    {
      report.guarantee_violated = !report.consistency_ratio || *report.consistency_ratio > *report.guarantee;
    }
  }

  MechanismOutcome again  = run_mechanism(inst, spec, config);
  report.replay_identical = trace_to_string(again.trace) == trace_to_string(report.trace);
  return report;
}

}  // namespace clockaug
