#pragma once

#include "clockaug/mechanism.hpp"

namespace clockaug {

/// max(beta_threshold(α, n), 6·H_n), rounded up to a multiple of 10^-6.
Money default_beta(const Money &alpha, std::size_t n);

/// beta_threshold(α, n) rounded up to a multiple of 10^-6.
Money threshold_beta(const Money &alpha, std::size_t n);

Money resolve_beta(const FtbbParams &params, std::size_t n);

/// Follow-the-binding-benchmark.
MechanismOutcome run_ftbb(const Instance &inst, const FtbbParams &params, BidderOracle &oracle,
                          const EngineConfig &config = {});

/// Ledgers checked against the trace:
///   phase U loss of any unpredicted set in iteration t <= (β/2)·R^P_{t-1}
///   cumulative unpredicted loss through iteration t <= β·R^P_{t-1}
///   (α-1)·rev(predicted) >= predicted loss entering phase P and at every checkpoint
///   while the loss condition holds and the revenue target does not, prices stay < R̃/k
BoundReport ftbb_bound_check(const Trace &trace, const FtbbParams &params, const Instance &inst);

/// ((α-1)k+1) / ((α-1)(k-1)) · p_k. k >= 2.
Money chain_bound_check(std::size_t k, const Money &alpha, const Money &p_k);

/// Upper bound on the total value lost by a chain of n exits seeded at price
/// seed/n: seed/n · (1 + Σ_{i=2}^{n} Π_{j=i}^{n} ((α-1)j+1)/((α-1)(j-1))).
Money cumulative_chain_bound(std::size_t n, const Money &alpha, const Money &seed_value);

}  // namespace clockaug
