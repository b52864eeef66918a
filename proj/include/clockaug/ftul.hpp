#pragma once

#include "clockaug/mechanism.hpp"

namespace clockaug {

/// Follow-the-unpredicted-leader. With eta_bar > 1 this is the error-tolerant variant.
MechanismOutcome run_ftul(const Instance &inst, const FtulParams &params, BidderOracle &oracle,
                          const EngineConfig &config = {});

/// Per-iteration ledgers:
///   phase B loss of any unpredicted set in iteration t <= R_t·H_n
///   predicted losses through iteration t <= R_t·10·H_n/(9·eta_bar)
///   unpredicted loss after phase A of iteration t < 2·R_t·γ·H_n
BoundReport ftul_bound_check(const Trace &trace, const FtulParams &params, const Instance &inst);

/// 2·max(100(2γ+1)H_n/9, 10(2γ+1)H_n/9 + 2H_n)
Money ftul_robustness_bound(const FtulParams &params, std::size_t n);

/// (2000·eta_bar·(1+ε)/(9ε) + 1)·H_n
Money error_tolerant_bound(const FtulParams &params, std::size_t n);

}  // namespace clockaug
