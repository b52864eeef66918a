#pragma once

#include "clockaug/clock.hpp"
#include "clockaug/instance.hpp"

#include <string>

namespace clockaug {

struct FtulParams
{
  Money                epsilon = 1;
  /// 1 runs the plain mechanism; larger values give the error-tolerant variant.
  Money                eta_bar = 1;
  std::optional<Money> gamma_override;

  /// 10(1+ε)/(9ε) unless overridden.
  Money gamma() const;
  void  validate() const;
};

struct FtbbParams
{
  Money                alpha = 2;
  /// Defaults to default_beta(alpha, n).
  std::optional<Money> beta;

  void validate() const;
};

enum class MechanismKind
{
  wfca,
  ftul,
  error_tolerant,
  ftbb,
};

std::string   to_string(MechanismKind kind);
MechanismKind parse_mechanism(const std::string &text);

struct MechanismSpec
{
  MechanismKind kind = MechanismKind::wfca;
  FtulParams    ftul;
  FtbbParams    ftbb;

  /// Stable text such as "ftul[epsilon=1/2,eta_bar=1]".
  std::string label() const;
  bool        needs_prediction() const { return kind != MechanismKind::wfca; }
};

struct MechanismOutcome
{
  BidderSet          served;
  std::vector<Money> prices;
  Money              revenue;
  std::string        via;
  Trace              trace;
};

/// Runs the mechanism against `oracle`. The instance's values are not consulted.
MechanismOutcome run_mechanism(const Instance &inst, const MechanismSpec &spec, BidderOracle &oracle,
                               const EngineConfig &config = {});

/// Runs against truthful bidders holding the instance's values.
MechanismOutcome run_mechanism(const Instance &inst, const MechanismSpec &spec, const EngineConfig &config = {});

/// Welfare of the served set recorded in the trace's outcome event.
Money trace_welfare(const Instance &inst, const Trace &trace);

struct BoundViolation
{
  std::string rule;
  std::size_t iteration = 0;
  std::string detail;
};

struct BoundReport
{
  std::vector<BoundViolation> violations;
  std::size_t                 iterations = 0;

  bool ok() const { return violations.empty(); }
};

}  // namespace clockaug
