#pragma once

#include "clockaug/mechanism.hpp"

#include <optional>
#include <string>
#include <vector>

namespace clockaug {

/// Adaptive bidders that draw their values from a per-group pool. A value is
/// bound to a bidder only when the mechanism forces it out, so one run covers
/// every assignment of pool values to bidders.
class ValuePool final : public BidderOracle
{
public:
  /// group_of[b] indexes pools. Each pool holds at least as many values as its group has bidders.
  ValuePool(std::vector<std::size_t> group_of, std::vector<std::vector<Money>> pools);

  /// Smallest unassigned value of the bidder's group.
  Money threshold(Bidder b) const override;

  /// Binds the largest unassigned value strictly below `price`, if any.
  std::optional<Money> respond(Bidder b, const Money &price) override;

  /// Binds the smallest unassigned value, which equals threshold(b).
  Money exit_at_threshold(Bidder b) override;

  const std::vector<std::optional<Money>> &assignments() const { return assigned_; }
  std::size_t                               group_of(Bidder b) const { return group_of_.at(b); }
  /// Unassigned values of a group, ascending.
  std::vector<Money> remaining(std::size_t group) const;

private:
  Money take(Bidder b, std::size_t slot);

  std::vector<std::size_t>          group_of_;
  std::vector<std::vector<Money>>   pools_;  ///< ascending
  std::vector<std::vector<bool>>    used_;
  std::vector<std::optional<Money>> assigned_;
};

/// v_1 = 1, v_i = ((α-1)(i-1)+δ) / ((α-1)i+1) · v_{i-1}. α > 1, k >= 1, δ >= 0.
std::vector<Money> decaying_values(std::size_t k, const Money &alpha, const Money &delta = 0);

/// Closed form of the last decaying value at δ = 0:
/// Γ(1+α/(α-1))·(k-1)! / Γ(k+α/(α-1)), evaluated in log space.
double decaying_tail_closed_form(std::size_t k, double alpha);

/// {0.99, ε/(i(H_{n-1}-1)) for i = 2..n-1}. n >= 3, ε > 0.
std::vector<Money> sparse_rival_pool(std::size_t n, const Money &epsilon);

enum class FamilyKind
{
  /// One bidder valued 0.99 against a predicted set of n-1 bidders whose pool
  /// sums to 0.99 + ε.
  sparse_rival,
  /// A harmonic-valued set of size k1 against a predicted set of size k2 whose
  /// pool decays just fast enough to break α-consistency on every prefix.
  decaying_chain,
};

std::string to_string(FamilyKind kind);
FamilyKind  parse_family(const std::string &text);

struct LowerBoundFamily
{
  FamilyKind  kind    = FamilyKind::decaying_chain;
  std::size_t n       = 4;  ///< sparse_rival only
  Money       epsilon = 1;  ///< sparse_rival only
  std::size_t k1      = 4;  ///< decaying_chain only
  std::size_t k2      = 4;  ///< decaying_chain only
  Money       alpha   = 2;  ///< decaying_chain only
  Money       delta   = 0;  ///< decaying_chain only
  /// Defaults to the smallest pool value.
  std::optional<Money> v_min;

  /// Structure, prediction and v_min. Values are placeholders set to each pool's maximum.
  Instance  skeleton() const;
  ValuePool pool() const;
  std::string label() const;
};

/// Exited bidders keep their bound value; survivors get their final price.
Instance finalize_minimal_instance(const Instance &skeleton, const std::vector<Money> &final_prices,
                                   const ValuePool &pool);

enum class OutcomeCase
{
  nothing_served,
  subset_of_rival,
  strict_subset_of_predicted,
  all_of_predicted,
};

std::string to_string(OutcomeCase c);

struct HarnessReport
{
  std::string family;
  std::string mechanism;
  OutcomeCase outcome_case = OutcomeCase::nothing_served;
  Instance    finalized;
  Trace       trace;
  Money       welfare;
  Money       opt_welfare;
  Money       predicted_welfare;
  /// Ratios are nullopt when the welfare is zero.
  std::optional<Money> robustness_ratio;
  std::optional<Money> consistency_inf_ratio;
  /// Set only when the prediction is optimal on the finalized instance.
  std::optional<Money> consistency_ratio;
  /// The mechanism's own consistency guarantee (1+ε or α); nullopt for wfca.
  std::optional<Money> guarantee;
  bool                 guarantee_violated = false;
  bool                 replay_identical   = false;
};

HarnessReport run_lowerbound_harness(const MechanismSpec &spec, const LowerBoundFamily &family,
                                     const EngineConfig &config = {});

}  // namespace clockaug
