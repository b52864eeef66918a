#pragma once

#include "clockaug/set_system.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace clockaug {

/// Invariants: v_min > 0, every value >= v_min, prediction indexes a maximal set.
struct Instance
{
  SetSystem                  sys;
  std::vector<Money>         values;
  Money                      v_min = 1;
  std::optional<std::size_t> prediction;

  std::size_t n() const { return sys.n(); }
  const BidderSet &predicted_set() const;

  /// Throws InvalidInput on any broken invariant.
  void validate() const;

  friend bool operator==(const Instance &a, const Instance &b)
  {
    return a.sys == b.sys && a.values == b.values && a.v_min == b.v_min && a.prediction == b.prediction;
  }
};

Instance with_prediction(Instance inst, std::optional<std::size_t> prediction);

/// η = v(OPT) / v(ÔPT).
Money prediction_error(const Instance &inst);

/// Maps an arbitrary feasible prediction to the lowest-index maximal set containing it.
std::size_t resolve_prediction(const SetSystem &sys, const BidderSet &predicted);

struct ValueDist
{
  enum class Kind
  {
    uniform,      ///< v_min + k/grid up to v_max
    log_uniform,  ///< v_min · (m/grid) · 10^d, m ∈ [grid, 10·grid), d < decades
  };

  Kind          kind    = Kind::uniform;
  Money         v_min   = 1;
  Money         v_max   = 10;
  unsigned      decades = 3;
  unsigned long grid    = 4;
};

/// Deterministic in all arguments. Produces exactly num_maximal maximal sets.
Instance gen_random(std::uint64_t seed, std::size_t n, std::size_t num_maximal, const ValueDist &dist = {});

/// F1 = {0..k1-1}, F2 = {k1..k1+k2-1}; v_min defaults to the smallest value.
Instance gen_two_disjoint(std::size_t k1, std::size_t k2, const std::vector<Money> &values1,
                          const std::vector<Money> &values2, std::optional<Money> v_min = std::nullopt);

struct SuiteSpec
{
  std::size_t   count       = 1000;
  std::uint64_t seed        = 1;
  std::size_t   min_n       = 2;
  std::size_t   max_n       = 12;
  std::size_t   max_sets    = 5;
  /// Value ranges rotate across seeds: narrow uniform, then log-uniform over 2, 4 and 6 decades.
  bool          mixed_scale = true;
};

struct SuiteEntry
{
  std::string id;
  Instance    inst;
};

std::vector<SuiteEntry> gen_suite(const SuiteSpec &spec);

/// Canonical text form. write then read is the identity.
void     write_instance(std::ostream &os, const Instance &inst);
Instance read_instance(std::istream &is);
std::string instance_to_string(const Instance &inst);
Instance    instance_from_string(const std::string &text);

}  // namespace clockaug
