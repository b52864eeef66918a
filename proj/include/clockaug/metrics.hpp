#pragma once

#include "clockaug/mechanism.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace clockaug {

/// Which predictions each instance is run with.
enum class PredictionScope
{
  accurate,  ///< the lowest-index optimal maximal set only
  all,       ///< every maximal set
};

/// Ratios are nullopt when the welfare is zero (an unbounded ratio).
struct MetricsRow
{
  std::string          instance_id;
  std::size_t          n = 0;
  std::string          mechanism;
  std::size_t          prediction = 0;
  bool                 accurate   = false;  ///< v(predicted) == v(OPT)
  Money                welfare;
  Money                opt_welfare;
  Money                predicted_welfare;
  std::optional<Money> ratio;            ///< v(OPT) / welfare
  std::optional<Money> predicted_ratio;  ///< v(predicted) / welfare
  Money                eta;              ///< v(OPT) / v(predicted)
};

/// Maxima over the rows of one mechanism. A metric is absent when no row
/// contributes to it; `unbounded` marks a zero-welfare contributor.
struct MetricValue
{
  bool                 present   = false;
  bool                 unbounded = false;
  Money                value;
  std::string          worst_instance;
  std::size_t          worst_prediction = 0;
};

struct MetricsSummary
{
  std::string mechanism;
  std::size_t runs = 0;
  MetricValue consistency;      ///< over rows with an accurate prediction
  MetricValue robustness;       ///< over all rows
  MetricValue consistency_inf;  ///< over all rows, v(predicted)/welfare
};

struct MetricsReport
{
  std::vector<MetricsRow>     rows;       ///< suite order, then prediction, then mechanism order
  std::vector<MetricsSummary> summaries;  ///< one per mechanism, in input order
};

/// Worker count from CLOCKAUG_WORKERS, else the hardware concurrency. Always >= 1.
std::size_t default_workers();

/// Runs every mechanism on every (instance, prediction) pair. Welfare is read
/// from each run's trace. Output is independent of the worker count.
MetricsReport evaluate(const std::vector<MechanismSpec> &mechanisms, const std::vector<SuiteEntry> &suite,
                       PredictionScope scope, const EngineConfig &config = {}, std::size_t workers = 0);

/// max v(OPT)/welfare with the prediction set to OPT.
MetricValue eval_consistency(const MechanismSpec &spec, const std::vector<SuiteEntry> &suite,
                             const EngineConfig &config = {});
/// max v(OPT)/welfare over every maximal set as prediction.
MetricValue eval_robustness(const MechanismSpec &spec, const std::vector<SuiteEntry> &suite,
                            const EngineConfig &config = {});
/// max v(predicted)/welfare over every maximal set as prediction.
MetricValue eval_consistency_inf(const MechanismSpec &spec, const std::vector<SuiteEntry> &suite,
                                 const EngineConfig &config = {});

/// 10(1+ε)/(9ε). ε > 0.
Money gamma_of_epsilon(const Money &epsilon);

/// Every proven per-run bound the row breaks, as readable text. Empty when
/// the row is within all of them:
///   wfca           ratio <= 2·H_n
///   ftul           ratio <= 1+ε when accurate; ratio <= ftul_robustness_bound
///   error-tolerant ratio <= (1+ε)·η when η <= eta_bar, else <= error_tolerant_bound
///   ftbb           predicted_ratio <= α; ratio <= 2β
/// The ftbb bounds are checked only when β >= the consistency threshold.
std::vector<std::string> guarantee_failures(const MechanismSpec &spec, const MetricsRow &row);

/// Header line "# clockaug-metrics 1", then a column row, then run rows and
/// one summary row per mechanism.
inline constexpr int kMetricsSchemaVersion = 1;
void write_metrics_csv(std::ostream &os, const MetricsReport &report);

}  // namespace clockaug
