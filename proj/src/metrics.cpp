#include "clockaug/metrics.hpp"

#include "clockaug/ftbb.hpp"
#include "clockaug/ftul.hpp"
#include "clockaug/numerics.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

namespace clockaug {

namespace {

struct Job
{
  std::size_t mechanism;
  std::size_t entry;
  std::size_t prediction;
};

std::optional<Money> ratio_of(const Money &num, const Money &den)
{
  if (den <= 0)
  {
    return std::nullopt;
  }
  Money r = num / den;
  r.canonicalize();
  return r;
}

void fold(MetricValue &agg, const std::optional<Money> &ratio, const MetricsRow &row)
{
  bool worse = false;
  if (!agg.present)
  {
    worse = true;
  }
  else if (!agg.unbounded)
  {
    worse = !ratio || *ratio > agg.value;
  }
  if (!worse)
  {
    return;
  }
  agg.present          = true;
  agg.unbounded        = !ratio;
  agg.value            = ratio ? *ratio : Money(0);
  agg.worst_instance   = row.instance_id;
  agg.worst_prediction = row.prediction;
}

std::string metric_text(const MetricValue &m)
{
  if (!m.present)
  {
    return "";
  }
  return m.unbounded ? "inf" : to_string(m.value);
}

std::string opt_text(const std::optional<Money> &m) { return m ? to_string(*m) : "inf"; }

MetricsSummary summary_only(const MechanismSpec &spec, const std::vector<SuiteEntry> &suite, PredictionScope scope,
                            const EngineConfig &config)
{
  return evaluate({spec}, suite, scope, config).summaries.front();
}

}  // namespace

std::size_t default_workers()
{
  if (const char *env = std::getenv("CLOCKAUG_WORKERS"))
  {
    char         *end = nullptr;
    unsigned long w   = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && w > 0)
    {
      return w;
    }
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

MetricsReport evaluate(const std::vector<MechanismSpec> &mechanisms, const std::vector<SuiteEntry> &suite,
                       PredictionScope scope, const EngineConfig &config, std::size_t workers)
{
  std::vector<Job>         jobs;
  std::vector<std::size_t> opt_index(suite.size());
  for (std::size_t e = 0; e < suite.size(); ++e)
  {
    const Instance &inst = suite[e].inst;
    opt_index[e]         = opt_oracle(inst.sys, inst.values).index.value();
  }
  for (std::size_t e = 0; e < suite.size(); ++e)
  {
    std::size_t first = scope == PredictionScope::accurate ? opt_index[e] : 0;
    std::size_t last  = scope == PredictionScope::accurate ? opt_index[e] + 1 : suite[e].inst.sys.size();
    for (std::size_t p = first; p < last; ++p)
    {
      for (std::size_t m = 0; m < mechanisms.size(); ++m)
      {
        jobs.push_back({m, e, p});
      }
    }
  }

  std::vector<MetricsRow>  rows(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr       failure;
  std::mutex               failure_lock;

  auto work = [&]() {
    for (std::size_t j = next++; j < jobs.size(); j = next++)
    {
      try
      {
        const Job       &job  = jobs[j];
        const Instance   inst = with_prediction(suite[job.entry].inst, job.prediction);
        MechanismOutcome out  = run_mechanism(inst, mechanisms[job.mechanism], config);

        MetricsRow &row       = rows[j];
        row.instance_id       = suite[job.entry].id;
        row.n                 = inst.n();
        row.mechanism         = mechanisms[job.mechanism].label();
        row.prediction        = job.prediction;
        row.welfare           = trace_welfare(inst, out.trace);
        row.opt_welfare       = sum_over(inst.sys[opt_index[job.entry]], inst.values);
        row.predicted_welfare = sum_over(inst.predicted_set(), inst.values);
        row.accurate          = row.predicted_welfare == row.opt_welfare;
        row.ratio             = ratio_of(row.opt_welfare, row.welfare);
        row.predicted_ratio   = ratio_of(row.predicted_welfare, row.welfare);
        row.eta               = prediction_error(inst);
      }
      catch (...)
      {
        std::lock_guard<std::mutex> guard(failure_lock);
        if (!failure)
        {
          failure = std::current_exception();
        }
        next = jobs.size();
      }
    }
  };

  if (workers == 0)
  {
    workers = default_workers();
  }
  workers = std::min(workers, std::max<std::size_t>(jobs.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w)
  {
    pool.emplace_back(work);
  }
  work();
  for (std::thread &t : pool)
  {
    t.join();
  }
  if (failure)
  {
    std::rethrow_exception(failure);
  }

  MetricsReport report;
  report.rows = std::move(rows);
  for (const MechanismSpec &spec : mechanisms)
  {
    report.summaries.push_back({spec.label(), 0, {}, {}, {}});
  }
  for (std::size_t j = 0; j < jobs.size(); ++j)
  {
    const MetricsRow &row = report.rows[j];
    MetricsSummary   &sum = report.summaries[jobs[j].mechanism];
    ++sum.runs;
    if (row.accurate)
    {
      fold(sum.consistency, row.ratio, row);
    }
    fold(sum.robustness, row.ratio, row);
    fold(sum.consistency_inf, row.predicted_ratio, row);
  }
  return report;
}

MetricValue eval_consistency(const MechanismSpec &spec, const std::vector<SuiteEntry> &suite,
                             const EngineConfig &config)
{
  return summary_only(spec, suite, PredictionScope::accurate, config).consistency;
}

MetricValue eval_robustness(const MechanismSpec &spec, const std::vector<SuiteEntry> &suite,
                            const EngineConfig &config)
{
  return summary_only(spec, suite, PredictionScope::all, config).robustness;
}

MetricValue eval_consistency_inf(const MechanismSpec &spec, const std::vector<SuiteEntry> &suite,
                                 const EngineConfig &config)
{
  return summary_only(spec, suite, PredictionScope::all, config).consistency_inf;
}

std::vector<std::string> guarantee_failures(const MechanismSpec &spec, const MetricsRow &row)
{
  std::vector<std::string> out;
  auto require = [&](const std::optional<Money> &ratio, const Money &bound, const std::string &what) {
    if (!ratio || *ratio > bound)
    {
      out.push_back(what + " " + (ratio ? to_string(*ratio) : std::string("inf")) + " > " + to_string(bound));
    }
  };
  const Money hn = harmonic(row.n);
  switch (spec.kind)
  {
    case MechanismKind::wfca:
      require(row.ratio, 2 * hn, "approximation");
      break;
    case MechanismKind::ftul:
      if (row.accurate)
      {
        require(row.ratio, 1 + spec.ftul.epsilon, "consistency");
      }
      require(row.ratio, ftul_robustness_bound(spec.ftul, row.n), "robustness");
      break;
    case MechanismKind::error_tolerant:
      if (row.eta <= spec.ftul.eta_bar)
      {
        require(row.ratio, (1 + spec.ftul.epsilon) * row.eta, "error-scaled consistency");
      }
      else
      {
        require(row.ratio, error_tolerant_bound(spec.ftul, row.n), "robustness");
      }
      break;
    case MechanismKind::ftbb:
    {
      const Money beta = resolve_beta(spec.ftbb, row.n);
      if (beta >= threshold_beta(spec.ftbb.alpha, row.n))
      {
        require(row.predicted_ratio, spec.ftbb.alpha, "consistency-inf");
        require(row.ratio, 2 * beta, "robustness");
      }
      break;
    }
  }
  return out;
}

Money gamma_of_epsilon(const Money &epsilon)
{
  if (epsilon <= 0)
  {
    throw DomainError("epsilon must be positive");
  }
  FtulParams params;
  params.epsilon = epsilon;
  return params.gamma();
}

void write_metrics_csv(std::ostream &os, const MetricsReport &report)
{
  os << "# clockaug-metrics " << kMetricsSchemaVersion << '\n';
  os << "row_type,instance,n,mechanism,prediction,accurate,welfare,opt,predicted,ratio,predicted_ratio,eta,"
        "runs,consistency,robustness,consistency_inf\n";
  for (const MetricsRow &r : report.rows)
  {
    os << "run," << r.instance_id << ',' << r.n << ",\"" << r.mechanism << "\"," << r.prediction << ',' << (r.accurate ? 1 : 0)
       << ',' << r.welfare << ',' << r.opt_welfare << ',' << r.predicted_welfare << ',' << opt_text(r.ratio) << ','
       << opt_text(r.predicted_ratio) << ',' << r.eta << ",,,,\n";
  }
  for (const MetricsSummary &s : report.summaries)
  {
    os << "summary,,,\"" << s.mechanism << "\",,,,,,,,," << s.runs << ',' << metric_text(s.consistency) << ','
       << metric_text(s.robustness) << ',' << metric_text(s.consistency_inf) << '\n';
  }
}

}  // namespace clockaug
