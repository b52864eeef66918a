#include "clockaug/ftbb.hpp"
#include "clockaug/ftul.hpp"
#include "clockaug/metrics.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <map>
#include <sstream>

using namespace clockaug;

namespace {

std::vector<MechanismSpec> all_specs()
{
  std::vector<MechanismSpec> out(4);
  out[0].kind = MechanismKind::wfca;
  out[1].kind = MechanismKind::ftul;
  out[2].kind = MechanismKind::error_tolerant;
  out[2].ftul.eta_bar = 2;
  out[3].kind = MechanismKind::ftbb;
  return out;
}

std::vector<SuiteEntry> suite(std::size_t count, std::uint64_t seed)
{
  SuiteSpec spec;
  spec.count = count;
  spec.seed  = seed;
  return gen_suite(spec);
}

// Worst value of one column over the given rows.
std::optional<Money> worst(const std::vector<MetricsRow> &rows, const std::string &mech, bool accurate_only,
                           bool predicted)
{
  std::optional<Money> out;
  for (const MetricsRow &r : rows)
  {
    if (r.mechanism != mech || (accurate_only && !r.accurate))
    {
      continue;
    }
    const Money v = predicted ? *r.predicted_ratio : *r.ratio;
    if (!out || v > *out)
    {
      out = v;
    }
  }
  return out;
}

}  // namespace

TEST(Metrics, SingleMaximalSetSuiteIsExactlyOne)
{
  std::vector<SuiteEntry> entries;
  for (std::uint64_t seed = 1; seed <= 20; ++seed)
  {
    entries.push_back({"single-" + std::to_string(seed), gen_random(seed, 2 + seed % 6, 1)});
  }
  for (const MechanismSpec &spec : all_specs())
  {
    EXPECT_EQ(eval_consistency(spec, entries).value, 1) << spec.label();
    EXPECT_EQ(eval_robustness(spec, entries).value, 1) << spec.label();
    EXPECT_EQ(eval_consistency_inf(spec, entries).value, 1) << spec.label();
  }
}

TEST(Metrics, RowsMatchIndependentRecomputation)
{
  auto          entries = suite(60, 3);
  MetricsReport report  = evaluate(all_specs(), entries, PredictionScope::all);
  std::size_t   expected_rows = 0;
  for (const SuiteEntry &e : entries)
  {
    expected_rows += e.inst.sys.size() * all_specs().size();
  }
  ASSERT_EQ(report.rows.size(), expected_rows);

  std::map<std::string, const Instance *> by_id;
  for (const SuiteEntry &e : entries)
  {
    by_id[e.id] = &e.inst;
  }
  for (const MetricsRow &row : report.rows)
  {
    Instance inst = with_prediction(*by_id.at(row.instance_id), row.prediction);
    Money opt  = oracle::brute_force_opt(inst);
    Money pred = oracle::welfare(inst, inst.sys[row.prediction]);
    EXPECT_EQ(row.opt_welfare, opt);
    EXPECT_EQ(row.predicted_welfare, pred);
    EXPECT_EQ(row.eta, opt / pred);
    EXPECT_EQ(row.accurate, pred == opt);
    ASSERT_TRUE(row.ratio.has_value());
    EXPECT_EQ(*row.ratio, opt / row.welfare);
    EXPECT_EQ(*row.predicted_ratio, pred / row.welfare);
    EXPECT_GE(*row.ratio, 1);
  }
}

TEST(Metrics, WelfareComesFromTheTrace)
{
  auto entries = suite(30, 8);
  auto specs   = all_specs();
  MetricsReport report = evaluate(specs, entries, PredictionScope::all);
  std::size_t   i      = 0;
  for (const SuiteEntry &e : entries)
  {
    for (std::size_t p = 0; p < e.inst.sys.size(); ++p)
    {
      Instance inst = with_prediction(e.inst, p);
      for (const MechanismSpec &spec : specs)
      {
        const MetricsRow &row = report.rows.at(i++);
        ASSERT_EQ(row.instance_id, e.id);
        ASSERT_EQ(row.prediction, p);
        ASSERT_EQ(row.mechanism, spec.label());
        auto out = run_mechanism(inst, spec);
        EXPECT_EQ(row.welfare, oracle::welfare(inst, out.trace.outcome().served));
      }
    }
  }
}

TEST(Metrics, SummariesAreRowMaxima)
{
  auto          entries = suite(120, 12);
  MetricsReport report  = evaluate(all_specs(), entries, PredictionScope::all);
  ASSERT_EQ(report.summaries.size(), 4u);
  for (const MetricsSummary &s : report.summaries)
  {
    EXPECT_EQ(s.consistency.value, *worst(report.rows, s.mechanism, true, false));
    EXPECT_EQ(s.robustness.value, *worst(report.rows, s.mechanism, false, false));
    EXPECT_EQ(s.consistency_inf.value, *worst(report.rows, s.mechanism, false, true));
    EXPECT_LE(s.consistency.value, s.consistency_inf.value);
    EXPECT_LE(s.consistency.value, s.robustness.value);
    EXPECT_FALSE(s.robustness.unbounded);
  }
}

TEST(Metrics, EvalHelpersAgreeWithSummaries)
{
  auto entries = suite(50, 2);
  for (const MechanismSpec &spec : all_specs())
  {
    MetricsReport all      = evaluate({spec}, entries, PredictionScope::all);
    MetricsReport accurate = evaluate({spec}, entries, PredictionScope::accurate);
    EXPECT_EQ(eval_robustness(spec, entries).value, all.summaries[0].robustness.value);
    EXPECT_EQ(eval_consistency_inf(spec, entries).value, all.summaries[0].consistency_inf.value);
    EXPECT_EQ(eval_consistency(spec, entries).value, accurate.summaries[0].consistency.value);
    EXPECT_EQ(accurate.rows.size(), entries.size());
  }
}

TEST(Metrics, NoGuaranteeFailuresOnTheSuite)
{
  std::vector<MechanismSpec> specs = all_specs();
  for (Money eps : {Money(1, 2), Money(2)})
  {
    MechanismSpec s = specs[1];
    s.ftul.epsilon  = eps;
    specs.push_back(s);
  }
  for (Money alpha : {Money(3, 2), Money(3)})
  {
    MechanismSpec s = specs[3];
    s.ftbb.alpha    = alpha;
    specs.push_back(s);
  }
  auto          entries = suite(200, 40);
  MetricsReport report  = evaluate(specs, entries, PredictionScope::all);
  for (std::size_t i = 0; i < report.rows.size(); ++i)
  {
    auto fails = guarantee_failures(specs[i % specs.size()], report.rows[i]);
    EXPECT_TRUE(fails.empty()) << report.rows[i].instance_id << " " << (fails.empty() ? "" : fails[0]);
  }
}

TEST(Metrics, GuaranteeCheckFlagsABadRow)
{
  MechanismSpec ftbb;
  ftbb.kind = MechanismKind::ftbb;
  MetricsRow row;
  row.n                 = 4;
  row.mechanism         = ftbb.label();
  row.welfare           = 1;
  row.opt_welfare       = 3;
  row.predicted_welfare = 3;
  row.ratio             = Money(3);
  row.predicted_ratio   = Money(3);
  row.eta               = 1;
  row.accurate          = true;
  EXPECT_FALSE(guarantee_failures(ftbb, row).empty());

  MechanismSpec wfca;
  row.ratio = Money(100);
  EXPECT_FALSE(guarantee_failures(wfca, row).empty());
  row.ratio = Money(2);
  EXPECT_TRUE(guarantee_failures(wfca, row).empty());
}

TEST(Metrics, OutputIndependentOfWorkerCount)
{
  auto entries = suite(80, 6);
  std::ostringstream one;
  std::ostringstream many;
  write_metrics_csv(one, evaluate(all_specs(), entries, PredictionScope::all, {}, 1));
  write_metrics_csv(many, evaluate(all_specs(), entries, PredictionScope::all, {}, 7));
  EXPECT_EQ(one.str(), many.str());
}

TEST(MetricsCsv, EmptySuiteHasHeaderAndSummaries)
{
  std::ostringstream os;
  write_metrics_csv(os, evaluate(all_specs(), {}, PredictionScope::all));
  std::istringstream is(os.str());
  std::string        line;
  std::getline(is, line);
  EXPECT_EQ(line, "# clockaug-metrics 1");
  std::getline(is, line);
  EXPECT_EQ(line.rfind("row_type,instance,n,mechanism", 0), 0u);
  std::size_t summaries = 0;
  while (std::getline(is, line))
  {
    EXPECT_EQ(line.rfind("summary,", 0), 0u);
    ++summaries;
  }
  EXPECT_EQ(summaries, 4u);
}
