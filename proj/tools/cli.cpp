#include "cli.hpp"

#include "clockaug/adversary.hpp"
#include "clockaug/ftbb.hpp"
#include "clockaug/ftul.hpp"
#include "clockaug/metrics.hpp"
#include "clockaug/numerics.hpp"
#include "clockaug/wfca.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

namespace clockaug::cli {

namespace {

class UsageError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Identity-check tolerance; also the bar for the Gamma invariants.
constexpr double kNumericTolerance = 1e-9;

std::string fmt_double(double x)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void emit(const std::string &path, std::ostream &fallback, const std::function<void(std::ostream &)> &write)
{
  if (path.empty() || path == "-")
  {
    write(fallback);
    return;
  }
  std::ofstream os(path);
  if (!os)
  {
    throw UsageError("cannot open '" + path + "' for writing");
  }
  write(os);
  if (!os)
  {
    throw UsageError("failed writing '" + path + "'");
  }
}

Instance load_instance(const std::string &path)
{
  std::ifstream is(path);
  if (!is)
  {
    throw UsageError("cannot open '" + path + "'");
  }
  return read_instance(is);
}

std::vector<Money> money_list(const std::vector<std::string> &texts)
{
  std::vector<Money> out;
  for (const std::string &t : texts)
  {
    out.push_back(parse_money(t));
  }
  return out;
}

std::optional<std::size_t> parse_prediction(const std::string &text, const Instance &inst)
{
  if (text == "none")
  {
    return std::nullopt;
  }
  if (text == "opt")
  {
    return opt_oracle(inst.sys, inst.values).index.value();
  }
  if (text.find(',') != std::string::npos)
  {
    return resolve_prediction(inst.sys, BidderSet::parse(text));
  }
  std::size_t used  = 0;
  std::size_t index = 0;
  try
  {
    index = std::stoul(text, &used);
  }
  catch (const std::exception &)
  {
    throw UsageError("prediction must be none, opt, a set index or a bidder list");
  }
  if (used != text.size())
  {
    throw UsageError("prediction must be none, opt, a set index or a bidder list");
  }
  return index;
}

/// Parameter flags shared by run, sweep and lowerbound.
struct ParamFlags
{
  std::vector<std::string> epsilon;
  std::vector<std::string> eta_bar;
  std::vector<std::string> alpha;
  std::string              beta;
  std::string              gamma_override;
};

void add_param_flags(CLI::App *cmd, ParamFlags &p, bool lists)
{
  if (lists)
  {
    cmd->add_option("--epsilon", p.epsilon, "FTUL epsilon values");
    cmd->add_option("--eta-bar", p.eta_bar, "error-tolerant eta_bar values");
    cmd->add_option("--alpha", p.alpha, "FTBB alpha values");
  }
  else
  {
    cmd->add_option("--epsilon", p.epsilon, "FTUL epsilon")->expected(1);
    cmd->add_option("--eta-bar", p.eta_bar, "error-tolerant eta_bar")->expected(1);
    cmd->add_option("--alpha", p.alpha, "FTBB alpha")->expected(1);
  }
  cmd->add_option("--beta", p.beta, "FTBB beta; must reach the consistency threshold");
  cmd->add_option("--gamma-override", p.gamma_override, "FTUL gamma, > 10/9");
}

/// Flags that no requested mechanism reads are usage errors.
void check_flag_use(const CLI::App *cmd, const std::vector<MechanismKind> &kinds)
{
  auto uses = [&](std::initializer_list<MechanismKind> readers) {
    return std::any_of(kinds.begin(), kinds.end(), [&](MechanismKind k) {
      return std::find(readers.begin(), readers.end(), k) != readers.end();
    });
  };
  struct Rule
  {
    const char                          *flag;
    std::initializer_list<MechanismKind> readers;
  };
  const Rule rules[] = {
    {"--epsilon", {MechanismKind::ftul, MechanismKind::error_tolerant}},
    {"--gamma-override", {MechanismKind::ftul, MechanismKind::error_tolerant}},
    {"--eta-bar", {MechanismKind::error_tolerant}},
    {"--alpha", {MechanismKind::ftbb}},
    {"--beta", {MechanismKind::ftbb}},
  };
  for (const Rule &r : rules)
  {
    if (cmd->count(r.flag) > 0 && !uses(r.readers))
    {
      throw UsageError(std::string(r.flag) + " does not apply to the selected mechanism");
    }
  }
}

/// β must reach the threshold for every instance size it will see.
void check_beta(const MechanismSpec &spec, std::size_t max_n)
{
  if (spec.kind != MechanismKind::ftbb || !spec.ftbb.beta || max_n == 0)
  {
    return;
  }
  Money need = threshold_beta(spec.ftbb.alpha, max_n);
  Money floor = 6 * harmonic(max_n);
  if (*spec.ftbb.beta < need || *spec.ftbb.beta < floor)
  {
    throw UsageError("beta " + to_string(*spec.ftbb.beta) + " is below the consistency threshold " +
                     to_string(std::max(need, floor)) + " for n=" + std::to_string(max_n));
  }
}

std::vector<MechanismSpec> expand_specs(const std::vector<MechanismKind> &kinds, const ParamFlags &p)
{
  std::vector<Money> eps   = p.epsilon.empty() ? std::vector<Money>{Money(1)} : money_list(p.epsilon);
  std::vector<Money> etas  = p.eta_bar.empty() ? std::vector<Money>{Money(1)} : money_list(p.eta_bar);
  std::vector<Money> alpha = p.alpha.empty() ? std::vector<Money>{Money(2)} : money_list(p.alpha);
  std::optional<Money> gamma;
  std::optional<Money> beta;
  if (!p.gamma_override.empty())
  {
    gamma = parse_money(p.gamma_override);
  }
  if (!p.beta.empty())
  {
    beta = parse_money(p.beta);
  }

  std::vector<MechanismSpec> out;
  for (MechanismKind kind : kinds)
  {
    MechanismSpec base;
    base.kind = kind;
    switch (kind)
    {
      case MechanismKind::wfca:
        out.push_back(base);
        break;
      case MechanismKind::ftul:
      case MechanismKind::error_tolerant:
        for (const Money &e : eps)
        {
          for (const Money &h : kind == MechanismKind::ftul ? std::vector<Money>{Money(1)} : etas)
          {
            MechanismSpec s       = base;
            s.ftul.epsilon        = e;
            s.ftul.eta_bar        = h;
            s.ftul.gamma_override = gamma;
            s.ftul.validate();
            out.push_back(s);
          }
        }
        break;
      case MechanismKind::ftbb:
        for (const Money &a : alpha)
        {
          MechanismSpec s = base;
          s.ftbb.alpha    = a;
          s.ftbb.beta     = beta;
          s.ftbb.validate();
          out.push_back(s);
        }
        break;
    }
  }
  return out;
}

struct EngineFlags
{
  std::string mode = "event";
  std::string delta;
};

void add_engine_flags(CLI::App *cmd, EngineFlags &e)
{
  cmd->add_option("--mode", e.mode, "price advance: event or grid")->check(CLI::IsMember({"event", "grid"}));
  cmd->add_option("--delta", e.delta, "grid step; defaults to v_min/n^2");
}

EngineConfig engine_of(const EngineFlags &e)
{
  EngineConfig cfg;
  cfg.mode = parse_mode(e.mode);
  if (!e.delta.empty())
  {
    if (cfg.mode != AdvanceMode::grid)
    {
      throw UsageError("--delta needs --mode grid");
    }
    cfg.delta = parse_money(e.delta);
  }
  return cfg;
}

std::string ratio_text(const std::optional<Money> &r) { return r ? to_string(*r) : "inf"; }

// ---- gen -------------------------------------------------------------------

struct GenFlags
{
  std::uint64_t seed = 1;
  std::size_t   n    = 0;
  std::size_t   sets = 0;
  std::string   dist = "uniform";
  std::string   v_min = "1";
  std::string   v_max = "10";
  unsigned      decades = 3;
  unsigned long grid    = 4;
  std::string   prediction = "none";
  std::string   output;
};

ValueDist dist_of(const GenFlags &g)
{
  ValueDist d;
  d.kind    = g.dist == "log-uniform" ? ValueDist::Kind::log_uniform : ValueDist::Kind::uniform;
  d.v_min   = parse_money(g.v_min);
  d.v_max   = parse_money(g.v_max);
  d.decades = g.decades;
  d.grid    = g.grid;
  return d;
}

int cmd_gen(const GenFlags &g, std::ostream &out)
{
  Instance inst   = gen_random(g.seed, g.n, g.sets, dist_of(g));
  inst.prediction = parse_prediction(g.prediction, inst);
  inst.validate();
  emit(g.output, out, [&](std::ostream &os) { write_instance(os, inst); });
  return exit_ok;
}

// ---- run -------------------------------------------------------------------

struct RunFlags
{
  std::string instance;
  GenFlags    gen;
  std::string mechanism;
  ParamFlags  params;
  EngineFlags engine;
  std::string prediction;
  std::string trace;
  std::string summary;
};

int cmd_run(const CLI::App *cmd, RunFlags &f, std::ostream &out, std::ostream &err)
{
  bool from_file = cmd->count("--instance") > 0;
  bool from_gen  = cmd->count("--n") > 0 || cmd->count("--sets") > 0;
  if (from_file == from_gen)
  {
    throw UsageError("give exactly one instance source: --instance, or --n with --sets");
  }
  Instance inst;
  if (from_file)
  {
    inst = load_instance(f.instance);
  }
  else
  {
    if (f.gen.n == 0 || f.gen.sets == 0)
    {
      throw UsageError("generated instances need both --n and --sets");
    }
    inst = gen_random(f.gen.seed, f.gen.n, f.gen.sets, dist_of(f.gen));
  }
  if (!f.prediction.empty())
  {
    inst.prediction = parse_prediction(f.prediction, inst);
  }
  inst.validate();

  MechanismKind kind = parse_mechanism(f.mechanism);
  check_flag_use(cmd, {kind});
  MechanismSpec spec = expand_specs({kind}, f.params).front();
  if (spec.needs_prediction() && !inst.prediction)
  {
    throw UsageError(to_string(kind) + " needs a prediction; pass --prediction");
  }
  check_beta(spec, inst.n());
  EngineConfig cfg = engine_of(f.engine);

  MechanismOutcome run = run_mechanism(inst, spec, cfg);

  MetricsRow row;
  row.n           = inst.n();
  row.mechanism   = spec.label();
  row.welfare     = trace_welfare(inst, run.trace);
  row.opt_welfare = opt_oracle(inst.sys, inst.values).value;
  if (inst.prediction)
  {
    row.prediction        = *inst.prediction;
    row.predicted_welfare = sum_over(inst.predicted_set(), inst.values);
    row.accurate          = row.predicted_welfare == row.opt_welfare;
    row.eta               = prediction_error(inst);
    if (row.welfare > 0)
    {
      row.predicted_ratio = Money(row.predicted_welfare / row.welfare);
    }
  }
  if (row.welfare > 0)
  {
    row.ratio = Money(row.opt_welfare / row.welfare);
  }
  std::vector<std::string> failures;
  if (spec.kind == MechanismKind::wfca || inst.prediction)
  {
    failures = guarantee_failures(spec, row);
  }

  BoundReport ledger;
  switch (spec.kind)
  {
    case MechanismKind::wfca:
      if (auto drop = first_revenue_drop(run.trace, inst.sys))
      {
        ledger.violations.push_back({"revenue-monotone", 0, "drop after event " + std::to_string(*drop)});
      }
      break;
    case MechanismKind::ftul:
    case MechanismKind::error_tolerant:
      ledger = ftul_bound_check(run.trace, spec.ftul, inst);
      break;
    case MechanismKind::ftbb:
      ledger = ftbb_bound_check(run.trace, spec.ftbb, inst);
      break;
  }

  if (!f.trace.empty())
  {
    emit(f.trace, out, [&](std::ostream &os) { write_trace(os, run.trace); });
  }
  emit(f.summary, out, [&](std::ostream &os) {
    os << "clockaug-run 1\n";
    os << "mechanism " << spec.label() << '\n';
    os << "mode " << run.trace.header.mode << '\n';
    os << "via " << run.via << '\n';
    os << "served " << run.served.str() << '\n';
    os << "welfare " << to_string(row.welfare) << '\n';
    os << "revenue " << to_string(run.revenue) << '\n';
    os << "opt_welfare " << to_string(row.opt_welfare) << '\n';
    os << "ratio " << ratio_text(row.ratio) << '\n';
    if (inst.prediction)
    {
      os << "prediction " << *inst.prediction << '\n';
      os << "predicted_welfare " << to_string(row.predicted_welfare) << '\n';
      os << "predicted_ratio " << ratio_text(row.predicted_ratio) << '\n';
      os << "eta " << to_string(row.eta) << '\n';
    }
    os << "events " << run.trace.events.size() << '\n';
    os << "ledger " << (ledger.ok() ? "ok" : "violated") << '\n';
    for (const BoundViolation &v : ledger.violations)
    {
      os << "ledger_violation " << v.rule << " iteration=" << v.iteration << ' ' << v.detail << '\n';
    }
    os << "guarantee " << (failures.empty() ? "ok" : "violated") << '\n';
    for (const std::string &s : failures)
    {
      os << "guarantee_violation " << s << '\n';
    }
  });
  if (!ledger.ok() || !failures.empty())
  {
    err << "property violation in " << spec.label() << '\n';
    return exit_violation;
  }
  return exit_ok;
}

// ---- sweep -----------------------------------------------------------------

struct SweepFlags
{
  std::vector<std::string> mechanisms;
  ParamFlags               params;
  EngineFlags              engine;
  std::vector<std::string> instances;
  SuiteSpec                suite;
  bool                     narrow = false;
  std::string              scope  = "all";
  std::size_t              workers = 0;
  std::string              output;
};

int cmd_sweep(const CLI::App *cmd, SweepFlags &f, std::ostream &out, std::ostream &err)
{
  std::vector<MechanismKind> kinds;
  for (const std::string &m : f.mechanisms)
  {
    kinds.push_back(parse_mechanism(m));
  }
  check_flag_use(cmd, kinds);
  std::vector<MechanismSpec> specs = expand_specs(kinds, f.params);

  std::vector<SuiteEntry> suite;
  if (!f.instances.empty())
  {
    if (cmd->count("--count") + cmd->count("--seed") + cmd->count("--min-n") + cmd->count("--max-n") +
            cmd->count("--max-sets") + cmd->count("--narrow") >
        0)
    {
      throw UsageError("give exactly one suite source: --instance files or generator flags");
    }
    for (const std::string &path : f.instances)
    {
      suite.push_back({std::filesystem::path(path).stem().string(), load_instance(path)});
    }
  }
  else
  {
    f.suite.mixed_scale = !f.narrow;
    suite               = gen_suite(f.suite);
  }
  std::size_t max_n = 0;
  for (const SuiteEntry &e : suite)
  {
    max_n = std::max(max_n, e.inst.n());
  }
  for (const MechanismSpec &s : specs)
  {
    check_beta(s, max_n);
  }

  PredictionScope scope  = f.scope == "accurate" ? PredictionScope::accurate : PredictionScope::all;
  MetricsReport   report = evaluate(specs, suite, scope, engine_of(f.engine), f.workers);
  emit(f.output, out, [&](std::ostream &os) { write_metrics_csv(os, report); });

  std::size_t failed = 0;
  for (std::size_t j = 0; j < report.rows.size(); ++j)
  {
    const MechanismSpec &spec = specs[j % specs.size()];
    for (const std::string &s : guarantee_failures(spec, report.rows[j]))
    {
      if (failed < 10)
      {
        err << "violation " << report.rows[j].instance_id << " prediction=" << report.rows[j].prediction << ' '
            << spec.label() << ": " << s << '\n';
      }
      ++failed;
    }
  }
  if (failed > 0)
  {
    err << failed << " guarantee violations\n";
    return exit_violation;
  }
  return exit_ok;
}

// ---- lowerbound ------------------------------------------------------------

struct LowerFlags
{
  std::string              family;
  std::vector<std::size_t> n{8, 16, 32};
  std::string              epsilon = "1/2";
  std::size_t              k1      = 4;
  std::vector<std::size_t> k2{4, 8, 16};
  std::string              alpha       = "2";
  std::string              value_delta = "0";
  std::string              v_min;
  std::string              mechanism;
  std::string              eta_bar    = "1";
  std::string              beta_scale = "1";
  EngineFlags              engine;
  std::string              out_dir;
  std::string              output;
};

int cmd_lowerbound(const CLI::App *cmd, LowerFlags &f, std::ostream &out, std::ostream &err)
{
  FamilyKind    family = parse_family(f.family);
  MechanismKind kind   = parse_mechanism(f.mechanism);
  if (cmd->count("--beta-scale") > 0 && kind != MechanismKind::ftbb)
  {
    throw UsageError("--beta-scale applies to ftbb only");
  }
  if (cmd->count("--eta-bar") > 0 && kind != MechanismKind::error_tolerant)
  {
    throw UsageError("--eta-bar applies to error-tolerant only");
  }
  const Money scale = parse_money(f.beta_scale);
  if (scale <= 0)
  {
    throw UsageError("--beta-scale must be positive");
  }
  EngineConfig cfg = engine_of(f.engine);

  std::vector<LowerBoundFamily> families;
  if (family == FamilyKind::sparse_rival)
  {
    for (std::size_t n : f.n)
    {
      LowerBoundFamily lb;
      lb.kind    = family;
      lb.n       = n;
      lb.epsilon = parse_money(f.epsilon);
      families.push_back(lb);
    }
  }
  else
  {
    for (std::size_t k2 : f.k2)
    {
      LowerBoundFamily lb;
      lb.kind  = family;
      lb.k1    = f.k1;
      lb.k2    = k2;
      lb.alpha = parse_money(f.alpha);
      lb.delta = parse_money(f.value_delta);
      families.push_back(lb);
    }
  }
  if (!f.v_min.empty())
  {
    for (LowerBoundFamily &lb : families)
    {
      lb.v_min = parse_money(f.v_min);
    }
  }
  if (!f.out_dir.empty())
  {
    std::filesystem::create_directories(f.out_dir);
  }

  bool        failed = false;
  std::size_t index  = 0;
  emit(f.output, out, [&](std::ostream &os) {
    os << "# clockaug-lowerbound 1\n";
    os << "family,mechanism,beta,case,welfare,opt_welfare,predicted_welfare,robustness,consistency,"
          "consistency_inf,guarantee,violated,replay\n";
    for (const LowerBoundFamily &lb : families)
    {
      MechanismSpec spec;
      spec.kind         = kind;
      spec.ftul.epsilon = parse_money(f.epsilon);
      spec.ftul.eta_bar = parse_money(f.eta_bar);
      spec.ftbb.alpha   = parse_money(f.alpha);
      std::string beta_text;
      if (kind == MechanismKind::ftbb)
      {
        std::size_t n      = lb.skeleton().n();
        Money       scaled = round_up(scale * threshold_beta(spec.ftbb.alpha, n), 1000000);
        Money       floor  = round_up(6 * harmonic(n), 1000000);
        spec.ftbb.beta     = std::max(scaled, floor);
        beta_text          = to_string(*spec.ftbb.beta);
      }
      HarnessReport r = run_lowerbound_harness(spec, lb, cfg);
      // Violations count only when the mechanism runs with its proven parameters.
      bool binding = kind != MechanismKind::ftbb || scale >= 1;
      if (!r.replay_identical || (binding && r.guarantee_violated))
      {
        failed = true;
      }
      os << '"' << r.family << "\",\"" << r.mechanism << "\"," << beta_text << ',' << to_string(r.outcome_case)
         << ',' << to_string(r.welfare) << ',' << to_string(r.opt_welfare) << ',' << to_string(r.predicted_welfare)
         << ',' << ratio_text(r.robustness_ratio) << ','
         << (r.consistency_ratio ? to_string(*r.consistency_ratio) : std::string()) << ','
         << ratio_text(r.consistency_inf_ratio) << ',' << (r.guarantee ? to_string(*r.guarantee) : std::string())
         << ',' << (r.guarantee_violated ? 1 : 0) << ',' << (r.replay_identical ? "identical" : "differs") << '\n';
      if (!f.out_dir.empty())
      {
        std::string stem = f.out_dir + "/lowerbound-" + std::to_string(index);
        emit(stem + ".instance", out, [&](std::ostream &fs) { write_instance(fs, r.finalized); });
        emit(stem + ".trace", out, [&](std::ostream &fs) { write_trace(fs, r.trace); });
      }
      ++index;
    }
  });
  if (failed)
  {
    err << "lower-bound harness found a replay mismatch or a guarantee violation\n";
    return exit_violation;
  }
  return exit_ok;
}

// ---- check -----------------------------------------------------------------

struct CheckFlags
{
  std::vector<double> alpha{1.5, 2.0, 3.0};
  std::size_t         n_min = 3;
  std::size_t         n_max = 30;
  std::size_t         threshold_n_max = 1000;
};

int cmd_check(const CheckFlags &f, std::ostream &out, std::ostream &err)
{
  std::size_t failed = 0;
  auto        line   = [&](const std::string &check, const std::string &where, double value, double reference) {
    double scale = std::max(1.0, std::fabs(reference));
    double rel   = std::fabs(value - reference) / scale;
    bool   ok    = rel <= kNumericTolerance;
    failed += ok ? 0 : 1;
    out << check << ',' << where << ',' << fmt_double(value) << ',' << fmt_double(reference) << ','
        << fmt_double(rel) << ',' << (ok ? "ok" : "FAIL") << '\n';
  };
  out << "check,where,value,reference,rel_err,status\n";
  for (double a : f.alpha)
  {
    for (std::size_t n = f.n_min; n <= f.n_max; ++n)
    {
      IdentityCheck c = summation_identity_check(a, n);
      line("summation-identity", "alpha=" + fmt_double(a) + " n=" + std::to_string(n), c.lhs, c.rhs);
    }
  }
  for (std::size_t n = 1; n <= f.threshold_n_max; ++n)
  {
    double hn = harmonic_approx(n);
    line("threshold-alpha2", "n=" + std::to_string(n), beta_threshold(2.0, n), hn * (4.0 * static_cast<double>(n) + 2.0));
  }
  line("log-gamma", "x=1", log_gamma(1.0), 0.0);
  line("log-gamma", "x=2", log_gamma(2.0), 0.0);
  line("log-gamma", "x=0.5", log_gamma(0.5), 0.5 * std::log(M_PI));
  for (double x = 0.25; x < 30.0; x += 0.75)
  {
    line("log-gamma-recurrence", "x=" + fmt_double(x), log_gamma(x + 1.0) - log_gamma(x), std::log(x));
  }
  for (double x = 20.0; x <= 200.0; x += 15.0)
  {
    line("log-gamma-stirling", "x=" + fmt_double(x), log_gamma(x), log_gamma_stirling(x));
  }
  if (failed > 0)
  {
    err << failed << " numeric checks exceeded " << fmt_double(kNumericTolerance) << '\n';
    return exit_violation;
  }
  return exit_ok;
}

// ---- curve -----------------------------------------------------------------

struct CurveFlags
{
  std::vector<double>      alpha;
  double                   alpha_min  = 1.25;
  double                   alpha_max  = 4.0;
  double                   alpha_step = 0.05;
  std::vector<std::size_t> n{10, 100, 1000, 10000};
  std::string              csv;
  std::string              svg;
};

void write_svg(std::ostream &os, const std::vector<CurvePoint> &pts, const std::vector<std::size_t> &ns)
{
  constexpr double W = 720, H = 460, L = 70, R = 130, T = 30, B = 50;
  double amin = pts.front().alpha, amax = pts.front().alpha;
  double ymin = std::log10(pts.front().threshold), ymax = ymin;
  for (const CurvePoint &p : pts)
  {
    amin = std::min(amin, p.alpha);
    amax = std::max(amax, p.alpha);
    ymin = std::min(ymin, std::log10(p.threshold));
    ymax = std::max(ymax, std::log10(p.threshold));
  }
  ymin = std::floor(ymin);
  ymax = std::ceil(ymax);
  if (amax == amin)
  {
    amax = amin + 1;
  }
  if (ymax == ymin)
  {
    ymax = ymin + 1;
  }
  auto x_of = [&](double a) { return L + (a - amin) / (amax - amin) * (W - L - R); };
  auto y_of = [&](double v) { return T + (ymax - std::log10(v)) / (ymax - ymin) * (H - T - B); };
  const char *colors[] = {"#1b6ca8", "#d1495b", "#2e8b57", "#edae49", "#6a4c93", "#444444"};

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  for (double e = ymin; e <= ymax; e += std::max(1.0, std::ceil((ymax - ymin) / 8)))
  {
    double y = y_of(std::pow(10.0, e));
    os << "<line x1=\"" << L - 4 << "\" y1=\"" << fmt_double(y) << "\" x2=\"" << L << "\" y2=\"" << fmt_double(y) << "\" stroke=\"black\"/>";
    os << "<text x=\"" << L - 8 << "\" y=\"" << fmt_double(y + 4) << "\" text-anchor=\"end\">1e" << e << "</text>\n";
  }
  for (int k = 0; k <= 5; ++k)
  {
    double a = amin + (amax - amin) * k / 5;
    double x = x_of(a);
    os << "<line x1=\"" << fmt_double(x) << "\" y1=\"" << H - B << "\" x2=\"" << fmt_double(x) << "\" y2=\"" << H - B + 4 << "\" stroke=\"black\"/>";
    os << "<text x=\"" << fmt_double(x) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">" << fmt_double(a) << "</text>\n";
  }
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">alpha (consistency-inf)</text>\n";
  os << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" transform=\"rotate(-90 16 " << (T + H - B) / 2
     << ")\" text-anchor=\"middle\">beta (robustness, log scale)</text>\n";
  for (std::size_t i = 0; i < ns.size(); ++i)
  {
    const char *color = colors[i % (sizeof colors / sizeof *colors)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const CurvePoint &p : pts)
    {
      if (p.n == ns[i])
      {
        os << fmt_double(x_of(p.alpha)) << ',' << fmt_double(y_of(p.threshold)) << ' ';
      }
    }
    os << "\"/>\n";
    double ly = T + 20 + 18.0 * static_cast<double>(i);
    os << "<line x1=\"" << W - R + 12 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 36 << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>";
    os << "<text x=\"" << W - R + 42 << "\" y=\"" << ly + 4 << "\">n = " << ns[i] << "</text>\n";
  }
  os << "</svg>\n";
}

int cmd_curve(const CurveFlags &f, std::ostream &out, std::ostream &err)
{
  std::vector<double> grid = f.alpha;
  if (grid.empty())
  {
    if (!(f.alpha_step > 0) || f.alpha_max < f.alpha_min)
    {
      throw UsageError("alpha range needs alpha-min <= alpha-max and a positive step");
    }
    std::size_t steps = static_cast<std::size_t>(std::floor((f.alpha_max - f.alpha_min) / f.alpha_step + 1e-9));
    for (std::size_t k = 0; k <= steps; ++k)
    {
      grid.push_back(f.alpha_min + f.alpha_step * static_cast<double>(k));
    }
  }
  std::vector<CurvePoint> pts = beta_curve(grid, f.n);
  emit(f.csv, out, [&](std::ostream &os) {
    os << "n,alpha,simple,threshold,ratio\n";
    for (const CurvePoint &p : pts)
    {
      os << p.n << ',' << fmt_double(p.alpha) << ',' << fmt_double(p.simple) << ',' << fmt_double(p.threshold) << ','
         << fmt_double(p.threshold / p.simple) << '\n';
    }
  });
  if (!f.svg.empty() && !pts.empty())
  {
    emit(f.svg, out, [&](std::ostream &os) { write_svg(os, pts, f.n); });
  }

  // The threshold falls along α for fixed n and rises along n for fixed α.
  std::size_t bad = 0;
  for (std::size_t i = 0; i < pts.size(); ++i)
  {
    for (std::size_t j = 0; j < pts.size(); ++j)
    {
      if (pts[i].n == pts[j].n && pts[i].alpha < pts[j].alpha && !(pts[i].threshold > pts[j].threshold))
      {
        ++bad;
      }
      if (pts[i].alpha == pts[j].alpha && pts[i].n < pts[j].n && !(pts[i].threshold < pts[j].threshold))
      {
        ++bad;
      }
    }
  }
  if (bad > 0)
  {
    err << bad << " curve pairs break monotonicity\n";
    return exit_violation;
  }
  return exit_ok;
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
  CLI::App app{"Clock auctions with predictions: generation, runs, sweeps and checks", "clockaug"};
  app.require_subcommand(1);

  GenFlags gen;
  CLI::App *gen_cmd = app.add_subcommand("gen", "generate a random instance");
  auto add_gen = [](CLI::App *cmd, GenFlags &g, bool required) {
    cmd->add_option("--seed", g.seed, "generator seed");
    auto *n    = cmd->add_option("--n", g.n, "bidder count");
    auto *sets = cmd->add_option("--sets", g.sets, "maximal set count");
    if (required)
    {
      n->required();
      sets->required();
    }
    cmd->add_option("--dist", g.dist, "value distribution")->check(CLI::IsMember({"uniform", "log-uniform"}));
    cmd->add_option("--v-min", g.v_min, "lowest value");
    cmd->add_option("--v-max", g.v_max, "highest uniform value");
    cmd->add_option("--decades", g.decades, "log-uniform decades");
    cmd->add_option("--grid", g.grid, "value grid denominator");
  };
  add_gen(gen_cmd, gen, true);
  gen_cmd->add_option("--prediction", gen.prediction, "none, opt, a set index or a bidder list");
  gen_cmd->add_option("-o,--output", gen.output, "output path");

  RunFlags  run;
  CLI::App *run_cmd = app.add_subcommand("run", "run one mechanism on one instance");
  run_cmd->add_option("--instance", run.instance, "instance file");
  add_gen(run_cmd, run.gen, false);
  run_cmd->add_option("--mechanism", run.mechanism, "wfca, ftul, error-tolerant or ftbb")->required();
  add_param_flags(run_cmd, run.params, false);
  add_engine_flags(run_cmd, run.engine);
  run_cmd->add_option("--prediction", run.prediction, "override: none, opt, a set index or a bidder list");
  run_cmd->add_option("--trace", run.trace, "trace output path");
  run_cmd->add_option("--summary", run.summary, "summary output path");

  SweepFlags sweep;
  CLI::App  *sweep_cmd = app.add_subcommand("sweep", "evaluate mechanisms over a suite");
  sweep_cmd->add_option("--mechanism", sweep.mechanisms, "mechanisms to evaluate")->required();
  add_param_flags(sweep_cmd, sweep.params, true);
  add_engine_flags(sweep_cmd, sweep.engine);
  sweep_cmd->add_option("--instance", sweep.instances, "instance files instead of a generated suite");
  sweep_cmd->add_option("--count", sweep.suite.count, "suite size");
  sweep_cmd->add_option("--seed", sweep.suite.seed, "suite seed");
  sweep_cmd->add_option("--min-n", sweep.suite.min_n, "smallest n");
  sweep_cmd->add_option("--max-n", sweep.suite.max_n, "largest n");
  sweep_cmd->add_option("--max-sets", sweep.suite.max_sets, "most maximal sets");
  sweep_cmd->add_flag("--narrow", sweep.narrow, "uniform values on [1, 10] only");
  sweep_cmd->add_option("--scope", sweep.scope, "predictions: all or accurate")
    ->check(CLI::IsMember({"all", "accurate"}));
  sweep_cmd->add_option("--workers", sweep.workers, "worker threads; 0 reads CLOCKAUG_WORKERS");
  sweep_cmd->add_option("-o,--output", sweep.output, "CSV output path");

  LowerFlags lower;
  CLI::App  *lower_cmd = app.add_subcommand("lowerbound", "run the adaptive value-pool adversary");
  lower_cmd->add_option("--family", lower.family, "sparse-rival or decaying-chain")->required();
  lower_cmd->add_option("--mechanism", lower.mechanism, "mechanism under attack")->required();
  lower_cmd->add_option("--n", lower.n, "sparse-rival sizes");
  lower_cmd->add_option("--epsilon", lower.epsilon, "family and FTUL epsilon");
  lower_cmd->add_option("--k1", lower.k1, "decaying-chain rival size");
  lower_cmd->add_option("--k2", lower.k2, "decaying-chain predicted sizes");
  lower_cmd->add_option("--alpha", lower.alpha, "family and FTBB alpha");
  lower_cmd->add_option("--value-delta", lower.value_delta, "decaying-chain perturbation");
  lower_cmd->add_option("--v-min", lower.v_min, "starting price; defaults to the smallest pool value");
  lower_cmd->add_option("--eta-bar", lower.eta_bar, "error-tolerant eta_bar");
  lower_cmd->add_option("--beta-scale", lower.beta_scale, "FTBB beta as a multiple of the threshold");
  add_engine_flags(lower_cmd, lower.engine);
  lower_cmd->add_option("--out-dir", lower.out_dir, "directory for finalized instances and traces");
  lower_cmd->add_option("-o,--output", lower.output, "report output path");

  CheckFlags check;
  CLI::App  *check_cmd = app.add_subcommand("check", "verify the numeric identities");
  check_cmd->add_option("--alpha", check.alpha, "alpha grid");
  check_cmd->add_option("--n-min", check.n_min, "smallest n");
  check_cmd->add_option("--n-max", check.n_max, "largest n");
  check_cmd->add_option("--threshold-n-max", check.threshold_n_max, "largest n for the alpha=2 threshold check");

  CurveFlags curve;
  CLI::App  *curve_cmd = app.add_subcommand("curve", "emit the beta threshold against alpha");
  curve_cmd->add_option("--alpha", curve.alpha, "explicit alpha grid");
  curve_cmd->add_option("--alpha-min", curve.alpha_min, "grid start");
  curve_cmd->add_option("--alpha-max", curve.alpha_max, "grid end");
  curve_cmd->add_option("--alpha-step", curve.alpha_step, "grid step");
  curve_cmd->add_option("--n", curve.n, "instance sizes");
  curve_cmd->add_option("--csv", curve.csv, "CSV output path");
  curve_cmd->add_option("--svg", curve.svg, "SVG output path");

  try
  {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  }
  catch (const CLI::ParseError &e)
  {
    int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  try
  {
    if (*gen_cmd)
    {
      return cmd_gen(gen, out);
    }
    if (*run_cmd)
    {
      return cmd_run(run_cmd, run, out, err);
    }
    if (*sweep_cmd)
    {
      return cmd_sweep(sweep_cmd, sweep, out, err);
    }
    if (*lower_cmd)
    {
      return cmd_lowerbound(lower_cmd, lower, out, err);
    }
    if (*check_cmd)
    {
      return cmd_check(check, out, err);
    }
    return cmd_curve(curve, out, err);
  }
  catch (const InvariantViolation &e)
  {
    err << "internal invariant violated: " << e.what() << '\n';
    return exit_violation;
  }
  catch (const UsageError &e)
  {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
  catch (const Error &e)
  {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
}

}  // namespace clockaug::cli
