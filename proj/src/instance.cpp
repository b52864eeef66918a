#include "clockaug/instance.hpp"

#include "rng.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace clockaug {

const BidderSet &Instance::predicted_set() const
{
  if (!prediction)
  {
    throw NoPrediction("instance has no prediction");
  }
  return sys[*prediction];
}

void Instance::validate() const
{
  if (values.size() != sys.n())
  {
    throw InvalidInput("value count differs from n");
  }
  if (v_min <= 0)
  {
    throw InvalidInput("v_min must be positive");
  }
  for (std::size_t i = 0; i < values.size(); ++i)
  {
    if (values[i] < v_min)
    {
      throw InvalidInput("value of bidder " + std::to_string(i) + " is below v_min");
    }
  }
  if (prediction && *prediction >= sys.size())
  {
    throw InvalidPrediction("prediction index out of range");
  }
}

Instance with_prediction(Instance inst, std::optional<std::size_t> prediction)
{
  inst.prediction = prediction;
  inst.validate();
  return inst;
}

Money prediction_error(const Instance &inst)
{
  const BidderSet &pred    = inst.predicted_set();
  Money            pred_w  = sum_over(pred, inst.values);
  Money            opt_w   = opt_oracle(inst.sys, inst.values).value;
  if (pred_w <= 0)
  {
    throw InvalidPrediction("predicted set has zero welfare");
  }
  Money eta = opt_w / pred_w;
  eta.canonicalize();
  return eta;
}

std::size_t resolve_prediction(const SetSystem &sys, const BidderSet &predicted)
{
  auto idx = containing_maximal_set(sys, predicted);
  if (!idx)
  {
    throw InvalidPrediction("prediction " + predicted.str() + " is not feasible");
  }
  return *idx;
}

namespace {

mpz_class binomial(std::size_t n, std::size_t k)
{
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

Money draw_value(detail::Rng &rng, const ValueDist &dist)
{
  if (dist.kind == ValueDist::Kind::uniform)
  {
    Money     span  = (dist.v_max - dist.v_min) * dist.grid;
    mpz_class steps = span.get_num() / span.get_den();
    auto      k     = rng.below(steps.get_ui() + 1);
    Money     v     = dist.v_min + Money(static_cast<unsigned long>(k), dist.grid);
    v.canonicalize();
    return v;
  }
  auto      m = rng.below(9 * dist.grid) + dist.grid;
  auto      d = rng.below(dist.decades);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, d);
  Money v = dist.v_min * Money(static_cast<unsigned long>(m), dist.grid) * Money(scale);
  v.canonicalize();
  return v;
}

BidderSet draw_set(detail::Rng &rng, std::size_t n)
{
  std::size_t         size = static_cast<std::size_t>(rng.below(n)) + 1;
  std::vector<Bidder> pool(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    pool[i] = i;
  }
  BidderSet out;
  for (std::size_t i = 0; i < size; ++i)
  {
    std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(pool[i], pool[j]);
    out.insert(pool[i]);
  }
  return out;
}

}  // namespace

Instance gen_random(std::uint64_t seed, std::size_t n, std::size_t num_maximal, const ValueDist &dist)
{
  if (n == 0 || num_maximal == 0)
  {
    throw GenerationError("need n >= 1 and at least one maximal set");
  }
  if (dist.v_min <= 0 || dist.grid == 0)
  {
    throw GenerationError("need v_min > 0 and a nonzero grid");
  }
  if (dist.kind == ValueDist::Kind::uniform && dist.v_max < dist.v_min)
  {
    throw GenerationError("v_max below v_min");
  }
  if (dist.kind == ValueDist::Kind::log_uniform && dist.decades == 0)
  {
    throw GenerationError("log-uniform values need at least one decade");
  }
  if (binomial(n, n / 2) < num_maximal)
  {
    throw GenerationError("no antichain of " + std::to_string(num_maximal) + " sets over " + std::to_string(n) +
                          " bidders");
  }
  detail::Rng rng(seed);

  std::vector<BidderSet> sets;
  constexpr std::size_t  kAttempts = 100000;
  constexpr std::size_t  kStall    = 256;
  std::size_t            since_progress = 0;
  for (std::size_t attempt = 0; sets.size() < num_maximal; ++attempt)
  {
    if (attempt == kAttempts)
    {
      throw GenerationError("could not sample an antichain of the requested size");
    }
    // A greedy prefix can block every completion; start over.
    if (since_progress == kStall)
    {
      sets.clear();
      since_progress = 0;
    }
    ++since_progress;
    BidderSet candidate = draw_set(rng, n);
    bool      comparable = std::any_of(sets.begin(), sets.end(), [&](const BidderSet &s) {
      return candidate.subset_of(s) || s.subset_of(candidate);
    });
    if (!comparable)
    {
      sets.push_back(std::move(candidate));
      since_progress = 0;
    }
  }

  Instance inst;
  inst.sys   = SetSystem(n, std::move(sets));
  inst.v_min = dist.v_min;
  inst.values.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    inst.values.push_back(draw_value(rng, dist));
  }
  inst.validate();
  return inst;
}

Instance gen_two_disjoint(std::size_t k1, std::size_t k2, const std::vector<Money> &values1,
                          const std::vector<Money> &values2, std::optional<Money> v_min)
{
  if (values1.size() != k1 || values2.size() != k2)
  {
    throw InvalidInput("value list sizes must match k1 and k2");
  }
  if (k1 == 0 || k2 == 0)
  {
    throw InvalidInput("both sets need at least one bidder");
  }
  BidderSet f1;
  BidderSet f2;
  Instance  inst;
  for (std::size_t i = 0; i < k1; ++i)
  {
    f1.insert(i);
    inst.values.push_back(values1[i]);
  }
  for (std::size_t i = 0; i < k2; ++i)
  {
    f2.insert(k1 + i);
    inst.values.push_back(values2[i]);
  }
  inst.sys   = SetSystem(k1 + k2, {f1, f2});
  inst.v_min = v_min ? *v_min : *std::min_element(inst.values.begin(), inst.values.end());
  inst.validate();
  return inst;
}

std::vector<SuiteEntry> gen_suite(const SuiteSpec &spec)
{
  if (spec.min_n == 0 || spec.max_n < spec.min_n || spec.max_sets == 0)
  {
    throw GenerationError("invalid suite bounds");
  }
  std::vector<SuiteEntry> out;
  out.reserve(spec.count);
  for (std::size_t k = 0; k < spec.count; ++k)
  {
    std::uint64_t seed = spec.seed * 1000003ULL + k;
    detail::Rng   shape(seed ^ 0x9e3779b97f4a7c15ULL);
    std::size_t   n    = spec.min_n + static_cast<std::size_t>(shape.below(spec.max_n - spec.min_n + 1));
    std::size_t   cap  = spec.max_sets;
    while (binomial(n, n / 2) < cap)
    {
      --cap;
    }
    std::size_t sets = 1 + static_cast<std::size_t>(shape.below(cap));

    ValueDist dist;
    if (spec.mixed_scale)
    {
      switch (k % 4)
      {
        case 0:
          dist.kind  = ValueDist::Kind::uniform;
          dist.v_max = 10;
          break;
        default:
          dist.kind    = ValueDist::Kind::log_uniform;
          dist.decades = static_cast<unsigned>(2 * (k % 4));
          break;
      }
    }
    out.push_back(SuiteEntry{"s" + std::to_string(seed), gen_random(seed, n, sets, dist)});
  }
  return out;
}

namespace {

constexpr const char *kInstanceMagic = "clockaug-instance";
constexpr int         kInstanceVersion = 1;

std::string fraction(const Money &m)
{
  Money c = m;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

std::string expect_key(std::istream &is, const std::string &key)
{
  std::string line;
  while (std::getline(is, line))
  {
    if (line.empty() || line[0] == '#')
    {
      continue;
    }
    std::size_t sp = line.find(' ');
    if (line.substr(0, sp) != key)
    {
      throw InvalidInput("instance file: expected '" + key + "', found '" + line + "'");
    }
    return sp == std::string::npos ? std::string{} : line.substr(sp + 1);
  }
  throw InvalidInput("instance file: missing '" + key + "'");
}

std::size_t parse_count(const std::string &text, const std::string &what)
{
  try
  {
    std::size_t pos = 0;
    auto        v   = std::stoull(text, &pos);
    if (pos != text.size())
    {
      throw InvalidInput("");
    }
    return static_cast<std::size_t>(v);
  }
  catch (const std::exception &)
  {
    throw InvalidInput("instance file: bad " + what + " '" + text + "'");
  }
}

}  // namespace

void write_instance(std::ostream &os, const Instance &inst)
{
  os << kInstanceMagic << ' ' << kInstanceVersion << '\n';
  os << "n " << inst.n() << '\n';
  os << "v_min " << fraction(inst.v_min) << '\n';
  os << "maximal_sets " << inst.sys.size() << '\n';
  for (const BidderSet &s : inst.sys.maximal_sets())
  {
    os << "set " << s.str() << '\n';
  }
  os << "values";
  for (const Money &v : inst.values)
  {
    os << ' ' << fraction(v);
  }
  os << '\n';
  os << "prediction " << (inst.prediction ? std::to_string(*inst.prediction) : std::string("none")) << '\n';
}

Instance read_instance(std::istream &is)
{
  std::string header = expect_key(is, kInstanceMagic);
  if (header != std::to_string(kInstanceVersion))
  {
    throw InvalidInput("instance file: unsupported version " + header);
  }
  std::size_t n     = parse_count(expect_key(is, "n"), "n");
  Money       v_min = parse_money(expect_key(is, "v_min"));
  std::size_t k     = parse_count(expect_key(is, "maximal_sets"), "set count");

  std::vector<BidderSet> sets;
  for (std::size_t i = 0; i < k; ++i)
  {
    sets.push_back(BidderSet::parse(expect_key(is, "set")));
  }
  std::istringstream values_line(expect_key(is, "values"));
  Instance           inst;
  std::string        token;
  while (values_line >> token)
  {
    inst.values.push_back(parse_money(token));
  }
  std::string pred = expect_key(is, "prediction");
  inst.sys         = SetSystem(n, std::move(sets));
  inst.v_min       = v_min;
  if (pred != "none")
  {
    inst.prediction = parse_count(pred, "prediction");
  }
  inst.validate();
  return inst;
}

std::string instance_to_string(const Instance &inst)
{
  std::ostringstream os;
  write_instance(os, inst);
  return os.str();
}

Instance instance_from_string(const std::string &text)
{
  std::istringstream is(text);
  return read_instance(is);
}

}  // namespace clockaug
