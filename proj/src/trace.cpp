#include "clockaug/trace.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace clockaug {

namespace {

constexpr const char *kTraceMagic   = "clockaug-trace";
constexpr int         kTraceVersion = 1;

template <class... Ts>
struct Overloaded : Ts...
{
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string after_key(const std::string &line, const std::string &key)
{
  if (line.compare(0, key.size() + 1, key + " ") != 0 && line != key)
  {
    throw InvalidInput("trace file: expected '" + key + "', found '" + line + "'");
  }
  return line.size() > key.size() ? line.substr(key.size() + 1) : std::string{};
}

std::string next_line(std::istream &is)
{
  std::string line;
  if (!std::getline(is, line))
  {
    throw InvalidInput("trace file: unexpected end");
  }
  return line;
}

}  // namespace

const event::Outcome &Trace::outcome() const
{
  if (events.empty())
  {
    throw InvalidInput("trace has no events");
  }
  const auto *out = std::get_if<event::Outcome>(&events.back());
  if (out == nullptr)
  {
    throw InvalidInput("trace does not end with an outcome");
  }
  return *out;
}

void write_trace(std::ostream &os, const Trace &trace)
{
  os << kTraceMagic << ' ' << kTraceVersion << '\n';
  os << "mechanism " << trace.header.mechanism << '\n';
  os << "params " << trace.header.params << '\n';
  os << "n " << trace.header.n << '\n';
  os << "v_min " << to_string(trace.header.v_min) << '\n';
  os << "mode " << trace.header.mode << '\n';
  os << "events " << trace.events.size() << '\n';
  for (const TraceEvent &ev : trace.events)
  {
    std::visit(Overloaded{
                   [&](const event::Phase &e) {
                     os << "phase " << e.label << ' ' << e.iteration << ' '
                        << (e.value ? to_string(*e.value) : std::string("-")) << '\n';
                   },
                   [&](const event::Raise &e) {
                     os << "raise " << e.bidders.str() << ' ' << to_string(e.from) << ' ' << to_string(e.to) << '\n';
                   },
                   [&](const event::Exit &e) {
                     os << "exit " << e.bidder << ' ' << to_string(e.price) << ' ' << to_string(e.value) << '\n';
                   },
                   [&](const event::Note &e) { os << "note " << e.text << '\n'; },
                   [&](const event::Outcome &e) { os << "outcome " << e.served.str() << ' ' << e.via << '\n'; },
               },
               ev);
  }
}

Trace read_trace(std::istream &is)
{
  Trace trace;
  if (after_key(next_line(is), kTraceMagic) != std::to_string(kTraceVersion))
  {
    throw InvalidInput("trace file: unsupported version");
  }
  trace.header.mechanism = after_key(next_line(is), "mechanism");
  trace.header.params    = after_key(next_line(is), "params");
  trace.header.n         = std::stoull(after_key(next_line(is), "n"));
  trace.header.v_min     = parse_money(after_key(next_line(is), "v_min"));
  trace.header.mode      = after_key(next_line(is), "mode");
  std::size_t count      = std::stoull(after_key(next_line(is), "events"));
  trace.events.reserve(count);
  for (std::size_t k = 0; k < count; ++k)
  {
    std::string        line = next_line(is);
    std::istringstream ls(line);
    std::string        kind;
    ls >> kind;
    if (kind == "phase")
    {
      event::Phase e;
      std::string  value;
      ls >> e.label >> e.iteration >> value;
      if (value != "-")
      {
        e.value = parse_money(value);
      }
      trace.events.emplace_back(std::move(e));
    }
    else if (kind == "raise")
    {
      std::string bidders;
      std::string from;
      std::string to;
      ls >> bidders >> from >> to;
      trace.events.emplace_back(event::Raise{BidderSet::parse(bidders), parse_money(from), parse_money(to)});
    }
    else if (kind == "exit")
    {
      event::Exit e;
      std::string price;
      std::string value;
      ls >> e.bidder >> price >> value;
      e.price = parse_money(price);
      e.value = parse_money(value);
      trace.events.emplace_back(std::move(e));
    }
    else if (kind == "note")
    {
      trace.events.emplace_back(event::Note{after_key(line, "note")});
    }
    else if (kind == "outcome")
    {
      std::string served;
      std::string via;
      ls >> served >> via;
      trace.events.emplace_back(event::Outcome{BidderSet::parse(served), via});
    }
    else
    {
      throw InvalidInput("trace file: unknown event '" + line + "'");
    }
    if (ls.fail())
    {
      throw InvalidInput("trace file: malformed event '" + line + "'");
    }
  }
  return trace;
}

std::string trace_to_string(const Trace &trace)
{
  std::ostringstream os;
  write_trace(os, trace);
  return os.str();
}

Trace trace_from_string(const std::string &text)
{
  std::istringstream is(text);
  return read_trace(is);
}

std::vector<Bidder> exit_order(const Trace &trace)
{
  std::vector<Bidder> out;
  for (const TraceEvent &ev : trace.events)
  {
    if (const auto *e = std::get_if<event::Exit>(&ev))
    {
      out.push_back(e->bidder);
    }
  }
  return out;
}

}  // namespace clockaug
