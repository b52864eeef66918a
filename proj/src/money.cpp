#include "clockaug/money.hpp"

#include <cmath>
#include <cstdlib>

namespace clockaug {

std::string to_string(const Money &m)
{
  Money c = m;
  c.canonicalize();
  return c.get_str();
}

namespace {

Money parse_decimal(std::string_view text)
{
  std::string s(text);
  std::size_t epos  = s.find_first_of("eE");
  long        exp10 = 0;
  if (epos != std::string::npos)
  {
    char       *end = nullptr;
    std::string e   = s.substr(epos + 1);
    exp10           = std::strtol(e.c_str(), &end, 10);
    if (e.empty() || *end != '\0')
    {
      throw InvalidInput("malformed number: " + s);
    }
    s = s.substr(0, epos);
  }
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+'))
  {
    negative = s[0] == '-';
    s        = s.substr(1);
  }
  std::size_t dot    = s.find('.');
  std::string digits = s;
  if (dot != std::string::npos)
  {
    digits = s.substr(0, dot) + s.substr(dot + 1);
    exp10 -= static_cast<long>(s.size() - dot - 1);
  }
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
  {
    throw InvalidInput("malformed number: " + std::string(text));
  }
  mpz_class num(digits, 10);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exp10)));
  Money out = exp10 >= 0 ? Money(num * scale) : Money(num, scale);
  out.canonicalize();
  return negative ? Money(-out) : out;
}

}  // namespace

Money parse_money(std::string_view text)
{
  if (text.empty())
  {
    throw InvalidInput("empty number");
  }
  if (text.find('/') != std::string_view::npos)
  {
    Money out;
    if (out.set_str(std::string(text), 10) != 0 || out.get_den() == 0)
    {
      throw InvalidInput("malformed rational: " + std::string(text));
    }
    out.canonicalize();
    return out;
  }
  return parse_decimal(text);
}

Money money_from_double(double x)
{
  if (!std::isfinite(x))
  {
    throw DomainError("non-finite value");
  }
  Money out(x);
  out.canonicalize();
  return out;
}

Money round_up(const Money &x, unsigned long denominator)
{
  mpz_class scaled = x.get_num() * denominator;
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), x.get_den().get_mpz_t());
  Money out(q, denominator);
  out.canonicalize();
  return out;
}

}  // namespace clockaug
