#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace clockaug {

/// Exact rational quantity used for every value, price, revenue and welfare.
using Money = mpq_class;

using Bidder = std::size_t;

/// Base of every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error
{
public:
  using Error::Error;
};

class InvalidPrediction : public Error
{
public:
  using Error::Error;
};

class NoPrediction : public Error
{
public:
  using Error::Error;
};

class DomainError : public Error
{
public:
  using Error::Error;
};

class GenerationError : public Error
{
public:
  using Error::Error;
};

/// A broken internal invariant. Never expected on valid input.
class InvariantViolation : public Error
{
public:
  using Error::Error;
};

/// Canonical text form: "a" for integers, "a/b" otherwise.
std::string to_string(const Money &m);

/// Accepts "a", "a/b" and plain decimals such as "0.25" or "1e-3".
Money parse_money(std::string_view text);

/// Exact rational conversion of a finite double.
Money money_from_double(double x);

/// Smallest multiple of 1/denominator that is >= x.
Money round_up(const Money &x, unsigned long denominator);

inline double to_double(const Money &m) { return m.get_d(); }

}  // namespace clockaug
