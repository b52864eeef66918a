#include "clockaug/bidder_set.hpp"

#include <charconv>

namespace clockaug {

BidderSet::BidderSet(std::initializer_list<Bidder> bidders)
{
  for (Bidder b : bidders)
  {
    insert(b);
  }
}

BidderSet::BidderSet(const std::vector<Bidder> &bidders)
{
  for (Bidder b : bidders)
  {
    insert(b);
  }
}

BidderSet BidderSet::range(std::size_t n)
{
  BidderSet out;
  out.words_.assign((n + 63) / 64, ~std::uint64_t{0});
  if (n % 64 != 0)
  {
    out.words_.back() = (std::uint64_t{1} << (n % 64)) - 1;
  }
  return out;
}

void BidderSet::insert(Bidder b)
{
  std::size_t w = b / 64;
  if (w >= words_.size())
  {
    words_.resize(w + 1, 0);
  }
  words_[w] |= std::uint64_t{1} << (b % 64);
}

void BidderSet::erase(Bidder b)
{
  std::size_t w = b / 64;
  if (w < words_.size())
  {
    words_[w] &= ~(std::uint64_t{1} << (b % 64));
    trim();
  }
}

bool BidderSet::contains(Bidder b) const
{
  std::size_t w = b / 64;
  return w < words_.size() && ((words_[w] >> (b % 64)) & 1U) != 0;
}

std::size_t BidderSet::size() const
{
  std::size_t total = 0;
  for (std::uint64_t w : words_)
  {
    total += static_cast<std::size_t>(__builtin_popcountll(w));
  }
  return total;
}

bool BidderSet::subset_of(const BidderSet &other) const
{
  for (std::size_t w = 0; w < words_.size(); ++w)
  {
    std::uint64_t theirs = w < other.words_.size() ? other.words_[w] : 0;
    if ((words_[w] & ~theirs) != 0)
    {
      return false;
    }
  }
  return true;
}

bool BidderSet::intersects(const BidderSet &other) const
{
  std::size_t k = std::min(words_.size(), other.words_.size());
  for (std::size_t w = 0; w < k; ++w)
  {
    if ((words_[w] & other.words_[w]) != 0)
    {
      return true;
    }
  }
  return false;
}

BidderSet BidderSet::operator&(const BidderSet &other) const
{
  BidderSet   out;
  std::size_t k = std::min(words_.size(), other.words_.size());
  out.words_.resize(k);
  for (std::size_t w = 0; w < k; ++w)
  {
    out.words_[w] = words_[w] & other.words_[w];
  }
  out.trim();
  return out;
}

BidderSet BidderSet::operator|(const BidderSet &other) const
{
  BidderSet out = words_.size() >= other.words_.size() ? *this : other;
  const BidderSet &small = words_.size() >= other.words_.size() ? other : *this;
  for (std::size_t w = 0; w < small.words_.size(); ++w)
  {
    out.words_[w] |= small.words_[w];
  }
  return out;
}

BidderSet BidderSet::operator-(const BidderSet &other) const
{
  BidderSet out = *this;
  std::size_t k = std::min(words_.size(), other.words_.size());
  for (std::size_t w = 0; w < k; ++w)
  {
    out.words_[w] &= ~other.words_[w];
  }
  out.trim();
  return out;
}

std::vector<Bidder> BidderSet::members() const
{
  std::vector<Bidder> out;
  for_each([&](Bidder b) { out.push_back(b); });
  return out;
}

std::size_t BidderSet::bound() const
{
  if (words_.empty())
  {
    return 0;
  }
  std::uint64_t top = words_.back();
  return (words_.size() - 1) * 64 + static_cast<std::size_t>(64 - __builtin_clzll(top));
}

std::string BidderSet::str() const
{
  if (empty())
  {
    return "-";
  }
  std::string out;
  for_each([&](Bidder b) {
    if (!out.empty())
    {
      out += ',';
    }
    out += std::to_string(b);
  });
  return out;
}

BidderSet BidderSet::parse(std::string_view text)
{
  BidderSet out;
  if (text == "-" || text.empty())
  {
    return out;
  }
  std::size_t pos = 0;
  while (pos <= text.size())
  {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos)
    {
      comma = text.size();
    }
    std::string_view item = text.substr(pos, comma - pos);
    Bidder           b    = 0;
    auto [ptr, ec]        = std::from_chars(item.data(), item.data() + item.size(), b);
    if (ec != std::errc{} || ptr != item.data() + item.size() || item.empty())
    {
      throw InvalidInput("malformed bidder list: " + std::string(text));
    }
    out.insert(b);
    pos = comma + 1;
  }
  return out;
}

void BidderSet::trim()
{
  while (!words_.empty() && words_.back() == 0)
  {
    words_.pop_back();
  }
}

}  // namespace clockaug
