#pragma once

#include "clockaug/money.hpp"

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace clockaug {

/// Finite set of bidder indices backed by a bit vector.
/// Trailing zero words are trimmed so equal sets compare equal.
class BidderSet
{
public:
  BidderSet() = default;
  BidderSet(std::initializer_list<Bidder> bidders);
  explicit BidderSet(const std::vector<Bidder> &bidders);

  /// {0, ..., n-1}
  static BidderSet range(std::size_t n);

  void insert(Bidder b);
  void erase(Bidder b);
  bool contains(Bidder b) const;

  std::size_t size() const;
  bool empty() const { return words_.empty(); }

  bool subset_of(const BidderSet &other) const;
  bool intersects(const BidderSet &other) const;

  BidderSet operator&(const BidderSet &other) const;
  BidderSet operator|(const BidderSet &other) const;
  BidderSet operator-(const BidderSet &other) const;

  /// Ascending order.
  std::vector<Bidder> members() const;

  /// One past the largest member, 0 when empty.
  std::size_t bound() const;

  template <typename Fn>
  void for_each(Fn &&fn) const
  {
    for (std::size_t w = 0; w < words_.size(); ++w)
    {
      std::uint64_t bits = words_[w];
      while (bits != 0)
      {
        int tz = __builtin_ctzll(bits);
        fn(static_cast<Bidder>(w * 64 + static_cast<std::size_t>(tz)));
        bits &= bits - 1;
      }
    }
  }

  friend bool operator==(const BidderSet &a, const BidderSet &b) { return a.words_ == b.words_; }
  friend bool operator!=(const BidderSet &a, const BidderSet &b) { return !(a == b); }

  /// Comma separated ascending indices; "-" for the empty set.
  std::string str() const;
  static BidderSet parse(std::string_view text);

private:
  void trim();

  std::vector<std::uint64_t> words_;
};

}  // namespace clockaug
