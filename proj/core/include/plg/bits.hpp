#ifndef PLG_BITS_HPP
#define PLG_BITS_HPP

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace plg {

// Fixed-capacity bit set used for point sets and order rows.  Capacity is
// chosen at construction; all binary operations require equal capacity.
class Bits {
 public:
  Bits() = default;
  explicit Bits(int nbits) : nbits_(nbits), w_((nbits + 63) / 64, 0) {}

  static Bits of(int nbits, std::initializer_list<int> members) {
    Bits b(nbits);
    for (int i : members) b.set(i);
    return b;
  }

  int capacity() const { return nbits_; }
  bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  void set(int i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(int i) { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  void clear() { for (auto& x : w_) x = 0; }

  void set_all() {
    for (auto& x : w_) x = ~std::uint64_t{0};
    trim();
  }

  bool any() const {
    for (auto x : w_) if (x) return true;
    return false;
  }
  bool none() const { return !any(); }

  int count() const {
    int c = 0;
    for (auto x : w_) c += std::popcount(x);
    return c;
  }

  Bits& operator|=(const Bits& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }
  Bits& operator&=(const Bits& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }
  Bits& subtract(const Bits& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
    return *this;
  }

  friend Bits operator|(Bits a, const Bits& b) { return a |= b; }
  friend Bits operator&(Bits a, const Bits& b) { return a &= b; }

  bool operator==(const Bits& o) const { return nbits_ == o.nbits_ && w_ == o.w_; }
  bool operator!=(const Bits& o) const { return !(*this == o); }

  bool is_subset_of(const Bits& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }

  bool intersects(const Bits& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & o.w_[i]) return true;
    return false;
  }

  // First set bit at position >= from, or -1.
  int next(int from = 0) const {
    if (from >= nbits_) return -1;
    int word = from >> 6;
    std::uint64_t cur = w_[word] & (~std::uint64_t{0} << (from & 63));
    while (true) {
      if (cur) return (word << 6) + std::countr_zero(cur);
      if (++word >= static_cast<int>(w_.size())) return -1;
      cur = w_[word];
    }
  }

  std::vector<int> to_vector() const {
    std::vector<int> out;
    for (int i = next(0); i >= 0; i = next(i + 1)) out.push_back(i);
    return out;
  }

  // Lowest index set in both, or -1.  Avoids materializing the intersection.
  int first_common(const Bits& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i) {
      std::uint64_t x = w_[i] & o.w_[i];
      if (x) return static_cast<int>(i << 6) + std::countr_zero(x);
    }
    return -1;
  }

  // Highest index set in both, or -1.
  int last_common(const Bits& o) const {
    for (std::size_t i = w_.size(); i-- > 0;) {
      std::uint64_t x = w_[i] & o.w_[i];
      if (x) return static_cast<int>(i << 6) + 63 - std::countl_zero(x);
    }
    return -1;
  }

  std::uint64_t hash() const {
    std::uint64_t h = 1469598103934665603ull;
    for (auto x : w_) {
      h ^= x;
      h *= 1099511628211ull;
    }
    return h;
  }

  // Lexicographic order on the member list; used for canonical sorting.
  bool lex_less(const Bits& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i) {
      if (w_[i] == o.w_[i]) continue;
      // Lower set bits compare first: the set whose smallest differing
      // element is present comes first.
      std::uint64_t diff = w_[i] ^ o.w_[i];
      std::uint64_t low = diff & (~diff + 1);
      return w_[i] & low;
    }
    return false;
  }

 private:
  void trim() {
    if (nbits_ & 63) w_.back() &= (~std::uint64_t{0}) >> (64 - (nbits_ & 63));
  }

  int nbits_ = 0;
  std::vector<std::uint64_t> w_;
};

struct BitsHash {
  std::size_t operator()(const Bits& b) const { return static_cast<std::size_t>(b.hash()); }
};

}  // namespace plg

#endif
