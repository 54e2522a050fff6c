#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace commlab {

// Fixed-universe bit set over {0..universe-1}.
class IndexSet {
 public:
  IndexSet() = default;
  explicit IndexSet(std::size_t universe)
      : universe_(universe), words_((universe + 63) / 64, 0) {}
  IndexSet(std::size_t universe, std::initializer_list<std::size_t> members)
      : IndexSet(universe) {
    for (auto m : members) insert(m);
  }

  static IndexSet full(std::size_t universe) {
    IndexSet s(universe);
    for (std::size_t i = 0; i < universe; ++i) s.insert(i);
    return s;
  }

  std::size_t universe() const { return universe_; }

  bool contains(std::size_t i) const {
    return i < universe_ && ((words_[i >> 6] >> (i & 63)) & 1u);
  }
  void insert(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void erase(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool empty() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }

  // Smallest member, or universe() when empty.
  std::size_t first() const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k]) return k * 64 + static_cast<std::size_t>(std::countr_zero(words_[k]));
    return universe_;
  }

  bool intersects(const IndexSet& o) const {
    for (std::size_t k = 0; k < words_.size() && k < o.words_.size(); ++k)
      if (words_[k] & o.words_[k]) return true;
    return false;
  }
  bool is_subset_of(const IndexSet& o) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      std::uint64_t ow = k < o.words_.size() ? o.words_[k] : 0;
      if (words_[k] & ~ow) return false;
    }
    return true;
  }

  IndexSet& operator&=(const IndexSet& o) {
    for (std::size_t k = 0; k < words_.size(); ++k)
      words_[k] &= k < o.words_.size() ? o.words_[k] : 0;
    return *this;
  }
  IndexSet& operator|=(const IndexSet& o) {
    for (std::size_t k = 0; k < words_.size() && k < o.words_.size(); ++k) words_[k] |= o.words_[k];
    return *this;
  }
  IndexSet& subtract(const IndexSet& o) {
    for (std::size_t k = 0; k < words_.size() && k < o.words_.size(); ++k) words_[k] &= ~o.words_[k];
    return *this;
  }
  friend IndexSet operator&(IndexSet a, const IndexSet& b) { return a &= b; }
  friend IndexSet operator|(IndexSet a, const IndexSet& b) { return a |= b; }

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      std::uint64_t w = words_[k];
      while (w) {
        fn(k * 64 + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    out.reserve(count());
    for_each([&](std::size_t i) { out.push_back(i); });
    return out;
  }

  const std::vector<std::uint64_t>& words() const { return words_; }

  bool operator==(const IndexSet&) const = default;
  auto operator<=>(const IndexSet&) const = default;

 private:
  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

struct IndexSetHash {
  std::size_t operator()(const IndexSet& s) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull ^ s.universe();
    for (auto w : s.words()) {
      h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace commlab
