#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace adcminer {

/// Fixed-width bit vector. Used both for Sat(t,t') evidence sets and for
/// predicate-id sets (hitting sets, candidate lists).
class PredicateBitset {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  PredicateBitset() = default;
  explicit PredicateBitset(std::size_t size)
      : size_(size), words_((size + kWordBits - 1) / kWordBits, 0) {}

  static PredicateBitset full(std::size_t size) {
    PredicateBitset b(size);
    for (std::size_t i = 0; i < size; ++i) b.set(i);
    return b;
  }

  std::size_t size() const { return size_; }
  std::size_t word_count() const { return words_.size(); }
  const std::vector<Word>& words() const { return words_; }
  std::vector<Word>& words() { return words_; }

  bool test(std::size_t i) const { return (words_[i / kWordBits] >> (i % kWordBits)) & 1U; }
  void set(std::size_t i) { words_[i / kWordBits] |= Word{1} << (i % kWordBits); }
  void reset(std::size_t i) { words_[i / kWordBits] &= ~(Word{1} << (i % kWordBits)); }
  void clear() { std::fill(words_.begin(), words_.end(), Word{0}); }

  std::size_t count() const {
    std::size_t c = 0;
    for (Word w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool none() const {
    for (Word w : words_)
      if (w != 0) return false;
    return true;
  }
  bool any() const { return !none(); }

  bool intersects(const PredicateBitset& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & other.words_[i]) return true;
    return false;
  }
  std::size_t intersection_count(const PredicateBitset& other) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < words_.size(); ++i)
      c += static_cast<std::size_t>(std::popcount(words_[i] & other.words_[i]));
    return c;
  }
  bool is_subset_of(const PredicateBitset& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~other.words_[i]) return false;
    return true;
  }

  PredicateBitset& operator|=(const PredicateBitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  PredicateBitset& operator&=(const PredicateBitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  /// Set difference.
  PredicateBitset& operator-=(const PredicateBitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }
  friend PredicateBitset operator|(PredicateBitset a, const PredicateBitset& b) { return a |= b; }
  friend PredicateBitset operator&(PredicateBitset a, const PredicateBitset& b) { return a &= b; }
  friend PredicateBitset operator-(PredicateBitset a, const PredicateBitset& b) { return a -= b; }

  /// Calls fn(i) for every set bit in ascending order.
  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      Word bits = words_[w];
      while (bits != 0) {
        const auto tz = static_cast<std::size_t>(std::countr_zero(bits));
        fn(w * kWordBits + tz);
        bits &= bits - 1;
      }
    }
  }

  std::vector<std::size_t> to_indices() const {
    std::vector<std::size_t> out;
    out.reserve(count());
    for_each([&](std::size_t i) { out.push_back(i); });
    return out;
  }

  template <typename Range>
  static PredicateBitset from_indices(std::size_t size, const Range& ids) {
    PredicateBitset b(size);
    for (auto id : ids) b.set(static_cast<std::size_t>(id));
    return b;
  }

  friend bool operator==(const PredicateBitset&, const PredicateBitset&) = default;

  /// Lexicographic order on the word vector, low word first.
  friend bool operator<(const PredicateBitset& a, const PredicateBitset& b) {
    if (a.size_ != b.size_) return a.size_ < b.size_;
    return a.words_ < b.words_;
  }

  std::size_t hash() const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ size_;
    for (Word w : words_) {
      h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 0xff51afd7ed558ccdULL;
    }
    return static_cast<std::size_t>(h ^ (h >> 33));
  }

 private:
  std::size_t size_ = 0;
  std::vector<Word> words_;
};

struct PredicateBitsetHash {
  std::size_t operator()(const PredicateBitset& b) const { return b.hash(); }
};

}  // namespace adcminer
