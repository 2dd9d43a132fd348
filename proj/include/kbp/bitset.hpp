#pragma once

#include <cstddef>
#include <cstdint>
#include <cassert>
#include <vector>

namespace kbp {

// Fixed-universe bit set; indices 0..size()-1.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t size, bool fill_all = false)
      : n_(size), w_((size + 63) / 64, fill_all ? ~0ull : 0ull) {
    if (fill_all) mask_tail();
  }

  std::size_t size() const { return n_; }

  bool test(std::size_t i) const {
    assert(i < n_);
    return (w_[i >> 6] >> (i & 63)) & 1u;
  }
  void set(std::size_t i, bool v = true) {
    assert(i < n_);
    if (v)
      w_[i >> 6] |= 1ull << (i & 63);
    else
      w_[i >> 6] &= ~(1ull << (i & 63));
  }

  void reset() { for (auto& w : w_) w = 0; }
  void fill() {
    for (auto& w : w_) w = ~0ull;
    mask_tail();
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : w_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }
  bool any() const {
    for (auto w : w_)
      if (w) return true;
    return false;
  }
  bool none() const { return !any(); }

  bool subset_of(const Bitset& o) const {
    assert(n_ == o.n_);
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }
  bool intersects(const Bitset& o) const {
    assert(n_ == o.n_);
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & o.w_[i]) return true;
    return false;
  }

  Bitset& operator|=(const Bitset& o) {
    assert(n_ == o.n_);
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }
  Bitset& operator&=(const Bitset& o) {
    assert(n_ == o.n_);
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }
  // set difference
  Bitset& operator-=(const Bitset& o) {
    assert(n_ == o.n_);
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
    return *this;
  }

  friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }
  friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }
  friend Bitset operator-(Bitset a, const Bitset& b) { return a -= b; }

  Bitset complement() const {
    Bitset r(n_);
    for (std::size_t i = 0; i < r.w_.size(); ++i) r.w_[i] = ~w_[i];
    r.mask_tail();
    return r;
  }

  friend bool operator==(const Bitset& a, const Bitset& b) {
    return a.n_ == b.n_ && a.w_ == b.w_;
  }

  std::vector<std::size_t> elements() const {
    std::vector<std::size_t> r;
    for_each([&](std::size_t i) { r.push_back(i); });
    return r;
  }

  template <class F>
  void for_each(F f) const {
    for (std::size_t wi = 0; wi < w_.size(); ++wi) {
      std::uint64_t w = w_[wi];
      while (w) {
        unsigned b = static_cast<unsigned>(__builtin_ctzll(w));
        f(wi * 64 + b);
        w &= w - 1;
      }
    }
  }

  const std::uint64_t* words() const { return w_.data(); }
  std::uint64_t* words() { return w_.data(); }
  std::size_t word_count() const { return w_.size(); }

 private:
  void mask_tail() {
    if (n_ % 64 && !w_.empty()) w_.back() &= (~0ull) >> (64 - n_ % 64);
  }

  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

using StateSet = Bitset;

}  // namespace kbp
