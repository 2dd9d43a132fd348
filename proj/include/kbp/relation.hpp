#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "kbp/bitset.hpp"

namespace kbp {

using Edge = std::pair<std::uint32_t, std::uint32_t>;

// Binary relation on states 0..n-1, stored as a bit matrix (row = source).
class Relation {
 public:
  Relation() = default;
  explicit Relation(std::size_t n, bool full = false)
      : n_(n), stride_((n + 63) / 64), w_(n * stride_, full ? ~0ull : 0ull) {
    if (full) mask_tails();
  }

  std::size_t size() const { return n_; }

  bool test(std::size_t s, std::size_t t) const {
    return (row(s)[t >> 6] >> (t & 63)) & 1u;
  }
  void set(std::size_t s, std::size_t t, bool v = true) {
    if (v)
      row(s)[t >> 6] |= 1ull << (t & 63);
    else
      row(s)[t >> 6] &= ~(1ull << (t & 63));
  }

  void clear_row(std::size_t s) {
    std::uint64_t* rw = row(s);
    for (std::size_t i = 0; i < stride_; ++i) rw[i] = 0;
  }

  std::size_t edge_count() const {
    std::size_t c = 0;
    for (auto w : w_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }

  bool subset_of(const Relation& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }

  Relation& operator|=(const Relation& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }
  Relation& operator&=(const Relation& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }

  friend bool operator==(const Relation& a, const Relation& b) {
    return a.n_ == b.n_ && a.w_ == b.w_;
  }

  Bitset successors(std::size_t s) const {
    Bitset r(n_);
    const std::uint64_t* rw = row(s);
    for (std::size_t i = 0; i < stride_; ++i) r.words()[i] = rw[i];
    return r;
  }

  bool row_intersects(std::size_t s, const Bitset& set) const {
    const std::uint64_t* rw = row(s);
    for (std::size_t i = 0; i < stride_; ++i)
      if (rw[i] & set.words()[i]) return true;
    return false;
  }
  bool row_subset_of(std::size_t s, const Bitset& set) const {
    const std::uint64_t* rw = row(s);
    for (std::size_t i = 0; i < stride_; ++i)
      if (rw[i] & ~set.words()[i]) return false;
    return true;
  }
  bool row_any(std::size_t s) const {
    const std::uint64_t* rw = row(s);
    for (std::size_t i = 0; i < stride_; ++i)
      if (rw[i]) return true;
    return false;
  }

  // {s | successors(s) meets target}
  Bitset pre_exists(const Bitset& target) const {
    Bitset r(n_);
    for (std::size_t s = 0; s < n_; ++s)
      if (row_intersects(s, target)) r.set(s);
    return r;
  }

  // union of successor rows over the given sources
  Bitset post(const Bitset& sources) const {
    Bitset r(n_);
    sources.for_each([&](std::size_t s) {
      const std::uint64_t* rw = row(s);
      for (std::size_t i = 0; i < stride_; ++i) r.words()[i] |= rw[i];
    });
    return r;
  }

  std::vector<Edge> edges() const {
    std::vector<Edge> r;
    for (std::size_t s = 0; s < n_; ++s) {
      for (std::size_t wi = 0; wi < stride_; ++wi) {
        std::uint64_t w = row(s)[wi];
        while (w) {
          unsigned b = static_cast<unsigned>(__builtin_ctzll(w));
          r.emplace_back(static_cast<std::uint32_t>(s),
                         static_cast<std::uint32_t>(wi * 64 + b));
          w &= w - 1;
        }
      }
    }
    return r;
  }

  static Relation from_edges(std::size_t n, const std::vector<Edge>& es) {
    Relation r(n);
    for (auto [s, t] : es) r.set(s, t);
    return r;
  }

 private:
  std::uint64_t* row(std::size_t s) { return w_.data() + s * stride_; }
  const std::uint64_t* row(std::size_t s) const { return w_.data() + s * stride_; }
  void mask_tails() {
    if (n_ % 64 == 0 || stride_ == 0) return;
    std::uint64_t m = (~0ull) >> (64 - n_ % 64);
    for (std::size_t s = 0; s < n_; ++s) row(s)[stride_ - 1] &= m;
  }

  std::size_t n_ = 0, stride_ = 0;
  std::vector<std::uint64_t> w_;
};

}  // namespace kbp
