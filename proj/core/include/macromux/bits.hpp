#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace macromux {

// Fixed-size bit vector with word-level parity helpers. Indices are not
// bounds-checked in release builds; callers own the sizing discipline.
class Bits {
 public:
  Bits() = default;
  explicit Bits(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  std::size_t size() const { return n_; }

  bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  void set(std::size_t i) { w_[i >> 6] |= uint64_t(1) << (i & 63); }
  void reset(std::size_t i) { w_[i >> 6] &= ~(uint64_t(1) << (i & 63)); }
  void flip(std::size_t i) { w_[i >> 6] ^= uint64_t(1) << (i & 63); }
  void assign(std::size_t i, bool v) { v ? set(i) : reset(i); }

  void clear() { std::fill(w_.begin(), w_.end(), 0); }

  std::size_t count() const {
    std::size_t c = 0;
    for (uint64_t w : w_) c += std::popcount(w);
    return c;
  }

  bool any() const {
    for (uint64_t w : w_)
      if (w) return true;
    return false;
  }

  Bits& operator^=(const Bits& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
    return *this;
  }
  Bits& operator|=(const Bits& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }

  // popcount(a & b), used for membrane crossing parity
  static std::size_t count_and(const Bits& a, const Bits& b) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < a.w_.size(); ++i) c += std::popcount(a.w_[i] & b.w_[i]);
    return c;
  }

  bool operator==(const Bits& o) const { return n_ == o.n_ && w_ == o.w_; }

 private:
  std::size_t n_ = 0;
  std::vector<uint64_t> w_;
};

}  // namespace macromux
