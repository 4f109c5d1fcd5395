#pragma once

#include <array>
#include <cstdint>

namespace macromux {

inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256++ seeded by a splitmix64 chain over a stream key. Streams are
// derived from (master_seed, a, b, c, d) so trial/brick/stage sampling is a
// pure function of the key, independent of scheduling.
class Rng {
 public:
  static Rng from_stream(uint64_t master_seed, uint64_t a, uint64_t b = 0, uint64_t c = 0,
                         uint64_t d = 0) {
    uint64_t st = master_seed;
    splitmix64(st);
    st ^= 0xa0761d6478bd642fULL + a;
    splitmix64(st);
    st ^= 0xe7037ed1a0b428dbULL + b;
    splitmix64(st);
    st ^= 0x8ebc6af09c88c6e3ULL + c;
    splitmix64(st);
    st ^= 0x589965cc75374cc3ULL + d;
    Rng r;
    for (auto& s : r.s_) s = splitmix64(st);
    if (!(r.s_[0] | r.s_[1] | r.s_[2] | r.s_[3])) r.s_[0] = 1;
    return r;
  }

  uint64_t next() {
    const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // uniform in [0, 1), 53-bit resolution
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::array<uint64_t, 4> s_{};
};

}  // namespace macromux
