#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <stdexcept>

namespace csk {

using uint128_t = unsigned __int128;

/// SplitMix64 generator (Steele, Lea, Flood). Used exclusively for expanding
/// a single 64-bit seed into hash-function parameters; every parameter draw
/// in this library is a fixed, documented number of next() calls so that a
/// seed determines all hash functions bit for bit.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  uint64_t state_;
};

/// Stateless mixing of two 64-bit values into one well-scrambled 64-bit
/// value. Used to derive per-trial and per-purpose seeds from a master seed
/// without advancing a shared stream (trials stay order-independent).
inline uint64_t mix64(uint64_t a, uint64_t b) {
  SplitMix64 sm(a ^ (0x9e3779b97f4a7c15ULL * (b + 1)));
  return sm.next();
}

/// Sign-hash family used by a sketch row: pairwise suffices for unbiased
/// point estimates; fourwise is required by the inner-product second-moment
/// guarantees.
enum class SignFamily : uint8_t { pairwise = 0, fourwise = 1 };

/// Multiply-add-shift bucket hash for 64-bit keys: the high out_bits bits of
/// (a*key + b) mod 2^128 with a odd. With a and b uniform 128-bit values the
/// family is strongly universal (2-wise independent) on the full 64-bit key
/// domain.
///
/// Parameter expansion from the seed draws exactly four SplitMix64 outputs
/// x0,x1,x2,x3 in order: a = ((x1 << 64) | x0) | 1, b = (x3 << 64) | x2.
class BucketHash {
 public:
  /// columns must be a power of two in [2, 2^30].
  BucketHash(uint64_t seed, uint32_t columns) {
    if (columns < 2 || columns > (1u << 30) || !std::has_single_bit(columns)) {
      throw std::invalid_argument(
          "BucketHash: columns must be a power of two in [2, 2^30]");
    }
    out_bits_ = std::countr_zero(columns);
    columns_ = columns;
    SplitMix64 sm(seed);
    const uint64_t a_lo = sm.next();
    const uint64_t a_hi = sm.next();
    const uint64_t b_lo = sm.next();
    const uint64_t b_hi = sm.next();
    a_ = (((uint128_t)a_hi << 64) | a_lo) | 1u;
    b_ = ((uint128_t)b_hi << 64) | b_lo;
  }

  uint32_t operator()(uint64_t key) const {
    return (uint32_t)((a_ * key + b_) >> (128 - out_bits_));
  }

  uint32_t columns() const { return columns_; }
  int out_bits() const { return out_bits_; }
  uint128_t multiplier() const { return a_; }
  uint128_t addend() const { return b_; }

 private:
  uint128_t a_;
  uint128_t b_;
  uint32_t columns_;
  int out_bits_;
};

/// Pairwise-independent sign hash: a BucketHash with out_bits = 1, its one
/// output bit mapped {0,1} -> {-1,+1}.
class SignHashPairwise {
 public:
  explicit SignHashPairwise(uint64_t seed) : h_(seed, 2) {}

  int operator()(uint64_t key) const { return 2 * (int)h_(key) - 1; }

  const BucketHash& bucket_hash() const { return h_; }

 private:
  BucketHash h_;
};

inline constexpr uint64_t kMersenne61 = (1ULL << 61) - 1;

/// Reduces an arbitrary 64-bit value modulo 2^61 - 1.
inline uint64_t reduce64_mod61(uint64_t x) {
  uint64_t r = (x & kMersenne61) + (x >> 61);
  if (r >= kMersenne61) r -= kMersenne61;
  return r;
}

inline uint64_t add_mod61(uint64_t a, uint64_t b) {
  uint64_t r = a + b;
  if (r >= kMersenne61) r -= kMersenne61;
  return r;
}

inline uint64_t mul_mod61(uint64_t a, uint64_t b) {
  uint128_t p = (uint128_t)a * b;
  uint64_t r = (uint64_t)(p & kMersenne61) + (uint64_t)(p >> 61);
  r = (r & kMersenne61) + (r >> 61);
  if (r >= kMersenne61) r -= kMersenne61;
  return r;
}

/// 4-wise independent sign hash: a uniformly random degree-3 polynomial over
/// the Mersenne prime p = 2^61 - 1, evaluated by Horner's rule; the low bit
/// of the residue is mapped {0,1} -> {-1,+1}. Drawing all four coefficients
/// uniformly from [0, p) (a zero leading coefficient simply degenerates to a
/// lower degree) makes the family 4-wise independent on keys in [0, p).
///
/// Coefficient expansion from the seed draws four SplitMix64 outputs reduced
/// mod p, in order c0, c1, c2, c3 (c_k multiplies key^k). Keys at or above p
/// are reduced mod p before evaluation, so keys x and x + p collide; callers
/// that need full 4-wise independence must keep keys below 2^61 - 1.
class SignHashFourwise {
 public:
  explicit SignHashFourwise(uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& c : coeff_) c = reduce64_mod61(sm.next());
  }

  int operator()(uint64_t key) const {
    const uint64_t x = reduce64_mod61(key);
    uint64_t acc = coeff_[3];
    acc = add_mod61(mul_mod61(acc, x), coeff_[2]);
    acc = add_mod61(mul_mod61(acc, x), coeff_[1]);
    acc = add_mod61(mul_mod61(acc, x), coeff_[0]);
    return 2 * (int)(acc & 1u) - 1;
  }

  const std::array<uint64_t, 4>& coefficients() const { return coeff_; }

 private:
  std::array<uint64_t, 4> coeff_;
};

}  // namespace csk
