#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "csk/hashing.hpp"
#include "csk/sparse_vector.hpp"

namespace csk {

/// Configuration of a CountSketch: 2t-1 rows by s columns, all hash
/// functions derived from one master seed.
struct SketchParams {
  uint32_t t = 2;
  uint32_t s = 256;
  uint64_t master_seed = 0;
  SignFamily sign_family = SignFamily::pairwise;

  uint32_t rows() const { return 2 * t - 1; }

  /// Throws std::invalid_argument unless t is in [1, 65535] and s is a power
  /// of two in [2, 2^30].
  void validate() const;

  bool operator==(const SketchParams&) const = default;
};

/// Base of all sketch wire-format errors.
class SketchFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BadMagicError : public SketchFormatError {
 public:
  using SketchFormatError::SketchFormatError;
};

class BadVersionError : public SketchFormatError {
 public:
  using SketchFormatError::SketchFormatError;
};

class TruncatedError : public SketchFormatError {
 public:
  using SketchFormatError::SketchFormatError;
};

/// Thrown when an operation pairs two sketches whose params (including
/// master_seed) differ.
class ParamMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// CountSketch over the turnstile model: a (2t-1) x s table of doubles; row i
/// applies bucket hash h_i and sign hash g_i, update adds g_i(j) * delta to
/// A[i][h_i(j)], and a point query returns the median of the 2t-1 row
/// estimates g_i(j) * A[i][h_i(j)].
///
/// Hash derivation: a SplitMix64 stream seeded with master_seed yields, for
/// row i = 0..2t-2 in order, first the row's BucketHash seed and then its
/// sign-hash seed. Each hash expands its own seed as documented in
/// hashing.hpp, so (params, update sequence) determines the sketch bit for
/// bit.
///
/// Concurrency: single-writer during updates; immutable afterwards and safe
/// for concurrent queries. No internal locking.
class CountSketch {
 public:
  explicit CountSketch(const SketchParams& params);

  const SketchParams& params() const { return params_; }
  uint32_t rows() const { return params_.rows(); }
  uint32_t columns() const { return params_.s; }

  /// Turnstile update: adds g_i(index) * delta to row i's bucket of index.
  void update(uint64_t index, double delta);

  /// g_i(j) * A[i][h_i(j)] for row i. Throws std::out_of_range on bad row.
  double point_estimate_row(uint32_t row, uint64_t index) const;

  /// Median of the 2t-1 row estimates. Querying an index never updated is
  /// legal and returns the (noisy) median like any other index.
  double point_query(uint64_t index) const;

  /// Rederives all hash functions from a new master seed and zeroes the
  /// table, reusing the allocation. Equivalent to constructing a fresh
  /// sketch with the new seed; exists because Monte-Carlo experiments
  /// rebuild sketches millions of times.
  void reseed(uint64_t master_seed);

  const std::vector<double>& table() const { return table_; }
  std::span<const double> row(uint32_t i) const {
    return std::span<const double>(table_).subspan((size_t)i * params_.s,
                                                   params_.s);
  }

  std::vector<uint8_t> serialize() const;
  static CountSketch deserialize(std::span<const uint8_t> bytes);

  static CountSketch from_vector(const SparseVector& v,
                                 const SketchParams& params);

  friend CountSketch add(const CountSketch& a, const CountSketch& b);
  friend CountSketch scale(const CountSketch& sk, double alpha);

 private:
  struct RowHash {
    BucketHash bucket;
    std::variant<SignHashPairwise, SignHashFourwise> sign;

    int sign_of(uint64_t key) const {
      if (const auto* p = std::get_if<SignHashPairwise>(&sign)) {
        return (*p)(key);
      }
      return std::get<SignHashFourwise>(sign)(key);
    }
  };

  void derive_hashes();

  SketchParams params_;
  std::vector<RowHash> row_hashes_;
  std::vector<double> table_;
};

/// Median over rows i of sum_j A^v[i][j] * A^w[i][j]. The sketches must
/// share params including master_seed; throws ParamMismatchError otherwise.
double inner_product(const CountSketch& sk_v, const CountSketch& sk_w);

/// Entry-wise sum; params including seed must match (ParamMismatchError).
CountSketch add(const CountSketch& a, const CountSketch& b);

/// Entry-wise scaling.
CountSketch scale(const CountSketch& sk, double alpha);

}  // namespace csk
