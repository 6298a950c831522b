#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "csk/sparse_vector.hpp"

namespace csk {

/// Parsed dataset description. Specs are written as
///   zipf:N:ALPHA | onehot:D:I | disjoint:NNZ | counts:PATH |
///   transactions:PATH
/// The normalize flag applies to file-based kinds (synthetic generators
/// already produce unit-L1 vectors); file vectors are L1-normalized by
/// default, matching how raw occurrence counts are prepared before
/// sketching.
struct DatasetSpec {
  enum class Kind : uint8_t {
    zipf,
    one_hot,
    disjoint,
    counts_file,
    transactions_file
  };

  Kind kind = Kind::zipf;
  uint64_t n = 0;          // zipf item count / one_hot dimension / pair nnz
  double alpha = 0.0;      // zipf skew
  uint64_t index = 0;      // one_hot nonzero position
  std::string path;        // file kinds
  bool normalize = true;   // file kinds only
  std::string tag;         // the original spec string, used in reports
};

/// Zipfian frequency vector: rank-k entry (stored at index k-1) equals
/// k^-alpha / sum_{j=1..n} j^-alpha, so the L1 norm is 1 up to rounding and
/// entries strictly decrease with rank. Requires n >= 1, alpha > 0.
SparseVector zipf_vector(uint64_t n, double alpha);

/// Unit vector with v_i = 1 in dimension d. Requires i < d.
SparseVector one_hot(uint64_t d, uint64_t i);

/// Pair with disjoint supports: v holds 1/nnz at indices [0, nnz), w the
/// same at [nnz, 2*nnz). Their inner product is exactly 0; each has L1 = 1
/// and L2 = 1/sqrt(nnz). Requires nnz >= 1.
std::pair<SparseVector, SparseVector> disjoint_pair(uint64_t nnz);

/// Reads "index<whitespace>count" lines (blank lines skipped; duplicate
/// indices aggregate). Throws std::runtime_error naming the line on parse
/// errors or if the file holds no entries.
SparseVector load_counts(const std::string& path);

/// Reads transaction lines (whitespace-separated item ids, one transaction
/// per line) and aggregates per-item occurrence counts.
SparseVector load_transactions(const std::string& path);

/// Writes "index value" lines in ascending index order, full double
/// precision. load_counts(write_counts(v)) is the identity for vectors with
/// integer values.
void write_counts(const SparseVector& v, const std::string& path);

/// v / ||v||_1, idempotent: input whose norm is already within 1e-9 of 1 is
/// returned unchanged. Throws std::invalid_argument on the zero vector.
SparseVector normalize_l1(const SparseVector& v);

/// Parses a dataset spec string; throws std::invalid_argument with the
/// offending text on malformed input.
DatasetSpec parse_dataset_spec(const std::string& text);

/// A dataset made concrete: the vector (plus the pair's second vector when
/// the kind yields one) and the query domain [0, dimension).
struct MaterializedDataset {
  SparseVector v;
  std::optional<SparseVector> w;
  uint64_t dimension = 0;
  std::string tag;
};

MaterializedDataset materialize(const DatasetSpec& spec);

}  // namespace csk
