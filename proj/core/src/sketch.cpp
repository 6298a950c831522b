#include "csk/sketch.hpp"

#include <algorithm>
#include <bit>
#include <cstring>

#include "csk/median_stats.hpp"

namespace csk {
namespace {

constexpr char kMagic[4] = {'C', 'S', 'K', '1'};
constexpr uint16_t kVersion = 1;
constexpr size_t kHeaderBytes = 18;

// Rows up to this count take the stack path in the median helpers.
constexpr uint32_t kStackRows = 64;

void put_u16(std::vector<uint8_t>& out, uint16_t x) {
  out.push_back((uint8_t)(x & 0xff));
  out.push_back((uint8_t)(x >> 8));
}

void put_u64(std::vector<uint8_t>& out, uint64_t x) {
  for (int i = 0; i < 8; ++i) out.push_back((uint8_t)(x >> (8 * i)));
}

uint16_t get_u16(const uint8_t* p) {
  return (uint16_t)((uint16_t)p[0] | ((uint16_t)p[1] << 8));
}

uint64_t get_u64(const uint8_t* p) {
  uint64_t x = 0;
  for (int i = 0; i < 8; ++i) x |= (uint64_t)p[i] << (8 * i);
  return x;
}

}  // namespace

void SketchParams::validate() const {
  if (t < 1 || t > 65535) {
    throw std::invalid_argument("SketchParams: t must be in [1, 65535]");
  }
  if (s < 2 || s > (1u << 30) || !std::has_single_bit(s)) {
    throw std::invalid_argument(
        "SketchParams: s must be a power of two in [2, 2^30]");
  }
}

CountSketch::CountSketch(const SketchParams& params) : params_(params) {
  params_.validate();
  table_.assign((size_t)params_.rows() * params_.s, 0.0);
  derive_hashes();
}

void CountSketch::derive_hashes() {
  row_hashes_.clear();
  row_hashes_.reserve(params_.rows());
  SplitMix64 stream(params_.master_seed);
  for (uint32_t i = 0; i < params_.rows(); ++i) {
    const uint64_t bucket_seed = stream.next();
    const uint64_t sign_seed = stream.next();
    if (params_.sign_family == SignFamily::pairwise) {
      row_hashes_.push_back(
          {BucketHash(bucket_seed, params_.s),
           std::variant<SignHashPairwise, SignHashFourwise>(
               std::in_place_type<SignHashPairwise>, sign_seed)});
    } else {
      row_hashes_.push_back(
          {BucketHash(bucket_seed, params_.s),
           std::variant<SignHashPairwise, SignHashFourwise>(
               std::in_place_type<SignHashFourwise>, sign_seed)});
    }
  }
}

void CountSketch::update(uint64_t index, double delta) {
  double* row_ptr = table_.data();
  for (const RowHash& rh : row_hashes_) {
    row_ptr[rh.bucket(index)] += rh.sign_of(index) * delta;
    row_ptr += params_.s;
  }
}

double CountSketch::point_estimate_row(uint32_t row, uint64_t index) const {
  if (row >= params_.rows()) {
    throw std::out_of_range("point_estimate_row: row out of range");
  }
  const RowHash& rh = row_hashes_[row];
  return rh.sign_of(index) * table_[(size_t)row * params_.s + rh.bucket(index)];
}

double CountSketch::point_query(uint64_t index) const {
  const uint32_t r = params_.rows();
  double stack_buf[kStackRows];
  std::vector<double> heap_buf;
  std::span<double> est;
  if (r <= kStackRows) {
    est = std::span<double>(stack_buf, r);
  } else {
    heap_buf.resize(r);
    est = heap_buf;
  }
  const double* row_ptr = table_.data();
  for (uint32_t i = 0; i < r; ++i) {
    const RowHash& rh = row_hashes_[i];
    est[i] = rh.sign_of(index) * row_ptr[rh.bucket(index)];
    row_ptr += params_.s;
  }
  return median_odd_inplace(est);
}

void CountSketch::reseed(uint64_t master_seed) {
  params_.master_seed = master_seed;
  derive_hashes();
  std::fill(table_.begin(), table_.end(), 0.0);
}

std::vector<uint8_t> CountSketch::serialize() const {
  std::vector<uint8_t> out;
  out.reserve(kHeaderBytes + 8 * table_.size());
  out.insert(out.end(), kMagic, kMagic + 4);
  put_u16(out, kVersion);
  put_u16(out, (uint16_t)params_.t);
  out.push_back((uint8_t)std::countr_zero(params_.s));
  out.push_back((uint8_t)params_.sign_family);
  put_u64(out, params_.master_seed);
  for (double x : table_) put_u64(out, std::bit_cast<uint64_t>(x));
  return out;
}

CountSketch CountSketch::deserialize(std::span<const uint8_t> bytes) {
  if (bytes.size() < 4) {
    throw TruncatedError("sketch deserialize: input shorter than magic");
  }
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw BadMagicError("sketch deserialize: bad magic");
  }
  if (bytes.size() < kHeaderBytes) {
    throw TruncatedError("sketch deserialize: truncated header");
  }
  const uint16_t version = get_u16(bytes.data() + 4);
  if (version != kVersion) {
    throw BadVersionError("sketch deserialize: unsupported version " +
                          std::to_string(version));
  }
  const uint16_t t = get_u16(bytes.data() + 6);
  const uint8_t log2_s = bytes[8];
  const uint8_t family = bytes[9];
  if (t < 1 || log2_s < 1 || log2_s > 30 || family > 1) {
    throw std::invalid_argument("sketch deserialize: corrupt header fields");
  }
  SketchParams params;
  params.t = t;
  params.s = 1u << log2_s;
  params.master_seed = get_u64(bytes.data() + 10);
  params.sign_family = (SignFamily)family;

  const size_t expected =
      kHeaderBytes + 8 * (size_t)params.rows() * params.s;
  if (bytes.size() != expected) {
    throw TruncatedError("sketch deserialize: expected " +
                         std::to_string(expected) + " bytes, got " +
                         std::to_string(bytes.size()));
  }
  CountSketch sk(params);
  const uint8_t* p = bytes.data() + kHeaderBytes;
  for (double& x : sk.table_) {
    x = std::bit_cast<double>(get_u64(p));
    p += 8;
  }
  return sk;
}

CountSketch CountSketch::from_vector(const SparseVector& v,
                                     const SketchParams& params) {
  CountSketch sk(params);
  // SparseVector iterates in ascending index order; this fixed order is what
  // makes linearity checks bit-exact.
  for (const auto& [index, value] : v) sk.update(index, value);
  return sk;
}

double inner_product(const CountSketch& sk_v, const CountSketch& sk_w) {
  if (!(sk_v.params() == sk_w.params())) {
    throw ParamMismatchError(
        "inner_product: sketches must share params and master_seed");
  }
  const uint32_t r = sk_v.rows();
  double stack_buf[kStackRows];
  std::vector<double> heap_buf;
  std::span<double> est;
  if (r <= kStackRows) {
    est = std::span<double>(stack_buf, r);
  } else {
    heap_buf.resize(r);
    est = heap_buf;
  }
  for (uint32_t i = 0; i < r; ++i) {
    const std::span<const double> a = sk_v.row(i);
    const std::span<const double> b = sk_w.row(i);
    double dot = 0.0;
    for (size_t j = 0; j < a.size(); ++j) dot += a[j] * b[j];
    est[i] = dot;
  }
  return median_odd_inplace(est);
}

CountSketch add(const CountSketch& a, const CountSketch& b) {
  if (!(a.params() == b.params())) {
    throw ParamMismatchError("add: sketches must share params and master_seed");
  }
  CountSketch out = a;
  for (size_t i = 0; i < out.table_.size(); ++i) out.table_[i] += b.table_[i];
  return out;
}

CountSketch scale(const CountSketch& sk, double alpha) {
  CountSketch out = sk;
  for (double& x : out.table_) x *= alpha;
  return out;
}

}  // namespace csk
