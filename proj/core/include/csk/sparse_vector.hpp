#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <utility>
#include <vector>

namespace csk {

/// Sparse vector over 64-bit indices with double entries. Entries with value
/// exactly zero are never stored, so nnz() counts true nonzeros and iteration
/// visits nonzero entries in ascending index order (the fixed update order
/// used when feeding a sketch).
class SparseVector {
 public:
  using Map = std::map<uint64_t, double>;
  using const_iterator = Map::const_iterator;

  SparseVector() = default;

  SparseVector(std::initializer_list<std::pair<const uint64_t, double>> init) {
    for (const auto& [i, x] : init) set(i, x);
  }

  /// Sets entry i to x; x == 0 removes the entry.
  void set(uint64_t i, double x) {
    if (x == 0.0) {
      entries_.erase(i);
    } else {
      entries_[i] = x;
    }
  }

  /// Adds delta to entry i, removing it if the result is exactly zero.
  void add(uint64_t i, double delta) {
    auto it = entries_.find(i);
    if (it == entries_.end()) {
      if (delta != 0.0) entries_.emplace(i, delta);
      return;
    }
    it->second += delta;
    if (it->second == 0.0) entries_.erase(it);
  }

  /// Value at index i; zero if absent.
  double at(uint64_t i) const {
    auto it = entries_.find(i);
    return it == entries_.end() ? 0.0 : it->second;
  }

  size_t nnz() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  double l1() const {
    double s = 0.0;
    for (const auto& [i, x] : entries_) s += std::abs(x);
    return s;
  }

  double l2() const {
    double s = 0.0;
    for (const auto& [i, x] : entries_) s += x * x;
    return std::sqrt(s);
  }

  double linf() const {
    double m = 0.0;
    for (const auto& [i, x] : entries_) m = std::max(m, std::abs(x));
    return m;
  }

  double dot(const SparseVector& other) const {
    const SparseVector& a = nnz() <= other.nnz() ? *this : other;
    const SparseVector& b = nnz() <= other.nnz() ? other : *this;
    double s = 0.0;
    for (const auto& [i, x] : a.entries_) s += x * b.at(i);
    return s;
  }

  /// Nonzero indices in ascending order.
  std::vector<uint64_t> support() const {
    std::vector<uint64_t> keys;
    keys.reserve(entries_.size());
    for (const auto& [i, x] : entries_) keys.push_back(i);
    return keys;
  }

  const_iterator begin() const { return entries_.begin(); }
  const_iterator end() const { return entries_.end(); }

  bool operator==(const SparseVector& other) const = default;

  friend SparseVector operator+(const SparseVector& a, const SparseVector& b) {
    SparseVector r = a;
    for (const auto& [i, x] : b.entries_) r.add(i, x);
    return r;
  }

  friend SparseVector operator*(double alpha, const SparseVector& v) {
    SparseVector r;
    for (const auto& [i, x] : v.entries_) r.set(i, alpha * x);
    return r;
  }

 private:
  Map entries_;
};

}  // namespace csk
