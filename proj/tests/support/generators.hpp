#pragma once

// Shared test helpers: random instance generators and Monte-Carlo moment
// estimators used to cross-check the exact oracle and the real sketch.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "csk/hashing.hpp"
#include "csk/median_stats.hpp"
#include "csk/sketch.hpp"
#include "csk/sparse_vector.hpp"

namespace csk_test {

/// Random finite distribution: support 2-6, values uniform in [-10, 10],
/// probabilities a normalized positive random vector.
inline csk::DiscreteDist random_discrete_dist(std::mt19937_64& rng) {
  const size_t support = 2 + static_cast<size_t>(rng() % 5);
  std::uniform_real_distribution<double> value_dist(-10.0, 10.0);
  std::uniform_real_distribution<double> prob_dist(0.05, 1.0);
  std::vector<csk::Atom> atoms(support);
  double total = 0.0;
  for (csk::Atom& atom : atoms) {
    atom.value = value_dist(rng);
    atom.prob = prob_dist(rng);
    total += atom.prob;
  }
  for (csk::Atom& atom : atoms) atom.prob /= total;
  return csk::DiscreteDist(std::move(atoms));
}

/// Random sparse vector with `nnz` distinct 64-bit keys and values of random
/// sign and magnitude in [0.05, 2].
inline csk::SparseVector random_sparse_vector(std::mt19937_64& rng,
                                              size_t nnz) {
  std::uniform_real_distribution<double> mag(0.05, 2.0);
  csk::SparseVector v;
  std::set<uint64_t> used;
  while (used.size() < nnz) {
    const uint64_t key = rng();
    if (!used.insert(key).second) continue;
    const double sign = (rng() & 1u) != 0 ? 1.0 : -1.0;
    v.set(key, sign * mag(rng));
  }
  return v;
}

/// First two absolute error moments of a Monte-Carlo run plus their standard
/// errors: m1 estimates E|err|, m2 estimates E[err^2].
struct PointMoments {
  double m1 = 0.0;
  double se1 = 0.0;
  double m2 = 0.0;
  double se2 = 0.0;
};

namespace detail {

inline PointMoments finalize(double s1, double s2, double s4,
                             uint64_t trials) {
  const double n = static_cast<double>(trials);
  PointMoments pm;
  pm.m1 = s1 / n;
  pm.m2 = s2 / n;
  const double var1 = std::max(0.0, s2 / n - pm.m1 * pm.m1);
  const double var2 = std::max(0.0, s4 / n - pm.m2 * pm.m2);
  pm.se1 = std::sqrt(var1 / n);
  pm.se2 = std::sqrt(var2 / n);
  return pm;
}

}  // namespace detail

/// Simulates the idealized fully-random model directly: every trial draws a
/// fresh uniform bucket and sign for each relevant key, per row.
inline PointMoments mc_fully_random_point(const csk::SparseVector& v,
                                          uint64_t j, uint32_t s, uint32_t t,
                                          uint64_t trials,
                                          std::mt19937_64& rng) {
  std::vector<std::pair<uint64_t, double>> others;
  for (const auto& [key, value] : v)
    if (key != j) others.emplace_back(key, value);
  const double truth = v.at(j);
  const uint32_t rows = 2 * t - 1;
  const uint64_t mask = s - 1;
  std::vector<double> ests(rows);

  double s1 = 0.0, s2 = 0.0, s4 = 0.0;
  for (uint64_t trial = 0; trial < trials; ++trial) {
    for (uint32_t r = 0; r < rows; ++r) {
      const uint64_t hj = rng() & mask;
      const int gj = (rng() & 1u) != 0 ? 1 : -1;
      double cell = truth;  // own contribution g(j)^2 * v_j
      for (const auto& [key, value] : others) {
        const uint64_t hk = rng() & mask;
        if (hk != hj) continue;
        cell += ((rng() & 1u) != 0 ? 1.0 : -1.0) * gj * value;
      }
      ests[r] = cell;
    }
    const double err = csk::median_odd_inplace(ests) - truth;
    const double a = std::fabs(err);
    s1 += a;
    s2 += err * err;
    s4 += err * err * err * err;
  }
  return detail::finalize(s1, s2, s4, trials);
}

/// Monte-Carlo point-query moments of the deployed sketch (multiply-shift
/// buckets plus the configured sign family), reseeded each trial.
inline PointMoments mc_real_sketch_point(const csk::SparseVector& v,
                                         uint64_t j,
                                         const csk::SketchParams& params,
                                         uint64_t trials, uint64_t seed) {
  csk::CountSketch sk(params);
  const std::vector<std::pair<uint64_t, double>> entries(v.begin(), v.end());
  const double truth = v.at(j);

  double s1 = 0.0, s2 = 0.0, s4 = 0.0;
  for (uint64_t trial = 0; trial < trials; ++trial) {
    sk.reseed(csk::mix64(seed, trial));
    for (const auto& [key, value] : entries) sk.update(key, value);
    const double err = sk.point_query(j) - truth;
    const double a = std::fabs(err);
    s1 += a;
    s2 += err * err;
    s4 += err * err * err * err;
  }
  return detail::finalize(s1, s2, s4, trials);
}

}  // namespace csk_test
