#pragma once

#include <cstdint>

#include "csk/median_stats.hpp"
#include "csk/sparse_vector.hpp"

namespace csk {

/// Distribution of (estimate - truth) under fully-random hashing. The oracle
/// deliberately models idealized fully-random hash functions, not the
/// multiply-shift family the sketch deploys: the moment guarantees assume
/// only limited independence, which fully-random hashing satisfies, and only
/// the fully-random model is enumerable. Agreement between the deployed
/// hashes and these oracle values is established statistically in the tests,
/// never assumed.
using ErrorDist = DiscreteDist;

/// Cap on brute-force enumeration size (number of (h, g) configurations or
/// median tuples).
struct EnumLimits {
  uint64_t max_configs = 10'000'000;
};

/// Exact distribution of the single-row point estimate error
/// g(j)*A[h(j)] - v_j, by enumerating all assignments h: keys -> [s] and
/// g: keys -> {-1,+1} over the d = |support(v) + {j}| relevant keys, each
/// configuration carrying weight s^-d * 2^-d. Weights are exact dyadic
/// rationals when s is a power of two, so the accumulated probabilities are
/// exact. Throws std::length_error when s^d * 2^d exceeds limits.max_configs.
ErrorDist single_row_point_error_dist(const SparseVector& v, uint64_t j,
                                      uint32_t s,
                                      const EnumLimits& limits = {});

/// Exact distribution of the median of 2t-1 i.i.d. draws from dist, via the
/// order-statistic CDF identity: P[median <= y] is the upper binomial tail
/// sum_{k=t}^{2t-1} C(2t-1,k) F(y)^k (1-F(y))^(2t-1-k). Runs in O(atoms * t);
/// no support-size cap needed.
DiscreteDist median_of_iid_distribution(const DiscreteDist& dist, uint32_t t);

/// Independent second route to the same distribution: enumerate all
/// |support|^(2t-1) tuples with product weights and take each tuple's median.
/// Kept as a cross-check for the CDF route (the two must agree within 1e-10
/// per atom). Throws std::length_error ("support too large") when the tuple
/// count exceeds limits.max_configs.
DiscreteDist median_of_iid_distribution_enumerated(
    const DiscreteDist& dist, uint32_t t, const EnumLimits& limits = {});

/// Exact error distribution of the median-of-(2t-1)-rows point estimate:
/// the single-row distribution composed with the median convolution (rows
/// are i.i.d. because hash functions are drawn independently per row).
ErrorDist median_point_error_dist(const SparseVector& v, uint64_t j,
                                  uint32_t s, uint32_t t,
                                  const EnumLimits& limits = {});

/// Exact distribution of the single-row inner product error
/// <A^v_1, A^w_1> - <v,w> under fully-random (h, g) shared by both sketches,
/// enumerated over the union of the two supports.
ErrorDist single_row_inner_error_dist(const SparseVector& v,
                                      const SparseVector& w, uint32_t s,
                                      const EnumLimits& limits = {});

/// sum p * |x|^order (or signed power when absolute is false) about zero.
double moment_of(const ErrorDist& dist, int order, bool absolute);

}  // namespace csk
