#include "csk/exact_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

namespace csk {
namespace {

// s^d * 2^d with overflow-checked arithmetic; throws when above cap.
uint64_t checked_config_count(uint64_t s, size_t d, uint64_t cap,
                              const char* what) {
  uint64_t total = 1;
  for (size_t i = 0; i < d; ++i) {
    if (s != 0 && total > cap / s) throw std::length_error(what);
    total *= s;
    if (total > cap / 2) throw std::length_error(what);
    total *= 2;
  }
  if (total > cap) throw std::length_error(what);
  return total;
}

DiscreteDist dist_from_map(const std::map<double, double>& acc) {
  std::vector<Atom> atoms;
  atoms.reserve(acc.size());
  for (const auto& [value, prob] : acc) atoms.push_back({value, prob});
  return DiscreteDist(std::move(atoms));
}

// Advances a base-s odometer; returns false when it wraps to all zeros.
bool next_config(std::vector<uint32_t>& digits, uint32_t base) {
  for (auto& d : digits) {
    if (++d < base) return true;
    d = 0;
  }
  return false;
}

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (double)(n - k + i) / (double)i;
  return c;
}

}  // namespace

ErrorDist single_row_point_error_dist(const SparseVector& v, uint64_t j,
                                      uint32_t s, const EnumLimits& limits) {
  if (s < 1) throw std::invalid_argument("oracle: s must be >= 1");
  std::vector<uint64_t> keys = v.support();
  if (!std::binary_search(keys.begin(), keys.end(), j)) {
    keys.insert(std::lower_bound(keys.begin(), keys.end(), j), j);
  }
  const size_t d = keys.size();
  const uint64_t total = checked_config_count(s, d, limits.max_configs,
                                              "oracle: enumeration too large");
  const double weight = 1.0 / (double)total;

  std::vector<double> val(d);
  size_t j_pos = 0;
  for (size_t k = 0; k < d; ++k) {
    val[k] = v.at(keys[k]);
    if (keys[k] == j) j_pos = k;
  }

  std::map<double, double> acc;
  std::vector<uint32_t> h(d, 0);
  std::vector<size_t> colliding;
  colliding.reserve(d);
  do {
    colliding.clear();
    for (size_t k = 0; k < d; ++k) {
      if (k != j_pos && h[k] == h[j_pos]) colliding.push_back(k);
    }
    for (uint64_t gmask = 0; gmask < (1ULL << d); ++gmask) {
      const double sign_j = (gmask >> j_pos) & 1 ? 1.0 : -1.0;
      // The estimate's own-term g(j)^2 * v_j cancels against -v_j exactly,
      // leaving only the colliding keys' contributions.
      double err = 0.0;
      for (size_t k : colliding) {
        const double sign_k = (gmask >> k) & 1 ? 1.0 : -1.0;
        err += sign_j * sign_k * val[k];
      }
      acc[err] += weight;
    }
  } while (next_config(h, s));

  return dist_from_map(acc);
}

DiscreteDist median_of_iid_distribution(const DiscreteDist& dist, uint32_t t) {
  if (t < 1) throw std::invalid_argument("median_of_iid: t must be >= 1");
  const auto& atoms = dist.atoms();
  const int n = 2 * (int)t - 1;

  // P[median <= y] = P[Binomial(n, F(y)) >= t].
  auto median_cdf = [&](double f) {
    double g = 0.0;
    for (int k = (int)t; k <= n; ++k) {
      g += binomial(n, k) * std::pow(f, k) * std::pow(1.0 - f, n - k);
    }
    return g;
  };

  std::vector<Atom> out;
  out.reserve(atoms.size());
  double cum = 0.0;
  double prev_g = 0.0;
  for (size_t i = 0; i < atoms.size(); ++i) {
    cum += atoms[i].prob;
    // Pin the final cumulative to exactly 1 so the output total is exact.
    if (i + 1 == atoms.size()) cum = 1.0;
    const double g = median_cdf(cum);
    out.push_back({atoms[i].value, std::max(g - prev_g, 0.0)});
    prev_g = g;
  }
  return DiscreteDist(std::move(out));
}

DiscreteDist median_of_iid_distribution_enumerated(const DiscreteDist& dist,
                                                   uint32_t t,
                                                   const EnumLimits& limits) {
  if (t < 1) throw std::invalid_argument("median_of_iid: t must be >= 1");
  const auto& atoms = dist.atoms();
  const size_t m = atoms.size();
  const size_t n = 2 * (size_t)t - 1;

  uint64_t total = 1;
  for (size_t i = 0; i < n; ++i) {
    if (total > limits.max_configs / m) {
      throw std::length_error("median_of_iid: support too large");
    }
    total *= m;
  }

  std::map<double, double> acc;
  std::vector<uint32_t> tuple(n, 0);
  std::vector<uint32_t> sorted(n);
  do {
    double w = 1.0;
    for (uint32_t idx : tuple) w *= atoms[idx].prob;
    sorted.assign(tuple.begin(), tuple.end());
    std::nth_element(sorted.begin(), sorted.begin() + (n / 2), sorted.end());
    // Atoms are sorted by value, so the median of the index tuple picks the
    // median of the corresponding values.
    acc[atoms[sorted[n / 2]].value] += w;
  } while (next_config(tuple, (uint32_t)m));

  return dist_from_map(acc);
}

ErrorDist median_point_error_dist(const SparseVector& v, uint64_t j,
                                  uint32_t s, uint32_t t,
                                  const EnumLimits& limits) {
  return median_of_iid_distribution(single_row_point_error_dist(v, j, s, limits),
                                    t);
}

ErrorDist single_row_inner_error_dist(const SparseVector& v,
                                      const SparseVector& w, uint32_t s,
                                      const EnumLimits& limits) {
  if (s < 1) throw std::invalid_argument("oracle: s must be >= 1");
  std::vector<uint64_t> keys = v.support();
  for (uint64_t k : w.support()) {
    if (!std::binary_search(keys.begin(), keys.end(), k)) {
      keys.insert(std::lower_bound(keys.begin(), keys.end(), k), k);
    }
  }
  const size_t d = keys.size();
  if (d == 0) return DiscreteDist::point_mass(0.0);
  const uint64_t total = checked_config_count(s, d, limits.max_configs,
                                              "oracle: enumeration too large");
  const double weight = 1.0 / (double)total;
  const double truth = v.dot(w);

  std::vector<double> vval(d), wval(d);
  for (size_t k = 0; k < d; ++k) {
    vval[k] = v.at(keys[k]);
    wval[k] = w.at(keys[k]);
  }

  std::map<double, double> acc;
  std::vector<uint32_t> h(d, 0);
  std::vector<double> av(s, 0.0), aw(s, 0.0);
  std::vector<uint32_t> touched;
  touched.reserve(d);
  do {
    for (uint64_t gmask = 0; gmask < (1ULL << d); ++gmask) {
      touched.clear();
      for (size_t k = 0; k < d; ++k) {
        const double sign = (gmask >> k) & 1 ? 1.0 : -1.0;
        const uint32_t b = h[k];
        if (av[b] == 0.0 && aw[b] == 0.0) touched.push_back(b);
        av[b] += sign * vval[k];
        aw[b] += sign * wval[k];
      }
      double est = 0.0;
      for (uint32_t b : touched) {
        est += av[b] * aw[b];
        av[b] = 0.0;
        aw[b] = 0.0;
      }
      acc[est - truth] += weight;
    }
  } while (next_config(h, s));

  return dist_from_map(acc);
}

double moment_of(const ErrorDist& dist, int order, bool absolute) {
  return dist.moment_about(0.0, order, absolute);
}

}  // namespace csk
