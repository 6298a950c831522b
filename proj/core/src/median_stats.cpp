#include "csk/median_stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace csk {
namespace {

constexpr double kMergeTol = 1e-12;
constexpr double kProbSumTol = 1e-12;

double int_pow(double x, int q) {
  double r = 1.0;
  for (int i = 0; i < q; ++i) r *= x;
  return r;
}

}  // namespace

double median_odd_inplace(std::span<double> values) {
  if (values.empty() || values.size() % 2 == 0) {
    throw std::invalid_argument("median_odd: length must be odd");
  }
  const size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  return values[mid];
}

double median_odd(std::span<const double> values) {
  std::vector<double> copy(values.begin(), values.end());
  return median_odd_inplace(copy);
}

double empirical_moment(std::span<const double> samples, double center,
                        int order, bool absolute) {
  if (samples.empty()) {
    throw std::invalid_argument("empirical_moment: empty sample");
  }
  if (order < 1) {
    throw std::invalid_argument("empirical_moment: order must be >= 1");
  }
  double sum = 0.0;
  for (double x : samples) {
    const double d = x - center;
    sum += int_pow(absolute ? std::abs(d) : d, order);
  }
  return sum / (double)samples.size();
}

DiscreteDist::DiscreteDist(std::vector<Atom> atoms) {
  double total = 0.0;
  for (const Atom& a : atoms) {
    if (!(a.prob >= 0.0)) {
      throw std::invalid_argument("DiscreteDist: negative probability");
    }
    total += a.prob;
  }
  if (std::abs(total - 1.0) > kProbSumTol) {
    throw std::invalid_argument("DiscreteDist: probabilities must sum to 1");
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.value < b.value; });
  atoms_.reserve(atoms.size());
  for (const Atom& a : atoms) {
    if (a.prob == 0.0) continue;
    if (!atoms_.empty() && a.value - atoms_.back().value <= kMergeTol) {
      Atom& last = atoms_.back();
      const double p = last.prob + a.prob;
      last.value = (last.value * last.prob + a.value * a.prob) / p;
      last.prob = p;
    } else {
      atoms_.push_back(a);
    }
  }
  if (atoms_.empty()) {
    throw std::invalid_argument("DiscreteDist: empty support");
  }
}

DiscreteDist DiscreteDist::point_mass(double value) {
  return DiscreteDist({{value, 1.0}});
}

double DiscreteDist::mean() const {
  double m = 0.0;
  for (const Atom& a : atoms_) m += a.prob * a.value;
  return m;
}

double DiscreteDist::moment_about(double center, int order,
                                  bool absolute) const {
  if (order < 1) {
    throw std::invalid_argument("moment_about: order must be >= 1");
  }
  double m = 0.0;
  for (const Atom& a : atoms_) {
    const double d = a.value - center;
    m += a.prob * int_pow(absolute ? std::abs(d) : d, order);
  }
  return m;
}

double DiscreteDist::prob_at(double value, double tol) const {
  for (const Atom& a : atoms_) {
    if (std::abs(a.value - value) <= tol) return a.prob;
  }
  return 0.0;
}

double DiscreteDist::sample(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  double cum = 0.0;
  for (const Atom& a : atoms_) {
    cum += a.prob;
    if (u < cum) return a.value;
  }
  return atoms_.back().value;
}

DiscreteDist tightness_dist(uint64_t k) {
  if (k < 2) {
    throw std::invalid_argument("tightness_dist: k must be >= 2");
  }
  const double p = 1.0 / (double)k;
  return DiscreteDist({{0.0, 1.0 - p}, {(double)k, p}});
}

double sample_median_of_iid(const DiscreteDist& dist, uint32_t t,
                            std::mt19937_64& rng) {
  if (t < 1) {
    throw std::invalid_argument("sample_median_of_iid: t must be >= 1");
  }
  std::vector<double> draws(2 * (size_t)t - 1);
  for (double& d : draws) d = dist.sample(rng);
  return median_odd_inplace(draws);
}

}  // namespace csk
