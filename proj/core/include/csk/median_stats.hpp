#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace csk {

/// Median of an odd-length sequence: the exact middle order statistic, never
/// an interpolation, so the median is always a member of the sample.
/// Reorders the input; throws std::invalid_argument on empty or even length.
double median_odd_inplace(std::span<double> values);

/// Pure variant of median_odd_inplace (copies the input).
double median_odd(std::span<const double> values);

/// (1/n) * sum |x - center|^order, or the signed power when absolute is
/// false. Throws std::invalid_argument on an empty sample or order < 1.
double empirical_moment(std::span<const double> samples, double center,
                        int order, bool absolute);

struct Atom {
  double value = 0.0;
  double prob = 0.0;
};

/// Finite-support probability distribution. Construction sorts atoms by
/// value, merges values within 1e-12 of one another (probabilities add), and
/// drops zero-probability atoms, so supports are canonical under
/// floating-point noise. Probabilities must be nonnegative and sum to 1
/// within 1e-12.
class DiscreteDist {
 public:
  explicit DiscreteDist(std::vector<Atom> atoms);

  static DiscreteDist point_mass(double value);

  const std::vector<Atom>& atoms() const { return atoms_; }
  size_t support_size() const { return atoms_.size(); }

  double mean() const;

  /// sum p * |x - center|^order, or the signed power when absolute is false.
  double moment_about(double center, int order, bool absolute) const;

  /// Probability of the atom whose value lies within tol of value; 0 if none.
  double prob_at(double value, double tol = 1e-12) const;

  double sample(std::mt19937_64& rng) const;

 private:
  std::vector<Atom> atoms_;
};

/// Two-point distribution {k w.p. 1/k, 0 otherwise} with mean 1; the
/// construction showing the median-moment bound is tight up to a constant.
/// Requires k >= 2.
DiscreteDist tightness_dist(uint64_t k);

/// Draws 2t-1 i.i.d. values from dist and returns their median. t >= 1.
double sample_median_of_iid(const DiscreteDist& dist, uint32_t t,
                            std::mt19937_64& rng);

}  // namespace csk
