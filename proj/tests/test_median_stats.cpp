#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "csk/exact_oracle.hpp"
#include "csk/median_stats.hpp"
#include "doctest.h"
#include "support/generators.hpp"

using csk::Atom;
using csk::DiscreteDist;

TEST_CASE("median_odd on small inputs") {
  std::vector<double> one{5};
  CHECK(csk::median_odd(one) == 5);
  std::vector<double> three{3, 1, 2};
  CHECK(csk::median_odd(three) == 2);
  std::vector<double> dup{-1, -1, 7};
  CHECK(csk::median_odd(dup) == -1);
}

TEST_CASE("median_odd rejects empty and even inputs") {
  std::vector<double> empty;
  CHECK_THROWS_AS(csk::median_odd(empty), std::invalid_argument);
  std::vector<double> two{1, 2};
  CHECK_THROWS_AS(csk::median_odd(two), std::invalid_argument);
}

TEST_CASE("median_odd is permutation invariant and monotone") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> xs(5);
    for (double& x : xs) x = u(rng);
    const double m = csk::median_odd(xs);

    std::vector<double> shuffled = xs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(csk::median_odd(shuffled) == m);

    std::vector<double> bumped = xs;
    bumped[rng() % bumped.size()] += 1.0;
    CHECK(csk::median_odd(bumped) >= m);
  }
}

TEST_CASE("empirical_moment arithmetic") {
  std::vector<double> same{2.5, 2.5, 2.5};
  CHECK(csk::empirical_moment(same, 2.5, 3, true) == 0.0);
  std::vector<double> pm{-1, 1};
  CHECK(csk::empirical_moment(pm, 0.0, 2, false) == 1.0);
  std::vector<double> mixed{0, 0, 4};
  CHECK(csk::empirical_moment(mixed, 1.0, 1, true) == doctest::Approx(5.0 / 3).epsilon(1e-15));

  std::vector<double> empty;
  CHECK_THROWS_AS(csk::empirical_moment(empty, 0, 2, false),
                  std::invalid_argument);
  CHECK_THROWS_AS(csk::empirical_moment(pm, 0, 0, false),
                  std::invalid_argument);
}

TEST_CASE("DiscreteDist validates probabilities") {
  CHECK_THROWS_AS(DiscreteDist({{0.0, 0.5}, {1.0, 0.6}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(DiscreteDist({{0.0, -0.1}, {1.0, 1.1}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(DiscreteDist({}), std::invalid_argument);
}

TEST_CASE("DiscreteDist canonicalizes its support") {
  // Values within 1e-12 merge; zero-probability atoms are dropped.
  const DiscreteDist d({{2.0, 0.5}, {1.0, 0.3}, {1.0 + 1e-13, 0.2}});
  REQUIRE(d.support_size() == 2);
  CHECK(d.atoms()[0].value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d.atoms()[0].prob == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(d.atoms()[1].value == 2.0);

  const DiscreteDist e({{5.0, 0.0}, {7.0, 1.0}});
  CHECK(e.support_size() == 1);
  CHECK(e.atoms()[0].value == 7.0);
}

TEST_CASE("DiscreteDist moments and lookup") {
  const DiscreteDist d({{0.0, 0.75}, {4.0, 0.25}});
  CHECK(d.mean() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(d.moment_about(0.0, 2, false) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(d.moment_about(1.0, 1, true) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(d.prob_at(4.0) == doctest::Approx(0.25));
  CHECK(d.prob_at(3.0) == 0.0);

  const DiscreteDist p = DiscreteDist::point_mass(7.0);
  CHECK(p.support_size() == 1);
  CHECK(p.mean() == 7.0);
  CHECK(p.moment_about(7.0, 2, false) == 0.0);
}

TEST_CASE("DiscreteDist sampling tracks probabilities") {
  const DiscreteDist d({{0.0, 0.75}, {4.0, 0.25}});
  std::mt19937_64 rng(2024);
  const int n = 100000;
  int fours = 0;
  for (int i = 0; i < n; ++i)
    if (d.sample(rng) == 4.0) ++fours;
  const double sd = std::sqrt(0.25 * 0.75 / n);
  CHECK(std::fabs(fours / static_cast<double>(n) - 0.25) <= 5 * sd);
}

TEST_CASE("tightness_dist shape and mean") {
  const DiscreteDist k2 = csk::tightness_dist(2);
  REQUIRE(k2.support_size() == 2);
  CHECK(k2.atoms()[0].value == 0.0);
  CHECK(k2.atoms()[0].prob == 0.5);
  CHECK(k2.atoms()[1].value == 2.0);
  CHECK(k2.atoms()[1].prob == 0.5);

  const DiscreteDist k4 = csk::tightness_dist(4);
  CHECK(k4.prob_at(4.0) == 0.25);
  CHECK(k4.prob_at(0.0) == 0.75);

  for (const uint64_t k : {2ull, 4ull, 7ull, 100ull})
    CHECK(csk::tightness_dist(k).mean() == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(csk::tightness_dist(1), std::invalid_argument);
}

TEST_CASE("sample_median_of_iid point mass") {
  const DiscreteDist p = DiscreteDist::point_mass(7.0);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) CHECK(csk::sample_median_of_iid(p, 2, rng) == 7.0);
}

TEST_CASE("sample_median_of_iid majority of fair coins") {
  const DiscreteDist coin({{0.0, 0.5}, {1.0, 0.5}});
  std::mt19937_64 rng(44);
  const int n = 1000000;
  int ones = 0;
  for (int i = 0; i < n; ++i)
    if (csk::sample_median_of_iid(coin, 2, rng) == 1.0) ++ones;
  CHECK(std::fabs(ones / static_cast<double>(n) - 0.5) <= 0.005);
}

TEST_CASE("sample_median_of_iid tightness(4) hits 10/64") {
  const DiscreteDist d = csk::tightness_dist(4);
  std::mt19937_64 rng(45);
  const int n = 1000000;
  int fours = 0;
  for (int i = 0; i < n; ++i)
    if (csk::sample_median_of_iid(d, 2, rng) == 4.0) ++fours;
  CHECK(std::fabs(fours / static_cast<double>(n) - 10.0 / 64) <= 0.005);
}

TEST_CASE("median-of-three variance bound holds exactly on random distributions") {
  // Var(Y) <= E[(Y-mu_X)^2] <= 3 E[|X-mu_X|]^2 for the median of three.
  std::mt19937_64 rng(46);
  for (int rep = 0; rep < 200; ++rep) {
    const DiscreteDist x = csk_test::random_discrete_dist(rng);
    const DiscreteDist y = csk::median_of_iid_distribution(x, 2);
    const double mu = x.mean();
    const double var_y = y.moment_about(y.mean(), 2, false);
    const double second_about_mu = y.moment_about(mu, 2, false);
    const double bound = 3 * std::pow(x.moment_about(mu, 1, true), 2);
    const double slack = 1e-9 * std::max(1.0, bound);
    CHECK(var_y <= second_about_mu + slack);
    CHECK(second_about_mu <= bound + slack);
  }
}
