#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "csk/datasets.hpp"
#include "csk/hashing.hpp"
#include "csk/median_stats.hpp"
#include "csk/sketch.hpp"
#include "csk/sparse_vector.hpp"

namespace csk {

/// Where query indices are drawn from. support_only picks uniformly among
/// the vector's nonzero indices ("pick 100 random items"); all_indices picks
/// uniformly from [0, dimension) excluding the support (the regime where a
/// sparse vector's estimate error is pure collision noise), falling back to
/// the whole domain when the support covers it.
enum class QueryMode : uint8_t { support_only, all_indices };

/// Full description of a frequency-estimation or inner-product experiment.
///
/// Per-trial randomness: trial i derives trial_seed = mix64(seed, i); the
/// sketch is reseeded with mix64(trial_seed, 1) and the query sampler with
/// mix64(trial_seed, 2). Trials are therefore order-independent and the
/// runner may execute them in parallel; results are reduced over a fixed
/// chunk plan so output bytes never depend on thread count.
struct ExperimentConfig {
  DatasetSpec dataset;
  std::optional<DatasetSpec> dataset2;  // second vector for inner experiments
  std::vector<uint32_t> t_values = {1, 2};
  std::vector<uint32_t> s_grid;
  uint64_t trials = 1000;
  uint64_t queries_per_trial = 100;
  int moment_order = 2;  // 2 or 4
  std::optional<QueryMode> query_mode;  // unset: all_indices for one-hot,
                                        // support_only otherwise
  uint64_t seed = 0;
  SignFamily sign_family = SignFamily::pairwise;
  std::string out_path;  // empty: CSV to stdout (CLI decision)
  uint32_t threads = 0;  // 0: hardware concurrency

  void validate() const;
};

/// One experiment cell. std_error is the jackknife standard error of the
/// moment over trials; it accompanies summaries but is not a CSV column.
struct MomentRow {
  std::string dataset;
  uint32_t t = 0;
  uint32_t s = 0;
  int order = 0;
  uint64_t n = 0;  // trials * queries_per_trial
  double moment = 0.0;
  double std_error = 0.0;
};

struct MomentReport {
  std::vector<MomentRow> rows;
};

/// Frequency-estimation protocol: for each (t, s) in ascending order,
/// rebuild the sketch `trials` times with fresh per-trial seeds, draw
/// `queries_per_trial` indices per trial, and average
/// (point_query(j) - v_j)^order.
MomentReport run_freq_experiment(const ExperimentConfig& cfg);

/// Inner-product protocol: per trial, build the paired sketches with the
/// same per-trial seed and record (inner_product - <v,w>)^order; one sample
/// per trial.
MomentReport run_inner_experiment(const ExperimentConfig& cfg);

/// Single frequency cell on an already-materialized vector; the building
/// block of run_freq_experiment, exposed for tests. `absolute` applies to
/// odd orders (even powers are sign-free).
MomentRow run_point_moment_cell(const SparseVector& v, uint64_t dimension,
                                QueryMode mode, uint32_t t, uint32_t s,
                                SignFamily sign_family, int order,
                                bool absolute, uint64_t trials,
                                uint64_t queries_per_trial, uint64_t seed,
                                uint32_t threads, const std::string& tag);

/// Single inner-product cell on a materialized pair.
MomentRow run_inner_moment_cell(const SparseVector& v, const SparseVector& w,
                                uint32_t t, uint32_t s,
                                SignFamily sign_family, int order,
                                bool absolute, uint64_t trials, uint64_t seed,
                                uint32_t threads, const std::string& tag);

/// Exact and Monte-Carlo sides of the median-moment inequality
/// E|Y - E[X]|^(t*q) <= C(2t-1, t) * (E|X - E[X]|^q)^t for Y the median of
/// 2t-1 i.i.d. draws of X.
struct MedianCheckReport {
  uint32_t t = 0;
  int q = 0;
  uint64_t trials = 0;
  double exact_left = 0.0;  // E|Y - mu|^(t*q), exact convolution
  double right = 0.0;       // C(2t-1, t) * (E|X - mu|^q)^t
  double mc_left = 0.0;     // empirical left side over `trials` medians
  double ratio = 0.0;       // exact_left / right; 0 when both sides are 0
};

MedianCheckReport run_median_moment_check(const DiscreteDist& dist, uint32_t t,
                                          int q, uint64_t trials,
                                          uint64_t seed);

/// C(n, k) as a double (exact for the sizes used here).
double binomial_coefficient(int n, int k);

/// Parses a distribution spec: "tightness:K" | "point:V" |
/// "uniform:v1,v2,..." | "atoms:v1:p1,v2:p2,...".
DiscreteDist parse_dist_spec(const std::string& text);

/// CSV with header "dataset,t,s,order,n,moment,moment_x_s,moment_x_s2", one
/// row per cell in report order, doubles at full round-trip precision.
/// moment_x_s = moment * s and moment_x_s2 = (moment * s) * s exactly as
/// emitted.
void emit_csv(const MomentReport& report, std::ostream& out);

/// Writes the CSV to a file; throws std::runtime_error on I/O failure.
void emit_csv_file(const MomentReport& report, const std::string& path);

}  // namespace csk
