#include "csk/experiment.hpp"

#include <algorithm>

#include "csk/exact_oracle.hpp"
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>
#include <utility>

namespace csk {
namespace {

double int_pow(double x, int n) {
  double acc = 1.0;
  for (int i = 0; i < n; ++i) acc *= x;
  return acc;
}

double moment_term(double err, int order, bool absolute) {
  if (absolute && (order % 2) != 0) return int_pow(std::fabs(err), order);
  return int_pow(err, order);
}

struct TrialStats {
  double sum = 0.0;     // sum of per-trial means
  double sum_sq = 0.0;  // sum of squared per-trial means
};

// Runs `trials` independent trials over a fixed chunk plan: chunk c covers
// [trials*c/C, trials*(c+1)/C). Partials are combined in chunk order, so the
// reduced sums are identical for every thread count.
template <typename MakeState, typename RunTrial>
TrialStats run_chunked_trials(uint64_t trials, uint32_t threads,
                              MakeState make_state, RunTrial run_trial) {
  const uint64_t chunk_count = std::min<uint64_t>(trials, 128);
  std::vector<TrialStats> partial(chunk_count);
  std::atomic<uint64_t> next_chunk{0};

  auto worker = [&]() {
    auto state = make_state();
    for (uint64_t c; (c = next_chunk.fetch_add(1)) < chunk_count;) {
      const uint64_t lo = trials * c / chunk_count;
      const uint64_t hi = trials * (c + 1) / chunk_count;
      TrialStats st;
      for (uint64_t i = lo; i < hi; ++i) {
        const double m = run_trial(state, i);
        st.sum += m;
        st.sum_sq += m * m;
      }
      partial[c] = st;
    }
  };

  uint32_t n_threads =
      threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                   : threads;
  n_threads = static_cast<uint32_t>(
      std::min<uint64_t>(n_threads, chunk_count));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads - 1);
    for (uint32_t k = 0; k + 1 < n_threads; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
  }

  TrialStats total;
  for (const auto& p : partial) {
    total.sum += p.sum;
    total.sum_sq += p.sum_sq;
  }
  return total;
}

// Standard error of the mean of the per-trial means (jackknife on the mean
// reduces to exactly this).
double jackknife_std_error(const TrialStats& st, uint64_t m) {
  if (m < 2) return 0.0;
  const double mean = st.sum / static_cast<double>(m);
  double var = (st.sum_sq - static_cast<double>(m) * mean * mean) /
               static_cast<double>(m - 1);
  if (var < 0.0) var = 0.0;
  return std::sqrt(var / static_cast<double>(m));
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  size_t start = 0;
  for (;;) {
    const size_t pos = text.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_double(const std::string& text, const char* what) {
  try {
    size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("bad ") + what + ": '" + text +
                                "'");
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (queries_per_trial < 1)
    throw std::invalid_argument("queries must be >= 1");
  if (moment_order != 2 && moment_order != 4)
    throw std::invalid_argument("order must be 2 or 4");
  if (t_values.empty()) throw std::invalid_argument("need at least one t");
  for (const uint32_t t : t_values)
    SketchParams{.t = t, .s = 2}.validate();
  if (s_grid.empty()) throw std::invalid_argument("need at least one s");
  for (const uint32_t s : s_grid)
    SketchParams{.t = 1, .s = s}.validate();
}

MomentRow run_point_moment_cell(const SparseVector& v, uint64_t dimension,
                                QueryMode mode, uint32_t t, uint32_t s,
                                SignFamily sign_family, int order,
                                bool absolute, uint64_t trials,
                                uint64_t queries_per_trial, uint64_t seed,
                                uint32_t threads, const std::string& tag) {
  const SketchParams params{
      .t = t, .s = s, .master_seed = 0, .sign_family = sign_family};
  params.validate();
  if (order < 1) throw std::invalid_argument("order must be >= 1");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (queries_per_trial < 1)
    throw std::invalid_argument("queries must be >= 1");
  if (dimension == 0) throw std::invalid_argument("dimension must be >= 1");

  const std::vector<std::pair<uint64_t, double>> entries(v.begin(), v.end());
  std::vector<uint64_t> support;
  support.reserve(entries.size());
  for (const auto& [key, value] : entries) support.push_back(key);
  if (mode == QueryMode::support_only && support.empty())
    throw std::invalid_argument("support queries need a nonzero vector");
  const bool support_covers_domain = support.size() >= dimension;

  struct State {
    CountSketch sketch;
  };
  auto make_state = [&]() { return State{CountSketch(params)}; };

  auto sample_query = [&](std::mt19937_64& rng) -> uint64_t {
    if (mode == QueryMode::support_only) {
      std::uniform_int_distribution<size_t> pick(0, support.size() - 1);
      return support[pick(rng)];
    }
    std::uniform_int_distribution<uint64_t> pick(0, dimension - 1);
    if (support_covers_domain) return pick(rng);
    for (;;) {
      const uint64_t j = pick(rng);
      if (!std::binary_search(support.begin(), support.end(), j)) return j;
    }
  };

  auto run_trial = [&](State& st, uint64_t trial) -> double {
    const uint64_t trial_seed = mix64(seed, trial);
    st.sketch.reseed(mix64(trial_seed, 1));
    for (const auto& [key, value] : entries) st.sketch.update(key, value);
    std::mt19937_64 rng(mix64(trial_seed, 2));
    double sum = 0.0;
    for (uint64_t qi = 0; qi < queries_per_trial; ++qi) {
      const uint64_t j = sample_query(rng);
      const double err = st.sketch.point_query(j) - v.at(j);
      sum += moment_term(err, order, absolute);
    }
    return sum / static_cast<double>(queries_per_trial);
  };

  const TrialStats stats =
      run_chunked_trials(trials, threads, make_state, run_trial);

  MomentRow row;
  row.dataset = tag;
  row.t = t;
  row.s = s;
  row.order = order;
  row.n = trials * queries_per_trial;
  row.moment = stats.sum / static_cast<double>(trials);
  row.std_error = jackknife_std_error(stats, trials);
  return row;
}

MomentRow run_inner_moment_cell(const SparseVector& v, const SparseVector& w,
                                uint32_t t, uint32_t s,
                                SignFamily sign_family, int order,
                                bool absolute, uint64_t trials, uint64_t seed,
                                uint32_t threads, const std::string& tag) {
  const SketchParams params{
      .t = t, .s = s, .master_seed = 0, .sign_family = sign_family};
  params.validate();
  if (order < 1) throw std::invalid_argument("order must be >= 1");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");

  const std::vector<std::pair<uint64_t, double>> ev(v.begin(), v.end());
  const std::vector<std::pair<uint64_t, double>> ew(w.begin(), w.end());
  const double truth = v.dot(w);

  struct State {
    CountSketch a;
    CountSketch b;
  };
  auto make_state = [&]() {
    return State{CountSketch(params), CountSketch(params)};
  };

  auto run_trial = [&](State& st, uint64_t trial) -> double {
    const uint64_t sketch_seed = mix64(mix64(seed, trial), 1);
    st.a.reseed(sketch_seed);
    st.b.reseed(sketch_seed);
    for (const auto& [key, value] : ev) st.a.update(key, value);
    for (const auto& [key, value] : ew) st.b.update(key, value);
    const double err = inner_product(st.a, st.b) - truth;
    return moment_term(err, order, absolute);
  };

  const TrialStats stats =
      run_chunked_trials(trials, threads, make_state, run_trial);

  MomentRow row;
  row.dataset = tag;
  row.t = t;
  row.s = s;
  row.order = order;
  row.n = trials;
  row.moment = stats.sum / static_cast<double>(trials);
  row.std_error = jackknife_std_error(stats, trials);
  return row;
}

namespace {

std::vector<uint32_t> sorted_unique(std::vector<uint32_t> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

}  // namespace

MomentReport run_freq_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const MaterializedDataset mat = materialize(cfg.dataset);
  const QueryMode mode = cfg.query_mode.value_or(
      cfg.dataset.kind == DatasetSpec::Kind::one_hot
          ? QueryMode::all_indices
          : QueryMode::support_only);

  MomentReport report;
  for (const uint32_t t : sorted_unique(cfg.t_values)) {
    for (const uint32_t s : sorted_unique(cfg.s_grid)) {
      report.rows.push_back(run_point_moment_cell(
          mat.v, mat.dimension, mode, t, s, cfg.sign_family,
          cfg.moment_order, /*absolute=*/false, cfg.trials,
          cfg.queries_per_trial, cfg.seed, cfg.threads, mat.tag));
    }
  }
  return report;
}

MomentReport run_inner_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const MaterializedDataset mat = materialize(cfg.dataset);
  SparseVector w;
  std::string tag = mat.tag;
  if (cfg.dataset2.has_value()) {
    const MaterializedDataset mat2 = materialize(*cfg.dataset2);
    w = mat2.v;
    tag += "|" + mat2.tag;
  } else if (mat.w.has_value()) {
    w = *mat.w;
  } else {
    throw std::invalid_argument(
        "inner experiment needs a paired dataset or a second dataset");
  }

  MomentReport report;
  for (const uint32_t t : sorted_unique(cfg.t_values)) {
    for (const uint32_t s : sorted_unique(cfg.s_grid)) {
      report.rows.push_back(run_inner_moment_cell(
          mat.v, w, t, s, cfg.sign_family, cfg.moment_order,
          /*absolute=*/false, cfg.trials, cfg.seed, cfg.threads, tag));
    }
  }
  return report;
}

double binomial_coefficient(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  if (k > n - k) k = n - k;
  double acc = 1.0;
  for (int i = 1; i <= k; ++i)
    acc = acc * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(acc);
}

MedianCheckReport run_median_moment_check(const DiscreteDist& dist,
                                          uint32_t t, int q, uint64_t trials,
                                          uint64_t seed) {
  if (t < 1) throw std::invalid_argument("t must be >= 1");
  if (q < 1) throw std::invalid_argument("q must be >= 1");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");

  MedianCheckReport report;
  report.t = t;
  report.q = q;
  report.trials = trials;

  const double mu = dist.mean();
  const DiscreteDist med = median_of_iid_distribution(dist, t);
  report.exact_left = med.moment_about(mu, static_cast<int>(t) * q, true);
  report.right =
      binomial_coefficient(2 * static_cast<int>(t) - 1, static_cast<int>(t)) *
      std::pow(dist.moment_about(mu, q, true), static_cast<double>(t));

  std::mt19937_64 rng(seed);
  double acc = 0.0;
  for (uint64_t i = 0; i < trials; ++i) {
    const double y = sample_median_of_iid(dist, t, rng);
    acc += int_pow(std::fabs(y - mu), static_cast<int>(t) * q);
  }
  report.mc_left = acc / static_cast<double>(trials);

  if (report.right == 0.0) {
    report.ratio = report.exact_left == 0.0
                       ? 0.0
                       : std::numeric_limits<double>::infinity();
  } else {
    report.ratio = report.exact_left / report.right;
  }
  return report;
}

DiscreteDist parse_dist_spec(const std::string& text) {
  const size_t colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("bad distribution spec: '" + text + "'");
  const std::string kind = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);

  if (kind == "tightness") {
    const double k = parse_double(rest, "tightness k");
    if (k < 2.0 || k != std::floor(k))
      throw std::invalid_argument("tightness k must be an integer >= 2");
    return tightness_dist(static_cast<uint64_t>(k));
  }
  if (kind == "point") {
    return DiscreteDist::point_mass(parse_double(rest, "point value"));
  }
  if (kind == "uniform") {
    const std::vector<std::string> items = split(rest, ',');
    std::vector<Atom> atoms;
    atoms.reserve(items.size());
    const double p = 1.0 / static_cast<double>(items.size());
    for (const std::string& item : items)
      atoms.push_back({parse_double(item, "uniform value"), p});
    return DiscreteDist(std::move(atoms));
  }
  if (kind == "atoms") {
    std::vector<Atom> atoms;
    double total = 0.0;
    for (const std::string& item : split(rest, ',')) {
      const std::vector<std::string> vp = split(item, ':');
      if (vp.size() != 2)
        throw std::invalid_argument("bad atom '" + item +
                                    "', expected value:prob");
      const double value = parse_double(vp[0], "atom value");
      const double prob = parse_double(vp[1], "atom prob");
      if (prob < 0.0) throw std::invalid_argument("atom prob must be >= 0");
      atoms.push_back({value, prob});
      total += prob;
    }
    if (total <= 0.0)
      throw std::invalid_argument("atom probs must sum to a positive value");
    for (auto& atom : atoms) atom.prob /= total;
    return DiscreteDist(std::move(atoms));
  }
  throw std::invalid_argument("unknown distribution kind: '" + kind + "'");
}

void emit_csv(const MomentReport& report, std::ostream& out) {
  out << "dataset,t,s,order,n,moment,moment_x_s,moment_x_s2\n";
  char buf[128];
  for (const MomentRow& row : report.rows) {
    const double ms = row.moment * static_cast<double>(row.s);
    const double ms2 = ms * static_cast<double>(row.s);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g", row.moment, ms, ms2);
    out << row.dataset << ',' << row.t << ',' << row.s << ',' << row.order
        << ',' << row.n << ',' << buf << '\n';
  }
  if (!out) throw std::runtime_error("failed writing CSV stream");
}

void emit_csv_file(const MomentReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for write");
  emit_csv(report, out);
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace csk
