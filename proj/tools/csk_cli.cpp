// csk: CountSketch experiment runner and exact-oracle dumper.
//
// Subcommands:
//   freq          frequency-estimation moment experiment, CSV output
//   inner         inner-product moment experiment, CSV output
//   median-check  median-moment inequality check on a discrete distribution
//   oracle        exact error distribution under fully-random hashing

#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "csk/datasets.hpp"
#include "csk/exact_oracle.hpp"
#include "csk/experiment.hpp"
#include "csk/hashing.hpp"
#include "csk/median_stats.hpp"
#include "csk/sketch.hpp"

namespace {

std::vector<uint32_t> parse_t_list(const std::string& text) {
  std::vector<uint32_t> values;
  size_t start = 0;
  while (start <= text.size()) {
    const size_t pos = text.find(',', start);
    const std::string item =
        text.substr(start, pos == std::string::npos ? pos : pos - start);
    if (item.empty()) throw CLI::ValidationError("--t", "empty list item");
    values.push_back(static_cast<uint32_t>(std::stoul(item)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (values.empty()) throw CLI::ValidationError("--t", "empty list");
  return values;
}

// "MIN..MAX" expands to every power of two in [MIN, MAX]; a single number
// denotes a one-point grid.
std::vector<uint32_t> parse_s_grid(const std::string& text) {
  uint64_t lo = 0;
  uint64_t hi = 0;
  const size_t dots = text.find("..");
  if (dots == std::string::npos) {
    lo = hi = std::stoull(text);
  } else {
    lo = std::stoull(text.substr(0, dots));
    hi = std::stoull(text.substr(dots + 2));
  }
  if (lo < 2 || hi < lo)
    throw CLI::ValidationError("--s-grid", "expected MIN..MAX with MIN >= 2");
  std::vector<uint32_t> grid;
  for (uint64_t s = std::bit_ceil(lo); s <= hi; s *= 2)
    grid.push_back(static_cast<uint32_t>(s));
  if (grid.empty())
    throw CLI::ValidationError("--s-grid", "no powers of two in range");
  return grid;
}

void print_summary(const csk::MomentReport& report) {
  for (const csk::MomentRow& row : report.rows) {
    std::fprintf(stderr,
                 "%s t=%u s=%u order=%d n=%llu moment=%.6g se=%.3g "
                 "moment*s=%.6g moment*s^2=%.6g\n",
                 row.dataset.c_str(), row.t, row.s, row.order,
                 static_cast<unsigned long long>(row.n), row.moment,
                 row.std_error, row.moment * row.s,
                 row.moment * row.s * row.s);
  }
}

void emit_report(const csk::MomentReport& report, const std::string& out) {
  if (out.empty())
    csk::emit_csv(report, std::cout);
  else
    csk::emit_csv_file(report, out);
  print_summary(report);
}

struct CommonFlags {
  std::string dataset;
  std::string t_list = "1,2";
  std::string s_grid = "4..1024";
  uint64_t trials = 1000;
  uint64_t queries = 100;
  int order = 2;
  std::string query_mode;
  uint64_t seed = 0;
  std::string sign_family = "pairwise";
  std::string out;
  uint32_t threads = 0;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_queries) {
  cmd->add_option("--dataset", flags.dataset,
                  "zipf:N:ALPHA | onehot:D:I | disjoint:NNZ | counts:PATH | "
                  "transactions:PATH")
      ->required();
  cmd->add_option("--t", flags.t_list, "comma-separated t values (rows = 2t-1)")
      ->capture_default_str();
  cmd->add_option("--s-grid", flags.s_grid,
                  "MIN..MAX, expanded to powers of two")
      ->capture_default_str();
  cmd->add_option("--trials", flags.trials, "independent sketch rebuilds")
      ->capture_default_str();
  if (with_queries)
    cmd->add_option("--queries", flags.queries, "queries per trial")
        ->capture_default_str();
  cmd->add_option("--order", flags.order, "moment order")
      ->check(CLI::IsMember({2, 4}))
      ->capture_default_str();
  cmd->add_option("--seed", flags.seed, "master seed")->capture_default_str();
  cmd->add_option("--sign-family", flags.sign_family, "pairwise | fourwise")
      ->check(CLI::IsMember({"pairwise", "fourwise"}))
      ->capture_default_str();
  cmd->add_option("--out", flags.out, "CSV path (default: stdout)");
  cmd->add_option("--threads", flags.threads,
                  "worker threads (0 = hardware)");
}

csk::ExperimentConfig to_config(const CommonFlags& flags) {
  csk::ExperimentConfig cfg;
  cfg.dataset = csk::parse_dataset_spec(flags.dataset);
  cfg.t_values = parse_t_list(flags.t_list);
  cfg.s_grid = parse_s_grid(flags.s_grid);
  cfg.trials = flags.trials;
  cfg.queries_per_trial = flags.queries;
  cfg.moment_order = flags.order;
  if (flags.query_mode == "support")
    cfg.query_mode = csk::QueryMode::support_only;
  else if (flags.query_mode == "all")
    cfg.query_mode = csk::QueryMode::all_indices;
  else if (!flags.query_mode.empty())
    throw CLI::ValidationError("--query-mode", "expected support|all");
  cfg.seed = flags.seed;
  cfg.sign_family = flags.sign_family == "fourwise"
                        ? csk::SignFamily::fourwise
                        : csk::SignFamily::pairwise;
  cfg.out_path = flags.out;
  cfg.threads = flags.threads;
  return cfg;
}

void print_dist(const csk::DiscreteDist& dist, const std::string& out_path) {
  std::FILE* fp = out_path.empty() ? stdout : std::fopen(out_path.c_str(), "w");
  if (fp == nullptr)
    throw std::runtime_error("cannot open '" + out_path + "' for write");
  std::fprintf(fp, "value,prob\n");
  for (const csk::Atom& atom : dist.atoms())
    std::fprintf(fp, "%.17g,%.17g\n", atom.value, atom.prob);
  std::fprintf(fp, "# E[err]    = %.17g\n", dist.moment_about(0.0, 1, false));
  std::fprintf(fp, "# E|err|    = %.17g\n", dist.moment_about(0.0, 1, true));
  std::fprintf(fp, "# E[err^2]  = %.17g\n", dist.moment_about(0.0, 2, false));
  std::fprintf(fp, "# E[err^4]  = %.17g\n", dist.moment_about(0.0, 4, false));
  if (out_path.empty()) {
    std::fflush(fp);
  } else if (std::fclose(fp) != 0) {
    throw std::runtime_error("failed writing '" + out_path + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CountSketch moment experiments and exact oracles"};
  app.require_subcommand(1);

  CommonFlags freq_flags;
  CLI::App* freq = app.add_subcommand(
      "freq", "frequency-estimation moments over an s-grid");
  add_common(freq, freq_flags, /*with_queries=*/true);
  freq->add_option("--query-mode", freq_flags.query_mode,
                   "support | all (default: all for one-hot, else support)");

  CommonFlags inner_flags;
  std::string inner_dataset2;
  CLI::App* inner =
      app.add_subcommand("inner", "inner-product moments over an s-grid");
  add_common(inner, inner_flags, /*with_queries=*/false);
  inner->add_option("--dataset2", inner_dataset2,
                    "second vector (defaults to the dataset's own pair)");

  std::string mc_dist = "tightness:100";
  uint32_t mc_t = 2;
  int mc_q = 1;
  uint64_t mc_trials = 100000;
  uint64_t mc_seed = 0;
  CLI::App* mc = app.add_subcommand(
      "median-check", "exact and Monte-Carlo median-moment inequality check");
  mc->add_option("--dist", mc_dist,
                 "tightness:K | point:V | uniform:v1,v2,... | "
                 "atoms:v1:p1,v2:p2,...")
      ->capture_default_str();
  mc->add_option("--t", mc_t, "median of 2t-1 draws")->capture_default_str();
  mc->add_option("--q", mc_q, "base moment order")->capture_default_str();
  mc->add_option("--trials", mc_trials, "Monte-Carlo draws")
      ->capture_default_str();
  mc->add_option("--seed", mc_seed, "RNG seed")->capture_default_str();

  std::string or_dataset;
  std::string or_dataset2;
  uint64_t or_query = 0;
  bool or_have_query = false;
  uint32_t or_s = 4;
  uint32_t or_t = 1;
  uint64_t or_max_configs = 10'000'000;
  std::string or_out;
  CLI::App* oracle = app.add_subcommand(
      "oracle", "exact error distribution under fully-random hashing");
  oracle->add_option("--dataset", or_dataset, "vector to sketch")->required();
  oracle->add_option("--dataset2", or_dataset2,
                     "second vector: dumps the inner-product error instead");
  CLI::Option* qopt =
      oracle->add_option("--query", or_query, "point-query index");
  oracle->add_option("--s", or_s, "columns (power of two)")
      ->capture_default_str();
  oracle->add_option("--t", or_t, "median of 2t-1 rows")
      ->capture_default_str();
  oracle->add_option("--max-configs", or_max_configs, "enumeration cap")
      ->capture_default_str();
  oracle->add_option("--out", or_out, "output path (default: stdout)");

  CLI11_PARSE(app, argc, argv);
  or_have_query = qopt->count() > 0;

  try {
    if (freq->parsed()) {
      emit_report(csk::run_freq_experiment(to_config(freq_flags)),
                  freq_flags.out);
    } else if (inner->parsed()) {
      csk::ExperimentConfig cfg = to_config(inner_flags);
      if (!inner_dataset2.empty())
        cfg.dataset2 = csk::parse_dataset_spec(inner_dataset2);
      emit_report(csk::run_inner_experiment(cfg), inner_flags.out);
    } else if (mc->parsed()) {
      const csk::DiscreteDist dist = csk::parse_dist_spec(mc_dist);
      const csk::MedianCheckReport rep =
          csk::run_median_moment_check(dist, mc_t, mc_q, mc_trials, mc_seed);
      std::printf("t=%u q=%d trials=%llu\n", rep.t, rep.q,
                  static_cast<unsigned long long>(rep.trials));
      std::printf("exact   E|Y-mu|^(tq) = %.17g\n", rep.exact_left);
      std::printf("mc      E|Y-mu|^(tq) = %.17g\n", rep.mc_left);
      std::printf("bound   C(2t-1,t)*E[|X-mu|^q]^t = %.17g\n", rep.right);
      std::printf("ratio   exact/bound = %.17g\n", rep.ratio);
      if (rep.exact_left > rep.right) {
        std::fprintf(stderr, "error: inequality violated\n");
        return 1;
      }
    } else if (oracle->parsed()) {
      const csk::MaterializedDataset mat =
          csk::materialize(csk::parse_dataset_spec(or_dataset));
      const csk::EnumLimits limits{or_max_configs};
      csk::DiscreteDist dist = csk::DiscreteDist::point_mass(0.0);
      if (!or_dataset2.empty()) {
        const csk::MaterializedDataset mat2 =
            csk::materialize(csk::parse_dataset_spec(or_dataset2));
        const csk::DiscreteDist row =
            csk::single_row_inner_error_dist(mat.v, mat2.v, or_s, limits);
        dist = csk::median_of_iid_distribution(row, or_t);
      } else {
        if (!or_have_query)
          throw CLI::ValidationError("--query",
                                     "required for point-query oracles");
        dist = csk::median_point_error_dist(mat.v, or_query, or_s, or_t,
                                            limits);
      }
      print_dist(dist, or_out);
    }
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
  return 0;
}
