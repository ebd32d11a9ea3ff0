// Command-line front end for the clustering toolkit. Subcommands:
//
//   solve    load an instance, solve the relaxation, round it repeatedly
//   certify  sweep the triangle grid and certify an approximation factor
//   optf     search for the smallest certifiable factor on a value grid
//   gen      write generated instances (planted, gap, random, two-weight)
//   bench    sweep alphas and sizes, reporting mean rounding ratios as CSV
//
// Reports are JSON with a schema_version field and embed the invocation
// config for replay; runs are deterministic given flags and seed. Exit
// codes: 0 success, 2 certification failure, 3 input or usage error.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "asymcc/exact.hpp"
#include "asymcc/generators.hpp"
#include "asymcc/instance.hpp"
#include "asymcc/metric_lp.hpp"
#include "asymcc/optimal_f.hpp"
#include "asymcc/random.hpp"
#include "asymcc/reports.hpp"
#include "asymcc/rounding.hpp"
#include "asymcc/triple_check.hpp"

namespace {

using namespace asymcc;
using ordered_json = nlohmann::ordered_json;

// --threads wins, then CC_THREADS, then the hardware count.
int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CC_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

Topology parse_mode(const std::string& mode) {
  if (mode == "complete") return Topology::complete;
  if (mode == "bipartite") return Topology::bipartite;
  throw std::invalid_argument("mode must be complete or bipartite");
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

int count_pairs(const Instance& inst) {
  int pairs = 0;
  for (int u = 0; u < inst.n(); ++u)
    for (int v = u + 1; v < inst.n(); ++v)
      if (inst.sign(u, v) != Sign::missing) ++pairs;
  return pairs;
}

struct SolveArgs {
  std::string input;
  std::string out;
  std::string trace;
  int trials = 50;
  std::uint64_t seed = 1;
  int threads = 0;
  bool exact = false;
};

int cmd_solve(const SolveArgs& args) {
  Instance inst = read_instance_file(args.input);
  ValidationReport vr = validate(inst);
  if (!vr.ok()) {
    for (const ValidationIssue& issue : vr.issues)
      std::cerr << "invalid instance: " << issue.message << "\n";
    return 3;
  }
  double w_scale_in = inst.w_scale();
  normalize(inst);

  MetricSolution lp = solve_metric_lp(inst);
  RoundingFunction f = make_f(inst.alpha(), inst.topology());

  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(args.trials));
  for (int t = 0; t < args.trials; ++t)
    seeds[t] = mix_seed(args.seed, static_cast<std::uint64_t>(t));
  std::vector<double> costs(seeds.size());
  int workers = std::min<int>(resolve_threads(args.threads), args.trials);
  auto run_range = [&](int begin, int end) {
    for (int t = begin; t < end; ++t)
      costs[t] = disagreement_cost(inst, pivot_round(lp, f, seeds[t]).labels);
  };
  if (workers <= 1) {
    run_range(0, args.trials);
  } else {
    std::vector<std::thread> pool;
    int chunk = (args.trials + workers - 1) / workers;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back(run_range, w * chunk,
                        std::min(args.trials, (w + 1) * chunk));
    for (std::thread& th : pool) th.join();
  }

  double best = costs[0], worst = costs[0], sum = 0.0;
  std::size_t best_at = 0;
  for (std::size_t t = 0; t < costs.size(); ++t) {
    sum += costs[t];
    if (costs[t] < best) {
      best = costs[t];
      best_at = t;
    }
    worst = std::max(worst, costs[t]);
  }
  double mean = sum / static_cast<double>(costs.size());

  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["config"] = {{"command", "solve"},   {"input", args.input},
                 {"trials", args.trials}, {"seed", args.seed},
                 {"threads", args.threads}, {"exact", args.exact},
                 {"trace", args.trace}};
  j["instance"] = {{"n", inst.n()},
                   {"mode", to_string(inst.topology())},
                   {"alpha", inst.alpha()},
                   {"w_scale", w_scale_in},
                   {"pairs", count_pairs(inst)}};
  j["lp_objective"] = lp.objective;
  j["a_thm"] = approximation_factor(inst.alpha(), inst.topology());
  ordered_json trials = ordered_json::array();
  for (std::size_t t = 0; t < costs.size(); ++t)
    trials.push_back({{"seed", seeds[t]}, {"alg_cost", costs[t]}});
  j["trials"] = std::move(trials);
  j["best_alg"] = best;
  j["mean_alg"] = mean;
  j["worst_alg"] = worst;
  if (lp.objective > 1e-12) {
    j["ratio_best"] = best / lp.objective;
    j["ratio_mean"] = mean / lp.objective;
    j["ratio_worst"] = worst / lp.objective;
  } else {
    j["ratio_best"] = nullptr;
    j["ratio_mean"] = nullptr;
    j["ratio_worst"] = nullptr;
  }
  if (args.exact) {
    ExactResult ex = exact_opt(inst);
    j["exact"] = {{"opt_cost", ex.opt_cost},
                  {"partitions_enumerated", ex.partitions_enumerated}};
  }
  write_text(args.out, j.dump(2) + "\n");

  if (!args.trace.empty()) {
    // Replay the best trial; one JSON object per line, one line per step.
    PivotResult best_run = pivot_round(lp, f, seeds[best_at]);
    std::ostringstream lines;
    for (std::size_t s = 0; s < best_run.trace.size(); ++s) {
      const PivotStep& step = best_run.trace[s];
      ordered_json row = {{"step", s},
                          {"pivot", step.pivot},
                          {"R", step.r},
                          {"cluster_members", step.members}};
      lines << row.dump() << "\n";
    }
    write_text(args.trace, lines.str());
  }
  return 0;
}

struct CertifyArgs {
  double alpha = 0.0;
  std::string mode = "complete";
  double step = 0.005;
  double rho = 0.0;  // 0 means the closed-form factor for the mode
  std::string f_table;
  int threads = 0;
  std::string out;
};

int cmd_certify(const CertifyArgs& args) {
  Topology topo = parse_mode(args.mode);
  double rho =
      args.rho > 0.0 ? args.rho : approximation_factor(args.alpha, topo);
  RoundingFunction f =
      args.f_table.empty()
          ? make_f(args.alpha, topo)
          : RoundingFunction::tabulated(args.alpha, rho,
                                        read_f_table_file(args.f_table));
  CertReport report = certify_grid(args.alpha, f, rho, args.step, topo,
                                   resolve_threads(args.threads));
  ordered_json j = ordered_json::parse(cert_report_json(report, topo));
  j["config"] = {{"command", "certify"}, {"alpha", args.alpha},
                 {"mode", args.mode},    {"step", args.step},
                 {"rho", rho},           {"f_table", args.f_table},
                 {"threads", args.threads}};
  write_text(args.out, j.dump(2) + "\n");
  if (!report.pass()) {
    std::cerr << "certification failed: min margin " << report.min_margin
              << " at x = (" << report.argmin_x[0] << ", "
              << report.argmin_x[1] << ", " << report.argmin_x[2]
              << "), sigma = " << signature_string(report.argmin_sigma)
              << "\n";
    return 2;
  }
  return 0;
}

struct OptfArgs {
  double alpha = 0.0;
  double step = 0.005;
  double tol = 1e-3;
  int threads = 0;
  std::string out = "optf";
};

int cmd_optf(const OptfArgs& args) {
  OptFResult r =
      compute_a_opt(args.alpha, args.step, args.tol, resolve_threads(args.threads));
  std::string csv_path = args.out + ".csv";
  std::string json_path = args.out + ".json";
  write_f_table_file(csv_path, r.table);
  ordered_json j = ordered_json::parse(optf_summary_json(r));
  j["config"] = {{"command", "optf"}, {"alpha", args.alpha},
                 {"step", args.step}, {"tol", args.tol},
                 {"threads", args.threads}, {"table_csv", csv_path}};
  write_text(json_path, j.dump(2) + "\n");
  if (!r.certified)
    std::cerr << "warning: re-certification on the evaluation grid failed "
                 "(min margin "
              << r.margin << "); the summary records certified = false\n";
  return 0;
}

struct GenCommon {
  std::uint64_t seed = 1;
  std::string out = "instance.txt";
};

int finish_gen(const Instance& inst, const GenCommon& common) {
  ValidationReport vr = validate(inst);
  if (!vr.ok()) {
    for (const ValidationIssue& issue : vr.issues)
      std::cerr << "generated instance failed validation: " << issue.message
                << "\n";
    return 3;
  }
  write_instance_file(common.out, inst);
  std::cerr << "wrote " << common.out << ": n = " << inst.n()
            << ", pairs = " << count_pairs(inst) << "\n";
  return 0;
}

struct BenchArgs {
  std::vector<double> alphas = {0.5, 0.1};
  std::vector<int> sizes = {6, 8};
  int instances = 3;
  int trials = 20;
  double density = 0.5;
  std::uint64_t seed = 1;
  std::string out = "bench.csv";
};

int cmd_bench(const BenchArgs& args) {
  std::ostringstream csv;
  csv << "alpha,n,instances,trials,mean_lp,mean_alg,mean_ratio,a_thm\n";
  std::uint64_t cell = 0;
  for (double alpha : args.alphas)
    for (int n : args.sizes) {
      double sum_lp = 0.0, sum_alg = 0.0, sum_ratio = 0.0;
      int ratio_count = 0;
      for (int k = 0; k < args.instances; ++k) {
        Instance inst = random_instance(
            n, alpha, args.density, mix_seed(args.seed, cell * 1009 + k));
        MetricSolution lp = solve_metric_lp(inst);
        RoundingFunction f = make_f(alpha, Topology::complete);
        double alg_sum = 0.0;
        for (int t = 0; t < args.trials; ++t) {
          std::uint64_t s = mix_seed(args.seed, cell * 1009 + k * 131 + t + 7);
          alg_sum +=
              disagreement_cost(inst, pivot_round(lp, f, s).labels);
        }
        double alg_mean = alg_sum / args.trials;
        sum_lp += lp.objective;
        sum_alg += alg_mean;
        if (lp.objective > 1e-12) {
          sum_ratio += alg_mean / lp.objective;
          ++ratio_count;
        }
      }
      csv << alpha << "," << n << "," << args.instances << "," << args.trials
          << "," << sum_lp / args.instances << "," << sum_alg / args.instances
          << ","
          << (ratio_count > 0 ? std::to_string(sum_ratio / ratio_count)
                              : std::string("nan"))
          << "," << approximation_factor(alpha, Topology::complete) << "\n";
      ++cell;
    }
  write_text(args.out, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Correlation clustering solver and factor certification"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand(
      "solve", "Solve the relaxation and round it for seeded trials");
  solve->add_option("--in", solve_args.input, "Instance file")->required();
  solve->add_option("--trials", solve_args.trials, "Rounding trials")
      ->check(CLI::PositiveNumber);
  solve->add_option("--seed", solve_args.seed, "Base RNG seed");
  solve->add_option("--threads", solve_args.threads,
                    "Worker threads (0: CC_THREADS, then hardware)");
  solve->add_option("--out", solve_args.out, "Report path (default stdout)");
  solve->add_option("--trace", solve_args.trace,
                    "Write the best trial's step trace as JSON lines");
  solve->add_flag("--exact", solve_args.exact,
                  "Include the exhaustive optimum (n <= 13)");

  CertifyArgs certify_args;
  CLI::App* certify = app.add_subcommand(
      "certify", "Certify an approximation factor over the triangle grid");
  certify->add_option("--alpha", certify_args.alpha, "Asymmetry parameter")
      ->required()
      ->check(CLI::Range(1e-9, 1.0));
  certify->add_option("--mode", certify_args.mode, "complete or bipartite")
      ->check(CLI::IsMember({"complete", "bipartite"}));
  certify->add_option("--step", certify_args.step, "Grid spacing")
      ->check(CLI::Range(1e-4, 0.5));
  certify->add_option("--rho", certify_args.rho,
                      "Factor to certify (default: closed form)");
  certify->add_option("--f-table", certify_args.f_table,
                      "Tabulated rounding function CSV (default: closed form)");
  certify->add_option("--threads", certify_args.threads,
                      "Worker threads (0: CC_THREADS, then hardware)");
  certify->add_option("--out", certify_args.out, "Report path (default stdout)");

  OptfArgs optf_args;
  CLI::App* optf = app.add_subcommand(
      "optf", "Search for the smallest certifiable factor on a value grid");
  optf->add_option("--alpha", optf_args.alpha, "Asymmetry parameter")
      ->required()
      ->check(CLI::Range(1e-9, 1.0));
  optf->add_option("--step", optf_args.step, "Value grid spacing")
      ->check(CLI::Range(1e-4, 0.05));
  optf->add_option("--tol", optf_args.tol, "Bisection tolerance")
      ->check(CLI::Range(1e-4, 1.0));
  optf->add_option("--threads", optf_args.threads,
                   "Worker threads (0: CC_THREADS, then hardware)");
  optf->add_option("--out", optf_args.out,
                   "Output base path; writes <out>.csv and <out>.json");

  CLI::App* gen = app.add_subcommand("gen", "Generate instance files");
  gen->require_subcommand(1);

  GenCommon planted_common;
  std::vector<int> planted_sizes = {5, 5};
  double planted_p = 0.3, planted_q = 0.9;
  CLI::App* planted = gen->add_subcommand(
      "planted", "Ground-truth clusters with noisy observations");
  planted->add_option("--sizes", planted_sizes, "Cluster sizes")
      ->delimiter(',');
  planted->add_option("--p", planted_p, "Within-cluster positive probability");
  planted->add_option("--q", planted_q, "Cross-cluster negative probability");
  planted->add_option("--seed", planted_common.seed, "RNG seed");
  planted->add_option("--out", planted_common.out, "Instance path");

  GenCommon gap_common;
  GapParams gap_params;
  std::string gap_mode = "complete";
  CLI::App* gap = gen->add_subcommand(
      "gap", "Expander-based instance with a fractional solution sidecar");
  gap->add_option("--alpha", gap_params.alpha, "Asymmetry parameter")
      ->required()
      ->check(CLI::Range(1e-9, 1.0));
  gap->add_option("--n", gap_params.n,
                  "Vertex count (0: sized from alpha)");
  gap->add_option("--mode", gap_mode, "complete or bipartite")
      ->check(CLI::IsMember({"complete", "bipartite"}));
  gap->add_option("--seed", gap_common.seed, "RNG seed");
  gap->add_option("--out", gap_common.out, "Instance path");

  GenCommon random_common;
  int random_n = 8;
  double random_alpha = 0.5, random_density = 0.5;
  CLI::App* random_cmd = gen->add_subcommand(
      "random", "Uniform signs and in-band uniform weights");
  random_cmd->add_option("--n", random_n, "Vertex count")
      ->check(CLI::Range(2, 100000));
  random_cmd->add_option("--alpha", random_alpha, "Asymmetry parameter")
      ->check(CLI::Range(1e-9, 1.0));
  random_cmd->add_option("--density", random_density,
                         "Positive sign probability")
      ->check(CLI::Range(0.0, 1.0));
  random_cmd->add_option("--seed", random_common.seed, "RNG seed");
  random_cmd->add_option("--out", random_common.out, "Instance path");

  GenCommon tw_common;
  int tw_n = 8;
  double tw_wpos = 1.0, tw_wneg = 0.5, tw_density = 0.5;
  CLI::App* two_weight = gen->add_subcommand(
      "two-weight", "One weight for positives, another for negatives");
  two_weight->add_option("--n", tw_n, "Vertex count")
      ->check(CLI::Range(2, 100000));
  two_weight->add_option("--wpos", tw_wpos, "Positive pair weight")
      ->check(CLI::PositiveNumber);
  two_weight->add_option("--wneg", tw_wneg, "Negative pair weight")
      ->check(CLI::PositiveNumber);
  two_weight->add_option("--density", tw_density, "Positive sign probability")
      ->check(CLI::Range(0.0, 1.0));
  two_weight->add_option("--seed", tw_common.seed, "RNG seed");
  two_weight->add_option("--out", tw_common.out, "Instance path");

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand(
      "bench", "Sweep alphas and sizes, write mean rounding ratios as CSV");
  bench->add_option("--alphas", bench_args.alphas, "Alpha values")
      ->delimiter(',');
  bench->add_option("--sizes", bench_args.sizes, "Vertex counts")
      ->delimiter(',');
  bench->add_option("--instances", bench_args.instances,
                    "Instances per (alpha, n) cell")
      ->check(CLI::PositiveNumber);
  bench->add_option("--trials", bench_args.trials,
                    "Rounding trials per instance")
      ->check(CLI::PositiveNumber);
  bench->add_option("--density", bench_args.density,
                    "Positive sign probability")
      ->check(CLI::Range(0.0, 1.0));
  bench->add_option("--seed", bench_args.seed, "Base RNG seed");
  bench->add_option("--out", bench_args.out, "CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }

  try {
    if (solve->parsed()) return cmd_solve(solve_args);
    if (certify->parsed()) return cmd_certify(certify_args);
    if (optf->parsed()) return cmd_optf(optf_args);
    if (gen->parsed()) {
      if (planted->parsed()) {
        PlantedParams p;
        p.cluster_sizes = planted_sizes;
        p.p_plus = planted_p;
        p.q_minus = planted_q;
        p.seed = planted_common.seed;
        return finish_gen(planted_instance(p).instance, planted_common);
      }
      if (gap->parsed()) {
        gap_params.bipartite = parse_mode(gap_mode) == Topology::bipartite;
        gap_params.seed = gap_common.seed;
        if (gap_params.n == 0) gap_params.n = suggested_gap_n(gap_params.alpha);
        GapInstance gi = gap_instance(gap_params);
        int rc = finish_gen(gi.instance, gap_common);
        if (rc == 0) {
          write_metric_csv_file(gap_common.out + ".x.csv", gi.fractional);
          std::cerr << "wrote " << gap_common.out << ".x.csv: epsilon = "
                    << gi.epsilon << ", resamples = " << gi.resamples << "\n";
        }
        return rc;
      }
      if (random_cmd->parsed())
        return finish_gen(random_instance(random_n, random_alpha,
                                          random_density, random_common.seed),
                          random_common);
      if (two_weight->parsed()) {
        double alpha = std::min(tw_wpos, tw_wneg) / tw_wpos;
        Instance inst =
            Instance::complete(tw_n, std::min(1.0, alpha), tw_wpos);
        Rng rng(tw_common.seed);
        for (int u = 0; u < tw_n; ++u)
          for (int v = u + 1; v < tw_n; ++v) {
            if (rng.uniform01() < tw_density)
              inst.set_pair(u, v, Sign::positive, tw_wpos);
            else
              inst.set_pair(u, v, Sign::negative, tw_wneg);
          }
        return finish_gen(inst, tw_common);
      }
    }
    if (bench->parsed()) return cmd_bench(bench_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}
