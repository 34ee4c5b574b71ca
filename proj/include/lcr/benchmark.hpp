#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "lcr/estimators.hpp"
#include "lcr/types.hpp"

// Multi-start benchmark: for each run a single random initialization is drawn
// and shared by every algorithm, then maximization quality (decays, local
// modes, gaps) and efficiency (iterations, time) are aggregated per algorithm.

namespace lcr {

struct RunRecord {
  int run_index = 0;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::nested_em;
  bool failed = false;
  std::string failure_message;
  double loglik = 0.0;
  int iterations = 0;
  int decay_count = 0;
  bool converged = false;
  double wall_time = 0.0;
};

struct AlgorithmSummary {
  Algorithm algorithm = Algorithm::nested_em;
  std::optional<int> decay_runs;  // absent for three_step (not comparable)
  int local_mode_runs = 0;
  std::optional<double> median_gap;           // over local-mode runs
  std::optional<double> median_iters_to_max;  // over runs reaching the max
  double mean_wall_time = 0.0;
  int failed_runs = 0;
};

struct BenchmarkReport {
  std::vector<AlgorithmSummary> per_algorithm;
  std::vector<RunRecord> runs;  // flat table, run-major then algorithm order
  double global_max_loglik = 0.0;
  int n_runs = 0;
  std::vector<std::uint64_t> seeds;
  double mode_tol = 1e-4;
};

namespace detail {

inline double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  if (values.size() % 2 == 1) return values[m];
  return 0.5 * (values[m - 1] + values[m]);
}

}  // namespace detail

// Converged log-likelihoods within mode_tol of the best are counted as
// reaching the maximum; anything lower is a local mode.
inline constexpr double benchmark_mode_tol = 1e-4;

inline BenchmarkReport run_benchmark(const Dataset& data, int n_classes,
                                     const std::vector<Algorithm>& algorithms,
                                     int n_runs, const EstimatorConfig& cfg,
                                     std::uint64_t base_seed, int jobs = 1) {
  if (n_runs < 1) throw domain_error("benchmark needs n_runs >= 1");
  if (algorithms.empty()) throw domain_error("benchmark needs at least one algorithm");
  data.validate();

  const int algo_count = static_cast<int>(algorithms.size());
  std::vector<RunRecord> records(
      static_cast<std::size_t>(n_runs) * algo_count);

  auto execute_run = [&](int run) {
    const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(run);
    const Initialization init = init_random(data, n_classes, seed);
    for (int a = 0; a < algo_count; ++a) {
      RunRecord& rec = records[static_cast<std::size_t>(run) * algo_count + a];
      rec.run_index = run;
      rec.seed = seed;
      rec.algorithm = algorithms[a];
      try {
        const FitResult fit_result =
            fit(algorithms[a], data, n_classes, init, cfg);
        rec.loglik = fit_result.final_loglik();
        rec.iterations = fit_result.iterations;
        rec.decay_count = fit_result.decay_count;
        rec.converged = fit_result.converged;
        rec.wall_time = fit_result.wall_time;
      } catch (const error& e) {
        rec.failed = true;
        rec.failure_message = e.what();
      }
    }
  };

  jobs = std::clamp(jobs, 1, n_runs);
  if (jobs == 1) {
    for (int run = 0; run < n_runs; ++run) execute_run(run);
  } else {
    std::atomic<int> next_run{0};
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (int w = 0; w < jobs; ++w)
      workers.emplace_back([&] {
        for (int run = next_run.fetch_add(1); run < n_runs;
             run = next_run.fetch_add(1))
          execute_run(run);
      });
    for (auto& worker : workers) worker.join();
  }

  BenchmarkReport report;
  report.runs = std::move(records);
  report.n_runs = n_runs;
  report.mode_tol = benchmark_mode_tol;
  report.seeds.resize(n_runs);
  for (int run = 0; run < n_runs; ++run)
    report.seeds[run] = base_seed + static_cast<std::uint64_t>(run);

  double global_max = detail::neg_inf;
  for (const RunRecord& rec : report.runs)
    if (!rec.failed && rec.loglik > global_max) global_max = rec.loglik;
  report.global_max_loglik = global_max;

  for (int a = 0; a < algo_count; ++a) {
    AlgorithmSummary summary;
    summary.algorithm = algorithms[a];
    int decay_runs = 0;
    double time_sum = 0.0;
    int time_count = 0;
    std::vector<double> gaps;
    std::vector<double> iters_to_max;
    for (int run = 0; run < n_runs; ++run) {
      const RunRecord& rec =
          report.runs[static_cast<std::size_t>(run) * algo_count + a];
      if (rec.failed) {
        ++summary.failed_runs;
        continue;
      }
      time_sum += rec.wall_time;
      ++time_count;
      if (rec.decay_count > 0) ++decay_runs;
      if (rec.loglik < global_max - report.mode_tol) {
        ++summary.local_mode_runs;
        gaps.push_back(global_max - rec.loglik);
      } else {
        iters_to_max.push_back(static_cast<double>(rec.iterations));
      }
    }
    if (algorithms[a] != Algorithm::three_step)
      summary.decay_runs = decay_runs;
    if (!gaps.empty()) summary.median_gap = detail::median(std::move(gaps));
    if (!iters_to_max.empty())
      summary.median_iters_to_max = detail::median(std::move(iters_to_max));
    if (time_count > 0) summary.mean_wall_time = time_sum / time_count;
    report.per_algorithm.push_back(summary);
  }
  return report;
}

}  // namespace lcr
