// Command-line front end: fit, benchmark, simulate.
//
// Exit codes: 0 success, 2 input error (bad flags, unreadable or invalid
// files), 3 estimation error (empty class, singular system, degenerate unit).

#include <CLI11.hpp>

#include <charconv>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "lcr/lcr.hpp"

namespace fs = std::filesystem;

namespace {

struct DataOptions {
  std::string path;
  int items = 0;
  std::string categories;  // "4" or "4,4,..."; empty = infer from data
  bool intercept = false;
};

struct ConfigOptions {
  double tol = 1e-11;
  int max_iter = 100000;
  double epsilon = 0.01;
  double alpha = 1.0;
};

void add_data_options(CLI::App* cmd, DataOptions& opts) {
  cmd->add_option("--data", opts.path, "dataset CSV")->required();
  cmd->add_option("--items", opts.items,
                  "number of leading response columns (J)")
      ->required();
  cmd->add_option("--categories", opts.categories,
                  "category counts, one value or a comma list per item");
  cmd->add_flag("--intercept", opts.intercept,
                "prepend a constant covariate column");
}

void add_config_options(CLI::App* cmd, ConfigOptions& opts) {
  cmd->add_option("--tol", opts.tol, "convergence tolerance on the increment");
  cmd->add_option("--max-iter", opts.max_iter, "iteration cap");
  cmd->add_option("--epsilon", opts.epsilon, "hybrid switch threshold");
  cmd->add_option("--alpha", opts.alpha, "Newton step-size rescale in (0,1]");
}

std::vector<int> parse_categories(const std::string& text, int n_items) {
  if (text.empty()) return {};
  std::vector<int> counts;
  std::string field;
  std::stringstream stream(text);
  while (std::getline(stream, field, ',')) {
    int value = 0;
    const auto res =
        std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
      throw lcr::domain_error("--categories entry '" + field +
                              "' is not an integer");
    counts.push_back(value);
  }
  if (counts.size() == 1) counts.assign(n_items, counts[0]);
  return counts;
}

lcr::Dataset load_dataset(const DataOptions& opts) {
  return lcr::read_dataset_csv(opts.path, opts.items,
                               parse_categories(opts.categories, opts.items),
                               opts.intercept);
}

lcr::EstimatorConfig make_config(const ConfigOptions& opts,
                                 std::uint64_t seed) {
  lcr::EstimatorConfig cfg;
  cfg.tol = opts.tol;
  cfg.max_iter = opts.max_iter;
  cfg.epsilon = opts.epsilon;
  cfg.alpha = opts.alpha;
  cfg.seed = seed;
  cfg.validate();
  return cfg;
}

lcr::json config_to_json(const lcr::EstimatorConfig& cfg) {
  lcr::json j;
  j["tol"] = cfg.tol;
  j["max_iter"] = cfg.max_iter;
  j["epsilon"] = cfg.epsilon;
  j["alpha"] = cfg.alpha;
  j["decay_slack"] = cfg.decay_slack;
  j["seed"] = cfg.seed;
  return j;
}

lcr::json data_options_to_json(const DataOptions& opts) {
  lcr::json j;
  j["data"] = opts.path;
  j["items"] = opts.items;
  j["categories"] = opts.categories.empty() ? "inferred" : opts.categories;
  j["intercept"] = opts.intercept;
  return j;
}

void write_manifest(const std::string& path, lcr::json manifest) {
  lcr::json full;
  full["artifact_version"] = lcr::artifact_version;
  full.update(manifest);
  auto out = std::ofstream(path);
  out << full.dump(2) << "\n";
}

int run_fit(const DataOptions& data_opts, const ConfigOptions& cfg_opts,
            const std::string& algo_name, int n_classes, std::uint64_t seed,
            const std::string& out_dir) {
  const lcr::Algorithm algorithm = lcr::algorithm_from_string(algo_name);
  const lcr::Dataset data = load_dataset(data_opts);
  const lcr::EstimatorConfig cfg = make_config(cfg_opts, seed);
  const lcr::Initialization init = lcr::init_random(data, n_classes, seed);

  const lcr::FitResult result = lcr::fit(algorithm, data, n_classes, init, cfg);

  fs::create_directories(out_dir);
  const std::string params_path = (fs::path(out_dir) / "params.json").string();
  const std::string trace_path = (fs::path(out_dir) / "trace.csv").string();
  const std::string manifest_path =
      (fs::path(out_dir) / "manifest.json").string();
  lcr::write_params_json(params_path, result.params);
  lcr::write_trace_csv(trace_path, result.loglik_trace);

  lcr::json manifest;
  manifest["command"] = "fit";
  manifest["inputs"] = data_options_to_json(data_opts);
  manifest["algorithm"] = algo_name;
  manifest["classes"] = n_classes;
  manifest["config"] = config_to_json(cfg);
  manifest["outputs"] = {{"params", params_path}, {"trace", trace_path}};
  write_manifest(manifest_path, manifest);

  std::cout << "algorithm:   " << algo_name << "\n"
            << "loglik:      " << std::setprecision(12)
            << result.final_loglik() << "\n"
            << "iterations:  " << result.iterations << "\n"
            << "decays:      " << result.decay_count << "\n"
            << "converged:   " << (result.converged ? "yes" : "no") << "\n";
  if (result.switch_iteration)
    std::cout << "switched at: " << *result.switch_iteration << "\n";
  for (const auto& note : result.diagnostics) std::cout << "note: " << note << "\n";
  return 0;
}

int run_benchmark_cmd(const DataOptions& data_opts,
                      const ConfigOptions& cfg_opts,
                      const std::string& algos_text, int n_classes, int n_runs,
                      std::uint64_t seed, int jobs,
                      const std::string& out_dir) {
  std::vector<lcr::Algorithm> algorithms;
  std::stringstream stream(algos_text);
  std::string name;
  while (std::getline(stream, name, ','))
    algorithms.push_back(lcr::algorithm_from_string(name));

  const lcr::Dataset data = load_dataset(data_opts);
  const lcr::EstimatorConfig cfg = make_config(cfg_opts, seed);

  const lcr::BenchmarkReport report =
      lcr::run_benchmark(data, n_classes, algorithms, n_runs, cfg, seed, jobs);

  fs::create_directories(out_dir);
  const std::string report_path = (fs::path(out_dir) / "report.json").string();
  const std::string runs_path = (fs::path(out_dir) / "runs.csv").string();
  const std::string manifest_path =
      (fs::path(out_dir) / "manifest.json").string();
  lcr::write_report_json(report_path, report);
  lcr::write_runs_csv(runs_path, report);

  lcr::json manifest;
  manifest["command"] = "benchmark";
  manifest["inputs"] = data_options_to_json(data_opts);
  manifest["algorithms"] = algos_text;
  manifest["classes"] = n_classes;
  manifest["runs"] = n_runs;
  manifest["jobs"] = jobs;
  manifest["base_seed"] = seed;
  manifest["config"] = config_to_json(cfg);
  manifest["outputs"] = {{"report", report_path}, {"runs", runs_path}};
  write_manifest(manifest_path, manifest);

  std::cout << "runs: " << report.n_runs
            << "   max loglik: " << std::setprecision(12)
            << report.global_max_loglik << "\n\n";
  std::cout << std::left << std::setw(14) << "algorithm" << std::right
            << std::setw(8) << "decays" << std::setw(13) << "local modes"
            << std::setw(13) << "median gap" << std::setw(14) << "median iters"
            << std::setw(12) << "mean time" << std::setw(8) << "failed"
            << "\n";
  for (const auto& row : report.per_algorithm) {
    std::cout << std::left << std::setw(14) << lcr::to_string(row.algorithm)
              << std::right << std::setw(8)
              << (row.decay_runs ? std::to_string(*row.decay_runs) : "NA")
              << std::setw(13) << row.local_mode_runs << std::setw(13);
    if (row.median_gap)
      std::cout << std::setprecision(4) << *row.median_gap;
    else
      std::cout << "NA";
    std::cout << std::setw(14);
    if (row.median_iters_to_max)
      std::cout << std::setprecision(4) << *row.median_iters_to_max;
    else
      std::cout << "NA";
    std::cout << std::setw(11) << std::setprecision(3) << row.mean_wall_time
              << "s" << std::setw(8) << row.failed_runs << "\n";
  }
  return 0;
}

int run_simulate(const std::string& model_path, const std::string& preset,
                 int n, int n_classes, std::uint64_t seed, bool write_labels,
                 const std::string& out_dir) {
  lcr::TrueModel model;
  if (!preset.empty() && !model_path.empty())
    throw lcr::domain_error("--model and --preset are mutually exclusive");
  if (!preset.empty()) {
    if (preset != "election")
      throw lcr::domain_error("unknown preset '" + preset +
                              "' (available: election)");
    model = lcr::election_style_model();
  } else if (!model_path.empty()) {
    model = lcr::read_model_json(model_path);
  } else {
    throw lcr::domain_error("simulate needs --model FILE or --preset NAME");
  }
  if (n_classes > 0 && n_classes != model.params.n_classes)
    throw lcr::domain_error("--classes " + std::to_string(n_classes) +
                            " does not match the model's " +
                            std::to_string(model.params.n_classes));

  const lcr::SimulatedData sim = lcr::simulate(model, n, seed);

  fs::create_directories(out_dir);
  const std::string data_path = (fs::path(out_dir) / "data.csv").string();
  const std::string manifest_path =
      (fs::path(out_dir) / "manifest.json").string();
  lcr::write_dataset_csv(data_path, sim.dataset);
  lcr::json outputs = {{"data", data_path}};
  if (write_labels) {
    const std::string labels_path = (fs::path(out_dir) / "labels.csv").string();
    lcr::write_labels_csv(labels_path, sim.labels);
    outputs["labels"] = labels_path;
  }
  if (!preset.empty()) {
    const std::string model_out = (fs::path(out_dir) / "model.json").string();
    lcr::write_model_json(model_out, model);
    outputs["model"] = model_out;
  }

  lcr::json manifest;
  manifest["command"] = "simulate";
  manifest["model"] = preset.empty() ? model_path : ("preset:" + preset);
  manifest["n"] = n;
  manifest["seed"] = seed;
  manifest["outputs"] = outputs;
  write_manifest(manifest_path, manifest);

  std::cout << "wrote " << sim.dataset.n_units() << " units, "
            << sim.dataset.n_items() << " items, "
            << sim.dataset.n_covariates() << " covariates to " << data_path
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"latent class regression: one-step estimators and benchmarks"};
  app.require_subcommand(1);

  DataOptions data_opts;
  ConfigOptions cfg_opts;
  std::string out_dir = ".";
  std::uint64_t seed = 0;

  auto* fit_cmd = app.add_subcommand("fit", "fit one estimator to a dataset");
  std::string algo = "nested_em";
  int n_classes = 2;
  add_data_options(fit_cmd, data_opts);
  add_config_options(fit_cmd, cfg_opts);
  fit_cmd->add_option("--algo", algo, "estimator identifier")->required();
  fit_cmd->add_option("--classes", n_classes, "number of latent classes")
      ->required();
  fit_cmd->add_option("--seed", seed, "initialization seed");
  fit_cmd->add_option("--out-dir", out_dir, "output directory");

  auto* bench_cmd =
      app.add_subcommand("benchmark", "multi-start comparison of estimators");
  std::string algos =
      "nested_em,hybrid_em,nr_em,nr_em_q1,mm_em,three_step";
  int n_runs = 100;
  int jobs = 1;
  add_data_options(bench_cmd, data_opts);
  add_config_options(bench_cmd, cfg_opts);
  bench_cmd->add_option("--algos", algos, "comma-separated estimator list");
  bench_cmd->add_option("--classes", n_classes, "number of latent classes")
      ->required();
  bench_cmd->add_option("--runs", n_runs, "number of shared-init runs");
  bench_cmd->add_option("--seed", seed, "base seed; run k uses seed+k");
  bench_cmd->add_option("--jobs", jobs, "parallel workers over runs");
  bench_cmd->add_option("--out-dir", out_dir, "output directory");

  auto* sim_cmd = app.add_subcommand("simulate", "draw a synthetic dataset");
  std::string model_path;
  std::string preset;
  int n = 0;
  int sim_classes = 0;
  bool labels = false;
  sim_cmd->add_option("--model", model_path, "model JSON file");
  sim_cmd->add_option("--preset", preset, "built-in model (election)");
  sim_cmd->add_option("--n", n, "number of units")->required();
  sim_cmd->add_option("--classes", sim_classes,
                      "expected class count (checked against the model)");
  sim_cmd->add_option("--seed", seed, "simulation seed");
  sim_cmd->add_flag("--labels", labels, "also write the true class labels");
  sim_cmd->add_option("--out-dir", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*fit_cmd)
      return run_fit(data_opts, cfg_opts, algo, n_classes, seed, out_dir);
    if (*bench_cmd)
      return run_benchmark_cmd(data_opts, cfg_opts, algos, n_classes, n_runs,
                               seed, jobs, out_dir);
    if (*sim_cmd)
      return run_simulate(model_path, preset, n, sim_classes, seed, labels,
                          out_dir);
  } catch (const lcr::parse_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const lcr::shape_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const lcr::domain_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const lcr::error& e) {
    std::cerr << "estimation error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
