#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lcr/benchmark.hpp"
#include "lcr/simulate.hpp"
#include "lcr/types.hpp"

// File formats: datasets are CSV with a header row, the first J columns
// holding 1-based integer response codes and the remaining columns holding
// covariates. Parameters and models are JSON with nested arrays. Traces are
// two-column flat tables. All doubles are written shortest-round-trip, so
// identical values give identical bytes.

namespace lcr {

inline constexpr const char* artifact_version = "0.1.0";

using json = nlohmann::ordered_json;

namespace detail {

inline std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(field);
  for (auto& f : fields) {
    const auto begin = f.find_first_not_of(" \t");
    const auto end = f.find_last_not_of(" \t");
    f = (begin == std::string::npos) ? "" : f.substr(begin, end - begin + 1);
  }
  return fields;
}

inline std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw parse_error(path, 0, 0, "cannot open for writing");
  return out;
}

}  // namespace detail

// --- dataset CSV ---

// Reads a dataset whose first n_items columns are responses. When
// declared_categories is nonempty it fixes each K_j and out-of-range codes are
// rejected; otherwise K_j is the largest observed code (at least 2).
// add_intercept prepends a constant column to the covariates.
inline Dataset read_dataset_csv(const std::string& path, int n_items,
                                const std::vector<int>& declared_categories = {},
                                bool add_intercept = false) {
  if (n_items < 1) throw domain_error("--items must be >= 1");
  if (!declared_categories.empty() &&
      static_cast<int>(declared_categories.size()) != n_items)
    throw domain_error("--categories must list one count per response item");

  std::ifstream in(path);
  if (!in) throw parse_error(path, 0, 0, "cannot open file");
  std::string line;
  if (!std::getline(in, line)) throw parse_error(path, 1, 0, "missing header row");
  const auto header = detail::split_csv_line(line);
  const int n_cols = static_cast<int>(header.size());
  if (n_cols < n_items)
    throw parse_error(path, 1, 0,
                      "header has " + std::to_string(n_cols) +
                          " columns but --items is " + std::to_string(n_items));
  const int n_covariates = n_cols - n_items;
  if (n_covariates == 0 && !add_intercept)
    throw parse_error(path, 1, 0,
                      "no covariate columns; pass --intercept or add columns");

  std::vector<std::vector<int>> responses;
  std::vector<std::vector<double>> covariates;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto fields = detail::split_csv_line(line);
    if (static_cast<int>(fields.size()) != n_cols)
      throw parse_error(path, row, 0,
                        "expected " + std::to_string(n_cols) + " fields, got " +
                            std::to_string(fields.size()));
    std::vector<int> resp(n_items);
    for (int j = 0; j < n_items; ++j) {
      const std::string& f = fields[j];
      int code = 0;
      const auto res = std::from_chars(f.data(), f.data() + f.size(), code);
      if (res.ec != std::errc{} || res.ptr != f.data() + f.size())
        throw parse_error(path, row, j + 1,
                          "response code '" + f + "' is not an integer");
      if (code < 1)
        throw parse_error(path, row, j + 1,
                          "response code " + f + " must be >= 1");
      if (!declared_categories.empty() && code > declared_categories[j])
        throw parse_error(path, row, j + 1,
                          "response code " + f + " exceeds declared K_j = " +
                              std::to_string(declared_categories[j]));
      resp[j] = code - 1;  // 0-based from here on
    }
    std::vector<double> cov(n_covariates);
    for (int c = 0; c < n_covariates; ++c) {
      const std::string& f = fields[n_items + c];
      char* end = nullptr;
      cov[c] = std::strtod(f.c_str(), &end);
      if (end != f.c_str() + f.size() || f.empty())
        throw parse_error(path, row, n_items + c + 1,
                          "covariate '" + f + "' is not numeric");
    }
    responses.push_back(std::move(resp));
    covariates.push_back(std::move(cov));
  }
  if (responses.empty()) throw parse_error(path, row, 0, "no data rows");

  const int n = static_cast<int>(responses.size());
  Dataset data;
  data.responses.resize(n, n_items);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n_items; ++j) data.responses(i, j) = responses[i][j];

  data.category_counts.resize(n_items);
  for (int j = 0; j < n_items; ++j) {
    if (!declared_categories.empty()) {
      data.category_counts[j] = declared_categories[j];
    } else {
      int max_code = 1;
      for (int i = 0; i < n; ++i)
        max_code = std::max(max_code, data.responses(i, j) + 1);
      data.category_counts[j] = std::max(max_code, 2);
    }
  }

  const int p = n_covariates + (add_intercept ? 1 : 0);
  data.design.resize(n, p);
  for (int i = 0; i < n; ++i) {
    int col = 0;
    if (add_intercept) data.design(i, col++) = 1.0;
    for (int c = 0; c < n_covariates; ++c) data.design(i, col++) = covariates[i][c];
  }
  data.validate();
  return data;
}

inline void write_dataset_csv(const std::string& path, const Dataset& data) {
  auto out = detail::open_for_write(path);
  for (int j = 0; j < data.n_items(); ++j) out << "y" << (j + 1) << ",";
  for (int c = 0; c < data.n_covariates(); ++c)
    out << "x" << (c + 1) << (c + 1 < data.n_covariates() ? "," : "");
  out << "\n";
  for (int i = 0; i < data.n_units(); ++i) {
    for (int j = 0; j < data.n_items(); ++j)
      out << (data.responses(i, j) + 1) << ",";
    for (int c = 0; c < data.n_covariates(); ++c)
      out << detail::format_double(data.design(i, c))
          << (c + 1 < data.n_covariates() ? "," : "");
    out << "\n";
  }
}

inline void write_labels_csv(const std::string& path,
                             const std::vector<int>& labels) {
  auto out = detail::open_for_write(path);
  out << "label\n";
  for (int s : labels) out << (s + 1) << "\n";
}

// --- parameters and models (JSON) ---

inline json params_to_json(const ModelParams& params) {
  json j;
  j["n_classes"] = params.n_classes;
  json counts = json::array();
  for (const auto& table : params.pi) counts.push_back(table.rows());
  j["category_counts"] = counts;
  json beta = json::array();
  for (int r = 0; r < params.beta.rows(); ++r) {
    json beta_row = json::array();
    for (int p = 0; p < params.beta.cols(); ++p)
      beta_row.push_back(params.beta(r, p));
    beta.push_back(beta_row);
  }
  j["beta"] = beta;
  json pi = json::array();  // indexed class, then item, then category
  for (int r = 0; r < params.n_classes; ++r) {
    json per_class = json::array();
    for (const auto& table : params.pi) {
      json simplex = json::array();
      for (int k = 0; k < table.rows(); ++k) simplex.push_back(table(k, r));
      per_class.push_back(simplex);
    }
    pi.push_back(per_class);
  }
  j["pi"] = pi;
  return j;
}

inline ModelParams params_from_json(const json& j, const std::string& path) {
  try {
    ModelParams params;
    params.n_classes = j.at("n_classes").get<int>();
    const auto& beta = j.at("beta");
    params.beta.resize(params.n_classes - 1,
                       beta.empty() ? 0 : static_cast<int>(beta[0].size()));
    if (static_cast<int>(beta.size()) != params.n_classes - 1)
      throw domain_error("beta must have n_classes - 1 rows");
    for (int r = 0; r < params.beta.rows(); ++r) {
      if (static_cast<int>(beta[r].size()) != params.beta.cols())
        throw domain_error("beta rows have inconsistent lengths");
      for (int p = 0; p < params.beta.cols(); ++p)
        params.beta(r, p) = beta[r][p].get<double>();
    }
    const auto& pi = j.at("pi");
    if (static_cast<int>(pi.size()) != params.n_classes)
      throw domain_error("pi must have one entry per class");
    const int n_items = pi.empty() ? 0 : static_cast<int>(pi[0].size());
    params.pi.resize(n_items);
    for (int jj = 0; jj < n_items; ++jj) {
      const int k_count = static_cast<int>(pi[0][jj].size());
      params.pi[jj].resize(k_count, params.n_classes);
      for (int r = 0; r < params.n_classes; ++r) {
        if (static_cast<int>(pi[r].size()) != n_items ||
            static_cast<int>(pi[r][jj].size()) != k_count)
          throw domain_error("pi tables have inconsistent shapes");
        for (int k = 0; k < k_count; ++k)
          params.pi[jj](k, r) = pi[r][jj][k].get<double>();
      }
    }
    params.validate(1e-8);
    // hand-written simplexes may be off by float-literal rounding; snap them
    for (auto& table : params.pi)
      for (int r = 0; r < table.cols(); ++r) table.col(r) /= table.col(r).sum();
    return params;
  } catch (const json::exception& e) {
    throw parse_error(path, 0, 0, e.what());
  } catch (const error&) {
    throw;
  }
}

inline void write_params_json(const std::string& path,
                              const ModelParams& params) {
  auto out = detail::open_for_write(path);
  out << params_to_json(params).dump(2) << "\n";
}

inline ModelParams read_params_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error(path, 0, 0, "cannot open file");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw parse_error(path, 0, 0, e.what());
  }
  return params_from_json(j, path);
}

inline json model_to_json(const TrueModel& model) {
  json j = params_to_json(model.params);
  json covs = json::array();
  for (const auto& spec : model.covariates) {
    json c;
    switch (spec.kind) {
      case CovariateSpec::Kind::intercept:
        c["type"] = "intercept";
        break;
      case CovariateSpec::Kind::normal:
        c["type"] = "normal";
        c["mean"] = spec.mean;
        c["sd"] = spec.sd;
        break;
      case CovariateSpec::Kind::categorical:
        c["type"] = "categorical";
        c["levels"] = spec.levels;
        break;
    }
    covs.push_back(c);
  }
  j["covariates"] = covs;
  return j;
}

inline TrueModel read_model_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error(path, 0, 0, "cannot open file");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw parse_error(path, 0, 0, e.what());
  }
  TrueModel model;
  model.params = params_from_json(j, path);
  try {
    if (!j.contains("covariates"))
      throw parse_error(path, 0, 0, "model file needs a 'covariates' array");
    for (const auto& c : j.at("covariates")) {
      CovariateSpec spec;
      const std::string type = c.at("type").get<std::string>();
      if (type == "intercept") {
        spec.kind = CovariateSpec::Kind::intercept;
      } else if (type == "normal") {
        spec.kind = CovariateSpec::Kind::normal;
        spec.mean = c.value("mean", 0.0);
        spec.sd = c.value("sd", 1.0);
      } else if (type == "categorical") {
        spec.kind = CovariateSpec::Kind::categorical;
        spec.levels = c.at("levels").get<int>();
      } else {
        throw parse_error(path, 0, 0, "unknown covariate type '" + type + "'");
      }
      model.covariates.push_back(spec);
    }
  } catch (const json::exception& e) {
    throw parse_error(path, 0, 0, e.what());
  }
  model.validate();
  return model;
}

inline void write_model_json(const std::string& path, const TrueModel& model) {
  auto out = detail::open_for_write(path);
  out << model_to_json(model).dump(2) << "\n";
}

// --- traces, reports, manifests ---

inline void write_trace_csv(const std::string& path,
                            const std::vector<double>& trace) {
  auto out = detail::open_for_write(path);
  out << "iteration,loglik\n";
  for (std::size_t t = 0; t < trace.size(); ++t)
    out << t << "," << detail::format_double(trace[t]) << "\n";
}

inline std::vector<double> read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error(path, 0, 0, "cannot open file");
  std::string line;
  if (!std::getline(in, line) ||
      detail::split_csv_line(line) != std::vector<std::string>{"iteration", "loglik"})
    throw parse_error(path, 1, 0, "expected 'iteration,loglik' header");
  std::vector<double> trace;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != 2)
      throw parse_error(path, row, 0, "expected two fields");
    if (std::stoul(fields[0]) != trace.size())
      throw parse_error(path, row, 1, "iteration indices must be consecutive");
    trace.push_back(std::stod(fields[1]));
  }
  return trace;
}

// The structured report carries only deterministic quantities; wall times go
// to the per-run table and the console, so same-seed reports are
// byte-identical.
inline json report_to_json(const BenchmarkReport& report) {
  json j;
  j["n_runs"] = report.n_runs;
  j["seeds"] = report.seeds;
  j["mode_tol"] = report.mode_tol;
  j["global_max_loglik"] = report.global_max_loglik;
  json algos = json::array();
  for (const auto& summary : report.per_algorithm) {
    json a;
    a["name"] = to_string(summary.algorithm);
    if (summary.decay_runs)
      a["decay_runs"] = *summary.decay_runs;
    else
      a["decay_runs"] = nullptr;
    a["local_mode_runs"] = summary.local_mode_runs;
    if (summary.median_gap)
      a["median_gap"] = *summary.median_gap;
    else
      a["median_gap"] = nullptr;
    if (summary.median_iters_to_max)
      a["median_iterations_to_max"] = *summary.median_iters_to_max;
    else
      a["median_iterations_to_max"] = nullptr;
    a["failed_runs"] = summary.failed_runs;
    algos.push_back(a);
  }
  j["algorithms"] = algos;
  return j;
}

inline void write_report_json(const std::string& path,
                              const BenchmarkReport& report) {
  auto out = detail::open_for_write(path);
  out << report_to_json(report).dump(2) << "\n";
}

inline void write_runs_csv(const std::string& path,
                           const BenchmarkReport& report) {
  auto out = detail::open_for_write(path);
  out << "run,seed,algorithm,status,loglik,iterations,decay_count,converged,"
         "wall_time_seconds\n";
  for (const auto& rec : report.runs) {
    std::string status = rec.failed ? rec.failure_message : "ok";
    for (char& c : status)
      if (c == ',' || c == '\n') c = ';';
    out << rec.run_index << "," << rec.seed << "," << to_string(rec.algorithm)
        << "," << status << ",";
    if (rec.failed)
      out << ",,,,\n";
    else
      out << detail::format_double(rec.loglik) << "," << rec.iterations << ","
          << rec.decay_count << "," << (rec.converged ? 1 : 0) << ","
          << detail::format_double(rec.wall_time) << "\n";
  }
}

}  // namespace lcr
