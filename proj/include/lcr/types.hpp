#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "lcr/errors.hpp"

namespace lcr {

// n units of J categorical responses plus an n x P design matrix.
// Response codes are stored 0-based; files and error messages use the 1-based
// codes {1, ..., K_j}, converted at the ingestion boundary.
struct Dataset {
  Eigen::MatrixXi responses;         // n x J, entry in {0, ..., K_j - 1}
  std::vector<int> category_counts;  // K_1, ..., K_J, each >= 2
  Eigen::MatrixXd design;            // n x P, row i = covariates x_i

  int n_units() const { return static_cast<int>(responses.rows()); }
  int n_items() const { return static_cast<int>(responses.cols()); }
  int n_covariates() const { return static_cast<int>(design.cols()); }

  void validate() const {
    const int n = n_units();
    const int j_count = n_items();
    if (n < 1 || j_count < 1) throw shape_error("dataset needs n >= 1 and J >= 1");
    if (static_cast<int>(category_counts.size()) != j_count)
      throw shape_error("category_counts length does not match response columns");
    if (design.rows() != n) throw shape_error("design rows do not match responses");
    if (design.cols() < 1) throw shape_error("dataset needs P >= 1");
    for (int j = 0; j < j_count; ++j) {
      if (category_counts[j] < 2)
        throw domain_error("item " + std::to_string(j + 1) +
                           " has fewer than 2 categories");
      for (int i = 0; i < n; ++i) {
        const int code = responses(i, j);
        if (code < 0 || code >= category_counts[j])
          throw domain_error("response code " + std::to_string(code + 1) +
                             " out of range {1,...," +
                             std::to_string(category_counts[j]) + "} at row " +
                             std::to_string(i + 1) + ", item " +
                             std::to_string(j + 1));
      }
    }
    if (!design.allFinite()) throw domain_error("design matrix has non-finite entries");
  }
};

// Regression coefficients and class-conditional response profiles.
// beta stores the R-1 free coefficient rows; the last class is pinned at zero
// and never stored. pi is kept per item as a K_j x R matrix whose columns lie
// on the simplex.
struct ModelParams {
  int n_classes = 1;
  Eigen::MatrixXd beta;             // (R-1) x P
  std::vector<Eigen::MatrixXd> pi;  // pi[j] is K_j x R

  double pi_at(int r, int j, int category) const { return pi[j](category, r); }

  void validate(double simplex_tol = 1e-12) const {
    if (n_classes < 1) throw domain_error("n_classes must be >= 1");
    if (beta.rows() != n_classes - 1)
      throw shape_error("beta must have R-1 rows");
    if (!beta.allFinite()) throw domain_error("beta has non-finite entries");
    for (std::size_t j = 0; j < pi.size(); ++j) {
      const auto& table = pi[j];
      if (table.cols() != n_classes)
        throw shape_error("pi table for item " + std::to_string(j + 1) +
                          " must have R columns");
      for (int r = 0; r < table.cols(); ++r) {
        double sum = 0.0;
        for (int k = 0; k < table.rows(); ++k) {
          const double p = table(k, r);
          if (!(p >= 0.0 && p <= 1.0))
            throw domain_error("pi entry outside [0,1] for item " +
                               std::to_string(j + 1) + ", class " +
                               std::to_string(r + 1));
          sum += p;
        }
        if (std::abs(sum - 1.0) > simplex_tol)
          throw domain_error("pi column for item " + std::to_string(j + 1) +
                             ", class " + std::to_string(r + 1) +
                             " does not sum to 1");
      }
    }
  }
};

// Posterior class-membership probabilities, one row per unit.
struct Responsibilities {
  Eigen::MatrixXd weights;  // n x R, rows on the simplex
};

// Number of indices t with trace[t+1] < trace[t] - slack.
inline int count_decays(const std::vector<double>& trace, double slack) {
  int decays = 0;
  for (std::size_t t = 0; t + 1 < trace.size(); ++t)
    if (trace[t + 1] < trace[t] - slack) ++decays;
  return decays;
}

struct FitResult {
  ModelParams params;
  std::vector<double> loglik_trace;  // observed-data log-likelihood per iteration
  int iterations = 0;
  bool converged = false;
  int decay_count = 0;
  double wall_time = 0.0;  // seconds
  std::optional<int> switch_iteration;  // hybrid: first Newton-Raphson iteration
  std::vector<std::string> diagnostics;

  double final_loglik() const { return loglik_trace.back(); }
};

}  // namespace lcr
