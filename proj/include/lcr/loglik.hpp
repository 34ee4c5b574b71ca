#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <vector>

#include "lcr/types.hpp"

// Probability and likelihood computations shared by every estimator. All
// class-density products are accumulated as sums of logs and normalized with
// log-sum-exp, so tiny pi entries (down to 1e-300 and exact zeros) stay usable.

namespace lcr {

namespace detail {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// log(sum_k exp(v[k])), tolerating -inf entries. Returns -inf when all are.
inline double log_sum_exp(const Eigen::Ref<const Eigen::RowVectorXd>& v) {
  const double m = v.maxCoeff();
  if (m == neg_inf) return neg_inf;
  double sum = 0.0;
  for (int k = 0; k < v.size(); ++k) sum += std::exp(v[k] - m);
  return m + std::log(sum);
}

// Linear predictors x_i' beta_r with the last class pinned at zero: n x R.
inline Eigen::MatrixXd linear_predictors(const Eigen::MatrixXd& beta,
                                         const Eigen::MatrixXd& design) {
  const int n = static_cast<int>(design.rows());
  const int r_count = static_cast<int>(beta.rows()) + 1;
  Eigen::MatrixXd h(n, r_count);
  if (beta.rows() > 0) h.leftCols(r_count - 1) = design * beta.transpose();
  h.col(r_count - 1).setZero();
  return h;
}

// Per-unit log response densities L(i,r) = sum_j log pi_jr(y_ij): n x R.
// Zero pi entries contribute -inf rather than aborting.
inline Eigen::MatrixXd log_response_density(const ModelParams& params,
                                            const Dataset& data) {
  const int n = data.n_units();
  const int j_count = data.n_items();
  const int r_count = params.n_classes;
  // log each pi table once, then gather per unit
  std::vector<Eigen::MatrixXd> log_pi(j_count);
  for (int j = 0; j < j_count; ++j) {
    log_pi[j] = params.pi[j].array().max(0.0).log().matrix();
  }
  Eigen::MatrixXd density = Eigen::MatrixXd::Zero(n, r_count);
  for (int j = 0; j < j_count; ++j) {
    const auto& table = log_pi[j];
    for (int i = 0; i < n; ++i) {
      density.row(i) += table.row(data.responses(i, j));
    }
  }
  return density;
}

// Row-wise softmax of scores; throws degenerate_unit_error when a whole row
// is -inf (the unit has zero density in every class).
inline Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& scores) {
  Eigen::MatrixXd out(scores.rows(), scores.cols());
  for (int i = 0; i < scores.rows(); ++i) {
    const double lse = log_sum_exp(scores.row(i));
    if (lse == neg_inf) throw degenerate_unit_error(i);
    for (int r = 0; r < scores.cols(); ++r)
      out(i, r) = std::exp(scores(i, r) - lse);
  }
  return out;
}

inline void check_shapes(const ModelParams& params, const Dataset& data) {
  if (params.n_classes > 1 && params.beta.cols() != data.design.cols())
    throw shape_error("beta columns do not match design columns");
  if (static_cast<int>(params.pi.size()) != data.n_items())
    throw shape_error("pi tables do not match number of items");
  for (int j = 0; j < data.n_items(); ++j)
    if (params.pi[j].rows() != data.category_counts[j])
      throw shape_error("pi table rows do not match category count for item " +
                        std::to_string(j + 1));
}

}  // namespace detail

// Covariate-dependent class probabilities nu_r(x_i): softmax over the linear
// predictors {x_i' beta_1, ..., x_i' beta_{R-1}, 0}. Rows sum to 1.
inline Eigen::MatrixXd class_probabilities(const ModelParams& params,
                                           const Dataset& data) {
  if (params.n_classes > 1 && params.beta.cols() != data.design.cols())
    throw shape_error("beta columns do not match design columns");
  return detail::softmax_rows(
      detail::linear_predictors(params.beta, data.design));
}

// Observed-data log-likelihood sum_i log[sum_r nu_r(x_i) prod_j pi_jr(y_ij)].
// Returns -inf (never throws) when some unit has zero mixture density.
inline double log_likelihood(const ModelParams& params, const Dataset& data) {
  detail::check_shapes(params, data);
  const Eigen::MatrixXd h = detail::linear_predictors(params.beta, data.design);
  const Eigen::MatrixXd density = detail::log_response_density(params, data);
  double total = 0.0;
  for (int i = 0; i < data.n_units(); ++i) {
    const double numer = detail::log_sum_exp(h.row(i) + density.row(i));
    if (numer == detail::neg_inf) return detail::neg_inf;
    total += numer - detail::log_sum_exp(h.row(i));
  }
  return total;
}

// Posterior class memberships: row i proportional to
// exp(x_i' beta_r) * prod_j pi_jr(y_ij); the shared multinomial-logit
// normalizer cancels. Computed in log space then normalized.
inline Responsibilities responsibilities(const ModelParams& params,
                                         const Dataset& data) {
  detail::check_shapes(params, data);
  const Eigen::MatrixXd h = detail::linear_predictors(params.beta, data.design);
  const Eigen::MatrixXd density = detail::log_response_density(params, data);
  return Responsibilities{detail::softmax_rows(h + density)};
}

// Complete-data log-likelihood for hard labels s (0-based), the sum of the
// multinomial-logit term and the within-class categorical term.
inline double complete_loglik(const ModelParams& params, const Dataset& data,
                              const std::vector<int>& labels) {
  detail::check_shapes(params, data);
  if (static_cast<int>(labels.size()) != data.n_units())
    throw shape_error("labels length does not match number of units");
  const Eigen::MatrixXd h = detail::linear_predictors(params.beta, data.design);
  const Eigen::MatrixXd density = detail::log_response_density(params, data);
  double total = 0.0;
  for (int i = 0; i < data.n_units(); ++i) {
    const int s = labels[i];
    if (s < 0 || s >= params.n_classes)
      throw domain_error("class label " + std::to_string(s + 1) +
                         " out of range at unit " + std::to_string(i + 1));
    total += h(i, s) - detail::log_sum_exp(h.row(i)) + density(i, s);
  }
  return total;
}

// Expected multinomial-logit log-likelihood Q1: sum_i sum_r sbar_ir log nu_r(x_i),
// with the responsibilities held fixed.
inline double expected_loglik_q1(const Eigen::MatrixXd& beta,
                                 const Eigen::MatrixXd& sbar,
                                 const Dataset& data) {
  if (beta.rows() + 1 != sbar.cols())
    throw shape_error("beta rows must be sbar columns minus one");
  if (beta.rows() > 0 && beta.cols() != data.design.cols())
    throw shape_error("beta columns do not match design columns");
  if (sbar.rows() != data.design.rows())
    throw shape_error("sbar rows do not match number of units");
  const Eigen::MatrixXd h = detail::linear_predictors(beta, data.design);
  double total = 0.0;
  for (int i = 0; i < h.rows(); ++i) {
    const double lse = detail::log_sum_exp(h.row(i));
    for (int r = 0; r < h.cols(); ++r)
      total += sbar(i, r) * (h(i, r) - lse);
  }
  return total;
}

}  // namespace lcr
