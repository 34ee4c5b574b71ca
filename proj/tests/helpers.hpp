#pragma once

// Shared test fixtures: random instances, brute-force oracles evaluated
// directly from the model definition (no log-space tricks), and finite
// difference utilities. These stay independent of the library's computation
// paths on purpose.

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "lcr/lcr.hpp"

namespace test {

inline lcr::Dataset make_dataset(const std::vector<std::vector<int>>& responses_0based,
                                 const std::vector<int>& category_counts,
                                 const std::vector<std::vector<double>>& design) {
  lcr::Dataset data;
  const int n = static_cast<int>(responses_0based.size());
  const int j_count = static_cast<int>(category_counts.size());
  const int p = static_cast<int>(design[0].size());
  data.responses.resize(n, j_count);
  data.design.resize(n, p);
  data.category_counts = category_counts;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < j_count; ++j) data.responses(i, j) = responses_0based[i][j];
    for (int c = 0; c < p; ++c) data.design(i, c) = design[i][c];
  }
  data.validate();
  return data;
}

// Random dataset with an intercept plus standard-normal covariates and
// uniform response codes.
inline lcr::Dataset random_dataset(lcr::Rng& rng, int n, int j_count,
                                   int max_categories, int p) {
  lcr::Dataset data;
  data.responses.resize(n, j_count);
  data.design.resize(n, p);
  data.category_counts.resize(j_count);
  for (int j = 0; j < j_count; ++j)
    data.category_counts[j] =
        2 + static_cast<int>(rng.uniform() * (max_categories - 1));
  for (int i = 0; i < n; ++i) {
    data.design(i, 0) = 1.0;
    for (int c = 1; c < p; ++c) data.design(i, c) = rng.normal(0.0, 1.0);
    for (int j = 0; j < j_count; ++j)
      data.responses(i, j) =
          static_cast<int>(rng.uniform() * data.category_counts[j]);
  }
  data.validate();
  return data;
}

inline lcr::ModelParams random_params(lcr::Rng& rng, const lcr::Dataset& data,
                                      int n_classes, double beta_sd = 1.0) {
  lcr::ModelParams params;
  params.n_classes = n_classes;
  params.beta.resize(n_classes - 1, data.n_covariates());
  for (int r = 0; r + 1 < n_classes; ++r)
    for (int p = 0; p < data.n_covariates(); ++p)
      params.beta(r, p) = rng.normal(0.0, beta_sd);
  params.pi.resize(data.n_items());
  for (int j = 0; j < data.n_items(); ++j) {
    params.pi[j].resize(data.category_counts[j], n_classes);
    for (int r = 0; r < n_classes; ++r)
      params.pi[j].col(r) = rng.dirichlet_flat(data.category_counts[j]);
  }
  params.validate();
  return params;
}

// Direct evaluation of the mixture: nu_r from plain exponential ratios and
// the response probabilities multiplied out.
inline Eigen::VectorXd oracle_class_probs(const lcr::ModelParams& params,
                                          const lcr::Dataset& data, int i) {
  const int r_count = params.n_classes;
  Eigen::VectorXd expo(r_count);
  for (int r = 0; r < r_count; ++r) {
    double lin = 0.0;
    if (r + 1 < r_count)
      for (int p = 0; p < data.n_covariates(); ++p)
        lin += data.design(i, p) * params.beta(r, p);
    expo[r] = std::exp(lin);
  }
  return expo / expo.sum();
}

inline double oracle_mixture_density(const lcr::ModelParams& params,
                                     const lcr::Dataset& data, int i) {
  const Eigen::VectorXd nu = oracle_class_probs(params, data, i);
  double density = 0.0;
  for (int r = 0; r < params.n_classes; ++r) {
    double prod = 1.0;
    for (int j = 0; j < data.n_items(); ++j)
      prod *= params.pi_at(r, j, data.responses(i, j));
    density += nu[r] * prod;
  }
  return density;
}

inline double oracle_loglik(const lcr::ModelParams& params,
                            const lcr::Dataset& data) {
  double total = 0.0;
  for (int i = 0; i < data.n_units(); ++i)
    total += std::log(oracle_mixture_density(params, data, i));
  return total;
}

inline Eigen::MatrixXd oracle_responsibilities(const lcr::ModelParams& params,
                                               const lcr::Dataset& data) {
  Eigen::MatrixXd out(data.n_units(), params.n_classes);
  for (int i = 0; i < data.n_units(); ++i) {
    const Eigen::VectorXd nu = oracle_class_probs(params, data, i);
    double denom = 0.0;
    for (int r = 0; r < params.n_classes; ++r) {
      double prod = 1.0;
      for (int j = 0; j < data.n_items(); ++j)
        prod *= params.pi_at(r, j, data.responses(i, j));
      out(i, r) = nu[r] * prod;
      denom += out(i, r);
    }
    out.row(i) /= denom;
  }
  return out;
}

// Central finite differences of log_likelihood in the beta entries.
inline Eigen::MatrixXd fd_loglik_gradient(const lcr::ModelParams& params,
                                          const lcr::Dataset& data,
                                          double h = 1e-6) {
  Eigen::MatrixXd grad(params.beta.rows(), params.beta.cols());
  lcr::ModelParams work = params;
  for (int r = 0; r < grad.rows(); ++r)
    for (int p = 0; p < grad.cols(); ++p) {
      const double saved = work.beta(r, p);
      work.beta(r, p) = saved + h;
      const double up = lcr::log_likelihood(work, data);
      work.beta(r, p) = saved - h;
      const double down = lcr::log_likelihood(work, data);
      work.beta(r, p) = saved;
      grad(r, p) = (up - down) / (2.0 * h);
    }
  return grad;
}

// Second central differences of a scalar function of beta, stacked class by
// class (block r spans columns r*P .. r*P+P-1).
template <class F>
inline Eigen::MatrixXd fd_hessian(const Eigen::MatrixXd& beta, F&& f,
                                  double h = 1e-4) {
  const int p = static_cast<int>(beta.cols());
  const int dim = static_cast<int>(beta.rows()) * p;
  auto with = [&](int a, double da, int b, double db) {
    Eigen::MatrixXd shifted = beta;
    shifted(a / p, a % p) += da;
    shifted(b / p, b % p) += db;
    return f(shifted);
  };
  Eigen::MatrixXd hess(dim, dim);
  const double f0 = f(beta);
  for (int a = 0; a < dim; ++a) {
    hess(a, a) = (with(a, h, a, 0.0) - 2.0 * f0 + with(a, -h, a, 0.0)) / (h * h);
    for (int b = a + 1; b < dim; ++b) {
      const double mixed = (with(a, h, b, h) - with(a, h, b, -h) -
                            with(a, -h, b, h) + with(a, -h, b, -h)) /
                           (4.0 * h * h);
      hess(a, b) = mixed;
      hess(b, a) = mixed;
    }
  }
  return hess;
}

// Conditional logistic objective of one nested cycle at fixed weights:
// sum_i sbar_i (x_i'b - a_i) - log(1 + exp(x_i'b - a_i)).
inline double conditional_logistic_q1(const Eigen::VectorXd& beta_r,
                                      const Eigen::VectorXd& offsets,
                                      const Eigen::VectorXd& sbar_r,
                                      const lcr::Dataset& data) {
  const Eigen::VectorXd z = data.design * beta_r - offsets;
  double total = 0.0;
  for (int i = 0; i < z.size(); ++i) {
    const double log1pexp =
        z[i] > 0 ? z[i] + std::log1p(std::exp(-z[i])) : std::log1p(std::exp(z[i]));
    total += sbar_r[i] * z[i] - log1pexp;
  }
  return total;
}

// A well-separated generating model: each class concentrates on its own
// category with the given peak probability.
inline lcr::TrueModel separated_model(int n_classes, int j_count, int k_count,
                                      double peak = 0.8) {
  lcr::TrueModel model;
  model.params.n_classes = n_classes;
  model.params.beta.resize(n_classes - 1, 2);
  for (int r = 0; r + 1 < n_classes; ++r) {
    model.params.beta(r, 0) = 0.3 * (r + 1);
    model.params.beta(r, 1) = (r % 2 == 0 ? 0.8 : -0.6);
  }
  model.covariates = {
      lcr::CovariateSpec{lcr::CovariateSpec::Kind::intercept},
      lcr::CovariateSpec{lcr::CovariateSpec::Kind::normal, 0.0, 1.0},
  };
  model.params.pi.resize(j_count);
  const double rest = (1.0 - peak) / (k_count - 1);
  for (int j = 0; j < j_count; ++j) {
    Eigen::MatrixXd table(k_count, n_classes);
    for (int r = 0; r < n_classes; ++r)
      for (int k = 0; k < k_count; ++k)
        table(k, r) = (k == (r + j) % k_count) ? peak : rest;
    model.params.pi[j] = table;
  }
  return model;
}

}  // namespace test
