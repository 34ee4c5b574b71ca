#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "lcr/loglik.hpp"
#include "lcr/rng.hpp"
#include "lcr/types.hpp"

// Synthetic data generation from a known model: covariates per column spec,
// class labels from the multinomial logit, responses from the class profiles.

namespace lcr {

struct CovariateSpec {
  enum class Kind { intercept, normal, categorical };
  Kind kind = Kind::intercept;
  double mean = 0.0;  // normal
  double sd = 1.0;    // normal
  int levels = 2;     // categorical: codes 1..levels, uniform
};

struct TrueModel {
  ModelParams params;
  std::vector<CovariateSpec> covariates;  // one per design column

  void validate() const {
    params.validate();
    if (params.n_classes > 1 &&
        static_cast<int>(covariates.size()) != params.beta.cols())
      throw shape_error("covariate specs do not match beta columns");
    for (const auto& spec : covariates) {
      if (spec.kind == CovariateSpec::Kind::normal && !(spec.sd >= 0.0))
        throw domain_error("normal covariate needs sd >= 0");
      if (spec.kind == CovariateSpec::Kind::categorical && spec.levels < 2)
        throw domain_error("categorical covariate needs >= 2 levels");
    }
  }
};

struct SimulatedData {
  Dataset dataset;
  std::vector<int> labels;  // 0-based true classes, for validation only
};

// Draw order per unit: covariates left to right, then the class, then the J
// responses. Deterministic given the seed.
inline SimulatedData simulate(const TrueModel& model, int n,
                              std::uint64_t seed) {
  if (n < 1) throw domain_error("simulate needs n >= 1");
  model.validate();
  const int p = static_cast<int>(model.covariates.size());
  const int j_count = static_cast<int>(model.params.pi.size());
  const int r_count = model.params.n_classes;
  if (j_count < 1) throw domain_error("model has no response items");

  Rng rng(seed);
  SimulatedData out;
  out.dataset.design.resize(n, p);
  out.dataset.responses.resize(n, j_count);
  out.dataset.category_counts.resize(j_count);
  for (int j = 0; j < j_count; ++j)
    out.dataset.category_counts[j] = static_cast<int>(model.params.pi[j].rows());
  out.labels.resize(n);

  for (int i = 0; i < n; ++i) {
    for (int col = 0; col < p; ++col) {
      const auto& spec = model.covariates[col];
      switch (spec.kind) {
        case CovariateSpec::Kind::intercept:
          out.dataset.design(i, col) = 1.0;
          break;
        case CovariateSpec::Kind::normal:
          out.dataset.design(i, col) = rng.normal(spec.mean, spec.sd);
          break;
        case CovariateSpec::Kind::categorical:
          out.dataset.design(i, col) = 1.0 + std::floor(rng.uniform() * spec.levels);
          break;
      }
    }
    Eigen::VectorXd nu(r_count);
    if (r_count == 1) {
      nu[0] = 1.0;
    } else {
      Eigen::RowVectorXd scores(r_count);
      scores.head(r_count - 1) =
          out.dataset.design.row(i) * model.params.beta.transpose();
      scores[r_count - 1] = 0.0;
      const double lse = detail::log_sum_exp(scores);
      for (int r = 0; r < r_count; ++r) nu[r] = std::exp(scores[r] - lse);
    }
    const int s = rng.categorical(nu);
    out.labels[i] = s;
    for (int j = 0; j < j_count; ++j)
      out.dataset.responses(i, j) = rng.categorical(model.params.pi[j].col(s));
  }
  out.dataset.validate();
  return out;
}

// A three-class model shaped like a voter-opinion survey: twelve four-category
// items, an intercept plus one seven-level categorical covariate. Two classes
// hold mirrored graded response profiles over two item blocks, the third sits
// between them, and class membership shifts with the covariate. The overlap is
// deliberate; the resulting likelihood surface is multimodal and rough enough
// that unsafeguarded Newton updates overshoot from dispersed starts.
inline TrueModel election_style_model() {
  constexpr int r_count = 3;
  constexpr int j_count = 12;

  TrueModel model;
  model.params.n_classes = r_count;
  model.params.beta.resize(r_count - 1, 2);
  // log-odds relative to the middle class rise and fall with the covariate
  model.params.beta << 2.4, -0.72,
                      -2.4,  0.72;
  model.covariates = {
      CovariateSpec{CovariateSpec::Kind::intercept},
      CovariateSpec{CovariateSpec::Kind::categorical, 0.0, 1.0, 7},
  };

  const Eigen::Vector4d low(0.42, 0.30, 0.17, 0.11);
  const Eigen::Vector4d high = low.reverse();
  const Eigen::Vector4d mid(0.12, 0.38, 0.38, 0.12);
  model.params.pi.resize(j_count);
  for (int j = 0; j < j_count; ++j) {
    Eigen::MatrixXd table(4, r_count);
    const bool first_block = j < 6;
    table.col(0) = first_block ? low : high;
    table.col(1) = first_block ? high : low;
    table.col(2) = mid;
    model.params.pi[j] = table;
  }
  return model;
}

}  // namespace lcr
