#pragma once

#include <Eigen/Dense>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lcr/loglik.hpp"
#include "lcr/polya_gamma.hpp"
#include "lcr/rng.hpp"
#include "lcr/types.hpp"

// The fitting routines. All one-step estimators share the same outer loop
// (E-step, closed-form pi update, one beta update) and differ only in how the
// coefficient block is moved: nested Polya-gamma cycles, a Newton step on the
// expected or observed objective, or a fixed minorization bound.

namespace lcr {

struct EstimatorConfig {
  double tol = 1e-11;      // stop when |loglik increment| falls below this
  int max_iter = 100000;
  double epsilon = 0.01;   // hybrid switch threshold on the increment
  double alpha = 1.0;      // Newton step-size rescale, in (0, 1]
  double decay_slack = 1e-9;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(tol > 0.0)) throw domain_error("tol must be positive");
    if (max_iter < 1) throw domain_error("max_iter must be >= 1");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw domain_error("alpha must be in (0,1]");
    if (!(epsilon >= 0.0)) throw domain_error("epsilon must be nonnegative");
    if (!(decay_slack >= 0.0)) throw domain_error("decay_slack must be nonnegative");
  }
};

struct Initialization {
  ModelParams params;
};

// Starting values: beta entries i.i.d. Gaussian with mean 0 and variance 0.5,
// pi columns from a flat Dirichlet. Same seed, same Initialization.
inline Initialization init_random(const Dataset& data, int n_classes,
                                  std::uint64_t seed) {
  if (n_classes < 1) throw domain_error("n_classes must be >= 1");
  Rng rng(seed);
  const double sd = std::sqrt(0.5);
  ModelParams params;
  params.n_classes = n_classes;
  params.beta.resize(n_classes - 1, data.n_covariates());
  for (int r = 0; r + 1 < n_classes; ++r)
    for (int p = 0; p < data.n_covariates(); ++p)
      params.beta(r, p) = rng.normal(0.0, sd);
  params.pi.resize(data.n_items());
  for (int j = 0; j < data.n_items(); ++j)
    params.pi[j].resize(data.category_counts[j], n_classes);
  for (int r = 0; r < n_classes; ++r)
    for (int j = 0; j < data.n_items(); ++j)
      params.pi[j].col(r) = rng.dirichlet_flat(data.category_counts[j]);
  return Initialization{std::move(params)};
}

// Closed-form pi maximizer: responsibility-weighted category frequencies.
inline std::vector<Eigen::MatrixXd> m_step_pi(const Responsibilities& sbar,
                                              const Dataset& data) {
  const Eigen::MatrixXd& w = sbar.weights;
  if (w.rows() != data.n_units())
    throw shape_error("responsibilities rows do not match number of units");
  const int r_count = static_cast<int>(w.cols());
  const Eigen::VectorXd mass = w.colwise().sum().transpose();
  for (int r = 0; r < r_count; ++r)
    if (mass[r] < 1e-10) throw empty_class_error(r);
  std::vector<Eigen::MatrixXd> pi(data.n_items());
  for (int j = 0; j < data.n_items(); ++j) {
    Eigen::MatrixXd table = Eigen::MatrixXd::Zero(data.category_counts[j], r_count);
    for (int i = 0; i < data.n_units(); ++i)
      table.row(data.responses(i, j)) += w.row(i);
    table.array().rowwise() /= mass.transpose().array();
    pi[j] = std::move(table);
  }
  return pi;
}

// Per-cycle view handed to observers: the cycle's own responsibilities and the
// coefficient block before/after its generalized least squares update.
struct NestedCycleInfo {
  int iteration;    // 1-based EM iteration
  int cycle_class;  // 0-based class index r
  const Eigen::MatrixXd& sbar;
  const Eigen::MatrixXd& beta_before;
  const Eigen::MatrixXd& beta_after;
  const Eigen::VectorXd& offsets;
};
using NestedCycleObserver = std::function<void(const NestedCycleInfo&)>;

namespace detail {

// Observed-data log-likelihood from cached linear predictors and response
// log-densities.
inline double loglik_given(const Eigen::MatrixXd& h,
                           const Eigen::MatrixXd& log_density) {
  double total = 0.0;
  for (int i = 0; i < h.rows(); ++i) {
    const double numer = log_sum_exp(h.row(i) + log_density.row(i));
    if (numer == neg_inf) return neg_inf;
    total += numer - log_sum_exp(h.row(i));
  }
  return total;
}

// Stacked score with blocks g_r = X' (sbar_r - nu_r), r = 1..R-1.
inline Eigen::VectorXd stacked_score(const Eigen::MatrixXd& sbar,
                                     const Eigen::MatrixXd& nu,
                                     const Eigen::MatrixXd& design) {
  const int p = static_cast<int>(design.cols());
  const int free_classes = static_cast<int>(sbar.cols()) - 1;
  Eigen::VectorXd g(free_classes * p);
  for (int r = 0; r < free_classes; ++r)
    g.segment(r * p, p) =
        design.transpose() * (sbar.col(r) - nu.col(r));
  return g;
}

// Block matrix with (r,l) block sum_i m_ir (delta_rl - m_il) x_i x_i'.
// For m = nu this is the multinomial-logit information (positive
// semidefinite); differences of two such matrices give the observed Hessian.
inline Eigen::MatrixXd soft_information(const Eigen::MatrixXd& m,
                                        const Eigen::MatrixXd& design) {
  const int p = static_cast<int>(design.cols());
  const int free_classes = static_cast<int>(m.cols()) - 1;
  Eigen::MatrixXd info(free_classes * p, free_classes * p);
  for (int r = 0; r < free_classes; ++r) {
    for (int l = r; l < free_classes; ++l) {
      Eigen::VectorXd w;
      if (r == l)
        w = (m.col(r).array() * (1.0 - m.col(r).array())).matrix();
      else
        w = (-m.col(r).array() * m.col(l).array()).matrix();
      const Eigen::MatrixXd block =
          design.transpose() * (w.asDiagonal() * design);
      info.block(r * p, l * p, p, p) = block;
      if (l != r) info.block(l * p, r * p, p, p) = block.transpose();
    }
  }
  return info;
}

inline void add_stacked(Eigen::MatrixXd& beta, const Eigen::VectorXd& step,
                        double scale) {
  const int p = static_cast<int>(beta.cols());
  for (int r = 0; r < beta.rows(); ++r)
    beta.row(r) += scale * step.segment(r * p, p).transpose();
}

struct EmStepContext {
  Eigen::MatrixXd& beta;                 // updated in place
  const Eigen::MatrixXd& sbar;           // E-step responsibilities at theta_t
  const Eigen::MatrixXd& h;              // linear predictors at beta_t
  const Eigen::MatrixXd& log_density;    // response log-densities at pi_{t+1}
  const Dataset& data;
  int iteration;                         // 1-based
};

// Nested cycles: for each free class r, refresh the responsibilities under
// the new pi and the latest coefficients, reduce the conditional problem to
// logistic form with offsets a_i = log sum_{l != r} exp(x_i' beta_l), and
// solve the Polya-gamma weighted least squares.
struct NestedUpdate {
  const NestedCycleObserver* observer = nullptr;

  void operator()(const EmStepContext& ctx) const {
    const int n = ctx.data.n_units();
    const int free_classes = static_cast<int>(ctx.beta.rows());
    Eigen::MatrixXd h = ctx.h;
    for (int r = 0; r < free_classes; ++r) {
      const Eigen::MatrixXd sbar_cycle = softmax_rows(h + ctx.log_density);
      Eigen::VectorXd offsets(n);
      for (int i = 0; i < n; ++i) {
        double m = neg_inf;
        for (int l = 0; l < h.cols(); ++l)
          if (l != r && h(i, l) > m) m = h(i, l);
        double sum = 0.0;
        for (int l = 0; l < h.cols(); ++l)
          if (l != r) sum += std::exp(h(i, l) - m);
        offsets[i] = m + std::log(sum);
      }
      const PgWeights weights = pg_weights_for_cycle(
          ctx.beta.row(r).transpose(), offsets, sbar_cycle.col(r), ctx.data);
      Eigen::VectorXd beta_r;
      try {
        beta_r = gls_update(ctx.data.design, weights);
      } catch (const singular_system_error& e) {
        throw singular_system_error(
            std::string(e.what()) + " (class " + std::to_string(r + 1) + ")", r);
      }
      if (observer && *observer) {
        const Eigen::MatrixXd before = ctx.beta;
        Eigen::MatrixXd after = ctx.beta;
        after.row(r) = beta_r.transpose();
        (*observer)(NestedCycleInfo{ctx.iteration, r, sbar_cycle, before, after,
                                    offsets});
      }
      ctx.beta.row(r) = beta_r.transpose();
      h.col(r) = ctx.data.design * beta_r;
    }
  }
};

// Exact two-class update: the conditional problem is already logistic, so no
// offsets appear and eta_bar = (sbar_i1 - 1/2) / omega_bar_i.
struct TwoClassUpdate {
  void operator()(const EmStepContext& ctx) const {
    const int n = ctx.data.n_units();
    const Eigen::MatrixXd sbar_cycle = softmax_rows(ctx.h + ctx.log_density);
    PgWeights weights;
    weights.offsets = Eigen::VectorXd::Zero(n);
    weights.omega_bar.resize(n);
    weights.eta_bar.resize(n);
    for (int i = 0; i < n; ++i) {
      const double omega = std::max(pg_expectation(ctx.h(i, 0)), pg_omega_floor);
      weights.omega_bar[i] = omega;
      weights.eta_bar[i] = (sbar_cycle(i, 0) - 0.5) / omega;
    }
    try {
      ctx.beta.row(0) = gls_update(ctx.data.design, weights).transpose();
    } catch (const singular_system_error& e) {
      throw singular_system_error(std::string(e.what()) + " (class 1)", 0);
    }
  }
};

// One Newton-Raphson step on Q1 with the soft-label multinomial-logit
// Hessian, rescaled by alpha.
struct NewtonQ1Update {
  double alpha = 1.0;

  void operator()(const EmStepContext& ctx) const {
    const Eigen::MatrixXd nu = softmax_rows(ctx.h);
    const Eigen::VectorXd g = stacked_score(ctx.sbar, nu, ctx.data.design);
    const Eigen::MatrixXd info = soft_information(nu, ctx.data.design);
    const Eigen::VectorXd step = solve_symmetric_checked(
        info, g, "Q1 Newton system", -1, newton_condition_limit);
    add_stacked(ctx.beta, step, alpha);
  }
};

// One Newton-Raphson step on the full-model log-likelihood: same score, but
// the Hessian also carries the responsibility curvature.
struct NewtonObservedUpdate {
  double alpha = 1.0;

  void operator()(const EmStepContext& ctx) const {
    const Eigen::MatrixXd nu = softmax_rows(ctx.h);
    const Eigen::VectorXd g = stacked_score(ctx.sbar, nu, ctx.data.design);
    const Eigen::MatrixXd hessian = soft_information(ctx.sbar, ctx.data.design) -
                                    soft_information(nu, ctx.data.design);
    const Eigen::VectorXd step = solve_symmetric_checked(
        hessian, g, "observed Newton system", -1, newton_condition_limit);
    add_stacked(ctx.beta, step, -alpha);
  }
};

// Minorize-maximize step with the fixed curvature bound
// B = (I - 11'/R)/2 (x) X'X, factored once per fit.
struct MmUpdate {
  Eigen::LDLT<Eigen::MatrixXd> bound_factor;

  MmUpdate(const Dataset& data, int n_classes) {
    const int p = data.n_covariates();
    const int free_classes = n_classes - 1;
    const Eigen::MatrixXd xtx = data.design.transpose() * data.design;
    Eigen::MatrixXd bound(free_classes * p, free_classes * p);
    for (int r = 0; r < free_classes; ++r)
      for (int l = 0; l < free_classes; ++l) {
        const double c = 0.5 * ((r == l ? 1.0 : 0.0) - 1.0 / n_classes);
        bound.block(r * p, l * p, p, p) = c * xtx;
      }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    const double cond = symmetric_condition(bound, eig);
    if (!(cond < condition_limit))
      throw singular_system_error("MM bound matrix: condition number " +
                                  std::to_string(cond) + " exceeds 1e12");
    bound_factor.compute(bound);
  }

  void operator()(const EmStepContext& ctx) const {
    const Eigen::MatrixXd nu = softmax_rows(ctx.h);
    const Eigen::VectorXd g = stacked_score(ctx.sbar, nu, ctx.data.design);
    add_stacked(ctx.beta, bound_factor.solve(g), 1.0);
  }
};

// Nested cycles until the increment drops to epsilon, then Newton on Q1.
// The switch is one-way.
struct HybridUpdate {
  NestedUpdate nested;
  NewtonQ1Update newton;
  double epsilon = 0.01;
  bool switched = false;
  std::optional<int> switch_iteration;

  void operator()(const EmStepContext& ctx) {
    if (switched)
      newton(ctx);
    else
      nested(ctx);
  }

  void after_iteration(int iteration, double increment) {
    if (!switched && increment <= epsilon) {
      switched = true;
      switch_iteration = iteration + 1;
    }
  }
};

// Shared EM loop. trace[0] is the log-likelihood at the initialization; each
// sweep appends one value; |increment| < tol stops the run. With one class
// the pi maximizer is closed form, so a single sweep converges.
template <class Policy>
FitResult run_em(const Dataset& data, int n_classes, const Initialization& init,
                 const EstimatorConfig& cfg, Policy& policy) {
  const auto start = std::chrono::steady_clock::now();
  cfg.validate();
  data.validate();
  if (init.params.n_classes != n_classes)
    throw shape_error("initialization was built for a different class count");
  init.params.validate();
  check_shapes(init.params, data);

  FitResult result;
  result.params = init.params;
  ModelParams& params = result.params;

  Eigen::MatrixXd log_density = log_response_density(params, data);
  Eigen::MatrixXd h = linear_predictors(params.beta, data.design);
  result.loglik_trace.push_back(loglik_given(h, log_density));

  if (n_classes == 1) {
    const Responsibilities sbar{Eigen::MatrixXd::Ones(data.n_units(), 1)};
    params.pi = m_step_pi(sbar, data);
    log_density = log_response_density(params, data);
    result.loglik_trace.push_back(loglik_given(h, log_density));
    result.iterations = 1;
    result.converged = true;
  } else {
    for (int t = 1; t <= cfg.max_iter; ++t) {
      try {
        const Eigen::MatrixXd sbar = softmax_rows(h + log_density);
        params.pi = m_step_pi(Responsibilities{sbar}, data);
        log_density = log_response_density(params, data);
        policy(EmStepContext{params.beta, sbar, h, log_density, data, t});
      } catch (const empty_class_error& e) {
        throw empty_class_error(e.class_index,
                                "at iteration " + std::to_string(t));
      } catch (const singular_system_error& e) {
        throw singular_system_error(
            std::string(e.what()) + " at iteration " + std::to_string(t),
            e.class_index);
      }
      h = linear_predictors(params.beta, data.design);
      const double ll = loglik_given(h, log_density);
      const double increment = ll - result.loglik_trace.back();
      result.loglik_trace.push_back(ll);
      result.iterations = t;
      if (std::abs(increment) < cfg.tol) {
        result.converged = true;
        break;
      }
      if constexpr (requires { policy.after_iteration(t, increment); })
        policy.after_iteration(t, increment);
    }
  }

  result.decay_count = count_decays(result.loglik_trace, cfg.decay_slack);
  result.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

}  // namespace detail

// Nested EM: monotone by construction. The optional observer sees every
// per-class cycle, which the invariant tests use to check the chain
// inequalities directly.
inline FitResult fit_nested_em(const Dataset& data, int n_classes,
                               const Initialization& init,
                               const EstimatorConfig& cfg,
                               const NestedCycleObserver& observer = {}) {
  detail::NestedUpdate policy{observer ? &observer : nullptr};
  return detail::run_em(data, n_classes, init, cfg, policy);
}

// Exact EM for two classes; same iterate sequence as fit_nested_em with R=2.
inline FitResult fit_em_two_class(const Dataset& data,
                                  const Initialization& init,
                                  const EstimatorConfig& cfg) {
  if (init.params.n_classes != 2)
    throw domain_error("fit_em_two_class requires exactly two classes");
  detail::TwoClassUpdate policy;
  return detail::run_em(data, 2, init, cfg, policy);
}

inline FitResult fit_nr_em_q1(const Dataset& data, int n_classes,
                              const Initialization& init,
                              const EstimatorConfig& cfg) {
  detail::NewtonQ1Update policy{cfg.alpha};
  return detail::run_em(data, n_classes, init, cfg, policy);
}

inline FitResult fit_nr_em(const Dataset& data, int n_classes,
                           const Initialization& init,
                           const EstimatorConfig& cfg) {
  detail::NewtonObservedUpdate policy{cfg.alpha};
  return detail::run_em(data, n_classes, init, cfg, policy);
}

inline FitResult fit_mm_em(const Dataset& data, int n_classes,
                           const Initialization& init,
                           const EstimatorConfig& cfg) {
  detail::MmUpdate policy(data, n_classes);
  return detail::run_em(data, n_classes, init, cfg, policy);
}

inline FitResult fit_hybrid_em(const Dataset& data, int n_classes,
                               const Initialization& init,
                               const EstimatorConfig& cfg) {
  detail::HybridUpdate policy;
  policy.newton.alpha = cfg.alpha;
  policy.epsilon = cfg.epsilon;
  FitResult result = detail::run_em(data, n_classes, init, cfg, policy);
  result.switch_iteration = policy.switch_iteration;
  return result;
}

// Classical latent class EM without covariates; exposed for the three-step
// routine and its monotonicity tests.
struct NoCovariateFit {
  Eigen::VectorXd class_probs;
  std::vector<Eigen::MatrixXd> pi;
  Eigen::MatrixXd responsibilities;
  std::vector<double> loglik_trace;
  int iterations = 0;
  bool converged = false;
};

inline NoCovariateFit fit_no_covariate_lcm(const Dataset& data, int n_classes,
                                           const Eigen::VectorXd& class_probs0,
                                           const std::vector<Eigen::MatrixXd>& pi0,
                                           const EstimatorConfig& cfg) {
  NoCovariateFit fit;
  fit.class_probs = class_probs0;
  fit.pi = pi0;

  ModelParams params;  // reuse the density machinery with constant weights
  params.n_classes = n_classes;
  params.beta = Eigen::MatrixXd::Zero(n_classes - 1, data.n_covariates());
  params.pi = pi0;

  Eigen::MatrixXd log_density = detail::log_response_density(params, data);
  auto marginal = [&](const Eigen::VectorXd& probs,
                      const Eigen::MatrixXd& density) {
    Eigen::RowVectorXd log_probs = probs.array().max(0.0).log().transpose();
    double total = 0.0;
    for (int i = 0; i < density.rows(); ++i)
      total += detail::log_sum_exp(density.row(i) + log_probs);
    return total;
  };
  fit.loglik_trace.push_back(marginal(fit.class_probs, log_density));

  for (int t = 1; t <= cfg.max_iter; ++t) {
    Eigen::MatrixXd scores = log_density;
    for (int r = 0; r < n_classes; ++r)
      scores.col(r).array() += std::log(std::max(fit.class_probs[r], 0.0));
    const Eigen::MatrixXd sbar = detail::softmax_rows(scores);
    fit.class_probs = sbar.colwise().mean().transpose();
    try {
      fit.pi = m_step_pi(Responsibilities{sbar}, data);
    } catch (const empty_class_error& e) {
      throw empty_class_error(e.class_index,
                              "at stage-1 iteration " + std::to_string(t));
    }
    params.pi = fit.pi;
    log_density = detail::log_response_density(params, data);
    fit.responsibilities = sbar;
    const double ll = marginal(fit.class_probs, log_density);
    const double increment = ll - fit.loglik_trace.back();
    fit.loglik_trace.push_back(ll);
    fit.iterations = t;
    if (std::abs(increment) < cfg.tol) {
      fit.converged = true;
      break;
    }
  }
  return fit;
}

namespace detail {

// Multinomial logit MLE on hard labels. Newton with step halving: the
// objective is concave and the information is positive definite, so a damped
// Newton direction always admits an improving step; plain full steps can
// diverge from dispersed starting values.
struct LogitFit {
  Eigen::MatrixXd beta;
  int iterations = 0;
  bool converged = false;
};

inline LogitFit fit_multinomial_logit(const Eigen::MatrixXd& design,
                                      const std::vector<int>& labels,
                                      int n_classes,
                                      const Eigen::MatrixXd& beta0, double tol,
                                      int max_iter = 200) {
  const int n = static_cast<int>(design.rows());
  Eigen::MatrixXd indicator = Eigen::MatrixXd::Zero(n, n_classes);
  for (int i = 0; i < n; ++i) indicator(i, labels[i]) = 1.0;

  auto loglik = [&](const Eigen::MatrixXd& beta) {
    const Eigen::MatrixXd h = linear_predictors(beta, design);
    double ll = 0.0;
    for (int i = 0; i < n; ++i)
      ll += h(i, labels[i]) - log_sum_exp(h.row(i));
    return ll;
  };

  LogitFit fit;
  fit.beta = beta0;
  double ll = loglik(fit.beta);
  for (int t = 1; t <= max_iter; ++t) {
    fit.iterations = t;
    const Eigen::MatrixXd nu =
        softmax_rows(linear_predictors(fit.beta, design));
    const Eigen::VectorXd g = stacked_score(indicator, nu, design);
    const Eigen::MatrixXd info = soft_information(nu, design);
    const Eigen::VectorXd step =
        solve_symmetric_checked(info, g, "multinomial logit Newton system");
    double scale = 1.0;
    Eigen::MatrixXd candidate;
    double ll_new = neg_inf;
    for (int halving = 0; halving < 40; ++halving, scale *= 0.5) {
      candidate = fit.beta;
      add_stacked(candidate, step, scale);
      ll_new = loglik(candidate);
      if (ll_new >= ll) break;
    }
    fit.beta = candidate;
    if (std::abs(ll_new - ll) < tol) {
      fit.converged = true;
      break;
    }
    ll = ll_new;
  }
  return fit;
}

}  // namespace detail

// Classical three-step estimation: latent classes without covariates, modal
// assignment, then a multinomial logit of the predicted classes on the
// covariates. The trace holds the single full-model log-likelihood of the
// combined estimate.
inline FitResult fit_three_step_classical(const Dataset& data, int n_classes,
                                          const Initialization& init,
                                          const EstimatorConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  cfg.validate();
  data.validate();
  if (init.params.n_classes != n_classes)
    throw shape_error("initialization was built for a different class count");

  // step 1: marginal class probabilities seeded from the shared beta draw
  const Eigen::VectorXd class_probs0 =
      class_probabilities(init.params, data).colwise().mean().transpose();
  const NoCovariateFit stage1 =
      fit_no_covariate_lcm(data, n_classes, class_probs0, init.params.pi, cfg);

  FitResult result;

  // step 2: modal assignment, ties toward the lowest class index
  std::vector<int> labels(data.n_units());
  for (int i = 0; i < data.n_units(); ++i) {
    int best = 0;
    for (int r = 1; r < n_classes; ++r) {
      if (stage1.responsibilities(i, r) > stage1.responsibilities(i, best))
        best = r;
      else if (stage1.responsibilities(i, r) == stage1.responsibilities(i, best))
        result.diagnostics.push_back("modal assignment tie at unit " +
                                     std::to_string(i + 1) + "; kept class " +
                                     std::to_string(best + 1));
    }
    labels[i] = best;
  }

  // step 3: multinomial logit of the predicted classes on the covariates
  detail::LogitFit logit;
  try {
    logit = detail::fit_multinomial_logit(data.design, labels, n_classes,
                                          init.params.beta, cfg.tol);
  } catch (const singular_system_error& e) {
    throw singular_system_error(
        std::string(e.what()) + " in three-step regression (possible separation)",
        e.class_index);
  }

  result.params.n_classes = n_classes;
  result.params.beta = logit.beta;
  result.params.pi = stage1.pi;
  result.loglik_trace.push_back(log_likelihood(result.params, data));
  result.iterations = stage1.iterations + logit.iterations;
  result.converged = stage1.converged && logit.converged;
  result.decay_count = 0;
  result.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

// Stable identifiers for estimator selection.
enum class Algorithm {
  nested_em,
  hybrid_em,
  nr_em,
  nr_em_q1,
  mm_em,
  three_step,
  em_two_class,
};

inline const std::vector<std::pair<Algorithm, std::string>>& algorithm_names() {
  static const std::vector<std::pair<Algorithm, std::string>> names = {
      {Algorithm::nested_em, "nested_em"},
      {Algorithm::hybrid_em, "hybrid_em"},
      {Algorithm::nr_em, "nr_em"},
      {Algorithm::nr_em_q1, "nr_em_q1"},
      {Algorithm::mm_em, "mm_em"},
      {Algorithm::three_step, "three_step"},
      {Algorithm::em_two_class, "em_two_class"},
  };
  return names;
}

inline std::string to_string(Algorithm algorithm) {
  for (const auto& [algo, name] : algorithm_names())
    if (algo == algorithm) return name;
  throw domain_error("unknown algorithm id");
}

inline Algorithm algorithm_from_string(const std::string& name) {
  for (const auto& [algo, algo_name] : algorithm_names())
    if (algo_name == name) return algo;
  throw domain_error("unknown estimator '" + name +
                     "' (expected one of: nested_em, hybrid_em, nr_em, "
                     "nr_em_q1, mm_em, three_step, em_two_class)");
}

inline FitResult fit(Algorithm algorithm, const Dataset& data, int n_classes,
                     const Initialization& init, const EstimatorConfig& cfg) {
  switch (algorithm) {
    case Algorithm::nested_em:
      return fit_nested_em(data, n_classes, init, cfg);
    case Algorithm::hybrid_em:
      return fit_hybrid_em(data, n_classes, init, cfg);
    case Algorithm::nr_em:
      return fit_nr_em(data, n_classes, init, cfg);
    case Algorithm::nr_em_q1:
      return fit_nr_em_q1(data, n_classes, init, cfg);
    case Algorithm::mm_em:
      return fit_mm_em(data, n_classes, init, cfg);
    case Algorithm::three_step:
      return fit_three_step_classical(data, n_classes, init, cfg);
    case Algorithm::em_two_class:
      if (n_classes != 2)
        throw domain_error("em_two_class requires --classes 2");
      return fit_em_two_class(data, init, cfg);
  }
  throw domain_error("unknown algorithm id");
}

}  // namespace lcr
