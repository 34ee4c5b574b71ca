// Acceptance suite: every criterion prints one [PASS]/[FAIL] line; the exit
// code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "lcr/lcr.hpp"

namespace {

int failures = 0;

void criterion(const std::string& name, const std::function<bool(std::string&)>& body) {
  const auto start = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  std::printf("[%s] %s (%.1fs)%s%s\n", ok ? "PASS" : "FAIL", name.c_str(),
              seconds, detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

bool check(bool condition, const std::string& message, std::string& detail) {
  if (!condition && detail.empty()) detail = message;
  return condition;
}

lcr::TrueModel monotonicity_model(int n_classes) {
  // n=300, J=6, K_j=3 synthetic generator with moderate separation
  return test::separated_model(n_classes, 6, 3, 0.65);
}

}  // namespace

int main() {
  lcr::EstimatorConfig defaults;  // tol 1e-11, epsilon 0.01, alpha 1

  criterion("1 monotonicity: nested_em, em_two_class, mm_em have zero decays "
            "over 100 runs",
            [&](std::string& detail) {
    lcr::EstimatorConfig cfg = defaults;
    cfg.max_iter = 8000;
    const auto sim3 = lcr::simulate(monotonicity_model(3), 300, 101);
    const auto sim2 = lcr::simulate(monotonicity_model(2), 300, 102);
    bool ok = true;
    const auto report3 = lcr::run_benchmark(
        sim3.dataset, 3, {lcr::Algorithm::nested_em, lcr::Algorithm::mm_em},
        100, cfg, 7000, 2);
    for (const auto& s : report3.per_algorithm) {
      ok &= check(s.failed_runs == 0, lcr::to_string(s.algorithm) + " failed runs", detail);
      ok &= check(s.decay_runs && *s.decay_runs == 0,
                  lcr::to_string(s.algorithm) + " reported decays", detail);
    }
    const auto report2 = lcr::run_benchmark(
        sim2.dataset, 2, {lcr::Algorithm::em_two_class}, 100, cfg, 7100, 2);
    ok &= check(report2.per_algorithm[0].failed_runs == 0,
                "em_two_class failed runs", detail);
    ok &= check(report2.per_algorithm[0].decay_runs &&
                    *report2.per_algorithm[0].decay_runs == 0,
                "em_two_class reported decays", detail);
    return ok;
  });

  criterion("2 chain inequality: per-cycle Q1 comparisons over >= 10^4 cycles",
            [&](std::string& detail) {
    long cycles = 0;
    long violations = 0;
    lcr::Rng rng(2024);
    int fits = 0;
    while (cycles < 10000 && fits < 60) {
      const int n = 100 + static_cast<int>(rng.uniform() * 100);
      const auto data = test::random_dataset(rng, n, 3, 3, 2);
      const auto init =
          lcr::init_random(data, 3, 5000 + static_cast<std::uint64_t>(fits));
      lcr::NestedCycleObserver observer =
          [&](const lcr::NestedCycleInfo& info) {
            const double before =
                lcr::expected_loglik_q1(info.beta_before, info.sbar, data);
            const double after =
                lcr::expected_loglik_q1(info.beta_after, info.sbar, data);
            if (after < before - 1e-9) ++violations;
            ++cycles;
          };
      lcr::EstimatorConfig cfg = defaults;
      cfg.tol = 1e-13;
      cfg.max_iter = 400;
      try {
        lcr::fit_nested_em(data, 3, init, cfg, observer);
      } catch (const lcr::error&) {
        // a degenerate random instance is fine; cycles already counted
      }
      ++fits;
    }
    bool ok = check(cycles >= 10000, "only " + std::to_string(cycles) + " cycles", detail);
    ok &= check(violations == 0, std::to_string(violations) + " violations", detail);
    if (detail.empty())
      detail = std::to_string(cycles) + " cycles, 0 violations";
    return ok;
  });

  criterion("3 oracle equivalence: responsibilities and loglik vs brute force "
            "on 50 instances",
            [&](std::string& detail) {
    lcr::Rng rng(303);
    bool ok = true;
    for (int rep = 0; rep < 50 && ok; ++rep) {
      const int n = 1 + static_cast<int>(rng.uniform() * 10);
      const int j_count = 1 + static_cast<int>(rng.uniform() * 3);
      const int r_count = 1 + static_cast<int>(rng.uniform() * 3);
      const auto data = test::random_dataset(rng, n, j_count, 3, 2);
      const auto params = test::random_params(rng, data, r_count);
      const double ll = lcr::log_likelihood(params, data);
      const double want = test::oracle_loglik(params, data);
      ok &= check(std::abs(ll - want) <= 1e-10,
                  "loglik gap " + std::to_string(std::abs(ll - want)), detail);
      const Eigen::MatrixXd sbar = lcr::responsibilities(params, data).weights;
      const Eigen::MatrixXd oracle = test::oracle_responsibilities(params, data);
      ok &= check((sbar - oracle).cwiseAbs().maxCoeff() <= 1e-10,
                  "responsibility gap", detail);
    }
    return ok;
  });

  criterion("4 gls optimality: stationarity and no improving perturbation on "
            "100 systems",
            [&](std::string& detail) {
    lcr::Rng rng(404);
    bool ok = true;
    for (int rep = 0; rep < 100 && ok; ++rep) {
      const int n = 5 + static_cast<int>(rng.uniform() * 40);
      const int p = 1 + static_cast<int>(rng.uniform() * 4);
      Eigen::MatrixXd design(n, p);
      lcr::PgWeights w;
      w.omega_bar.resize(n);
      w.eta_bar.resize(n);
      w.offsets = Eigen::VectorXd::Zero(n);
      for (int i = 0; i < n; ++i) {
        design(i, 0) = 1.0;
        for (int c = 1; c < p; ++c) design(i, c) = rng.normal(0.0, 1.0);
        w.omega_bar[i] = 1e-3 + 0.249 * rng.uniform();
        w.eta_bar[i] = rng.normal(0.0, 3.0);
      }
      const Eigen::VectorXd beta = lcr::gls_update(design, w);
      const Eigen::VectorXd residual =
          design.transpose() *
          (w.omega_bar.asDiagonal() * (w.eta_bar - design * beta));
      const double scale =
          (design.transpose() * (w.omega_bar.asDiagonal() * w.eta_bar)).norm();
      ok &= check(residual.norm() <= 1e-10 * (1.0 + scale), "stationarity", detail);

      auto objective = [&](const Eigen::VectorXd& b) {
        return -0.5 *
               (w.omega_bar.array() * (w.eta_bar - design * b).array().square())
                   .sum();
      };
      const double at_max = objective(beta);
      for (int c = 0; c < p && ok; ++c)
        for (double delta : {1e-4, -1e-4}) {
          Eigen::VectorXd shifted = beta;
          shifted[c] += delta;
          ok &= check(objective(shifted) <=
                          at_max + 1e-12 * (1.0 + std::abs(at_max)),
                      "perturbation improved the objective", detail);
        }
    }
    return ok;
  });

  criterion("5 score checks: analytic scores and hessians vs finite "
            "differences at 20 points",
            [&](std::string& detail) {
    lcr::Rng rng(505);
    bool ok = true;
    for (int rep = 0; rep < 20 && ok; ++rep) {
      const int n = 15 + static_cast<int>(rng.uniform() * 15);
      const auto data = test::random_dataset(rng, n, 2, 3, 2);
      const auto params = test::random_params(rng, data, 3);
      const Eigen::MatrixXd sbar = lcr::responsibilities(params, data).weights;
      const Eigen::MatrixXd nu = lcr::class_probabilities(params, data);

      // score of the observed loglik
      const Eigen::VectorXd score =
          lcr::detail::stacked_score(sbar, nu, data.design);
      const Eigen::MatrixXd fd_grad = test::fd_loglik_gradient(params, data);
      Eigen::VectorXd fd_score(score.size());
      for (int r = 0; r < params.beta.rows(); ++r)
        for (int p = 0; p < params.beta.cols(); ++p)
          fd_score[r * params.beta.cols() + p] = fd_grad(r, p);
      double scale = 1.0 + score.cwiseAbs().maxCoeff();
      ok &= check((score - fd_score).cwiseAbs().maxCoeff() / scale <= 1e-5,
                  "observed score mismatch", detail);

      // observed hessian vs second differences of the loglik
      const Eigen::MatrixXd observed =
          lcr::detail::soft_information(sbar, data.design) -
          lcr::detail::soft_information(nu, data.design);
      auto ll = [&](const Eigen::MatrixXd& beta) {
        lcr::ModelParams shifted = params;
        shifted.beta = beta;
        return lcr::log_likelihood(shifted, data);
      };
      const Eigen::MatrixXd fd_obs = test::fd_hessian(params.beta, ll, 1e-3);
      scale = 1.0 + observed.cwiseAbs().maxCoeff();
      ok &= check((observed - fd_obs).cwiseAbs().maxCoeff() / scale <= 1e-5,
                  "observed hessian mismatch", detail);

      // q1 hessian vs second differences of Q1 at fixed responsibilities
      const Eigen::MatrixXd q1_hess =
          -lcr::detail::soft_information(nu, data.design);
      auto q1 = [&](const Eigen::MatrixXd& beta) {
        return lcr::expected_loglik_q1(beta, sbar, data);
      };
      const Eigen::MatrixXd fd_q1 = test::fd_hessian(params.beta, q1, 1e-3);
      scale = 1.0 + q1_hess.cwiseAbs().maxCoeff();
      ok &= check((q1_hess - fd_q1).cwiseAbs().maxCoeff() / scale <= 1e-5,
                  "q1 hessian mismatch", detail);
    }
    return ok;
  });

  criterion("6 pg_expectation: exact values, evenness, bounds on 10^5 draws",
            [&](std::string& detail) {
    bool ok = check(lcr::pg_expectation(0.0) == 0.25, "value at zero", detail);
    ok &= check(std::abs(lcr::pg_expectation(2.0) - std::tanh(1.0) / 4.0) <=
                    1e-12,
                "value at two", detail);
    lcr::Rng rng(606);
    for (int rep = 0; rep < 100000 && ok; ++rep) {
      const double z = (rng.uniform() - 0.5) * 100.0;
      const double v = lcr::pg_expectation(z);
      ok &= check(v == lcr::pg_expectation(-z), "evenness", detail);
      ok &= check(v > 0.0 && v <= 0.25, "bound violated", detail);
    }
    return ok;
  });

  criterion("7 ordinal reproduction on an election-shaped benchmark, 100 runs",
            [&](std::string& detail) {
    const auto model = lcr::election_style_model();
    const auto sim = lcr::simulate(model, 880, 2000);
    lcr::EstimatorConfig cfg = defaults;
    cfg.max_iter = 20000;
    const std::vector<lcr::Algorithm> algos = {
        lcr::Algorithm::nested_em, lcr::Algorithm::hybrid_em,
        lcr::Algorithm::nr_em,     lcr::Algorithm::nr_em_q1,
        lcr::Algorithm::mm_em,     lcr::Algorithm::three_step};
    const auto report =
        lcr::run_benchmark(sim.dataset, 3, algos, 100, cfg, 42, 2);

    auto row = [&](lcr::Algorithm a) -> const lcr::AlgorithmSummary& {
      for (const auto& s : report.per_algorithm)
        if (s.algorithm == a) return s;
      throw std::runtime_error("missing summary row");
    };
    const auto& nested = row(lcr::Algorithm::nested_em);
    const auto& hybrid = row(lcr::Algorithm::hybrid_em);
    const auto& nr = row(lcr::Algorithm::nr_em);
    const auto& nr_q1 = row(lcr::Algorithm::nr_em_q1);
    const auto& mm = row(lcr::Algorithm::mm_em);

    bool ok = true;
    ok &= check(nested.decay_runs && *nested.decay_runs == 0,
                "nested_em decays != 0", detail);
    ok &= check(mm.decay_runs && *mm.decay_runs == 0, "mm_em decays != 0",
                detail);
    ok &= check(nr_q1.decay_runs && *nr_q1.decay_runs >= 1,
                "nr_em_q1 decays < 1", detail);
    ok &= check(nr.decay_runs && *nr.decay_runs >= *nr_q1.decay_runs,
                "nr_em decays < nr_em_q1 decays", detail);

    ok &= check(mm.median_iters_to_max && nested.median_iters_to_max &&
                    hybrid.median_iters_to_max,
                "missing median iteration counts", detail);
    if (ok) {
      ok &= check(*mm.median_iters_to_max > *nested.median_iters_to_max,
                  "mm median iterations not above nested", detail);
      ok &= check(*nested.median_iters_to_max >= *hybrid.median_iters_to_max,
                  "nested median iterations below hybrid", detail);
    }

    // every three-step solution sits strictly below the one-step maximum
    double one_step_max = -1e300;
    for (const auto& rec : report.runs)
      if (!rec.failed && rec.algorithm != lcr::Algorithm::three_step)
        one_step_max = std::max(one_step_max, rec.loglik);
    for (const auto& rec : report.runs)
      if (rec.algorithm == lcr::Algorithm::three_step)
        ok &= check(!rec.failed && rec.loglik < one_step_max,
                    "a three_step run reached the one-step maximum", detail);

    if (detail.empty()) {
      char buf[256];
      std::snprintf(buf, sizeof(buf),
                    "decays nr=%d nrq1=%d; median iters mm=%.0f nested=%.0f "
                    "hybrid=%.0f; 3step modes=%d",
                    *nr.decay_runs, *nr_q1.decay_runs, *mm.median_iters_to_max,
                    *nested.median_iters_to_max, *hybrid.median_iters_to_max,
                    row(lcr::Algorithm::three_step).local_mode_runs);
      detail = buf;
    }
    return ok;
  });

  criterion("8 two-class equivalence: identical traces on 10 problems",
            [&](std::string& detail) {
    lcr::Rng rng(808);
    bool ok = true;
    for (int rep = 0; rep < 10 && ok; ++rep) {
      const int n = 30 + static_cast<int>(rng.uniform() * 80);
      const auto data = test::random_dataset(rng, n, 3, 3, 2);
      const auto init =
          lcr::init_random(data, 2, 900 + static_cast<std::uint64_t>(rep));
      lcr::EstimatorConfig cfg = defaults;
      cfg.max_iter = 5000;
      const auto two = lcr::fit_em_two_class(data, init, cfg);
      const auto nested = lcr::fit_nested_em(data, 2, init, cfg);
      ok &= check(two.loglik_trace.size() == nested.loglik_trace.size(),
                  "trace lengths differ", detail);
      for (std::size_t t = 0; ok && t < two.loglik_trace.size(); ++t)
        ok &= check(
            std::abs(two.loglik_trace[t] - nested.loglik_trace[t]) <= 1e-12,
            "trace entries differ at t=" + std::to_string(t), detail);
    }
    return ok;
  });

  criterion("9 recovery: best-of-20 nested EM beats the generating parameters",
            [&](std::string& detail) {
    const auto model = test::separated_model(3, 5, 3, 0.8);
    const auto sim = lcr::simulate(model, 2000, 909);
    const double truth = lcr::log_likelihood(model.params, sim.dataset);
    lcr::EstimatorConfig cfg = defaults;
    cfg.max_iter = 5000;
    double best = -1e300;
    for (int seed = 0; seed < 20; ++seed) {
      const auto init = lcr::init_random(sim.dataset, 3, seed);
      const auto result = lcr::fit_nested_em(sim.dataset, 3, init, cfg);
      best = std::max(best, result.final_loglik());
    }
    const bool ok = check(best >= truth,
                          "best " + std::to_string(best) + " < truth " +
                              std::to_string(truth),
                          detail);
    if (detail.empty())
      detail = "best " + std::to_string(best) + " vs truth " +
               std::to_string(truth);
    return ok;
  });

  if (failures > 0)
    std::printf("%d criterion(s) failed\n", failures);
  else
    std::printf("all acceptance criteria passed\n");
  return failures;
}
