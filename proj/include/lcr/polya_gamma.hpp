#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <string>

#include "lcr/types.hpp"

// Polya-gamma conditional expectations and the weighted least-squares
// maximizer they enable. Together these implement one closed-form coefficient
// update of a logistic-form expected log-likelihood.

namespace lcr {

// Conditional expectation of a PG(1, z) variable: tanh(z/2) / (2z), with the
// removable singularity at zero evaluated by series. Even in z, bounded by
// (0, 1/4].
inline double pg_expectation(double z) {
  if (!std::isfinite(z)) throw domain_error("pg_expectation needs finite z");
  const double az = std::abs(z);
  if (az < 1e-4) return 0.25 - z * z / 48.0;  // tanh(z/2)/(2z) = 1/4 - z^2/48 + O(z^4)
  return std::tanh(0.5 * az) / (2.0 * az);
}

// Augmented-data weights for one nested cycle: per-unit omega_bar, working
// responses eta_bar, and the offsets a_i they were formed under.
struct PgWeights {
  Eigen::VectorXd omega_bar;  // in (0, 1/4]
  Eigen::VectorXd eta_bar;
  Eigen::VectorXd offsets;    // a_i = log c_i
};

// omega floor: eta_bar divides by omega_bar, which is positive analytically
// but is clamped away from zero before the division.
inline constexpr double pg_omega_floor = 1e-12;

// For class r with linear predictor x_i' beta_r and offsets a_i:
//   omega_bar_i = E(omega | z_i) at z_i = x_i' beta_r - a_i
//   eta_bar_i   = (sbar_ir - 1/2 + omega_bar_i a_i) / omega_bar_i
inline PgWeights pg_weights_for_cycle(const Eigen::VectorXd& beta_r,
                                      const Eigen::VectorXd& offsets,
                                      const Eigen::VectorXd& sbar_r,
                                      const Dataset& data) {
  const int n = data.n_units();
  if (beta_r.size() != data.design.cols())
    throw shape_error("beta_r length does not match design columns");
  if (offsets.size() != n || sbar_r.size() != n)
    throw shape_error("offsets and sbar_r must have one entry per unit");

  PgWeights w;
  w.offsets = offsets;
  w.omega_bar.resize(n);
  w.eta_bar.resize(n);
  const Eigen::VectorXd z = data.design * beta_r - offsets;
  for (int i = 0; i < n; ++i) {
    const double omega = std::max(pg_expectation(z[i]), pg_omega_floor);
    w.omega_bar[i] = omega;
    w.eta_bar[i] = (sbar_r[i] - 0.5 + omega * offsets[i]) / omega;
  }
  return w;
}

namespace detail {

// Condition number of a symmetric matrix from its eigenvalue spread;
// infinity when the smallest magnitude is zero.
inline double symmetric_condition(const Eigen::MatrixXd& a,
                                  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>& eig) {
  eig.compute(a);
  const Eigen::VectorXd abs_vals = eig.eigenvalues().cwiseAbs();
  const double lo = abs_vals.minCoeff();
  const double hi = abs_vals.maxCoeff();
  if (lo == 0.0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

inline constexpr double condition_limit = 1e12;

// Raw Newton systems are allowed to be nastier than the weighted normal
// equations: an ill-conditioned but solvable Hessian yields a wild step whose
// consequence (a log-likelihood decay) is exactly what the benchmark records.
// Only a numerically unsolvable system is an error.
inline constexpr double newton_condition_limit = 1e14;

// Solve a symmetric system with a condition check; used for the Newton and
// MM updates where the matrix need not be definite.
inline Eigen::VectorXd solve_symmetric_checked(const Eigen::MatrixXd& a,
                                               const Eigen::VectorXd& b,
                                               const std::string& context,
                                               int class_index = -1,
                                               double limit = condition_limit) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  const double cond = symmetric_condition(a, eig);
  if (!(cond < limit))
    throw singular_system_error(context + ": condition number " +
                                    std::to_string(cond) + " exceeds " +
                                    std::to_string(limit),
                                class_index);
  return eig.eigenvectors() *
         (eig.eigenvectors().transpose() * b).cwiseQuotient(eig.eigenvalues());
}

}  // namespace detail

// Generalized least squares maximizer of
//   Q1*(beta) = sum_i -omega_i (eta_i - x_i' beta)^2 / 2,
// i.e. the solution of (X' Omega X) beta = X' Omega eta via a positive
// definite factorization. Throws singular_system_error when X' Omega X has
// condition number above 1e12.
inline Eigen::VectorXd gls_update(const Eigen::MatrixXd& design,
                                  const PgWeights& weights) {
  if (weights.omega_bar.size() != design.rows() ||
      weights.eta_bar.size() != design.rows())
    throw shape_error("weights must have one entry per design row");
  const Eigen::MatrixXd weighted = weights.omega_bar.asDiagonal() * design;
  const Eigen::MatrixXd normal = design.transpose() * weighted;
  const Eigen::VectorXd rhs = weighted.transpose() * weights.eta_bar;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  const double cond = detail::symmetric_condition(normal, eig);
  if (!(cond < detail::condition_limit))
    throw singular_system_error(
        "weighted normal equations: condition number " + std::to_string(cond) +
        " exceeds 1e12");
  return normal.ldlt().solve(rhs);
}

}  // namespace lcr
