// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "dims.hpp"
#include "forms.hpp"

#include <Eigen/Dense>
#include <optional>

namespace fanossa::ssa {

struct EpochCumulants {
  Eigen::VectorXd mean;        // length n+1
  Eigen::MatrixXd covariance;  // symmetric PSD (n+1) x (n+1)
};

// Mean and unbiased sample covariance (divisor m-1 by default).
EpochCumulants estimate_cumulants(const Eigen::MatrixXd& samples,
                                  bool unbiased = true);

struct SsaInstance {
  std::vector<EpochCumulants> epochs;  // s+1 entries
  Eigen::MatrixXd ground_truth;        // (k+1) x (n+1) orthonormal rows
  std::optional<int> rank_constraint;
};

struct DifferenceSystem {
  std::vector<Eigen::VectorXd> linear_forms;  // mu_i - mu_0
  std::vector<Eigen::MatrixXd> quadrics;      // Sigma_i - Sigma_0 (Gram)
  int dropped_linear = 0;  // numerically-zero forms removed
  int dropped_quadrics = 0;
};

// Per-epoch cumulant differences against epoch 0; forms with sup-norm
// below tol * (largest entry magnitude across all differences) are
// dropped and counted.
DifferenceSystem difference_system(const std::vector<EpochCumulants>& epochs,
                                   double tol = 1e-10);

struct ReducedSystem {
  std::vector<Eigen::MatrixXd> quadrics;  // in the reduced ambient
  Eigen::MatrixXd embedding;  // rows: basis of the linear forms' kernel
};

// Substitutes a kernel basis of the linear forms into the quadrics; the
// ambient dimension drops by the rank of the linear system.  Throws if
// the kernel cannot hold a k-plane.
ReducedSystem reduce_ambient(const DifferenceSystem& sys, int k,
                             double tol = 1e-10);

// Synthetic population instance with known stationary subspace.
SsaInstance generate_instance(int n, int k, int s, std::optional<int> rank_r,
                              forms::Rng& rng);

struct IdentifiabilityReport {
  int n, k, s;
  std::optional<int> r;
  mpz_class delta;
  bool verdict;
  mpz_class delta_threshold;
  mpz_class closed_form_threshold;
  std::optional<mpz_class> coarse_threshold;
  bool discrepancy_flag;  // delta_threshold != closed_form_threshold
};

IdentifiabilityReport identifiability_report(int n, int k, int s,
                                             std::optional<int> r);

struct RecoveryOptions {
  int restarts = 50;
  int max_iterations = 10000;
  double grad_tol = 1e-10;
  double cluster_radius = 1e-4;       // chordal
  double residual_factor = 1e-12;     // accept below residual_factor * scale
};

struct RecoveredSubspace {
  Eigen::MatrixXd basis;  // (k+1) x ambient, orthonormal rows
  double residual;
  int supporting_restarts;
};

struct RecoveryResult {
  std::vector<RecoveredSubspace> clusters;  // sorted by residual
  int converged_restarts = 0;
  double scale = 0;
};

// Objective sum_i |W G_i W^T|_F^2 + sum_i |W l_i|^2 and its Euclidean
// gradient; exposed for the finite-difference check.
double objective(const Eigen::MatrixXd& w,
                 const std::vector<Eigen::VectorXd>& linear_forms,
                 const std::vector<Eigen::MatrixXd>& quadrics);
Eigen::MatrixXd objective_gradient(const Eigen::MatrixXd& w,
                                   const std::vector<Eigen::VectorXd>& linear_forms,
                                   const std::vector<Eigen::MatrixXd>& quadrics);

// Multi-restart projected gradient descent over matrices with orthonormal
// rows; converged minima below the residual threshold are clustered by
// chordal subspace distance.
RecoveryResult recover_subspace(const std::vector<Eigen::VectorXd>& linear_forms,
                                const std::vector<Eigen::MatrixXd>& quadrics,
                                int k, const RecoveryOptions& opts,
                                forms::Rng& rng);

// Orthonormal (k+1) x (n+1) matrix with rows spanning a uniformly random
// subspace.
Eigen::MatrixXd random_stiefel(int rows, int cols, forms::Rng& rng);

}  // namespace fanossa::ssa
