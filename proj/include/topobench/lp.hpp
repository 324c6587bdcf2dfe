#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace topobench::lp {

/// minimize c'x  subject to  A x = b,  x >= 0.
///
/// A must have full row rank; the solver does not detect redundant rows.
struct Problem {
  Eigen::SparseMatrix<double> a;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
};

struct Options {
  /// Relative primal/dual infeasibility and duality gap at termination.
  double tolerance = 1e-10;
  /// Reported as near_optimal when progress stalls above `tolerance`.
  double acceptable_tolerance = 1e-8;
  /// Iterations without improving the best iterate before giving up.
  int stall_iterations = 15;
  int max_iterations = 200;
};

enum class Status { optimal, near_optimal, iteration_limit, numerical_failure };

struct Result {
  Status status = Status::numerical_failure;
  Eigen::VectorXd x;  // primal
  Eigen::VectorXd y;  // equality duals
  Eigen::VectorXd z;  // reduced costs
  double primal_objective = 0;
  double dual_objective = 0;
  double primal_residual = 0;  // ||b - Ax|| / (1 + ||b||)
  double dual_residual = 0;    // ||c - A'y - z|| / (1 + ||c||)
  double relative_gap = 0;
  int iterations = 0;
};

/// Mehrotra predictor-corrector interior-point method on the normal
/// equations, factorized with a sparse LDL' (AMD ordering). The returned
/// point is the best iterate seen, measured by the worst of the three
/// termination quantities.
Result solve(const Problem& problem, const Options& options = {});

}  // namespace topobench::lp
