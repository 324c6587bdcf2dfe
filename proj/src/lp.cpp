#include "topobench/lp.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>

namespace topobench::lp {

namespace {

using Vec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;

// Largest step in [0, 1] keeping v + step*dv >= 0.
double max_step(const Vec& v, const Vec& dv) {
  double step = 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (dv[i] < 0) step = std::min(step, -v[i] / dv[i]);
  }
  return step;
}

class NormalSystem {
 public:
  explicit NormalSystem(const SpMat& a) : a_(a), at_(a.transpose()) {}

  bool factorize(const Vec& d) {
    m_ = a_ * d.asDiagonal() * at_;
    double peak = 0;
    for (Eigen::Index i = 0; i < m_.rows(); ++i) peak = std::max(peak, m_.coeff(i, i));
    for (double reg = 1e-14; reg <= 1e-6; reg *= 100) {
      SpMat shifted = m_;
      for (Eigen::Index i = 0; i < shifted.rows(); ++i) shifted.coeffRef(i, i) += reg * std::max(peak, 1.0);
      if (!analyzed_) {
        solver_.analyzePattern(shifted);
        analyzed_ = true;
      }
      solver_.factorize(shifted);
      if (solver_.info() == Eigen::Success) return true;
    }
    return false;
  }

  Vec solve(const Vec& rhs) const { return solver_.solve(rhs); }

 private:
  const SpMat& a_;
  SpMat at_;
  SpMat m_;
  Eigen::SimplicialLDLT<SpMat> solver_;
  bool analyzed_ = false;
};

}  // namespace

Result solve(const Problem& problem, const Options& options) {
  const SpMat& a = problem.a;
  const Vec& b = problem.b;
  const Vec& c = problem.c;
  const Eigen::Index n = a.cols();
  Result res;
  if (n == 0) {
    res.status = Status::optimal;
    return res;
  }
  NormalSystem normal(a);

  // Starting point after Mehrotra: least-squares solutions shifted into the
  // positive orthant.
  if (!normal.factorize(Vec::Ones(n))) return res;
  Vec x = a.transpose() * normal.solve(b);
  Vec y = normal.solve(a * c);
  Vec z = c - a.transpose() * y;
  x.array() += std::max(-1.5 * x.minCoeff(), 0.0);
  z.array() += std::max(-1.5 * z.minCoeff(), 0.0);
  {
    const double xz = x.dot(z);
    const double dx = 0.5 * xz / std::max(z.sum(), 1e-300);
    const double dz = 0.5 * xz / std::max(x.sum(), 1e-300);
    x.array() += dx;
    z.array() += dz;
    // Degenerate case: both shifts vanish.
    if (x.minCoeff() <= 0) x.array() += 1.0;
    if (z.minCoeff() <= 0) z.array() += 1.0;
  }

  const double bnorm = 1.0 + b.norm();
  const double cnorm = 1.0 + c.norm();
  Result best;
  double best_error = std::numeric_limits<double>::infinity();
  int best_iter = 0;
  Status stop = Status::iteration_limit;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    if (!x.allFinite() || !z.allFinite()) {
      stop = Status::numerical_failure;
      break;
    }
    const Vec rp = b - a * x;
    const Vec rd = c - a.transpose() * y - z;
    res.primal_objective = c.dot(x);
    res.dual_objective = b.dot(y);
    res.primal_residual = rp.norm() / bnorm;
    res.dual_residual = rd.norm() / cnorm;
    res.relative_gap = std::abs(res.primal_objective - res.dual_objective) /
                       (1.0 + std::abs(res.primal_objective));
    res.iterations = iter;
    const double error = std::max({res.primal_residual, res.dual_residual, res.relative_gap});
    if (error < best_error) {
      best_error = error;
      best_iter = iter;
      best = res;
      best.x = x;
      best.y = y;
      best.z = z;
    }
    if (error < options.tolerance) break;
    // Near the optimum round-off in the normal equations can keep the
    // residuals from shrinking further.
    if (iter - best_iter >= options.stall_iterations) {
      stop = Status::near_optimal;
      break;
    }

    const Vec d = x.cwiseQuotient(z);
    if (!normal.factorize(d)) {
      stop = Status::numerical_failure;
      break;
    }
    const double mu = x.dot(z) / static_cast<double>(n);

    // Solves for the direction given the complementarity target rc.
    const auto direction = [&](const Vec& rc, Vec& dx, Vec& dy, Vec& dz) {
      const Vec rhs = rp - a * rc.cwiseQuotient(z) + a * d.cwiseProduct(rd);
      dy = normal.solve(rhs);
      dz = rd - a.transpose() * dy;
      dx = (rc - x.cwiseProduct(dz)).cwiseQuotient(z);
    };

    Vec dx, dy, dz;
    direction(-x.cwiseProduct(z), dx, dy, dz);
    const double ap_aff = max_step(x, dx);
    const double ad_aff = max_step(z, dz);
    const double mu_aff = (x + ap_aff * dx).dot(z + ad_aff * dz) / static_cast<double>(n);
    const double sigma = std::pow(mu_aff / mu, 3);

    const Vec rc = (sigma * mu) * Vec::Ones(n) - x.cwiseProduct(z) - dx.cwiseProduct(dz);
    direction(rc, dx, dy, dz);
    const double ap = std::min(1.0, 0.995 * max_step(x, dx));
    const double ad = std::min(1.0, 0.995 * max_step(z, dz));
    x += ap * dx;
    y += ad * dy;
    z += ad * dz;
    // Keep strictly interior despite round-off.
    x = x.cwiseMax(std::numeric_limits<double>::min());
    z = z.cwiseMax(std::numeric_limits<double>::min());
  }
  if (best_error == std::numeric_limits<double>::infinity()) return res;
  best.iterations = res.iterations;
  if (best_error < options.tolerance)
    best.status = Status::optimal;
  else if (best_error < options.acceptable_tolerance)
    best.status = Status::near_optimal;
  else
    best.status = stop == Status::near_optimal ? Status::iteration_limit : stop;
  return best;
}

}  // namespace topobench::lp
