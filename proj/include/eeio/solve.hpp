#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "eeio/assemble.hpp"
#include "eeio/model.hpp"

namespace eeio {

struct SolveResult {
  Eigen::VectorXd x;
  double residual_norm = 0.0;
  double relative_residual = 0.0;
};

/// Dense LU factorization of (I - A), computed once and reused across demand
/// columns. Immutable after construction; concurrent solves are safe.
class LeontiefSolver {
 public:
  explicit LeontiefSolver(const TechnologyMatrix& A);

  /// Solves (I - A) x = y to a relative residual of 1e-10, applying one step
  /// of iterative refinement when needed; throws SingularSystem beyond that.
  SolveResult solve(const Eigen::VectorXd& y) const;

  /// Multi-column solve against the transposed system (I - A)^T X = Y,
  /// used to form row-space products M (I - A)^{-1} without inversion.
  Eigen::MatrixXd solve_transposed(const Eigen::MatrixXd& rhs) const;

  std::size_t dimension() const { return n_; }

 private:
  std::size_t n_ = 0;
  Eigen::MatrixXd system_;  // I - A
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_transposed_;
};

/// Total output requirements x = (I - A)^{-1} y via a linear solve.
SolveResult total_requirements(const TechnologyMatrix& A, const Eigen::VectorXd& y);

/// Consumption footprint of the selected demand categories:
/// totals = C (B x + f_direct), x = (I - A)^{-1} y_scope, with per-sector
/// (emitting sector) and per-substance breakdowns.
FootprintResult footprint(const IOModel& model, const std::vector<std::string>& scope);
FootprintResult footprint(const IOModel& model, const std::vector<std::string>& scope,
                          const LeontiefSolver& solver);

/// Cradle-to-gate impact of one unit of final demand on sector `code`.
/// Direct final-demand emissions are excluded: they are not part of a
/// sector's supply chain.
FootprintResult sector_intensity(const IOModel& model, const std::string& code);
FootprintResult sector_intensity(const IOModel& model, const std::string& code,
                                 const LeontiefSolver& solver);

}  // namespace eeio
