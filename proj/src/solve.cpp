#include "eeio/solve.hpp"

#include <algorithm>
#include <cmath>

namespace eeio {

namespace {

constexpr double kResidualTol = 1e-10;

Eigen::VectorXd scope_column(const Eigen::MatrixXd& columns,
                             const std::vector<std::string>& categories,
                             const std::vector<std::string>& scope) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(columns.rows());
  for (const auto& label : scope) {
    auto it = std::find(categories.begin(), categories.end(), label);
    if (it == categories.end()) {
      throw Error(ErrorCode::UnknownScope,
                  "demand category '" + label + "' is not in the model");
    }
    out += columns.col(it - categories.begin());
  }
  return out;
}

FootprintResult footprint_impl(const IOModel& model, const LeontiefSolver& solver,
                               const Eigen::VectorXd& y,
                               const Eigen::VectorXd& f_direct,
                               std::vector<std::string> scope) {
  SolveResult sol = solver.solve(y);
  const Eigen::VectorXd& x = sol.x;

  FootprintResult result;
  result.indicators = model.C.indicators;
  result.commodities = model.A.commodities;
  result.substances = model.B.substances;
  result.scope = std::move(scope);
  result.model_hash = model.hash;

  Eigen::VectorXd loads = model.B.intensities * x;  // substance totals
  result.by_substance =
      model.C.factors * (loads + f_direct).asDiagonal();
  result.by_sector =
      model.C.factors * (model.B.intensities * x.asDiagonal());
  result.direct_component = model.C.factors * f_direct;
  result.totals = model.C.factors * (loads + f_direct);
  return result;
}

}  // namespace

LeontiefSolver::LeontiefSolver(const TechnologyMatrix& A)
    : n_(A.commodities.size()) {
  require_productive(A.coefficients);
  system_ = Eigen::MatrixXd::Identity(A.coefficients.rows(), A.coefficients.cols()) -
            A.coefficients;
  lu_.compute(system_);
  lu_transposed_.compute(system_.transpose());
}

SolveResult LeontiefSolver::solve(const Eigen::VectorXd& y) const {
  if (y.size() != static_cast<Eigen::Index>(n_)) {
    throw Error(ErrorCode::AxisMismatch,
                "demand vector length " + std::to_string(y.size()) +
                    " does not match model dimension " + std::to_string(n_));
  }
  if (!y.allFinite()) {
    throw Error(ErrorCode::AxisMismatch, "demand vector has non-finite entries");
  }
  SolveResult result;
  result.x = lu_.solve(y);
  double y_norm = y.norm();
  auto residual = [&](const Eigen::VectorXd& x) { return (y - system_ * x).eval(); };

  Eigen::VectorXd r = residual(result.x);
  result.residual_norm = r.norm();
  result.relative_residual = y_norm > 0 ? result.residual_norm / y_norm : result.residual_norm;
  if (result.relative_residual > kResidualTol) {
    // one step of iterative refinement, then hard error
    result.x += lu_.solve(r);
    r = residual(result.x);
    result.residual_norm = r.norm();
    result.relative_residual =
        y_norm > 0 ? result.residual_norm / y_norm : result.residual_norm;
    if (result.relative_residual > kResidualTol || !result.x.allFinite()) {
      throw Error(ErrorCode::SingularSystem,
                  "solve residual " + std::to_string(result.relative_residual) +
                      " exceeds tolerance after refinement");
    }
  }
  return result;
}

Eigen::MatrixXd LeontiefSolver::solve_transposed(const Eigen::MatrixXd& rhs) const {
  return lu_transposed_.solve(rhs);
}

SolveResult total_requirements(const TechnologyMatrix& A, const Eigen::VectorXd& y) {
  return LeontiefSolver(A).solve(y);
}

FootprintResult footprint(const IOModel& model, const std::vector<std::string>& scope,
                          const LeontiefSolver& solver) {
  if (scope.empty()) {
    throw Error(ErrorCode::UnknownScope, "demand scope is empty");
  }
  Eigen::VectorXd y = scope_column(model.y.demand, model.y.categories, scope);
  Eigen::VectorXd f = scope_column(model.f_direct.amounts, model.f_direct.categories, scope);
  return footprint_impl(model, solver, y, f, scope);
}

FootprintResult footprint(const IOModel& model, const std::vector<std::string>& scope) {
  LeontiefSolver solver(model.A);
  return footprint(model, scope, solver);
}

FootprintResult sector_intensity(const IOModel& model, const std::string& code,
                                 const LeontiefSolver& solver) {
  auto idx = model.A.commodities.index_of(code);
  if (!idx) {
    throw Error(ErrorCode::UnknownSector, "sector '" + code + "' is not in the model");
  }
  Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.A.commodities.size()));
  y(static_cast<Eigen::Index>(*idx)) = 1.0;
  Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.B.substances.size()));
  return footprint_impl(model, solver, y, f, {"unit:" + code});
}

FootprintResult sector_intensity(const IOModel& model, const std::string& code) {
  LeontiefSolver solver(model.A);
  return sector_intensity(model, code, solver);
}

}  // namespace eeio
