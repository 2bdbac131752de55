#pragma once

// Test-only helpers: independent oracles and in-memory model construction.
// The oracles deliberately avoid the library's solve/regression code paths.

#include <Eigen/Dense>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "eeio/assemble.hpp"
#include "eeio/model.hpp"

namespace eeio::test {

/// Truncated Neumann series sum_k A^k y, stopped when the term norm drops
/// below `tol`.
inline Eigen::VectorXd neumann_requirements(const Eigen::MatrixXd& A,
                                            const Eigen::VectorXd& y,
                                            double tol = 1e-12) {
  Eigen::VectorXd term = y;
  Eigen::VectorXd x = y;
  for (int k = 0; k < 100000; ++k) {
    term = A * term;
    x += term;
    if (term.norm() < tol) break;
  }
  return x;
}

/// Random non-negative matrix rescaled so every column sums to `column_sum`,
/// which bounds the spectral radius by construction.
inline Eigen::MatrixXd random_productive_matrix(int n, double column_sum,
                                                std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) A(i, j) = dist(rng);
  }
  for (int j = 0; j < n; ++j) {
    double sum = A.col(j).sum();
    if (sum > 0) A.col(j) *= column_sum / sum;
  }
  return A;
}

struct OlsOracle {
  double slope;
  double intercept;
  double r_squared;
};

/// OLS via the raw normal equations (2x2 system solved by Cramer's rule);
/// independent of the library's centered-moment formulation.
inline OlsOracle ols_normal_equations(const std::vector<std::pair<double, double>>& pts) {
  double n = static_cast<double>(pts.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double det = n * sxx - sx * sx;
  OlsOracle fit{};
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sxx * sy - sx * sxy) / det;
  double mean_y = sy / n;
  double ss_res = 0, ss_tot = 0;
  for (auto [x, y] : pts) {
    double e = y - (fit.slope * x + fit.intercept);
    ss_res += e * e;
    ss_tot += (y - mean_y) * (y - mean_y);
  }
  fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

inline Classification make_classification(int n, const std::string& prefix = "s") {
  std::vector<SectorEntry> entries;
  for (int i = 0; i < n; ++i) {
    std::string code = prefix + std::to_string(i);
    entries.push_back(SectorEntry{code, code, "CA"});
  }
  return Classification(std::move(entries), Granularity::fine);
}

/// Builds an in-memory model from raw matrices. C defaults to the identity
/// (one midpoint indicator per substance); y is a single "households" column.
inline IOModel make_model(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                          const Eigen::VectorXd& y,
                          Eigen::MatrixXd C = Eigen::MatrixXd(),
                          std::vector<Indicator> indicators = {}) {
  IOModel model;
  const int n = static_cast<int>(A.rows());
  const int n_sub = static_cast<int>(B.rows());
  model.A.commodities = make_classification(n);
  model.A.coefficients = A;
  model.x_out = Eigen::VectorXd::Ones(n);

  model.B.commodities = model.A.commodities;
  model.B.intensities = B;
  for (int s = 0; s < n_sub; ++s) {
    std::string id = "sub" + std::to_string(s);
    model.B.substances.push_back(Substance{id, "air", "kg"});
  }

  if (C.size() == 0) {
    C = Eigen::MatrixXd::Identity(n_sub, n_sub);
  }
  if (indicators.empty()) {
    for (int i = 0; i < C.rows(); ++i) {
      indicators.push_back(
          Indicator{"ind" + std::to_string(i), IndicatorLevel::midpoint, "kg eq"});
    }
  }
  model.C.factors = C;
  model.C.indicators = std::move(indicators);
  model.C.substances = model.B.substances;

  model.y.commodities = model.A.commodities;
  model.y.categories = {"households"};
  model.y.demand = y;

  model.f_direct.substances = model.B.substances;
  model.f_direct.categories = model.y.categories;
  model.f_direct.amounts = Eigen::MatrixXd::Zero(n_sub, 1);
  model.hash = "test";
  return model;
}

}  // namespace eeio::test
