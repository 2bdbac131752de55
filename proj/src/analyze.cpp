#include "eeio/analyze.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace eeio {

DecompositionResult first_tier_decomposition(const IOModel& model,
                                             const std::string& sector,
                                             const LeontiefSolver& solver) {
  auto idx = model.A.commodities.index_of(sector);
  if (!idx) {
    throw Error(ErrorCode::UnknownSector, "sector '" + sector + "' is not in the model");
  }
  const auto s = static_cast<Eigen::Index>(*idx);
  const auto n = static_cast<Eigen::Index>(model.A.commodities.size());

  // Intensity of every commodity at once: Q = C B (I - A)^{-1}, formed as a
  // transposed multi-column solve so the inverse is never materialized.
  Eigen::MatrixXd M = model.C.factors * model.B.intensities;  // indicator x commodity
  Eigen::MatrixXd Q = solver.solve_transposed(M.transpose()).transpose();

  DecompositionResult result;
  result.sector = sector;
  result.indicators = model.C.indicators;
  result.commodities = model.A.commodities;
  result.direct = M.col(s);
  result.total = Q.col(s);
  result.per_input.resize(Q.rows(), n);
  for (Eigen::Index j = 0; j < n; ++j) {
    result.per_input.col(j) = Q.col(j) * model.A.coefficients(j, s);
  }
  return result;
}

DecompositionResult first_tier_decomposition(const IOModel& model,
                                             const std::string& sector) {
  LeontiefSolver solver(model.A);
  return first_tier_decomposition(model, sector, solver);
}

namespace {

GroupedContributions aggregate_columns(const Eigen::MatrixXd& values,
                                       const std::vector<Indicator>& indicators,
                                       const Classification& commodities,
                                       const AggregationHierarchy& hierarchy,
                                       const std::string& level_id) {
  const AggregationLevel* level = hierarchy.find(level_id);
  if (!level) {
    throw Error(ErrorCode::UnknownLevel, "aggregation level '" + level_id + "' not found");
  }
  GroupedContributions out;
  out.indicators = indicators;

  // Group order follows first appearance in classification order.
  std::map<std::string, Eigen::Index> group_index;
  for (const auto& entry : commodities.entries()) {
    auto it = level->groups.find(entry.code);
    if (it == level->groups.end()) {
      throw Error(ErrorCode::AxisMismatch,
                  "level '" + level_id + "' does not cover fine code '" +
                      entry.code + "'");
    }
    if (!group_index.contains(it->second)) {
      group_index.emplace(it->second, static_cast<Eigen::Index>(out.groups.size()));
      out.groups.push_back(it->second);
    }
  }

  out.values = Eigen::MatrixXd::Zero(values.rows(),
                                     static_cast<Eigen::Index>(out.groups.size()));
  for (std::size_t j = 0; j < commodities.size(); ++j) {
    const std::string& group = level->groups.at(commodities.at(j).code);
    out.values.col(group_index.at(group)) += values.col(static_cast<Eigen::Index>(j));
  }
  return out;
}

}  // namespace

GroupedContributions aggregate(const FootprintResult& result,
                               const AggregationHierarchy& hierarchy,
                               const std::string& level_id) {
  return aggregate_columns(result.by_sector, result.indicators, result.commodities,
                           hierarchy, level_id);
}

GroupedContributions aggregate(const DecompositionResult& result,
                               const AggregationHierarchy& hierarchy,
                               const std::string& level_id) {
  return aggregate_columns(result.per_input, result.indicators, result.commodities,
                           hierarchy, level_id);
}

std::vector<std::size_t> rank_groups(const GroupedContributions& grouped,
                                     std::size_t indicator) {
  std::vector<std::size_t> order(grouped.groups.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return grouped.values(static_cast<Eigen::Index>(indicator),
                          static_cast<Eigen::Index>(a)) >
           grouped.values(static_cast<Eigen::Index>(indicator),
                          static_cast<Eigen::Index>(b));
  });
  return order;
}

Eigen::VectorXd national_shares(const IOModel& model,
                                const std::vector<std::string>& targets,
                                const std::vector<std::string>& scope,
                                ShareAttribution attribution) {
  FootprintResult national = footprint(model, scope);
  const auto n_ind = static_cast<Eigen::Index>(national.indicators.size());
  Eigen::VectorXd numerator = Eigen::VectorXd::Zero(n_ind);
  Eigen::VectorXd denominator;

  if (attribution == ShareAttribution::emitting_sector) {
    denominator = national.by_sector.rowwise().sum();
    for (const auto& code : targets) {
      auto idx = model.A.commodities.index_of(code);
      if (!idx) {
        throw Error(ErrorCode::UnknownSector,
                    "target sector '" + code + "' is not in the model");
      }
      numerator += national.by_sector.col(static_cast<Eigen::Index>(*idx));
    }
  } else {
    denominator = national.totals;
    for (const auto& label : targets) {
      FootprintResult part = footprint(model, {label});
      numerator += part.totals;
    }
  }

  Eigen::VectorXd shares = Eigen::VectorXd::Zero(n_ind);
  for (Eigen::Index i = 0; i < n_ind; ++i) {
    shares(i) = denominator(i) != 0 ? numerator(i) / denominator(i) : 0.0;
  }
  return shares;
}

double per_capita(double total, double population) {
  if (!(population > 0)) {
    throw Error(ErrorCode::ZeroPopulation, "population must be positive");
  }
  return total / population;
}

RegressionFit midpoint_endpoint_regression(
    const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) {
    throw Error(ErrorCode::TooFewPoints,
                "regression needs at least 2 points, got " +
                    std::to_string(points.size()));
  }
  const double n = static_cast<double>(points.size());
  double sx = 0, sy = 0;
  for (const auto& [x, y] : points) {
    sx += x;
    sy += y;
  }
  const double mean_x = sx / n;
  const double mean_y = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [x, y] : points) {
    sxx += (x - mean_x) * (x - mean_x);
    sxy += (x - mean_x) * (y - mean_y);
    syy += (y - mean_y) * (y - mean_y);
  }
  if (sxx == 0) {
    throw Error(ErrorCode::DegenerateX, "all x values are identical");
  }

  RegressionFit fit;
  fit.n_points = static_cast<int>(points.size());
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  double ss_res = 0;
  for (const auto& [x, y] : points) {
    double e = y - (fit.slope * x + fit.intercept);
    ss_res += e * e;
  }
  // SS_tot == 0 means a constant y fitted exactly; report a perfect fit.
  fit.r_squared = syy > 0 ? 1.0 - ss_res / syy : 1.0;
  fit.r_squared = std::clamp(fit.r_squared, 0.0, 1.0);
  return fit;
}

LifecycleReport lifecycle_report(const std::vector<LifecycleComponent>& components) {
  double total = 0.0;
  for (const auto& c : components) {
    if (c.value < 0) {
      throw Error(ErrorCode::NegativeAmount,
                  "lifecycle component '" + c.label + "' has a negative value");
    }
    total += c.value;
  }
  if (!(total > 0)) {
    throw Error(ErrorCode::AllZero, "all lifecycle components are zero");
  }

  LifecycleReport report;
  report.total = total;
  std::map<std::string, std::size_t> group_index;
  for (const auto& c : components) {
    report.components.push_back(
        LifecycleShare{c.label, c.group, c.value, c.value / total});
    auto [it, inserted] = group_index.emplace(c.group, report.groups.size());
    if (inserted) {
      report.groups.push_back(LifecycleShare{c.group, c.group, 0.0, 0.0});
    }
    auto& g = report.groups[it->second];
    g.value += c.value;
    g.share += c.value / total;
  }
  return report;
}

}  // namespace eeio
