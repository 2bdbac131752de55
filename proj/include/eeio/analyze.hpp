#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "eeio/assemble.hpp"
#include "eeio/model.hpp"
#include "eeio/solve.hpp"

namespace eeio {

/// First-tier split of a sector's cradle-to-gate footprint: its own direct
/// emissions plus, per purchased input, that input's full cradle-to-gate
/// intensity scaled by the purchase coefficient. direct + sum(per_input) ==
/// total per indicator.
struct DecompositionResult {
  std::string sector;
  std::vector<Indicator> indicators;
  Eigen::VectorXd direct;     // indicator
  Eigen::MatrixXd per_input;  // indicator x input commodity
  Eigen::VectorXd total;      // indicator
  Classification commodities;
};

/// Contribution columns folded into named report groups; indicator totals
/// are unchanged by aggregation.
struct GroupedContributions {
  std::vector<Indicator> indicators;
  std::vector<std::string> groups;
  Eigen::MatrixXd values;  // indicator x group
};

struct LifecycleComponent {
  std::string label;
  std::string group;
  double value = 0.0;  // single indicator, e.g. kg CO2eq
};

struct LifecycleShare {
  std::string label;
  std::string group;
  double value = 0.0;
  double share = 0.0;
};

struct LifecycleReport {
  std::vector<LifecycleShare> components;
  std::vector<LifecycleShare> groups;  // label == group
  double total = 0.0;
};

DecompositionResult first_tier_decomposition(const IOModel& model,
                                             const std::string& sector);
DecompositionResult first_tier_decomposition(const IOModel& model,
                                             const std::string& sector,
                                             const LeontiefSolver& solver);

GroupedContributions aggregate(const FootprintResult& result,
                               const AggregationHierarchy& hierarchy,
                               const std::string& level_id);
GroupedContributions aggregate(const DecompositionResult& result,
                               const AggregationHierarchy& hierarchy,
                               const std::string& level_id);

/// Group labels ranked by descending summed value; ties broken by first
/// appearance in classification order (the order `groups` already carries).
std::vector<std::size_t> rank_groups(const GroupedContributions& grouped,
                                     std::size_t indicator);

enum class ShareAttribution { emitting_sector, demand_category };

/// Per-indicator fraction of the national footprint attributable to the
/// target set. With emitting-sector attribution the targets are commodity
/// codes and the denominator is the sector-attributed total (direct
/// final-demand emissions excluded, so the all-sector case is exactly 1).
/// With demand-category attribution the targets are category labels and
/// direct emissions follow their category.
Eigen::VectorXd national_shares(const IOModel& model,
                                const std::vector<std::string>& targets,
                                const std::vector<std::string>& scope,
                                ShareAttribution attribution =
                                    ShareAttribution::emitting_sector);

/// q / population, in q's unit.
double per_capita(double total, double population);

/// Ordinary least squares with intercept over (x, y) pairs;
/// r_squared = 1 - SS_res / SS_tot. The caller decides whether the
/// direct-emissions point is part of `points`.
RegressionFit midpoint_endpoint_regression(
    const std::vector<std::pair<double, double>>& points);

/// Shares per component and per group; shares sum to 1.
LifecycleReport lifecycle_report(const std::vector<LifecycleComponent>& components);

}  // namespace eeio
