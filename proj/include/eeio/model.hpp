#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eeio/classification.hpp"

namespace eeio {

/// A substance flow identity. Two flows are the same substance only when both
/// id and compartment match; the unit is the canonical unit all amounts for
/// this substance are expressed in.
struct Substance {
  std::string id;
  std::string compartment;
  std::string unit;

  std::string key() const { return id + "|" + compartment; }
  bool operator==(const Substance&) const = default;
};

enum class IndicatorLevel { midpoint, endpoint };

struct Indicator {
  std::string id;
  IndicatorLevel level = IndicatorLevel::midpoint;
  std::string unit;

  bool operator==(const Indicator&) const = default;
};

struct SupplyUseTables {
  Classification industries;
  Classification commodities;
  Eigen::MatrixXd supply;        // industry x commodity, currency
  Eigen::MatrixXd use;           // commodity x industry, currency
  Eigen::MatrixXd final_demand;  // commodity x demand category, currency
  std::vector<std::string> demand_categories;
  Eigen::MatrixXd import_use;    // commodity x industry; 0x0 when absent
  bool negatives_allowed = false;
  std::string price_basis;  // carried as metadata, never transformed
  std::string year;

  bool has_imports() const { return import_use.size() > 0; }
};

/// Normalized inter-commodity input coefficients (currency in per currency
/// out). Column j is commodity j's input recipe per unit of output.
struct TechnologyMatrix {
  Eigen::MatrixXd coefficients;  // commodity x commodity
  Classification commodities;
};

/// Physical emission/consumption intensity per currency unit of output.
struct ExtensionMatrix {
  Eigen::MatrixXd intensities;  // substance x commodity
  std::vector<Substance> substances;
  Classification commodities;

  std::optional<std::size_t> substance_index(const std::string& id,
                                             const std::string& compartment) const {
    for (std::size_t s = 0; s < substances.size(); ++s) {
      if (substances[s].id == id && substances[s].compartment == compartment) {
        return s;
      }
    }
    return std::nullopt;
  }
};

/// Characterization factors converting substance flows into indicator scores.
struct CharacterizationMatrix {
  Eigen::MatrixXd factors;  // indicator x substance
  std::vector<Indicator> indicators;
  std::vector<Substance> substances;

  std::optional<std::size_t> indicator_index(const std::string& id) const {
    for (std::size_t i = 0; i < indicators.size(); ++i) {
      if (indicators[i].id == id) return i;
    }
    return std::nullopt;
  }
};

struct FinalDemand {
  Eigen::MatrixXd demand;  // commodity x category, currency
  std::vector<std::string> categories;
  Classification commodities;
};

/// Emissions attached directly to demand categories (e.g. household vehicle
/// fuel burn); these bypass the inter-industry system entirely.
struct DirectFinalDemandEmissions {
  Eigen::MatrixXd amounts;  // substance x category, physical units
  std::vector<Substance> substances;
  std::vector<std::string> categories;
};

/// Coarse-to-fine allocation map with sales-share weights.
struct Concordance {
  struct Share {
    std::string fine_code;
    double weight = 0.0;
    bool operator==(const Share&) const = default;
  };
  std::map<std::string, std::vector<Share>> map;  // coarse code -> shares

  bool operator==(const Concordance&) const = default;
};

struct AggregationLevel {
  std::string id;
  std::map<std::string, std::string> groups;  // fine code -> group label
  bool operator==(const AggregationLevel&) const = default;
};

struct AggregationHierarchy {
  std::vector<AggregationLevel> levels;

  const AggregationLevel* find(const std::string& level_id) const {
    for (const auto& level : levels) {
      if (level.id == level_id) return &level;
    }
    return nullptr;
  }
  bool operator==(const AggregationHierarchy&) const = default;
};

/// Per-indicator impact totals with contribution breakdowns. For every
/// indicator, sum(by_sector row) + direct_component == total.
struct FootprintResult {
  std::vector<Indicator> indicators;
  Eigen::VectorXd totals;            // indicator
  Eigen::MatrixXd by_sector;         // indicator x contributing commodity
  Eigen::MatrixXd by_substance;      // indicator x substance
  Eigen::VectorXd direct_component;  // indicator
  Classification commodities;
  std::vector<Substance> substances;
  std::vector<std::string> scope;  // demand categories covered
  std::string model_hash;
};

struct RegressionFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int n_points = 0;
};

struct RawFlowRecord {
  std::string sector_code;
  std::string region;
  std::string substance;
  std::string compartment;
  double amount = 0.0;  // in the substance's canonical unit
  std::string unit;     // canonical unit after parsing
  std::string year;

  bool operator==(const RawFlowRecord&) const = default;
};

struct RawFlowAccount {
  std::vector<RawFlowRecord> records;
  bool operator==(const RawFlowAccount&) const = default;
};

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;

  bool ok() const { return errors.empty(); }
};

/// Cross-checks the assembled matrices: axis consistency, finiteness, sign
/// constraints, and registry matches. Errors block downstream solves;
/// warnings (uncharacterized substances, zero-output sectors) do not.
ValidationReport validate_model(const TechnologyMatrix& A,
                                const ExtensionMatrix& B,
                                const CharacterizationMatrix& C,
                                const FinalDemand& y);

}  // namespace eeio
