#pragma once

#include <string>
#include <vector>

#include "eeio/model.hpp"

namespace eeio {

/// Converts an amount to the canonical unit of its dimension (kg for mass,
/// m3 for volume, MJ for energy). Throws UnknownUnit for unregistered units.
double to_canonical_unit(double amount, const std::string& unit,
                         std::string* canonical_unit_out = nullptr);

struct SupplyUsePaths {
  std::string supply;
  std::string use;
  std::string final_demand;
  std::string import_use;  // optional, empty when absent
};

/// Parses the matrix-layout files (supply, use, final demand, optional import
/// use) and builds the industry/commodity classifications from their headers.
SupplyUseTables parse_supply_use(const SupplyUsePaths& paths);

/// Parses one or more record-layout flow files. Amounts are normalized to
/// canonical units. A duplicate (sector, substance, compartment) inside one
/// file is an error; the same key across files yields separate records that
/// assembly sums. Output records are sorted, so line order never matters.
RawFlowAccount parse_flow_accounts(const std::vector<std::string>& paths);

/// Parses a coarse->fine concordance. Weights per coarse code must sum to 1
/// within 1e-9; sums off by at most 1e-6 are renormalized, larger deviations
/// are an error. Fine codes must exist in `fine` and may appear under only
/// one coarse code.
Concordance parse_concordance(const std::string& path, const Classification& fine);

/// Parses characterization factors into an indicator x substance matrix.
CharacterizationMatrix parse_characterization(const std::string& path);

/// Parses aggregation levels; every level must cover each fine code exactly
/// once.
AggregationHierarchy parse_aggregation(const std::string& path,
                                       const Classification& fine);

/// Parses direct final-demand emissions (record layout: category, substance,
/// compartment, amount, unit). Amounts normalized to canonical units.
DirectFinalDemandEmissions parse_direct_emissions(const std::string& path);

// Writers for the round-trip property: emit the same schema the parsers read.
void write_flow_accounts(const RawFlowAccount& flows, const std::string& path);
void write_concordance(const Concordance& conc, const std::string& path);
void write_aggregation(const AggregationHierarchy& hierarchy, const std::string& path);

}  // namespace eeio
