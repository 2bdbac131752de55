#pragma once

#include <string>
#include <utility>
#include <vector>

#include "eeio/model.hpp"

namespace eeio {

struct AssemblyReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  std::vector<std::string> info;

  bool ok() const { return errors.empty(); }
};

struct ProductivityDiagnostic {
  double max_column_sum = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// The assembled, computable model. All members are immutable after
/// construction and safe to share across concurrent readers.
struct IOModel {
  TechnologyMatrix A;
  ExtensionMatrix B;
  CharacterizationMatrix C;
  FinalDemand y;
  DirectFinalDemandEmissions f_direct;
  Eigen::VectorXd x_out;  // total output per commodity, currency
  AggregationHierarchy hierarchy;  // may be empty
  std::string hash;
  std::string price_basis;
  std::string year;
};

/// Product-by-product technology matrix under the fixed industry sales
/// structure: each industry's input recipe is distributed over the
/// commodities it supplies in proportion to its supply shares, then each
/// commodity column is normalized by that commodity's total output.
/// Negative coefficients (possible only when the source flagged negative use
/// entries) are clamped to zero with a warning in `report`.
std::pair<TechnologyMatrix, Eigen::VectorXd> build_technology_matrix(
    const SupplyUseTables& sut, AssemblyReport* report = nullptr);

/// Same construction with import use folded into intermediate use first, so
/// imported inputs inherit the domestic technology and intensities.
TechnologyMatrix apply_domestic_technology_assumption(
    const SupplyUseTables& sut, AssemblyReport* report = nullptr);

/// Distributes coarse flow records over the fine classification using the
/// concordance weights. Returns the substance x fine-commodity flow matrix
/// and the substance registry (sorted by id, compartment). Per-coarse totals
/// are preserved exactly.
std::pair<Eigen::MatrixXd, std::vector<Substance>> allocate_flows(
    const RawFlowAccount& flows, const Concordance& conc,
    const Classification& fine);

/// B[s, j] = flow[s, j] / x_out[j]. A nonzero flow on a zero-output
/// commodity is an error.
ExtensionMatrix normalize_extensions(const Eigen::MatrixXd& fine_flows,
                                     const std::vector<Substance>& substances,
                                     const Eigen::VectorXd& x_out,
                                     const Classification& commodities);

/// Neumann convergence check: iterates v <- A v from v = 1 until
/// ||v||_inf < 1e-12 or 10000 iterations. Non-convergence means (I - A) has
/// no convergent series inverse.
ProductivityDiagnostic check_productive(const Eigen::MatrixXd& A);

/// Throws NonProductive unless check_productive converges.
void require_productive(const Eigen::MatrixXd& A);

/// Full pipeline over a data directory holding the documented schema files.
/// Required: supply.csv, use.csv, final_demand.csv, flows.csv,
/// concordance.csv, characterization.csv. Optional: import_use.csv,
/// pollutants.csv, direct_emissions.csv, aggregation.csv.
std::pair<IOModel, AssemblyReport> assemble_model(const std::string& data_dir);

}  // namespace eeio
