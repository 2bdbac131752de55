#include "eeio/model.hpp"

#include <cmath>
#include <set>

namespace eeio {

namespace {

void check_finite(const Eigen::MatrixXd& m, const char* name,
                  const Classification& rows_axis, const Classification& cols_axis,
                  ValidationReport& report, bool rows_are_axis, bool cols_are_axis) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (!std::isfinite(m(i, j))) {
        std::string row = rows_are_axis ? rows_axis.at(static_cast<std::size_t>(i)).code
                                        : std::to_string(i);
        std::string col = cols_are_axis ? cols_axis.at(static_cast<std::size_t>(j)).code
                                        : std::to_string(j);
        report.errors.push_back(std::string(name) + " has non-finite entry at row '" +
                                row + "', column '" + col + "'");
      }
    }
  }
}

}  // namespace

ValidationReport validate_model(const TechnologyMatrix& A,
                                const ExtensionMatrix& B,
                                const CharacterizationMatrix& C,
                                const FinalDemand& y) {
  ValidationReport report;
  const auto n = static_cast<Eigen::Index>(A.commodities.size());

  if (A.coefficients.rows() != n || A.coefficients.cols() != n) {
    report.errors.push_back("technology matrix is " +
                            std::to_string(A.coefficients.rows()) + "x" +
                            std::to_string(A.coefficients.cols()) +
                            " but the classification has " + std::to_string(n) +
                            " commodities");
    return report;
  }
  if (!B.commodities.same_axis(A.commodities)) {
    report.errors.push_back("extension matrix commodity axis differs from technology axis");
  }
  if (B.intensities.rows() != static_cast<Eigen::Index>(B.substances.size()) ||
      B.intensities.cols() != n) {
    report.errors.push_back("extension matrix shape does not match its registries");
  }
  if (!y.commodities.same_axis(A.commodities)) {
    report.errors.push_back("final demand commodity axis differs from technology axis");
  }
  if (y.demand.rows() != n ||
      y.demand.cols() != static_cast<Eigen::Index>(y.categories.size())) {
    report.errors.push_back("final demand shape does not match its axes");
  }
  if (C.factors.rows() != static_cast<Eigen::Index>(C.indicators.size()) ||
      C.factors.cols() != static_cast<Eigen::Index>(C.substances.size())) {
    report.errors.push_back("characterization matrix shape does not match its registries");
  }
  if (!report.errors.empty()) return report;

  check_finite(A.coefficients, "technology matrix", A.commodities, A.commodities,
               report, true, true);
  check_finite(B.intensities, "extension matrix", A.commodities, B.commodities,
               report, false, true);
  check_finite(C.factors, "characterization matrix", A.commodities, A.commodities,
               report, false, false);
  check_finite(y.demand, "final demand", y.commodities, y.commodities, report,
               true, false);

  if ((A.coefficients.array() < 0).any()) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (A.coefficients(i, j) < 0) {
          report.errors.push_back("negative technology coefficient at row '" +
                                  A.commodities.at(i).code + "', column '" +
                                  A.commodities.at(j).code + "'");
        }
      }
    }
  }
  if ((B.intensities.array() < 0).any()) {
    report.errors.push_back("extension matrix has negative intensities");
  }

  std::set<std::string> indicator_ids;
  for (const auto& ind : C.indicators) {
    if (!indicator_ids.insert(ind.id).second) {
      report.errors.push_back("duplicate indicator id '" + ind.id + "'");
    }
    if (ind.unit.empty()) {
      report.warnings.push_back("indicator '" + ind.id + "' has no unit");
    }
  }
  for (const auto& sub : B.substances) {
    if (sub.unit.empty()) {
      report.errors.push_back("substance '" + sub.id + "' has no declared unit");
    }
  }

  // C's substance axis must cover B's; extension substances with no
  // characterization row are only warned about.
  std::set<std::string> characterized;
  for (const auto& sub : C.substances) characterized.insert(sub.key());
  for (const auto& sub : B.substances) {
    if (!characterized.contains(sub.key())) {
      report.warnings.push_back("uncharacterized substance '" + sub.id + "' (" +
                                sub.compartment + ")");
    }
  }

  for (Eigen::Index j = 0; j < n; ++j) {
    if (A.coefficients.col(j).isZero(0.0) && B.intensities.col(j).isZero(0.0) &&
        A.coefficients.row(j).isZero(0.0)) {
      report.warnings.push_back("zero-output sector '" + A.commodities.at(j).code +
                                "': no inputs, outputs, or emissions");
    }
  }

  return report;
}

}  // namespace eeio
