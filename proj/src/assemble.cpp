#include "eeio/assemble.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>

#include "eeio/ingest.hpp"
#include "eeio/serialize.hpp"

namespace fs = std::filesystem;

namespace eeio {

std::pair<TechnologyMatrix, Eigen::VectorXd> build_technology_matrix(
    const SupplyUseTables& sut, AssemblyReport* report) {
  const auto n_ind = static_cast<Eigen::Index>(sut.industries.size());
  const auto n_com = static_cast<Eigen::Index>(sut.commodities.size());

  Eigen::VectorXd industry_output = sut.supply.rowwise().sum();  // g
  Eigen::VectorXd x_out = sut.supply.colwise().sum().transpose();  // q

  for (Eigen::Index i = 0; i < n_ind; ++i) {
    if (industry_output(i) <= 0 && !sut.use.col(i).isZero(0.0)) {
      throw Error(ErrorCode::ZeroOutputSector,
                  "industry '" + sut.industries.at(i).code +
                      "' consumes inputs but has zero total output");
    }
  }

  // Distribute each industry's input recipe over the commodities it supplies
  // in proportion to its supply shares, giving a commodity-by-commodity
  // intermediate flow matrix.
  Eigen::MatrixXd shares = Eigen::MatrixXd::Zero(n_ind, n_com);
  for (Eigen::Index i = 0; i < n_ind; ++i) {
    if (industry_output(i) > 0) {
      shares.row(i) = sut.supply.row(i) / industry_output(i);
    }
  }
  Eigen::MatrixXd intermediate = sut.use * shares;  // commodity x commodity

  TechnologyMatrix A;
  A.commodities = sut.commodities;
  A.coefficients = Eigen::MatrixXd::Zero(n_com, n_com);
  for (Eigen::Index j = 0; j < n_com; ++j) {
    if (x_out(j) > 0) {
      A.coefficients.col(j) = intermediate.col(j) / x_out(j);
    } else if (!intermediate.col(j).isZero(0.0)) {
      throw Error(ErrorCode::ZeroOutputSector,
                  "commodity '" + sut.commodities.at(j).code +
                      "' has intermediate demand but zero supply");
    }
  }

  // Negative coefficients can only arise from flagged negative use entries;
  // the technology matrix itself must stay non-negative.
  int clamped = 0;
  for (Eigen::Index i = 0; i < n_com; ++i) {
    for (Eigen::Index j = 0; j < n_com; ++j) {
      if (A.coefficients(i, j) < 0) {
        A.coefficients(i, j) = 0.0;
        ++clamped;
      }
    }
  }
  if (clamped > 0 && report) {
    report->warnings.push_back("clamped " + std::to_string(clamped) +
                               " negative technology coefficients to zero");
  }

  require_productive(A.coefficients);
  return {std::move(A), std::move(x_out)};
}

TechnologyMatrix apply_domestic_technology_assumption(const SupplyUseTables& sut,
                                                      AssemblyReport* report) {
  if (!sut.has_imports()) {
    return build_technology_matrix(sut, report).first;
  }
  if (sut.import_use.rows() != sut.use.rows() ||
      sut.import_use.cols() != sut.use.cols()) {
    throw Error(ErrorCode::AxisMismatch,
                "import use table shape does not match the use table");
  }
  SupplyUseTables combined = sut;
  combined.use = sut.use + sut.import_use;
  combined.import_use.resize(0, 0);
  return build_technology_matrix(combined, report).first;
}

std::pair<Eigen::MatrixXd, std::vector<Substance>> allocate_flows(
    const RawFlowAccount& flows, const Concordance& conc,
    const Classification& fine) {
  // Substance axis is sorted by (id, compartment) so record order never
  // affects the result.
  std::map<std::string, Substance> registry;
  for (const auto& rec : flows.records) {
    registry.emplace(rec.substance + "|" + rec.compartment,
                     Substance{rec.substance, rec.compartment, rec.unit});
  }
  std::vector<Substance> substances;
  std::map<std::string, std::size_t> substance_index;
  for (const auto& [key, sub] : registry) {
    substance_index.emplace(key, substances.size());
    substances.push_back(sub);
  }

  Eigen::MatrixXd fine_flows = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(substances.size()),
      static_cast<Eigen::Index>(fine.size()));
  for (const auto& rec : flows.records) {
    auto conc_it = conc.map.find(rec.sector_code);
    if (conc_it == conc.map.end()) {
      throw Error(ErrorCode::MissingConcordanceEntry,
                  "no concordance entry for coarse sector '" + rec.sector_code + "'");
    }
    auto s = static_cast<Eigen::Index>(
        substance_index.at(rec.substance + "|" + rec.compartment));
    for (const auto& share : conc_it->second) {
      auto j = fine.index_of(share.fine_code);
      fine_flows(s, static_cast<Eigen::Index>(*j)) += rec.amount * share.weight;
    }
  }
  return {std::move(fine_flows), std::move(substances)};
}

ExtensionMatrix normalize_extensions(const Eigen::MatrixXd& fine_flows,
                                     const std::vector<Substance>& substances,
                                     const Eigen::VectorXd& x_out,
                                     const Classification& commodities) {
  if (fine_flows.cols() != x_out.size() ||
      fine_flows.cols() != static_cast<Eigen::Index>(commodities.size())) {
    throw Error(ErrorCode::AxisMismatch,
                "flow matrix commodity axis does not match the output vector");
  }
  ExtensionMatrix B;
  B.substances = substances;
  B.commodities = commodities;
  B.intensities = Eigen::MatrixXd::Zero(fine_flows.rows(), fine_flows.cols());
  for (Eigen::Index j = 0; j < fine_flows.cols(); ++j) {
    if (x_out(j) > 0) {
      B.intensities.col(j) = fine_flows.col(j) / x_out(j);
    } else if (!fine_flows.col(j).isZero(0.0)) {
      throw Error(ErrorCode::DivisionByZeroOutput,
                  "commodity '" + commodities.at(j).code +
                      "' carries flows but has zero output");
    }
  }
  return B;
}

ProductivityDiagnostic check_productive(const Eigen::MatrixXd& A) {
  ProductivityDiagnostic diag;
  diag.max_column_sum = A.size() == 0 ? 0.0 : A.colwise().sum().maxCoeff();

  // Power terms A^k * 1 must vanish for the series inverse to exist.
  constexpr double kTol = 1e-12;
  constexpr int kMaxIter = 10000;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(A.rows());
  for (int k = 1; k <= kMaxIter; ++k) {
    v = A * v;
    double norm = v.lpNorm<Eigen::Infinity>();
    if (norm < kTol) {
      diag.converged = true;
      diag.iterations = k;
      return diag;
    }
    if (!std::isfinite(norm) || norm > 1e300) break;
  }
  diag.converged = false;
  diag.iterations = kMaxIter;
  return diag;
}

void require_productive(const Eigen::MatrixXd& A) {
  ProductivityDiagnostic diag = check_productive(A);
  if (!diag.converged) {
    throw Error(ErrorCode::NonProductive,
                "technology matrix is not productive (max column sum " +
                    std::to_string(diag.max_column_sum) + ")");
  }
}

namespace {

std::string path_in(const std::string& dir, const char* name, bool required) {
  fs::path p = fs::path(dir) / name;
  if (!fs::exists(p)) {
    if (required) {
      throw Error(ErrorCode::MissingFile, p.string() + " is required");
    }
    return {};
  }
  return p.string();
}

/// Realigns a parsed characterization matrix onto the model's substance axis.
CharacterizationMatrix align_characterization(const CharacterizationMatrix& parsed,
                                              const std::vector<Substance>& substances,
                                              AssemblyReport& report) {
  CharacterizationMatrix C;
  C.indicators = parsed.indicators;
  C.substances = substances;
  C.factors = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(parsed.indicators.size()),
      static_cast<Eigen::Index>(substances.size()));
  std::map<std::string, Eigen::Index> parsed_index;
  for (std::size_t s = 0; s < parsed.substances.size(); ++s) {
    parsed_index.emplace(parsed.substances[s].key(), static_cast<Eigen::Index>(s));
  }
  for (std::size_t s = 0; s < substances.size(); ++s) {
    auto it = parsed_index.find(substances[s].key());
    if (it == parsed_index.end()) {
      report.warnings.push_back("uncharacterized substance '" + substances[s].id +
                                "' (" + substances[s].compartment + ")");
      continue;
    }
    C.factors.col(static_cast<Eigen::Index>(s)) = parsed.factors.col(it->second);
  }
  return C;
}

}  // namespace

std::pair<IOModel, AssemblyReport> assemble_model(const std::string& data_dir) {
  AssemblyReport report;

  SupplyUsePaths sut_paths;
  sut_paths.supply = path_in(data_dir, "supply.csv", true);
  sut_paths.use = path_in(data_dir, "use.csv", true);
  sut_paths.final_demand = path_in(data_dir, "final_demand.csv", true);
  sut_paths.import_use = path_in(data_dir, "import_use.csv", false);
  SupplyUseTables sut = parse_supply_use(sut_paths);

  IOModel model;
  model.price_basis = sut.price_basis;
  model.year = sut.year;

  if (sut.has_imports()) {
    auto [A_dom, x_out] = build_technology_matrix(sut, &report);
    model.x_out = std::move(x_out);
    model.A = apply_domestic_technology_assumption(sut, &report);
    (void)A_dom;
  } else {
    auto [A, x_out] = build_technology_matrix(sut, &report);
    model.A = std::move(A);
    model.x_out = std::move(x_out);
  }

  // Output identity: total output should cover intermediate use row sums.
  // With imports folded in under the domestic technology assumption this can
  // legitimately fail, so it is a warning, not an error.
  Eigen::MatrixXd total_use = sut.use;
  if (sut.has_imports()) total_use += sut.import_use;
  Eigen::VectorXd row_sums = total_use.rowwise().sum();
  for (Eigen::Index c = 0; c < model.x_out.size(); ++c) {
    double slack = model.x_out(c) - row_sums(c);
    double scale = std::max(std::abs(model.x_out(c)), 1.0);
    if (slack < -1e-6 * scale) {
      report.warnings.push_back("commodity '" + sut.commodities.at(c).code +
                                "': intermediate use exceeds total output");
    }
  }

  // Flow accounts plus optional pollutant inventory; the same (sector,
  // substance) key across the two files is summed during allocation.
  std::vector<std::string> flow_paths = {path_in(data_dir, "flows.csv", true)};
  std::string pollutants = path_in(data_dir, "pollutants.csv", false);
  if (!pollutants.empty()) {
    flow_paths.push_back(pollutants);
    report.warnings.push_back(
        "pollutant inventory covers only reporting facilities; non-GHG totals "
        "may be underestimated");
  }
  RawFlowAccount flows = parse_flow_accounts(flow_paths);

  Concordance conc =
      parse_concordance(path_in(data_dir, "concordance.csv", true), sut.commodities);
  auto [fine_flows, flow_substances] = allocate_flows(flows, conc, sut.commodities);

  // Direct final-demand emissions bypass allocation; their substances join
  // the registry with zero extension rows when they occur nowhere else.
  std::string direct_path = path_in(data_dir, "direct_emissions.csv", false);
  DirectFinalDemandEmissions direct;
  if (!direct_path.empty()) {
    direct = parse_direct_emissions(direct_path);
  }
  std::map<std::string, Substance> registry;
  for (const auto& sub : flow_substances) registry.emplace(sub.key(), sub);
  for (const auto& sub : direct.substances) registry.emplace(sub.key(), sub);
  std::vector<Substance> substances;
  std::map<std::string, Eigen::Index> substance_index;
  for (const auto& [key, sub] : registry) {
    substance_index.emplace(key, static_cast<Eigen::Index>(substances.size()));
    substances.push_back(sub);
  }

  Eigen::MatrixXd flow_matrix = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(substances.size()),
      static_cast<Eigen::Index>(sut.commodities.size()));
  for (std::size_t s = 0; s < flow_substances.size(); ++s) {
    flow_matrix.row(substance_index.at(flow_substances[s].key())) =
        fine_flows.row(static_cast<Eigen::Index>(s));
  }
  model.B = normalize_extensions(flow_matrix, substances, model.x_out, sut.commodities);

  DirectFinalDemandEmissions f_direct;
  f_direct.substances = substances;
  f_direct.categories = sut.demand_categories;
  f_direct.amounts = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(substances.size()),
      static_cast<Eigen::Index>(sut.demand_categories.size()));
  for (std::size_t s = 0; s < direct.substances.size(); ++s) {
    Eigen::Index row = substance_index.at(direct.substances[s].key());
    for (std::size_t c = 0; c < direct.categories.size(); ++c) {
      auto cat = std::find(sut.demand_categories.begin(), sut.demand_categories.end(),
                           direct.categories[c]);
      if (cat == sut.demand_categories.end()) {
        throw Error(ErrorCode::UnknownScope,
                    "direct emissions name demand category '" + direct.categories[c] +
                        "' absent from final_demand.csv");
      }
      f_direct.amounts(row, cat - sut.demand_categories.begin()) +=
          direct.amounts(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(c));
    }
  }
  model.f_direct = std::move(f_direct);

  CharacterizationMatrix parsed_C =
      parse_characterization(path_in(data_dir, "characterization.csv", true));
  model.C = align_characterization(parsed_C, substances, report);

  model.y.demand = sut.final_demand;
  model.y.categories = sut.demand_categories;
  model.y.commodities = sut.commodities;

  std::string agg_path = path_in(data_dir, "aggregation.csv", false);
  if (!agg_path.empty()) {
    model.hierarchy = parse_aggregation(agg_path, sut.commodities);
  }

  ValidationReport validation = validate_model(model.A, model.B, model.C, model.y);
  report.errors.insert(report.errors.end(), validation.errors.begin(),
                       validation.errors.end());
  report.warnings.insert(report.warnings.end(), validation.warnings.begin(),
                         validation.warnings.end());

  model.hash = model_content_hash(model);
  report.info.push_back("model hash " + model.hash);
  return {std::move(model), std::move(report)};
}

}  // namespace eeio
