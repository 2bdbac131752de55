#include "eeio/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "eeio/csv.hpp"

namespace eeio {

namespace {

struct UnitDef {
  double factor;             // multiply to reach the canonical unit
  const char* canonical;
};

const std::map<std::string, UnitDef>& unit_table() {
  static const std::map<std::string, UnitDef> table = {
      {"g", {1e-3, "kg"}},   {"kg", {1.0, "kg"}},  {"t", {1e3, "kg"}},
      {"kt", {1e6, "kg"}},   {"Mt", {1e9, "kg"}},
      {"L", {1e-3, "m3"}},   {"m3", {1.0, "m3"}},  {"ML", {1e3, "m3"}},
      {"MJ", {1.0, "MJ"}},   {"GJ", {1e3, "MJ"}},  {"TJ", {1e6, "MJ"}},
  };
  return table;
}

std::string loc(const csv::File& file, std::size_t line) {
  return file.path + ":" + std::to_string(line);
}

SectorEntry parse_axis_entry(const std::string& cell) {
  // "code" or "code@region"; the label defaults to the code.
  auto at = cell.find('@');
  SectorEntry entry;
  if (at == std::string::npos) {
    entry.code = cell;
  } else {
    entry.code = cell.substr(0, at);
    entry.region = cell.substr(at + 1);
  }
  entry.label = entry.code;
  return entry;
}

std::string axis_cell(const SectorEntry& entry) {
  if (entry.region.empty()) return entry.code;
  return entry.code + "@" + entry.region;
}

struct ParsedMatrix {
  std::vector<SectorEntry> row_axis;
  std::vector<SectorEntry> col_axis;
  Eigen::MatrixXd values;
  bool negatives_allowed = false;
  std::string price_basis;
  std::string year;
};

ParsedMatrix parse_matrix_file(const std::string& path, bool allow_negative_tag) {
  csv::File file = csv::read_file(path);
  if (file.rows.empty()) {
    throw Error(ErrorCode::MalformedHeader, path + ": no header row");
  }
  ParsedMatrix out;
  out.negatives_allowed = allow_negative_tag && file.has_tag("allow-negative");
  out.price_basis = file.tag_value("price-basis");
  out.year = file.tag_value("year");

  const csv::Row& header = file.rows.front();
  if (header.fields.size() < 2) {
    throw Error(ErrorCode::MalformedHeader,
                loc(file, header.line) + ": header needs at least one column code");
  }
  std::set<std::string> seen_cols;
  for (std::size_t c = 1; c < header.fields.size(); ++c) {
    SectorEntry entry = parse_axis_entry(header.fields[c]);
    if (entry.code.empty()) {
      throw Error(ErrorCode::MalformedHeader,
                  loc(file, header.line) + ": empty column code");
    }
    if (!seen_cols.insert(entry.code).second) {
      throw Error(ErrorCode::DuplicateCode,
                  loc(file, header.line) + ": duplicate column code '" + entry.code + "'");
    }
    out.col_axis.push_back(std::move(entry));
  }

  std::set<std::string> seen_rows;
  std::vector<std::vector<double>> data;
  for (std::size_t r = 1; r < file.rows.size(); ++r) {
    const csv::Row& row = file.rows[r];
    if (row.fields.size() != header.fields.size()) {
      throw Error(ErrorCode::MalformedHeader,
                  loc(file, row.line) + ": expected " +
                      std::to_string(header.fields.size()) + " fields, got " +
                      std::to_string(row.fields.size()));
    }
    SectorEntry entry = parse_axis_entry(row.fields[0]);
    if (!seen_rows.insert(entry.code).second) {
      throw Error(ErrorCode::DuplicateCode,
                  loc(file, row.line) + ": duplicate row code '" + entry.code + "'");
    }
    std::vector<double> values;
    values.reserve(out.col_axis.size());
    for (std::size_t c = 1; c < row.fields.size(); ++c) {
      double v = csv::parse_number(row.fields[c], file.path, row.line);
      if (v < 0 && !out.negatives_allowed) {
        throw Error(ErrorCode::NegativeCell,
                    loc(file, row.line) + ": negative entry " + row.fields[c] +
                        " (add the allow-negative schema tag if intended)");
      }
      values.push_back(v);
    }
    out.row_axis.push_back(std::move(entry));
    data.push_back(std::move(values));
  }
  if (out.row_axis.empty()) {
    throw Error(ErrorCode::MalformedHeader, path + ": no data rows");
  }

  out.values.resize(static_cast<Eigen::Index>(out.row_axis.size()),
                    static_cast<Eigen::Index>(out.col_axis.size()));
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t j = 0; j < data[i].size(); ++j) {
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = data[i][j];
    }
  }
  return out;
}

void require_axis(const std::vector<SectorEntry>& got, const Classification& want,
                  const std::string& path, const char* which) {
  if (got.size() != want.size()) {
    throw Error(ErrorCode::AxisMismatch,
                path + ": " + which + " axis has " + std::to_string(got.size()) +
                    " codes, expected " + std::to_string(want.size()));
  }
  for (std::size_t i = 0; i < got.size(); ++i) {
    if (got[i].code != want.at(i).code) {
      throw Error(ErrorCode::AxisMismatch,
                  path + ": " + which + " axis code '" + got[i].code +
                      "' at position " + std::to_string(i) + " does not match '" +
                      want.at(i).code + "'");
    }
  }
}

const csv::Row& require_header(const csv::File& file,
                               const std::vector<std::string>& columns) {
  if (file.rows.empty()) {
    throw Error(ErrorCode::MalformedHeader, file.path + ": no header row");
  }
  const csv::Row& header = file.rows.front();
  if (header.fields != columns) {
    std::string want;
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) want += ',';
      want += columns[i];
    }
    throw Error(ErrorCode::MalformedHeader,
                loc(file, header.line) + ": expected header '" + want + "'");
  }
  return header;
}

}  // namespace

double to_canonical_unit(double amount, const std::string& unit,
                         std::string* canonical_unit_out) {
  auto it = unit_table().find(unit);
  if (it == unit_table().end()) {
    throw Error(ErrorCode::UnknownUnit, "unit '" + unit + "' is not registered");
  }
  if (canonical_unit_out) *canonical_unit_out = it->second.canonical;
  return amount * it->second.factor;
}

SupplyUseTables parse_supply_use(const SupplyUsePaths& paths) {
  ParsedMatrix supply = parse_matrix_file(paths.supply, /*allow_negative_tag=*/false);
  SupplyUseTables sut;
  sut.industries = Classification(supply.row_axis, Granularity::fine);
  sut.commodities = Classification(supply.col_axis, Granularity::fine);
  sut.supply = supply.values;
  sut.price_basis = supply.price_basis;
  sut.year = supply.year;

  ParsedMatrix use = parse_matrix_file(paths.use, /*allow_negative_tag=*/true);
  require_axis(use.row_axis, sut.commodities, paths.use, "commodity");
  require_axis(use.col_axis, sut.industries, paths.use, "industry");
  sut.use = use.values;
  sut.negatives_allowed = use.negatives_allowed;

  ParsedMatrix fd = parse_matrix_file(paths.final_demand, /*allow_negative_tag=*/true);
  require_axis(fd.row_axis, sut.commodities, paths.final_demand, "commodity");
  sut.final_demand = fd.values;
  for (const auto& entry : fd.col_axis) sut.demand_categories.push_back(entry.code);

  if (!paths.import_use.empty()) {
    ParsedMatrix imp = parse_matrix_file(paths.import_use, /*allow_negative_tag=*/true);
    require_axis(imp.row_axis, sut.commodities, paths.import_use, "commodity");
    require_axis(imp.col_axis, sut.industries, paths.import_use, "industry");
    sut.import_use = imp.values;
  }
  return sut;
}

RawFlowAccount parse_flow_accounts(const std::vector<std::string>& paths) {
  static const std::vector<std::string> kHeader = {
      "sector", "region", "substance", "compartment", "amount", "unit", "year"};
  RawFlowAccount account;
  std::map<std::string, std::string> canonical_units;  // substance key -> unit
  for (const auto& path : paths) {
    csv::File file = csv::read_file(path);
    require_header(file, kHeader);
    std::set<std::string> seen;  // duplicates within one file are errors
    for (std::size_t r = 1; r < file.rows.size(); ++r) {
      const csv::Row& row = file.rows[r];
      RawFlowRecord rec;
      rec.sector_code = row.fields[0];
      rec.region = row.fields[1];
      rec.substance = row.fields[2];
      rec.compartment = row.fields[3];
      double amount = csv::parse_number(row.fields[4], file.path, row.line);
      if (amount < 0) {
        throw Error(ErrorCode::NegativeAmount,
                    loc(file, row.line) + ": amount " + row.fields[4] +
                        " for substance '" + rec.substance + "'");
      }
      std::string canonical;
      try {
        rec.amount = to_canonical_unit(amount, row.fields[5], &canonical);
      } catch (const Error& e) {
        throw Error(ErrorCode::UnknownUnit, loc(file, row.line) + ": " + e.what());
      }
      rec.unit = canonical;
      rec.year = row.fields[6];

      std::string subst_key = rec.substance + "|" + rec.compartment;
      auto [it, inserted] = canonical_units.emplace(subst_key, canonical);
      if (!inserted && it->second != canonical) {
        throw Error(ErrorCode::UnknownUnit,
                    loc(file, row.line) + ": substance '" + rec.substance +
                        "' mixes incompatible unit dimensions (" + it->second +
                        " vs " + canonical + ")");
      }
      std::string dup_key = rec.sector_code + "|" + rec.region + "|" + subst_key;
      if (!seen.insert(dup_key).second) {
        throw Error(ErrorCode::DuplicateRecord,
                    loc(file, row.line) + ": duplicate record for sector '" +
                        rec.sector_code + "', substance '" + rec.substance + "'");
      }
      account.records.push_back(std::move(rec));
    }
  }
  std::sort(account.records.begin(), account.records.end(),
            [](const RawFlowRecord& a, const RawFlowRecord& b) {
              return std::tie(a.sector_code, a.region, a.substance, a.compartment,
                              a.year) <
                     std::tie(b.sector_code, b.region, b.substance, b.compartment,
                              b.year);
            });
  return account;
}

Concordance parse_concordance(const std::string& path, const Classification& fine) {
  static const std::vector<std::string> kHeader = {"coarse", "fine", "weight"};
  csv::File file = csv::read_file(path);
  require_header(file, kHeader);

  Concordance conc;
  std::set<std::string> fine_seen;
  for (std::size_t r = 1; r < file.rows.size(); ++r) {
    const csv::Row& row = file.rows[r];
    const std::string& coarse = row.fields[0];
    const std::string& fine_code = row.fields[1];
    double weight = csv::parse_number(row.fields[2], file.path, row.line);
    if (weight < 0) {
      throw Error(ErrorCode::WeightSumViolation,
                  loc(file, row.line) + ": negative weight for coarse '" + coarse + "'");
    }
    if (!fine.contains(fine_code)) {
      throw Error(ErrorCode::OrphanFineCode,
                  loc(file, row.line) + ": fine code '" + fine_code +
                      "' is not in the fine classification");
    }
    if (!fine_seen.insert(fine_code).second) {
      throw Error(ErrorCode::DuplicateFineCode,
                  loc(file, row.line) + ": fine code '" + fine_code +
                      "' appears under more than one coarse code");
    }
    conc.map[coarse].push_back(Concordance::Share{fine_code, weight});
  }

  for (auto& [coarse, shares] : conc.map) {
    std::sort(shares.begin(), shares.end(),
              [](const Concordance::Share& a, const Concordance::Share& b) {
                return a.fine_code < b.fine_code;
              });
    double sum = 0.0;
    for (const auto& share : shares) sum += share.weight;
    if (std::abs(sum - 1.0) <= 1e-9) continue;
    if (std::abs(sum - 1.0) <= 1e-6) {
      std::clog << "info: " << path << ": weights for coarse '" << coarse
                << "' sum to " << sum << "; renormalizing\n";
      for (auto& share : shares) share.weight /= sum;
      continue;
    }
    throw Error(ErrorCode::WeightSumViolation,
                path + ": weights for coarse '" + coarse + "' sum to " +
                    std::to_string(sum) + ", expected 1");
  }
  return conc;
}

CharacterizationMatrix parse_characterization(const std::string& path) {
  static const std::vector<std::string> kHeader = {
      "indicator", "level", "unit", "substance", "compartment", "factor"};
  csv::File file = csv::read_file(path);
  require_header(file, kHeader);
  if (file.rows.size() <= 1) {
    throw Error(ErrorCode::EmptyCharacterization, path + ": no factor rows");
  }

  CharacterizationMatrix out;
  std::map<std::string, std::size_t> indicator_index;
  std::map<std::string, std::map<std::string, double>> factors;  // ind -> key -> f
  std::set<std::string> substance_keys;
  std::map<std::string, std::pair<std::string, std::string>> key_to_subst;

  for (std::size_t r = 1; r < file.rows.size(); ++r) {
    const csv::Row& row = file.rows[r];
    const std::string& ind_id = row.fields[0];
    const std::string& level_str = row.fields[1];
    const std::string& unit = row.fields[2];
    const std::string& substance = row.fields[3];
    const std::string& compartment = row.fields[4];
    double factor = csv::parse_number(row.fields[5], file.path, row.line);

    IndicatorLevel level;
    if (level_str == "midpoint") level = IndicatorLevel::midpoint;
    else if (level_str == "endpoint") level = IndicatorLevel::endpoint;
    else {
      throw Error(ErrorCode::UnknownLevel,
                  loc(file, row.line) + ": level '" + level_str +
                      "' is not 'midpoint' or 'endpoint'");
    }

    auto it = indicator_index.find(ind_id);
    if (it == indicator_index.end()) {
      indicator_index.emplace(ind_id, out.indicators.size());
      out.indicators.push_back(Indicator{ind_id, level, unit});
    } else {
      const Indicator& existing = out.indicators[it->second];
      if (existing.level != level || existing.unit != unit) {
        throw Error(ErrorCode::DuplicateIndicator,
                    loc(file, row.line) + ": indicator '" + ind_id +
                        "' redeclared with a different level or unit");
      }
    }

    std::string key = substance + "|" + compartment;
    auto [fit, inserted] = factors[ind_id].emplace(key, factor);
    if (!inserted) {
      throw Error(ErrorCode::DuplicateIndicator,
                  loc(file, row.line) + ": duplicate factor for indicator '" +
                      ind_id + "', substance '" + substance + "'");
    }
    if (substance_keys.insert(key).second) {
      key_to_subst.emplace(key, std::make_pair(substance, compartment));
    }
  }

  for (const auto& key : substance_keys) {
    const auto& [id, compartment] = key_to_subst.at(key);
    out.substances.push_back(Substance{id, compartment, ""});
  }
  out.factors = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(out.indicators.size()),
      static_cast<Eigen::Index>(out.substances.size()));
  for (std::size_t i = 0; i < out.indicators.size(); ++i) {
    const auto& ind_factors = factors.at(out.indicators[i].id);
    for (std::size_t s = 0; s < out.substances.size(); ++s) {
      auto fit = ind_factors.find(out.substances[s].key());
      if (fit != ind_factors.end()) {
        out.factors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(s)) =
            fit->second;
      }
    }
  }
  return out;
}

AggregationHierarchy parse_aggregation(const std::string& path,
                                       const Classification& fine) {
  static const std::vector<std::string> kHeader = {"level", "fine", "group"};
  csv::File file = csv::read_file(path);
  require_header(file, kHeader);

  AggregationHierarchy hierarchy;
  std::map<std::string, std::size_t> level_index;
  for (std::size_t r = 1; r < file.rows.size(); ++r) {
    const csv::Row& row = file.rows[r];
    const std::string& level_id = row.fields[0];
    const std::string& fine_code = row.fields[1];
    const std::string& group = row.fields[2];
    if (!fine.contains(fine_code)) {
      throw Error(ErrorCode::OrphanFineCode,
                  loc(file, row.line) + ": fine code '" + fine_code +
                      "' is not in the fine classification");
    }
    auto it = level_index.find(level_id);
    if (it == level_index.end()) {
      level_index.emplace(level_id, hierarchy.levels.size());
      hierarchy.levels.push_back(AggregationLevel{level_id, {}});
      it = level_index.find(level_id);
    }
    auto& groups = hierarchy.levels[it->second].groups;
    if (!groups.emplace(fine_code, group).second) {
      throw Error(ErrorCode::DuplicateRecord,
                  loc(file, row.line) + ": fine code '" + fine_code +
                      "' mapped twice in level '" + level_id + "'");
    }
  }

  for (const auto& level : hierarchy.levels) {
    for (const auto& entry : fine.entries()) {
      if (!level.groups.contains(entry.code)) {
        throw Error(ErrorCode::IncompleteLevel,
                    path + ": level '" + level.id + "' does not cover fine code '" +
                        entry.code + "'");
      }
    }
  }
  return hierarchy;
}

DirectFinalDemandEmissions parse_direct_emissions(const std::string& path) {
  static const std::vector<std::string> kHeader = {"category", "substance",
                                                   "compartment", "amount", "unit"};
  csv::File file = csv::read_file(path);
  require_header(file, kHeader);

  struct Entry {
    std::string category;
    Substance substance;
    double amount;
  };
  std::vector<Entry> entries;
  std::vector<std::string> categories;
  std::map<std::string, Substance> substances;  // key -> substance, sorted
  for (std::size_t r = 1; r < file.rows.size(); ++r) {
    const csv::Row& row = file.rows[r];
    double amount = csv::parse_number(row.fields[3], file.path, row.line);
    if (amount < 0) {
      throw Error(ErrorCode::NegativeAmount,
                  loc(file, row.line) + ": amount " + row.fields[3]);
    }
    std::string canonical;
    try {
      amount = to_canonical_unit(amount, row.fields[4], &canonical);
    } catch (const Error& e) {
      throw Error(ErrorCode::UnknownUnit, loc(file, row.line) + ": " + e.what());
    }
    Substance sub{row.fields[1], row.fields[2], canonical};
    substances.emplace(sub.key(), sub);
    if (std::find(categories.begin(), categories.end(), row.fields[0]) ==
        categories.end()) {
      categories.push_back(row.fields[0]);
    }
    entries.push_back(Entry{row.fields[0], sub, amount});
  }

  DirectFinalDemandEmissions out;
  out.categories = categories;
  for (const auto& [key, sub] : substances) out.substances.push_back(sub);
  out.amounts = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(out.substances.size()),
      static_cast<Eigen::Index>(categories.size()));
  for (const auto& entry : entries) {
    auto s_it = std::find_if(out.substances.begin(), out.substances.end(),
                             [&](const Substance& s) { return s.key() == entry.substance.key(); });
    auto c_it = std::find(categories.begin(), categories.end(), entry.category);
    out.amounts(s_it - out.substances.begin(), c_it - categories.begin()) +=
        entry.amount;
  }
  return out;
}

void write_flow_accounts(const RawFlowAccount& flows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  out << "#eeio-schema v1\n";
  out << "sector,region,substance,compartment,amount,unit,year\n";
  for (const auto& rec : flows.records) {
    std::ostringstream amount;
    amount.precision(17);
    amount << rec.amount;
    out << csv::join_row({rec.sector_code, rec.region, rec.substance,
                          rec.compartment, amount.str(), rec.unit, rec.year})
        << "\n";
  }
}

void write_concordance(const Concordance& conc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  out << "#eeio-schema v1\n";
  out << "coarse,fine,weight\n";
  for (const auto& [coarse, shares] : conc.map) {
    for (const auto& share : shares) {
      std::ostringstream weight;
      weight.precision(17);
      weight << share.weight;
      out << csv::join_row({coarse, share.fine_code, weight.str()}) << "\n";
    }
  }
}

void write_aggregation(const AggregationHierarchy& hierarchy, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  out << "#eeio-schema v1\n";
  out << "level,fine,group\n";
  for (const auto& level : hierarchy.levels) {
    for (const auto& [fine_code, group] : level.groups) {
      out << csv::join_row({level.id, fine_code, group}) << "\n";
    }
  }
}

}  // namespace eeio
