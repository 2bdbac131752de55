#include "eeio/serialize.hpp"

#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

using nlohmann::json;

namespace eeio {

namespace {

constexpr const char* kModelSchema = "eeio-model/1";

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(i, c) = j.at(i).at(c).get<double>();
    }
  }
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json classification_to_json(const Classification& c) {
  json entries = json::array();
  for (const auto& entry : c.entries()) {
    entries.push_back({{"code", entry.code},
                       {"label", entry.label},
                       {"region", entry.region}});
  }
  return entries;
}

Classification classification_from_json(const json& j, Granularity g) {
  std::vector<SectorEntry> entries;
  for (const auto& e : j) {
    entries.push_back(SectorEntry{e.at("code").get<std::string>(),
                                  e.at("label").get<std::string>(),
                                  e.at("region").get<std::string>()});
  }
  return Classification(std::move(entries), g);
}

json model_body(const IOModel& model) {
  json j;
  j["schema"] = kModelSchema;
  j["commodities"] = classification_to_json(model.A.commodities);
  j["A"] = matrix_to_json(model.A.coefficients);
  j["x_out"] = vector_to_json(model.x_out);

  json substances = json::array();
  for (const auto& s : model.B.substances) {
    substances.push_back({{"id", s.id},
                          {"compartment", s.compartment},
                          {"unit", s.unit}});
  }
  j["substances"] = substances;
  j["B"] = matrix_to_json(model.B.intensities);

  json indicators = json::array();
  for (const auto& ind : model.C.indicators) {
    indicators.push_back(
        {{"id", ind.id},
         {"level", ind.level == IndicatorLevel::midpoint ? "midpoint" : "endpoint"},
         {"unit", ind.unit}});
  }
  j["indicators"] = indicators;
  j["C"] = matrix_to_json(model.C.factors);

  j["demand_categories"] = model.y.categories;
  j["y"] = matrix_to_json(model.y.demand);
  j["f_direct"] = matrix_to_json(model.f_direct.amounts);

  json levels = json::array();
  for (const auto& level : model.hierarchy.levels) {
    json groups = json::object();
    for (const auto& [fine_code, group] : level.groups) groups[fine_code] = group;
    levels.push_back({{"id", level.id}, {"groups", std::move(groups)}});
  }
  j["hierarchy"] = levels;
  j["price_basis"] = model.price_basis;
  j["year"] = model.year;
  return j;
}

}  // namespace

std::string fnv1a64_hex(const std::string& data) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string format_sci(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5e", value);
  return buf;
}

std::string model_content_hash(const IOModel& model) {
  return fnv1a64_hex(model_body(model).dump());
}

nlohmann::json model_to_json(const IOModel& model) {
  json j = model_body(model);
  j["hash"] = fnv1a64_hex(j.dump());
  return j;
}

IOModel model_from_json(const nlohmann::json& j) {
  if (j.at("schema").get<std::string>() != kModelSchema) {
    throw Error(ErrorCode::SchemaVersionMismatch,
                "unsupported model schema '" + j.at("schema").get<std::string>() + "'");
  }
  IOModel model;
  Classification commodities =
      classification_from_json(j.at("commodities"), Granularity::fine);
  const auto n = static_cast<Eigen::Index>(commodities.size());

  model.A.commodities = commodities;
  model.A.coefficients = matrix_from_json(j.at("A"), n, n);

  model.x_out.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    model.x_out(i) = j.at("x_out").at(i).get<double>();
  }

  for (const auto& s : j.at("substances")) {
    model.B.substances.push_back(Substance{s.at("id").get<std::string>(),
                                           s.at("compartment").get<std::string>(),
                                           s.at("unit").get<std::string>()});
  }
  const auto n_sub = static_cast<Eigen::Index>(model.B.substances.size());
  model.B.commodities = commodities;
  model.B.intensities = matrix_from_json(j.at("B"), n_sub, n);

  for (const auto& ind : j.at("indicators")) {
    std::string level = ind.at("level").get<std::string>();
    if (level != "midpoint" && level != "endpoint") {
      throw Error(ErrorCode::UnknownLevel, "indicator level '" + level + "'");
    }
    model.C.indicators.push_back(Indicator{
        ind.at("id").get<std::string>(),
        level == "midpoint" ? IndicatorLevel::midpoint : IndicatorLevel::endpoint,
        ind.at("unit").get<std::string>()});
  }
  model.C.substances = model.B.substances;
  model.C.factors = matrix_from_json(
      j.at("C"), static_cast<Eigen::Index>(model.C.indicators.size()), n_sub);

  model.y.categories = j.at("demand_categories").get<std::vector<std::string>>();
  model.y.commodities = commodities;
  const auto n_cat = static_cast<Eigen::Index>(model.y.categories.size());
  model.y.demand = matrix_from_json(j.at("y"), n, n_cat);

  model.f_direct.substances = model.B.substances;
  model.f_direct.categories = model.y.categories;
  model.f_direct.amounts = matrix_from_json(j.at("f_direct"), n_sub, n_cat);

  for (const auto& level : j.at("hierarchy")) {
    AggregationLevel parsed;
    parsed.id = level.at("id").get<std::string>();
    for (const auto& [fine_code, group] : level.at("groups").items()) {
      parsed.groups.emplace(fine_code, group.get<std::string>());
    }
    model.hierarchy.levels.push_back(std::move(parsed));
  }
  model.price_basis = j.at("price_basis").get<std::string>();
  model.year = j.at("year").get<std::string>();
  model.hash = j.at("hash").get<std::string>();
  return model;
}

void save_model(const IOModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::MissingFile, "cannot write '" + path + "'");
  }
  out << model_to_json(model).dump(1) << "\n";
}

IOModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::MissingFile, "cannot open '" + path + "'");
  }
  json j = json::parse(in);
  return model_from_json(j);
}

nlohmann::json report_to_json(const AssemblyReport& report) {
  return json{{"ok", report.ok()},
              {"errors", report.errors},
              {"warnings", report.warnings},
              {"info", report.info}};
}

}  // namespace eeio
