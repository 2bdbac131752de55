#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "eeio/analyze.hpp"
#include "eeio/assemble.hpp"
#include "eeio/csv.hpp"
#include "eeio/ingest.hpp"
#include "eeio/serialize.hpp"
#include "eeio/solve.hpp"

using nlohmann::json;

namespace {

void write_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    throw eeio::Error(eeio::ErrorCode::MissingFile, "cannot write '" + out_path + "'");
  }
  out << content;
}

std::vector<std::string> split_csv_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

std::vector<std::string> resolve_scope(const eeio::IOModel& model,
                                       const std::string& scope_arg) {
  if (scope_arg == "all") return model.y.categories;
  auto scope = split_csv_list(scope_arg);
  if (scope.empty()) {
    throw eeio::Error(eeio::ErrorCode::UnknownScope, "scope '" + scope_arg + "'");
  }
  return scope;
}

const char* level_name(eeio::IndicatorLevel level) {
  return level == eeio::IndicatorLevel::midpoint ? "midpoint" : "endpoint";
}

int cmd_build(const std::string& data_dir, std::string out_path,
              std::string report_path) {
  if (out_path.empty()) out_path = "model.json";
  if (report_path.empty()) report_path = out_path + ".report.json";

  auto [model, report] = eeio::assemble_model(data_dir);
  write_output(report_path, eeio::report_to_json(report).dump(1) + "\n");
  if (!report.ok()) {
    for (const auto& error : report.errors) std::cerr << "error: " << error << "\n";
    return 2;
  }
  for (const auto& warning : report.warnings) {
    std::cerr << "warning: " << warning << "\n";
  }
  eeio::save_model(model, out_path);
  std::cout << model.hash << "\n";
  return 0;
}

int cmd_footprint(const std::string& model_path, const std::string& scope_arg,
                  double population, const std::string& format,
                  const std::string& out_path) {
  eeio::IOModel model = eeio::load_model(model_path);
  auto scope = resolve_scope(model, scope_arg);
  eeio::FootprintResult result = eeio::footprint(model, scope);

  const bool with_per_capita = population > 0;
  std::ostringstream out;
  if (format == "json") {
    json rows = json::array();
    for (std::size_t i = 0; i < result.indicators.size(); ++i) {
      json row = {{"indicator", result.indicators[i].id},
                  {"level", level_name(result.indicators[i].level)},
                  {"unit", result.indicators[i].unit},
                  {"total", eeio::format_sci(result.totals(static_cast<Eigen::Index>(i)))}};
      if (with_per_capita) {
        row["per_capita"] = eeio::format_sci(eeio::per_capita(
            result.totals(static_cast<Eigen::Index>(i)), population));
      }
      rows.push_back(std::move(row));
    }
    out << rows.dump(1) << "\n";
  } else {
    out << "indicator,level,unit,total";
    if (with_per_capita) out << ",per_capita";
    out << "\n";
    for (std::size_t i = 0; i < result.indicators.size(); ++i) {
      out << eeio::csv::join_row({result.indicators[i].id,
                                  level_name(result.indicators[i].level),
                                  result.indicators[i].unit,
                                  eeio::format_sci(result.totals(static_cast<Eigen::Index>(i)))});
      if (with_per_capita) {
        out << ","
            << eeio::format_sci(eeio::per_capita(
                   result.totals(static_cast<Eigen::Index>(i)), population));
      }
      out << "\n";
    }
  }
  write_output(out_path, out.str());
  return 0;
}

struct GroupedDecomposition {
  std::vector<std::string> groups;  // "Direct emissions" last
  Eigen::MatrixXd values;           // indicator x group
  eeio::DecompositionResult decomposition;
};

GroupedDecomposition grouped_decomposition(const eeio::IOModel& model,
                                           const std::string& sector,
                                           const std::string& level) {
  GroupedDecomposition out;
  out.decomposition = eeio::first_tier_decomposition(model, sector);
  const auto n_ind = static_cast<Eigen::Index>(out.decomposition.indicators.size());
  if (level.empty()) {
    const auto& commodities = out.decomposition.commodities;
    out.values.resize(n_ind, static_cast<Eigen::Index>(commodities.size()) + 1);
    for (std::size_t j = 0; j < commodities.size(); ++j) {
      out.groups.push_back(commodities.at(j).code);
      out.values.col(static_cast<Eigen::Index>(j)) =
          out.decomposition.per_input.col(static_cast<Eigen::Index>(j));
    }
  } else {
    eeio::GroupedContributions grouped =
        eeio::aggregate(out.decomposition, model.hierarchy, level);
    out.groups = grouped.groups;
    out.values.resize(n_ind, static_cast<Eigen::Index>(grouped.groups.size()) + 1);
    out.values.leftCols(grouped.values.cols()) = grouped.values;
  }
  out.groups.push_back("Direct emissions");
  out.values.col(out.values.cols() - 1) = out.decomposition.direct;

  // Drop groups that contribute nothing on any indicator.
  std::vector<Eigen::Index> keep;
  for (Eigen::Index g = 0; g < out.values.cols(); ++g) {
    if (!out.values.col(g).isZero(0.0)) keep.push_back(g);
  }
  std::vector<std::string> kept_groups;
  Eigen::MatrixXd kept_values(n_ind, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t g = 0; g < keep.size(); ++g) {
    kept_groups.push_back(out.groups[static_cast<std::size_t>(keep[g])]);
    kept_values.col(static_cast<Eigen::Index>(g)) = out.values.col(keep[g]);
  }
  out.groups = std::move(kept_groups);
  out.values = std::move(kept_values);
  return out;
}

int cmd_contribute(const std::string& model_path, const std::string& sector,
                   const std::string& level, const std::string& out_path,
                   const std::string& plot_path) {
  eeio::IOModel model = eeio::load_model(model_path);
  GroupedDecomposition grouped = grouped_decomposition(model, sector, level);
  const auto& indicators = grouped.decomposition.indicators;

  std::ostringstream table, plot;
  table << "group,indicator,value,share\n";
  plot << "group,indicator,share\n";
  for (std::size_t g = 0; g < grouped.groups.size(); ++g) {
    for (std::size_t i = 0; i < indicators.size(); ++i) {
      double value = grouped.values(static_cast<Eigen::Index>(i),
                                    static_cast<Eigen::Index>(g));
      double total = grouped.decomposition.total(static_cast<Eigen::Index>(i));
      double share = total != 0 ? value / total : 0.0;
      table << eeio::csv::join_row({grouped.groups[g], indicators[i].id,
                                    eeio::format_sci(value), eeio::format_sci(share)})
            << "\n";
      plot << eeio::csv::join_row(
                  {grouped.groups[g], indicators[i].id, eeio::format_sci(share)})
           << "\n";
    }
  }
  write_output(out_path, table.str());
  if (!plot_path.empty()) write_output(plot_path, plot.str());
  return 0;
}

int cmd_correlate(const std::string& model_path, const std::string& sector,
                  const std::string& level, std::string midpoint_id,
                  bool include_direct, const std::string& out_path,
                  const std::string& scatter_path) {
  eeio::IOModel model = eeio::load_model(model_path);
  GroupedDecomposition grouped = grouped_decomposition(model, sector, level);
  const auto& indicators = grouped.decomposition.indicators;

  if (midpoint_id.empty()) {
    for (const auto& ind : indicators) {
      if (ind.level == eeio::IndicatorLevel::midpoint) {
        midpoint_id = ind.id;
        break;
      }
    }
  }
  auto x_idx = model.C.indicator_index(midpoint_id);
  if (!x_idx) {
    throw eeio::Error(eeio::ErrorCode::UnknownLevel,
                      "midpoint indicator '" + midpoint_id + "' is not in the model");
  }

  std::ostringstream table, scatter;
  table << "endpoint,slope,intercept,r_squared,n_points\n";
  scatter << "endpoint,group,x,y\n";
  for (std::size_t i = 0; i < indicators.size(); ++i) {
    if (indicators[i].level != eeio::IndicatorLevel::endpoint) continue;
    std::vector<std::pair<double, double>> points;
    auto share = [&](std::size_t indicator, std::size_t group) {
      double total = grouped.decomposition.total(static_cast<Eigen::Index>(indicator));
      return total != 0 ? grouped.values(static_cast<Eigen::Index>(indicator),
                                         static_cast<Eigen::Index>(group)) /
                              total
                        : 0.0;
    };
    for (std::size_t g = 0; g < grouped.groups.size(); ++g) {
      if (!include_direct && grouped.groups[g] == "Direct emissions") continue;
      double x = share(static_cast<std::size_t>(*x_idx), g);
      double y = share(i, g);
      points.emplace_back(x, y);
      scatter << eeio::csv::join_row({indicators[i].id, grouped.groups[g],
                                      eeio::format_sci(x), eeio::format_sci(y)})
              << "\n";
    }
    eeio::RegressionFit fit = eeio::midpoint_endpoint_regression(points);
    table << eeio::csv::join_row(
                 {indicators[i].id, eeio::format_sci(fit.slope),
                  eeio::format_sci(fit.intercept), eeio::format_sci(fit.r_squared),
                  std::to_string(fit.n_points)})
          << "\n";
  }
  write_output(out_path, table.str());
  if (!scatter_path.empty()) write_output(scatter_path, scatter.str());
  return 0;
}

int cmd_lifecycle(const std::string& components_path, const std::string& out_path) {
  eeio::csv::File file = eeio::csv::read_file(components_path);
  if (file.rows.empty() ||
      file.rows.front().fields != std::vector<std::string>{"group", "label", "value"}) {
    throw eeio::Error(eeio::ErrorCode::MalformedHeader,
                      components_path + ": expected header 'group,label,value'");
  }
  std::vector<eeio::LifecycleComponent> components;
  for (std::size_t r = 1; r < file.rows.size(); ++r) {
    const auto& row = file.rows[r];
    components.push_back(eeio::LifecycleComponent{
        row.fields[1], row.fields[0],
        eeio::csv::parse_number(row.fields[2], file.path, row.line)});
  }
  eeio::LifecycleReport report = eeio::lifecycle_report(components);

  std::ostringstream out;
  out << "kind,group,label,value,share\n";
  for (const auto& c : report.components) {
    out << eeio::csv::join_row({"component", c.group, c.label,
                                eeio::format_sci(c.value), eeio::format_sci(c.share)})
        << "\n";
  }
  for (const auto& g : report.groups) {
    out << eeio::csv::join_row({"group", g.group, g.label, eeio::format_sci(g.value),
                                eeio::format_sci(g.share)})
        << "\n";
  }
  out << eeio::csv::join_row({"total", "", "", eeio::format_sci(report.total),
                              eeio::format_sci(1.0)})
      << "\n";
  write_output(out_path, out.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("EEIO_THREADS")) {
    int n = std::atoi(threads);
    if (n > 0) Eigen::setNbThreads(n);
  }

  CLI::App app{"Environmentally-extended input-output analysis"};
  app.require_subcommand(1);

  std::string data_dir, model_path, out_path, report_path, plot_path, scatter_path;
  std::string scope_arg = "all", format = "csv", sector, level, midpoint_id;
  std::string components_path;
  double population = 0.0;
  bool include_direct = false;

  auto* build = app.add_subcommand("build", "Assemble a model from a data directory");
  build->add_option("data_dir", data_dir)->required();
  build->add_option("--out", out_path, "model output path (default model.json)");
  build->add_option("--report", report_path, "assembly report path");

  auto* fp = app.add_subcommand("footprint", "Indicator totals for a demand scope");
  fp->add_option("model", model_path)->required();
  fp->add_option("--scope", scope_arg, "'all' or comma-separated demand categories");
  fp->add_option("--per-capita", population, "population for a per-capita column");
  fp->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  fp->add_option("--out", out_path, "output path (default stdout)");

  auto* contrib = app.add_subcommand("contribute", "First-tier purchase decomposition");
  contrib->add_option("model", model_path)->required();
  contrib->add_option("--sector", sector)->required();
  contrib->add_option("--level", level, "aggregation level id (default: no grouping)");
  contrib->add_option("--out", out_path, "output path (default stdout)");
  contrib->add_option("--plot", plot_path, "long-format plot data path");

  auto* corr = app.add_subcommand("correlate", "Midpoint vs endpoint contribution regression");
  corr->add_option("model", model_path)->required();
  corr->add_option("--sector", sector)->required();
  corr->add_option("--level", level, "aggregation level id (default: no grouping)");
  corr->add_option("--midpoint", midpoint_id, "x-axis midpoint indicator id");
  corr->add_flag("--include-direct", include_direct, "include the direct-emissions point");
  corr->add_option("--out", out_path, "output path (default stdout)");
  corr->add_option("--scatter", scatter_path, "scatter data path");

  auto* life = app.add_subcommand("lifecycle", "Share table from a component list");
  life->add_option("components_csv", components_path)->required();
  life->add_option("--out", out_path, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) return cmd_build(data_dir, out_path, report_path);
    if (fp->parsed()) {
      return cmd_footprint(model_path, scope_arg, population, format, out_path);
    }
    if (contrib->parsed()) {
      return cmd_contribute(model_path, sector, level, out_path, plot_path);
    }
    if (corr->parsed()) {
      return cmd_correlate(model_path, sector, level, midpoint_id, include_direct,
                           out_path, scatter_path);
    }
    if (life->parsed()) return cmd_lifecycle(components_path, out_path);
  } catch (const eeio::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return eeio::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
