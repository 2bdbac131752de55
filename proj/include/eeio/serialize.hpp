#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "eeio/assemble.hpp"

namespace eeio {

/// FNV-1a 64-bit over bytes, hex encoded. Used as the model content hash;
/// identical inputs always produce identical hashes.
std::string fnv1a64_hex(const std::string& data);

/// Scientific notation with 6 significant digits; the fixed number format
/// for all report output.
std::string format_sci(double value);

nlohmann::json model_to_json(const IOModel& model);
IOModel model_from_json(const nlohmann::json& j);

/// Writes the model as a versioned, self-describing JSON container with an
/// embedded content hash (computed over the canonical serialization without
/// the hash field).
void save_model(const IOModel& model, const std::string& path);
IOModel load_model(const std::string& path);

/// The hash save_model would embed.
std::string model_content_hash(const IOModel& model);

nlohmann::json report_to_json(const AssemblyReport& report);

}  // namespace eeio
