#pragma once

#include "singlab/halfplane.hpp"
#include "singlab/params.hpp"
#include "singlab/profile.hpp"
#include "singlab/regimes.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace singlab {

std::string_view tool_version();

// Shortest decimal string that parses back to the same double; nan, inf, -inf otherwise.
std::string format_double(double x);

// Key/value pairs written ahead of the data.  Values are already formatted.
struct Metadata {
    std::vector<std::pair<std::string, std::string>> entries;

    void add(std::string key, std::string value);
    void add(std::string key, double value);
    void add_params(const Params& params);
};

// "# key: value" lines, then the header row, then rows.  Lines starting with '#'
// are comments to gnuplot and to most CSV readers.
std::string csv_document(const Metadata& meta, const std::vector<std::string>& columns,
                         const std::vector<std::vector<std::string>>& rows);

// Rows (r, theta, u) ordered by radius, then angle.
std::string field_csv(const Metadata& meta, const Field& field);

// {"meta": {...}, "result": result}, two-space indent, trailing newline.
std::string json_document(const Metadata& meta, const nlohmann::json& result);

// Writes to a sibling temporary and renames over path.  Throws IoError.
void write_atomic(const std::filesystem::path& path, std::string_view content);

void to_json(nlohmann::json& j, const Params& v);
void from_json(const nlohmann::json& j, Params& v);
void to_json(nlohmann::json& j, const ExponentSet& v);
void from_json(const nlohmann::json& j, ExponentSet& v);
void to_json(nlohmann::json& j, const CriticalConstants& v);
void from_json(const nlohmann::json& j, CriticalConstants& v);
void to_json(nlohmann::json& j, const RegimeReport& v);
void from_json(const nlohmann::json& j, RegimeReport& v);
void to_json(nlohmann::json& j, const SolveReport& v);
void from_json(const nlohmann::json& j, SolveReport& v);
void to_json(nlohmann::json& j, const ThresholdBracket& v);
void from_json(const nlohmann::json& j, ThresholdBracket& v);

Regime regime_from_string(std::string_view s);

} // namespace singlab
