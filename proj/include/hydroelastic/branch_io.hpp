#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "hydroelastic/continuation.hpp"
#include "hydroelastic/elasticity.hpp"
#include "hydroelastic/spectral.hpp"

namespace hydroelastic {

inline constexpr std::string_view kToolVersion = "1.0.0";

/// "%.17g": shortest fixed width that round-trips every double.
std::string format_double(double v);

/// Writes to a sibling temporary file and renames it over `path`.
void write_text_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_text(const std::filesystem::path& path);

/// Header "s,lambda,gamma,theta,residual_norm,amplitude,a_1..a_order" and one
/// row per point.
std::string branch_csv(const Branch& branch, int order);
void export_branch(const Branch& branch, int order, const std::filesystem::path& path);

/// Parses a file written by export_branch. Amplitudes and dominant modes are
/// recomputed from the coefficients; the stored columns are kept as read.
Branch import_branch(const std::filesystem::path& path, const StripGeometry& geom);

/// Sidecar description of a branch file.
nlohmann::json branch_metadata(const Branch& branch, const StripGeometry& geom,
                               const EnergyModel& model, const nlohmann::json& config_echo);

nlohmann::json geometry_json(const StripGeometry& geom);
nlohmann::json model_json(const EnergyModel& model);

/// ISO-8601 UTC time, for the non-canonical part of metadata only.
std::string utc_timestamp();

}  // namespace hydroelastic
