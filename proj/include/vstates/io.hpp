#pragma once

#include "vstates/continuation.hpp"
#include "vstates/spectrum.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace vstates {

/// 17 significant digits, '.' decimal point.
std::string format_real(double x);

std::string spectrum_csv(const std::vector<SpectrumRow>& rows);
std::string spectrum_json(const std::vector<SpectrumRow>& rows);

std::string boundary_csv(const std::vector<BoundaryPoint>& samples);

std::string branch_to_json(const BranchResult& branch);

/// Throws SchemaError with a JSON pointer to the first offending field.
BranchResult branch_from_json(std::string_view text);

/// Two closed polylines per selected point, dashed reference circles of
/// radius 1 and b, axes, and a viewBox with a 5% margin.
std::string render_svg(const BranchResult& branch, const std::vector<int>& selection);

/// `<dir>/<stem>_point<NNN>.csv` next to the branch file.
std::filesystem::path boundary_path(const std::filesystem::path& branch_file, int index);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

} // namespace vstates
