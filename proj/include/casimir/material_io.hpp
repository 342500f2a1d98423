#pragma once

#include <filesystem>
#include <string>

#include "casimir/materials.hpp"

namespace casimir::materials {

/// Reads a `omega_rad_s,eps2` CSV (header required, `#` lines ignored).
/// Tails keep their defaults; the caller may override them.
/// Throws Error(io) when the file cannot be read and Error(invalid_model) on
/// malformed content.
OpticalDataTable read_optical_csv(const std::filesystem::path& path);

/// Parses a material definition document. Relative `table_path` entries are
/// resolved against `base_dir`.
PermittivityModel parse_material_json(const std::string& text, const std::filesystem::path& base_dir = {});

PermittivityModel load_material_file(const std::filesystem::path& path);

/// Preset name first, otherwise a material definition file.
PermittivityModel resolve_material(const std::string& name_or_path,
                                   const std::filesystem::path& base_dir = {});

}  // namespace casimir::materials
