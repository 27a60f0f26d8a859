#pragma once

#include <filesystem>
#include <string>

#include "waves/evolution.hpp"
#include "waves/field.hpp"

namespace waves::io {

enum class FieldFormat { kCsv, kJson };

/// Parses "csv" or "json"; throws InvalidArgument otherwise.
FieldFormat parse_format(const std::string& name);

/// %.15g, with "-0" normalized to "0".
std::string format_number(double v);

/// Writes via a temporary sibling and a rename. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);  // MissingFile, IoError

/// CSV: header `x,value` (d = 1) or `x,y,value` (d = 2), one row per node
/// with axis 0 fastest. JSON: {"dim", "n", "coefficients": {"k": [re, im]}}
/// with keys "k1" (d = 1) or "k1,k2" (d = 2), zero coefficients omitted.
std::string field_to_string(const SurfaceField& f, FieldFormat format);
SurfaceField field_from_string(const std::string& text, FieldFormat format);

void export_field(const SurfaceField& f, const std::filesystem::path& path, FieldFormat format);
SurfaceField import_field(const std::filesystem::path& path, FieldFormat format);

/// Header `t,l2,hs,hhalf_dot,mean`.
std::string trajectory_to_csv(const evo::Trajectory& traj);

}  // namespace waves::io
