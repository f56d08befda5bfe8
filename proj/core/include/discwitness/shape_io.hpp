#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "discwitness/geometry.hpp"

namespace discwitness {

/// Parses one of
///   {"type":"circle","center":[x,y],"radius":r}
///   {"type":"ellipse","a":..,"b":..,"center":[x,y],"rotation":..}
///   {"type":"support_fourier","a0":..,"cos":[c1,..],"sin":[s1,..]}
/// Throws Error(MalformedSpec) on anything else. Ellipse rotation is in radians.
ShapeSpec parse_shape_json(std::string_view text);
ShapeSpec load_shape_file(const std::filesystem::path& path);

/// Serializes in the same schema; doubles round-trip exactly.
std::string shape_to_json(const ShapeSpec& spec);

}  // namespace discwitness
