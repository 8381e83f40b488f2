#pragma once

#include "choquard/field.hpp"

#include <filesystem>
#include <string>

namespace choquard {

/// Binary field file: magic "CHQF", u32 version=1, u32 dim, u32 n,
/// f64 half_width, then n^dim f64 values, little-endian, row-major.
void write_field(const Field& u, const std::filesystem::path& path);
Field read_field(const std::filesystem::path& path);

/// Writes bytes to a temp file in the target directory and renames it over
/// the destination.
void atomic_write_bytes(const std::filesystem::path& path, const std::string& bytes);

} // namespace choquard
