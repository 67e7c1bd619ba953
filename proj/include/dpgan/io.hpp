#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace dpgan::io {

// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
// Whole-file read; throws IoError when the file cannot be opened.
std::string read_file(const std::filesystem::path& path);

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t value);

}  // namespace dpgan::io
