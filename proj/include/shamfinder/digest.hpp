#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace shamfinder {

// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);

// Reads the whole file; throws shamfinder::Error if it cannot be opened.
std::string read_file(const std::filesystem::path& path);

}  // namespace shamfinder
