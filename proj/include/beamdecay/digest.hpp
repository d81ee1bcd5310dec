#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace beamdecay {

/// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

/// Lowercase hex SHA-256 of a file's bytes. Throws ParseError if unreadable.
std::string file_sha256_hex(const std::filesystem::path& path);

}  // namespace beamdecay
