#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace sumcap {

// FNV-1a 64-bit over a byte string; cheap content tag for run manifests.
std::uint64_t fnv1a64(std::string_view bytes);

// Digest of a file's bytes, formatted as "fnv1a64:<16 hex digits>".
// Throws InvalidInputError if the file cannot be read.
std::string file_digest(const std::filesystem::path& file);

}  // namespace sumcap
