#pragma once

#include <filesystem>
#include <string>

namespace corealm {

/// Whole-file read and write. Throw Error("IoError").
std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace corealm
