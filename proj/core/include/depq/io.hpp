#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace depq {

using FileContents = std::vector<std::pair<std::filesystem::path, std::string>>;

/// Writes every file to a temporary sibling first and renames once all
/// writes succeeded; on failure the temporaries are removed and IoError is
/// thrown, leaving no partial outputs behind.
void write_files(const FileContents& files);

}  // namespace depq
