#pragma once

#include <string>

namespace sozloc {

// Writes to a temp file in the same directory, then renames over the target.
void atomic_write_text(const std::string& path, const std::string& content);

std::string read_text_file(const std::string& path);

}  // namespace sozloc
