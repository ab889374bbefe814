#include "sozloc/io_util.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sozloc/errors.hpp"

namespace fs = std::filesystem;

namespace sozloc {

void atomic_write_text(const std::string& path, const std::string& content) {
    const fs::path target(path);
    if (target.has_parent_path()) {
        fs::create_directories(target.parent_path());
    }
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot open file for writing: " + tmp.string());
        out << content;
        if (!out) throw DataError("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw DataError("rename failed for " + path + ": " + ec.message());
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace sozloc
