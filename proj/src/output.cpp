#include "otoc/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "otoc/errors.hpp"

namespace otoc {

std::string format_number(double v) {
    if (!std::isfinite(v)) {
        throw NumericalError("refusing to write a non-finite number");
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string csv_cell(const std::optional<double>& v) {
    return v ? format_number(*v) : std::string();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

} // namespace otoc
