#pragma once

#include <filesystem>
#include <string>

#include "saa/matrix.hpp"

namespace saa {

// Plain numeric CSV: no header, one matrix row per line.
DenseMatrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(const std::filesystem::path& path, const DenseMatrix& m);

// "%.17g": 17 significant digits, round-trips exactly.
std::string format_double(double v);

void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace saa
