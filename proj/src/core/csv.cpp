#include "saa/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "saa/error.hpp"

namespace saa {

DenseMatrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");

  std::vector<double> values;
  std::size_t cols = 0, rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t count = 0;
    while (std::getline(ss, cell, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        throw InvalidInput(path.string() + ":" + std::to_string(line_no) + ": bad number '" + cell + "'");
      }
      if (cell.find_first_not_of(" \t", used) != std::string::npos) {
        throw InvalidInput(path.string() + ":" + std::to_string(line_no) + ": bad number '" + cell + "'");
      }
      values.push_back(v);
      ++count;
    }
    if (rows == 0) {
      cols = count;
    } else if (count != cols) {
      throw InvalidInput(path.string() + ":" + std::to_string(line_no) + ": expected " + std::to_string(cols) +
                         " columns, found " + std::to_string(count));
    }
    ++rows;
  }
  if (in.bad()) throw IoError("error reading '" + path.string() + "'");
  return DenseMatrix(rows, cols, std::move(values));
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_matrix_csv(const std::filesystem::path& path, const DenseMatrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  write_text_file(path, out);
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f << contents;
  f.close();
  if (!f) throw IoError("error writing '" + path.string() + "'");
}

}  // namespace saa
