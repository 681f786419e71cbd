#include "common/csv.hpp"

#include <fstream>
#include <sstream>

#include "common/util.hpp"

namespace cornerfem {

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::begin_row() {
  rows_.emplace_back();
  return *this;
}

CsvTable& CsvTable::cell(const std::string& v) {
  rows_.back().push_back(v);
  return *this;
}
CsvTable& CsvTable::cell(double v) { return cell(format_double(v)); }
CsvTable& CsvTable::cell(long v) { return cell(std::to_string(v)); }
CsvTable& CsvTable::cell(int v) { return cell(std::to_string(v)); }

std::string CsvTable::str() const {
  std::ostringstream out;
  for (std::size_t k = 0; k < header_.size(); ++k) out << (k ? "," : "") << header_[k];
  out << '\n';
  for (const auto& row : rows_) {
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << row[k];
    out << '\n';
  }
  return out.str();
}

void CsvTable::save(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw ValidationError("cannot open '" + path + "' for writing");
  f << str();
}

}  // namespace cornerfem
