#ifndef CORNERFEM_COMMON_CSV_HPP
#define CORNERFEM_COMMON_CSV_HPP

#include <string>
#include <vector>

namespace cornerfem {

/// Deterministic CSV table: doubles are printed with 17 significant digits so
/// identical runs produce byte-identical files.
class CsvTable {
public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& begin_row();
  CsvTable& cell(const std::string& v);
  CsvTable& cell(double v);
  CsvTable& cell(long v);
  CsvTable& cell(int v);

  std::string str() const;
  void save(const std::string& path) const;

private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace cornerfem

#endif
